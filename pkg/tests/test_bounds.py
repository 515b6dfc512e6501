from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import clustercert as cc
from clustercert.bounds import ParameterError

import oracles

TENTH4 = Fraction(1, 10**4)


class TestLambdaParam:
    def test_exact_value(self):
        inputs = cc.BoundInputs(alpha=Fraction(1, 2), beta=TENTH4, delta=TENTH4, k=2)
        # 3/20000 + 9e-8 / (1/2) = 0.00015018 exactly
        assert cc.lambda_param(inputs) == Fraction(15018, 10**8)

    def test_zero_penalties(self):
        inputs = cc.BoundInputs(alpha=Fraction(1), beta=Fraction(0), delta=Fraction(0), k=3)
        assert cc.lambda_param(inputs) == 0

    def test_alpha_zero_rejected(self):
        inputs = cc.BoundInputs(alpha=Fraction(0), beta=TENTH4, delta=Fraction(0), k=2)
        with pytest.raises(ParameterError):
            cc.lambda_param(inputs)

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            cc.BoundInputs(alpha=Fraction(1), beta=Fraction(-1), delta=Fraction(0), k=1)


class TestPrecondition:
    def test_small_parameters_pass(self):
        inputs = cc.BoundInputs(alpha=Fraction(1, 2), beta=TENTH4, delta=TENTH4, k=2)
        assert cc.precondition_check(inputs)

    def test_boundary_equality_passes(self):
        inputs = cc.BoundInputs(alpha=Fraction(1), beta=Fraction(0), delta=Fraction(2, 27), k=2)
        assert cc.precondition_check(inputs)
        just_over = cc.BoundInputs(
            alpha=Fraction(1), beta=Fraction(0), delta=Fraction(2, 27) + Fraction(1, 10**9), k=2
        )
        assert not cc.precondition_check(just_over)

    def test_tight_instance_observed_values_fail(self):
        inputs = cc.BoundInputs(alpha=Fraction(2, 3), beta=Fraction(2, 9), delta=Fraction(0), k=2)
        assert not cc.precondition_check(inputs)

    def test_alpha_zero_is_false(self):
        inputs = cc.BoundInputs(alpha=Fraction(0), beta=Fraction(0), delta=Fraction(0), k=1)
        assert not cc.precondition_check(inputs)


class TestPsiBound:
    def test_reference_value_k2(self):
        inputs = cc.BoundInputs(alpha=Fraction(1, 2), beta=TENTH4, delta=TENTH4, k=2)
        result = cc.psi_bound(inputs)
        assert result.applicable and not result.vacuous
        assert result.value == pytest.approx(0.94840, abs=1e-4)
        assert result.alpha_prime == Fraction(1, 2) - 4 * Fraction(15018, 10**8)

    def test_reference_value_k1(self):
        inputs = cc.BoundInputs(alpha=Fraction(1, 2), beta=Fraction(1, 100), delta=Fraction(0), k=1)
        assert cc.lambda_param(inputs) == Fraction(8, 10**4)
        result = cc.psi_bound(inputs)
        assert result.value == pytest.approx(0.93995, abs=1e-4)

    def test_no_penalties_gives_one(self):
        inputs = cc.BoundInputs(alpha=Fraction(3, 4), beta=Fraction(0), delta=Fraction(0), k=2)
        result = cc.psi_bound(inputs)
        assert result.value == 1.0

    def test_not_applicable_when_precondition_fails(self):
        inputs = cc.BoundInputs(alpha=Fraction(2, 3), beta=Fraction(2, 9), delta=Fraction(0), k=2)
        result = cc.psi_bound(inputs)
        assert not result.applicable
        assert result.value is None
        assert "precondition" in result.reason

    def test_not_applicable_when_denominator_vanishes(self):
        # k=2, alpha small: alpha' = alpha - 4*lambda can drop below zero
        # while the precondition still holds.
        inputs = cc.BoundInputs(alpha=Fraction(1, 100), beta=Fraction(0), delta=Fraction(1, 200), k=2)
        assert cc.precondition_check(inputs)
        result = cc.psi_bound(inputs)
        assert not result.applicable
        assert "not positive" in result.reason

    def test_vacuous_bound_still_reported(self):
        # k=3, delta=0.03: sqrt(delta)*(2k+1) > 1 while the precondition and
        # the denominator both stay fine, so psi is defined but non-positive.
        inputs = cc.BoundInputs(alpha=Fraction(9, 10), beta=Fraction(0), delta=Fraction(3, 100), k=3)
        assert cc.precondition_check(inputs)
        result = cc.psi_bound(inputs)
        assert result.applicable
        assert result.value < 0
        assert result.vacuous

    def test_monotone_in_each_parameter(self):
        base = dict(alpha=Fraction(1, 2), beta=Fraction(1, 10**4), delta=Fraction(1, 10**4))
        for k in (1, 2, 3, 4):
            smaller_beta = cc.psi_bound(cc.BoundInputs(**{**base, "beta": Fraction(1, 10**5)}, k=k))
            at_base = cc.psi_bound(cc.BoundInputs(**base, k=k))
            smaller_delta = cc.psi_bound(cc.BoundInputs(**{**base, "delta": Fraction(1, 10**5)}, k=k))
            bigger_alpha = cc.psi_bound(cc.BoundInputs(**{**base, "alpha": Fraction(9, 10)}, k=k))
            assert smaller_beta.value >= at_base.value
            assert smaller_delta.value >= at_base.value
            assert bigger_alpha.value >= at_base.value


class TestLegacyBound:
    def test_reference_value_k2(self):
        assert cc.legacy_bound(TENTH4, TENTH4, 2) == pytest.approx(0.55841, abs=1e-3)

    def test_reference_value_k1(self):
        assert cc.legacy_bound(Fraction(1, 100), Fraction(0), 1) == pytest.approx(0.52817, abs=1e-3)

    def test_no_penalties_gives_one(self):
        assert cc.legacy_bound(0, 0, 3) == 1.0

    def test_improved_bound_dominates_on_grid(self):
        # Wherever the improved bound applies on this grid, it is at least
        # the older beta^(1/(k+1)) bound (usually far above it).
        grid_bd = [Fraction(0), Fraction(1, 10**6), Fraction(1, 10**4), Fraction(1, 10**3)]
        grid_alpha = [Fraction(3, 10), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
        compared = 0
        for k in (1, 2, 3, 4):
            for beta in grid_bd:
                for delta in grid_bd:
                    for alpha in grid_alpha:
                        inputs = cc.BoundInputs(alpha=alpha, beta=beta, delta=delta, k=k)
                        result = cc.psi_bound(inputs)
                        if not result.applicable:
                            continue
                        compared += 1
                        assert result.value >= cc.legacy_bound(beta, delta, k) - 1e-12
        assert compared > 100


class TestMeasureMeetsPsi:
    def test_exact_boundary(self):
        inputs = cc.BoundInputs(alpha=Fraction(1), beta=Fraction(0), delta=Fraction(0), k=1)
        assert cc.measure_meets_psi(1, 1, inputs) is True  # psi = 1, measure/n = 1
        assert cc.measure_meets_psi(0, 1, inputs) is False

    def test_none_when_undefined(self):
        bad = cc.BoundInputs(alpha=Fraction(2, 3), beta=Fraction(2, 9), delta=Fraction(0), k=2)
        assert cc.measure_meets_psi(1, 1, bad) is None

    @given(
        measure=st.integers(0, 12),
        n=st.integers(1, 12),
        beta_num=st.integers(0, 5),
        delta_num=st.integers(0, 5),
        alpha_num=st.integers(3, 10),
        k=st.integers(1, 3),
    )
    def test_agrees_with_float_evaluation_away_from_ties(
        self, measure, n, beta_num, delta_num, alpha_num, k
    ):
        if measure > n:
            measure = n
        inputs = cc.BoundInputs(
            alpha=Fraction(alpha_num, 10),
            beta=Fraction(beta_num, 10**4),
            delta=Fraction(delta_num, 10**4),
            k=k,
        )
        exact = cc.measure_meets_psi(measure, n, inputs)
        psi = cc.psi_bound(inputs)
        if exact is None:
            assert not psi.applicable
            return
        approx = measure - psi.value * n
        if abs(approx) > 1e-6:  # away from the boundary both answers agree
            assert exact == (approx > 0)


class TestBuildCertificate:
    def test_three_point_certificate(self, s3, s3_params):
        cert = cc.build_certificate(s3, s3_params)
        assert cert.n == 3
        assert cert.observed.beta_hat == 0
        assert not cert.precondition_ok  # delta_hat = 2/9 > 2/27
        assert cert.psi is None
        assert cert.greedy_measure == 3
        assert cert.exact_measure == 3
        assert cert.greedy_valid and cert.exact_valid

    def test_tight_certificate(self, tight9, tight9_params):
        cert = cc.build_certificate(tight9, tight9_params)
        assert not cert.precondition_ok
        assert cert.greedy_measure == 6
        assert cert.exact_measure == 6
        assert cert.n == 9
        assert cert.legacy is not None
        names = [v.name for v in cert.verdicts]
        assert "greedy_measure_le_exact_measure" in names
        assert all(v.holds for v in cert.verdicts)

    def test_empty_space_certificate(self):
        cert = cc.build_certificate(cc.build_space([], []), cc.ScaleParams(r=1, k=2))
        assert cert.n == 0
        assert cert.observed.medium_edges == 0
        assert not cert.precondition_ok
        assert cert.precondition_reason == "alpha is not separated from zero"
        assert cert.greedy_measure == 0
        assert cert.exact_measure == 0

    def test_singleton_meets_unit_bound(self):
        space = cc.build_space(["a"], [["0"]])
        cert = cc.build_certificate(space, cc.ScaleParams(r=1, k=1))
        assert cert.precondition_ok
        assert cert.psi == 1.0
        verdicts = {v.name: v.holds for v in cert.verdicts}
        assert verdicts["greedy_measure_ge_psi_times_n"]
        assert verdicts["exact_measure_ge_psi_times_n"]

    def test_exact_search_can_be_skipped(self, tight9, tight9_params):
        cert = cc.build_certificate(tight9, tight9_params, include_exact=False)
        assert cert.exact_measure is None
        assert cert.exact_note == "exact search disabled"
        over_limit = cc.build_certificate(tight9, tight9_params, exact_limit=4)
        assert over_limit.exact_measure is None
        assert "exceeds" in over_limit.exact_note

    def test_node_budget_keeps_partial_result(self, tight9, tight9_params):
        cert = cc.build_certificate(tight9, tight9_params, node_budget=3)
        assert cert.exact_optimal is False
        assert cert.exact_note is not None

    def test_serialization_is_byte_stable(self, tight9, tight9_params):
        first = cc.write_report(cc.build_certificate(tight9, tight9_params))
        second = cc.write_report(cc.build_certificate(tight9, tight9_params))
        assert first == second
        obj_keys = set(cc.build_certificate(tight9, tight9_params).to_obj())
        assert {"n", "r", "k", "counts", "observed", "precondition", "psi", "legacy", "greedy", "exact"} <= obj_keys

    @given(space=oracles.metric_spaces(min_n=1, max_n=7), k=st.integers(1, 2))
    def test_verdicts_hold_on_metric_instances(self, space, k):
        cert = cc.build_certificate(space, cc.ScaleParams(r=Fraction(1), k=k))
        assert all(v.holds for v in cert.verdicts)
