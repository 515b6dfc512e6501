"""Measure lower bounds for cluster structures and certificate assembly.

Everything decidable stays in exact rationals: the auxiliary parameter
``lambda_param``, the precondition inequality, and the bound-vs-measure
verdicts (square roots are eliminated by squaring). Only the reported bound
values themselves force irrational evaluation (sqrt, (k+1)-th roots, the
constant e); those are computed with 40-digit Decimal arithmetic, far inside
the documented 1e-12 evaluation tolerance, and returned as floats.
"""
from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import factorial

from . import clustering, stats
from .space import FiniteSemimetricSpace, ScaleParams, as_fraction

__all__ = [
    "ParameterError",
    "BoundInputs",
    "PsiResult",
    "Verdict",
    "BoundCertificate",
    "lambda_param",
    "alpha_prime",
    "precondition_check",
    "psi_bound",
    "legacy_bound",
    "measure_meets_psi",
    "build_certificate",
]

_PRECISION = 40
EVALUATION_TOLERANCE = 1e-12


class ParameterError(ValueError):
    """A bound parameter is outside the domain of the requested quantity."""


@dataclass(frozen=True)
class BoundInputs:
    """Free density parameters (alpha, beta, delta) at order k.

    alpha must be strictly positive for the improved bound to be defined;
    alpha = 0 is representable so that observed parameters can flow in
    unconditionally, but the dependent operations reject it.
    """

    alpha: Fraction
    beta: Fraction
    delta: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.alpha < 0 or self.beta < 0 or self.delta < 0:
            raise ValueError("alpha, beta, delta must be non-negative")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"order k must be a positive integer, got {self.k!r}")


def lambda_param(inputs: BoundInputs) -> Fraction:
    """lam = (k+1)/2 * delta + (k+1)^2/2 * beta^2/alpha^2, exact."""
    if inputs.alpha == 0:
        raise ParameterError("lambda is undefined: alpha is not separated from zero")
    k = inputs.k
    return (
        Fraction(k + 1, 2) * inputs.delta
        + Fraction((k + 1) ** 2, 2) * inputs.beta**2 / inputs.alpha**2
    )


def alpha_prime(inputs: BoundInputs) -> Fraction:
    """alpha' = alpha - k^3/2 * lam, the effective denominator of the bound."""
    return inputs.alpha - Fraction(inputs.k**3, 2) * lambda_param(inputs)


def precondition_check(inputs: BoundInputs) -> bool:
    """Exact, non-strict test of delta + (k+1) beta^2/alpha^2 <= 2/(k+1)^3.

    Returns False when alpha = 0 (the left side is undefined, so the bound
    machinery is inapplicable rather than erroneous).
    """
    if inputs.alpha == 0:
        return False
    k = inputs.k
    lhs = inputs.delta + (k + 1) * inputs.beta**2 / inputs.alpha**2
    return lhs <= Fraction(2, (k + 1) ** 3)


def _decimal_context() -> decimal.Context:
    return decimal.Context(prec=_PRECISION)


def _dec(q: Fraction, ctx: decimal.Context) -> Decimal:
    return ctx.divide(Decimal(q.numerator), Decimal(q.denominator))


def _sqrt(q: Fraction, ctx: decimal.Context) -> Decimal:
    return _dec(q, ctx).sqrt(context=ctx)


def _nth_root(q: Fraction, m: int, ctx: decimal.Context) -> Decimal:
    if q == 0:
        return Decimal(0)
    d = _dec(q, ctx)
    return ctx.exp(ctx.divide(ctx.ln(d), Decimal(m)))


@dataclass(frozen=True)
class PsiResult:
    """Improved-bound evaluation: the coefficient on n lower-bounding the
    maximal structure measure, with the effective denominator alpha'.

    ``applicable`` is False when the precondition fails or alpha' <= 0;
    ``vacuous`` flags a defined but non-positive coefficient (reported anyway
    so certificates show why a bound fails to bind).
    """

    applicable: bool
    value: float | None
    alpha_prime: Fraction | None
    vacuous: bool
    reason: str | None = None


def psi_bound(inputs: BoundInputs) -> PsiResult:
    """1 - sqrt(delta)*(2k+1) - k!(k+2)*beta/alpha', when defined."""
    if inputs.alpha == 0:
        return PsiResult(False, None, None, False, "alpha is not separated from zero")
    if not precondition_check(inputs):
        return PsiResult(False, None, None, False, "precondition inequality fails")
    a_prime = alpha_prime(inputs)
    if a_prime <= 0:
        return PsiResult(False, None, a_prime, False, "alpha - k^3/2 * lambda is not positive")
    k = inputs.k
    penalty = Fraction(factorial(k) * (k + 2)) * inputs.beta / a_prime
    ctx = _decimal_context()
    value = Decimal(1) - (2 * k + 1) * _sqrt(inputs.delta, ctx) - _dec(penalty, ctx)
    value_f = float(value)
    return PsiResult(True, value_f, a_prime, value_f <= 0, None)


def legacy_bound(beta, delta, k: int) -> float:
    """1 - sqrt(delta)*(2k+1) - (k(e+1)+1) * beta^(1/(k+1))."""
    beta = as_fraction(beta)
    delta = as_fraction(delta)
    if beta < 0 or delta < 0:
        raise ValueError("beta and delta must be non-negative")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"order k must be a positive integer, got {k!r}")
    ctx = _decimal_context()
    e = ctx.exp(Decimal(1))
    coeff = k * (e + 1) + 1
    value = Decimal(1) - (2 * k + 1) * _sqrt(delta, ctx) - coeff * _nth_root(beta, k + 1, ctx)
    return float(value)


def measure_meets_psi(measure: int, n: int, inputs: BoundInputs) -> bool | None:
    """Exact decision of measure >= psi * n, with the square root eliminated.

    measure/n >= 1 - sqrt(delta)(2k+1) - k!(k+2)beta/alpha' is equivalent to
    (2k+1) sqrt(delta) >= q for q = 1 - k!(k+2)beta/alpha' - measure/n, which
    holds iff q <= 0 or (2k+1)^2 delta >= q^2. Returns None when the bound is
    undefined (precondition fails or alpha' <= 0) or n = 0.
    """
    if n == 0 or inputs.alpha == 0 or not precondition_check(inputs):
        return None
    a_prime = alpha_prime(inputs)
    if a_prime <= 0:
        return None
    k = inputs.k
    q = 1 - Fraction(factorial(k) * (k + 2)) * inputs.beta / a_prime - Fraction(measure, n)
    if q <= 0:
        return True
    return (2 * k + 1) ** 2 * inputs.delta >= q * q


@dataclass(frozen=True)
class Verdict:
    """Named inequality outcome recorded in a certificate."""

    name: str
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class BoundCertificate:
    """Full analysis record for one space at one scale.

    Carries the observed parameters, the derived quantities and precondition
    verdict, both bound values, the greedy and (optionally) exact structure
    measures, and a ledger of named inequality outcomes. Exact-search trouble
    (size limit, node budget) is recorded in ``exact_note`` rather than
    aborting the certificate.
    """

    n: int
    r: Fraction
    k: int
    observed: stats.ObservedParams
    lam: Fraction | None
    alpha_prime: Fraction | None
    precondition_ok: bool
    precondition_reason: str | None
    psi: float | None
    psi_vacuous: bool
    psi_reason: str | None
    legacy: float
    greedy_clusters: tuple[tuple[str, ...], ...]
    greedy_measure: int
    greedy_valid: bool
    exact_measure: int | None
    exact_optimal: bool | None
    exact_clusters: tuple[tuple[str, ...], ...] | None
    exact_valid: bool | None
    exact_note: str | None
    verdicts: tuple[Verdict, ...]

    def to_obj(self) -> dict:
        """JSON-ready form: exact rationals as p/q strings, sorted content."""
        obs = self.observed
        obj = {
            "n": self.n,
            "r": str(self.r),
            "k": self.k,
            "counts": {
                "M": obs.medium_edges,
                "Tk": obs.anticliques_k,
                "Tk1": obs.anticliques_k_plus_1,
            },
            "observed": {
                "delta": str(obs.delta_hat),
                "beta": str(obs.beta_hat),
                "alpha": str(obs.alpha_hat),
            },
            "lambda": None if self.lam is None else str(self.lam),
            "alphaPrime": None if self.alpha_prime is None else str(self.alpha_prime),
            "precondition": self.precondition_ok,
            "preconditionReason": self.precondition_reason,
            "psi": self.psi,
            "psiVacuous": self.psi_vacuous,
            "psiReason": self.psi_reason,
            "legacy": self.legacy,
            "greedy": {
                "clusters": [list(c) for c in self.greedy_clusters],
                "measure": self.greedy_measure,
                "valid": self.greedy_valid,
            },
            "exact": {
                "measure": self.exact_measure,
                "optimal": self.exact_optimal,
                "clusters": None
                if self.exact_clusters is None
                else [list(c) for c in self.exact_clusters],
                "valid": self.exact_valid,
                "note": self.exact_note,
            },
            "verdicts": [
                {"name": v.name, "holds": v.holds, "detail": v.detail} for v in self.verdicts
            ],
        }
        return obj


def _label_clusters(
    space: FiniteSemimetricSpace, structure: clustering.ClusterStructure
) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(space.labels[i] for i in sorted(c)) for c in structure.clusters)


def build_certificate(
    space: FiniteSemimetricSpace,
    params: ScaleParams,
    *,
    include_exact: bool = True,
    exact_limit: int = clustering.DEFAULT_EXACT_LIMIT,
    node_budget: int | None = None,
    selection: str = "largest",
) -> BoundCertificate:
    """Compose the observed parameters, greedy decomposition, optional exact
    search, and both bounds into one certificate."""
    n = space.n
    k = params.k
    observed = stats.observed_parameters(space, params)
    inputs = BoundInputs(
        alpha=observed.alpha_hat, beta=observed.beta_hat, delta=observed.delta_hat, k=k
    )

    if inputs.alpha == 0:
        lam = None
        a_prime = None
        precondition_ok = False
        precondition_reason = "alpha is not separated from zero"
    else:
        lam = lambda_param(inputs)
        a_prime = alpha_prime(inputs)
        precondition_ok = precondition_check(inputs)
        precondition_reason = None if precondition_ok else "precondition inequality fails"

    psi = psi_bound(inputs)
    legacy = legacy_bound(inputs.beta, inputs.delta, k)

    decomp = clustering.greedy_decomposition(space, params)
    greedy = clustering.greedy_structure(decomp, k, selection=selection)
    greedy_validation = clustering.validate_structure(space, greedy, params)

    exact_measure = None
    exact_optimal = None
    exact_clusters = None
    exact_valid = None
    exact_note = None
    exact_result = None
    if not include_exact:
        exact_note = "exact search disabled"
    elif n > exact_limit:
        exact_note = f"{n} points exceeds the exact-search limit of {exact_limit}"
    else:
        exact_result = clustering.exact_structure(
            space, params, max_points=exact_limit, node_budget=node_budget
        )
        exact_measure = exact_result.measure
        exact_optimal = exact_result.optimal
        exact_clusters = _label_clusters(space, exact_result.structure)
        exact_valid = clustering.validate_structure(space, exact_result.structure, params).ok
        if not exact_result.optimal:
            exact_note = "node budget exhausted; best structure found so far"

    verdicts: list[Verdict] = [
        Verdict(
            name="greedy_structure_valid",
            holds=greedy_validation.ok,
            detail=f"{len(greedy_validation.violations)} violation(s)",
        )
    ]
    if exact_result is not None:
        verdicts.append(
            Verdict(
                name="greedy_measure_le_exact_measure",
                holds=greedy.measure <= exact_result.measure,
                detail=f"{greedy.measure} <= {exact_result.measure}",
            )
        )
    if psi.applicable and n > 0:
        greedy_ok = measure_meets_psi(greedy.measure, n, inputs)
        verdicts.append(
            Verdict(
                name="greedy_measure_ge_psi_times_n",
                holds=bool(greedy_ok),
                detail=f"measure {greedy.measure}, psi*n ~ {psi.value * n:.6g}",
            )
        )
        if exact_measure is not None:
            exact_ok = measure_meets_psi(exact_measure, n, inputs)
            verdicts.append(
                Verdict(
                    name="exact_measure_ge_psi_times_n",
                    holds=bool(exact_ok),
                    detail=f"measure {exact_measure}, psi*n ~ {psi.value * n:.6g}",
                )
            )

    return BoundCertificate(
        n=n,
        r=params.r,
        k=k,
        observed=observed,
        lam=lam,
        alpha_prime=a_prime,
        precondition_ok=precondition_ok,
        precondition_reason=precondition_reason,
        psi=psi.value,
        psi_vacuous=psi.vacuous,
        psi_reason=psi.reason,
        legacy=legacy,
        greedy_clusters=_label_clusters(space, greedy),
        greedy_measure=greedy.measure,
        greedy_valid=greedy_validation.ok,
        exact_measure=exact_measure,
        exact_optimal=exact_optimal,
        exact_clusters=exact_clusters,
        exact_valid=exact_valid,
        exact_note=exact_note,
        verdicts=tuple(verdicts),
    )
