"""Property-check harness: each catalogued inequality is evaluated exactly
against brute-force counts on generated instances.

The check catalogue (P1..P6, T1) covers the block-witness arithmetic, the
medium-edge lower bound for bounded-diameter spaces, the thin-kernel part
bound, the two symmetric-polynomial anticlique bounds, the head-sum bound on
sorted part sizes, and the measure lower bound for both the exact and the
greedy structure. Applicability preconditions are decided exactly from the
observed parameters; an inapplicable check is a result, not an error.

The checked inequalities are theorems for distance functions satisfying the
triangle inequality. Unrestricted semimetrics admit genuine counterexamples
(three points at distances 0.5r, 0.5r, 3r already defeat the P2 bound), so
the suite generators only emit triangle-satisfying instances: block
witnesses, noise-free planted blocks, and random matrices closed under
shortest paths.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import bounds, clustering, stats
from .clustering import DEFAULT_EXACT_LIMIT
from .generators import TightInstanceSpec, planted_instance, random_metric_instance, tight_instance
from .space import (
    FiniteSemimetricSpace,
    ScaleParams,
    as_fraction,
    dump_space,
    load_space,
    subset_diameter,
)

__all__ = [
    "PROP_IDS",
    "CheckResult",
    "SuiteConfig",
    "PropTally",
    "FailureRecord",
    "VerificationReport",
    "check_proposition",
    "run_suite",
    "replay_failure",
]

PROP_IDS = ("P1", "P2", "P3", "P4", "P5", "P6", "T1")

_R_PALETTE = (Fraction(1), Fraction(1, 2), Fraction(2), Fraction(3, 4))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check: exact lhs/rhs and the verdict, or the reason the
    check does not apply. ``passed`` is None iff ``applicable`` is False."""

    prop_id: str
    applicable: bool
    passed: bool | None
    lhs: Fraction | int | None
    rhs: Fraction | int | None
    note: str = ""
    witness: dict | None = None


def _not_applicable(prop_id: str, note: str) -> CheckResult:
    return CheckResult(prop_id, False, None, None, None, note)


def _check_p1(space, params, tight, exact_limit, node_budget):
    # Block-witness arithmetic: no medium edges, the exact product count of
    # top-order anticliques, and an optimal-measure gap of exactly one small
    # block. Only decidable when the construction data is known.
    if tight is None:
        return _not_applicable("P1", "requires the block-witness construction data")
    if tight.r != params.r or tight.k != params.k:
        return _not_applicable("P1", "scale parameters do not match the construction")
    n = space.n
    if n != tight.n:
        return _not_applicable("P1", "space size does not match the construction")
    if n > exact_limit:
        return _not_applicable("P1", f"{n} points exceeds the exact-search limit of {exact_limit}")
    k = params.k
    m_count = stats.medium_edge_count(space, params.r)
    t_top = stats.anticlique_count(space, params.r, k + 1)
    t_expected = tight.m0 * tight.m**k
    result = clustering.exact_structure(
        space, params, max_points=exact_limit, node_budget=node_budget
    )
    if not result.optimal:
        return _not_applicable("P1", "exact-search node budget exhausted")
    gap = n - result.measure
    passed = m_count == 0 and t_top == t_expected and gap == tight.m
    witness = None
    if not passed:
        witness = {
            "mediumEdges": m_count,
            "anticliquesTop": t_top,
            "anticliquesTopExpected": t_expected,
            "gap": gap,
            "gapExpected": tight.m,
        }
    return CheckResult("P1", True, passed, gap, tight.m, witness=witness)


def _check_p2(space, params):
    # With diameter at most 3r, the medium-edge count is at least
    # max(n, 2|B|) * |A \ B| / 2 for B a maximum 2r-cluster.
    r = params.r
    n = space.n
    if subset_diameter(space, space.points()) > 3 * r:
        return _not_applicable("P2", "space diameter exceeds 3r")
    b = clustering.max_cluster(space, space.points(), 2 * r)
    lhs = stats.medium_edge_count(space, r)
    rhs = Fraction(max(n, 2 * len(b)) * (n - len(b)), 2)
    return CheckResult("P2", True, lhs >= rhs, lhs, rhs)


def _check_p3(space, params):
    # Parts with thin kernels, (k+1)|X_i| <= |Z_i|, have total size at most
    # (k+1) * beta_hat / alpha_hat * n.
    obs = stats.observed_parameters(space, params)
    if obs.alpha_hat == 0:
        return _not_applicable("P3", "alpha_hat is zero")
    decomp = clustering.greedy_decomposition(space, params)
    lhs = sum(len(decomp.parts[i].z) for i in decomp.i1)
    rhs = (params.k + 1) * obs.beta_hat / obs.alpha_hat * space.n
    return CheckResult("P3", True, lhs <= rhs, lhs, rhs)


def _check_p4(space, params):
    # The top-order anticlique count dominates the elementary symmetric
    # polynomial of the sorted part sizes, scaled by 1/(k+1)!.
    k = params.k
    decomp = clustering.greedy_decomposition(space, params)
    lhs = stats.observed_parameters(space, params).anticliques_k_plus_1
    rhs = Fraction(stats.elementary_symmetric(decomp.w, k + 1), factorial(k + 1))
    return CheckResult("P4", True, lhs >= rhs, lhs, rhs)


def _check_p5(space, params):
    # Under the precondition, the order-k anticlique count exceeds e_k(W) by
    # at most k*lambda_hat*n^k / (2(k-2)!). For k = 1 no pair contraction is
    # possible, so the slack term is zero.
    obs = stats.observed_parameters(space, params)
    k = params.k
    if obs.alpha_hat == 0:
        return _not_applicable("P5", "alpha_hat is zero")
    inputs = bounds.BoundInputs(obs.alpha_hat, obs.beta_hat, obs.delta_hat, k)
    if not bounds.precondition_check(inputs):
        return _not_applicable("P5", "precondition inequality fails")
    lam = bounds.lambda_param(inputs)
    decomp = clustering.greedy_decomposition(space, params)
    slack = Fraction(0)
    if k >= 2:
        slack = Fraction(k, 2) * lam * space.n**k / factorial(k - 2)
    lhs = obs.anticliques_k
    rhs = stats.elementary_symmetric(decomp.w, k) + slack
    return CheckResult("P5", True, lhs <= rhs, lhs, rhs)


def _check_p6(space, params):
    # The k largest part sizes sum to at least (1 - (k+1)! beta/alpha') * n.
    obs = stats.observed_parameters(space, params)
    k = params.k
    if obs.alpha_hat == 0:
        return _not_applicable("P6", "alpha_hat is zero")
    inputs = bounds.BoundInputs(obs.alpha_hat, obs.beta_hat, obs.delta_hat, k)
    if not bounds.precondition_check(inputs):
        return _not_applicable("P6", "precondition inequality fails")
    a_prime = bounds.alpha_prime(inputs)
    if a_prime <= 0:
        return _not_applicable("P6", "alpha' is not positive")
    decomp = clustering.greedy_decomposition(space, params)
    lhs = sum(decomp.w[:k])
    rhs = (1 - Fraction(factorial(k + 1)) * obs.beta_hat / a_prime) * space.n
    return CheckResult("P6", True, lhs >= rhs, lhs, rhs)


def _check_t1(space, params, exact_limit, node_budget):
    # Both the exact optimum and the greedy structure built from the k
    # largest parts have measure at least psi * n. Decided exactly: the
    # square root is eliminated by squaring inside measure_meets_psi.
    n = space.n
    k = params.k
    if n == 0:
        return _not_applicable("T1", "empty space")
    obs = stats.observed_parameters(space, params)
    if obs.alpha_hat == 0:
        return _not_applicable("T1", "alpha_hat is zero")
    inputs = bounds.BoundInputs(obs.alpha_hat, obs.beta_hat, obs.delta_hat, k)
    if not bounds.precondition_check(inputs):
        return _not_applicable("T1", "precondition inequality fails")
    if bounds.alpha_prime(inputs) <= 0:
        return _not_applicable("T1", "alpha' is not positive")
    if n > exact_limit:
        return _not_applicable("T1", f"{n} points exceeds the exact-search limit of {exact_limit}")
    decomp = clustering.greedy_decomposition(space, params)
    greedy = clustering.greedy_structure(decomp, k, selection="largest")
    result = clustering.exact_structure(space, params, max_points=exact_limit, node_budget=node_budget)
    if not result.optimal:
        return _not_applicable("T1", "exact-search node budget exhausted")
    greedy_ok = bounds.measure_meets_psi(greedy.measure, n, inputs)
    exact_ok = bounds.measure_meets_psi(result.measure, n, inputs)
    passed = bool(greedy_ok) and bool(exact_ok)
    psi = bounds.psi_bound(inputs)
    rhs = Fraction(psi.value) * n if psi.value is not None else None
    witness = None
    if not passed:
        witness = {"greedyMeasure": greedy.measure, "exactMeasure": result.measure}
    return CheckResult(
        "T1",
        True,
        passed,
        min(greedy.measure, result.measure),
        rhs,
        note="rhs is a high-precision evaluation of psi*n; the verdict is decided exactly",
        witness=witness,
    )


def check_proposition(
    space: FiniteSemimetricSpace,
    params: ScaleParams,
    prop_id: str,
    *,
    tight: TightInstanceSpec | None = None,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    node_budget: int | None = None,
) -> CheckResult:
    """Evaluate one catalogued check on a space, exactly."""
    if prop_id == "P1":
        return _check_p1(space, params, tight, exact_limit, node_budget)
    if prop_id == "P2":
        return _check_p2(space, params)
    if prop_id == "P3":
        return _check_p3(space, params)
    if prop_id == "P4":
        return _check_p4(space, params)
    if prop_id == "P5":
        return _check_p5(space, params)
    if prop_id == "P6":
        return _check_p6(space, params)
    if prop_id == "T1":
        return _check_t1(space, params, exact_limit, node_budget)
    raise ValueError(f"unknown check id {prop_id!r} (expected one of {PROP_IDS})")


# ---------------------------------------------------------------------------
# Randomized suite
# ---------------------------------------------------------------------------

_FLAVORS = ("tight", "planted", "metric")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    trials: int = 200
    max_n: int = 10
    k_values: tuple[int, ...] = (1, 2, 3)
    generator_mix: tuple[str, ...] = _FLAVORS
    exact_limit: int = DEFAULT_EXACT_LIMIT
    node_budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(self.k_values))
        object.__setattr__(self, "generator_mix", tuple(self.generator_mix))
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if self.max_n < 1:
            raise ValueError("max_n must be at least 1")
        if self.max_n > self.exact_limit:
            raise ValueError(
                f"max_n={self.max_n} exceeds the exact-search limit {self.exact_limit}"
            )
        if not self.k_values or any(not isinstance(k, int) or k < 1 for k in self.k_values):
            raise ValueError("k_values must be positive integers")
        unknown = [f for f in self.generator_mix if f not in _FLAVORS]
        if unknown or not self.generator_mix:
            raise ValueError(f"generator mix must be drawn from {_FLAVORS}, got {unknown}")


@dataclass(frozen=True)
class PropTally:
    prop_id: str
    applicable: int
    passed: int
    failed: int


@dataclass(frozen=True)
class FailureRecord:
    """A failed check plus everything needed to reproduce it: the space in
    file format and the exact scale parameters."""

    trial: int
    prop_id: str
    k: int
    r: str
    lhs: str
    rhs: str
    space_text: str
    note: str = ""


@dataclass(frozen=True)
class VerificationReport:
    seed: int
    trials: int
    max_n: int
    k_values: tuple[int, ...]
    generator_mix: tuple[str, ...]
    exact_limit: int
    tallies: tuple[PropTally, ...]
    failures: tuple[FailureRecord, ...]
    notes: tuple[str, ...]

    @property
    def failure_count(self) -> int:
        return len(self.failures)

    def to_obj(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "maxN": self.max_n,
            "kValues": list(self.k_values),
            "generatorMix": list(self.generator_mix),
            "exactLimit": self.exact_limit,
            "tallies": {
                t.prop_id: {
                    "applicable": t.applicable,
                    "passed": t.passed,
                    "failed": t.failed,
                }
                for t in self.tallies
            },
            "failures": [
                {
                    "trial": f.trial,
                    "prop": f.prop_id,
                    "k": f.k,
                    "r": f.r,
                    "lhs": f.lhs,
                    "rhs": f.rhs,
                    "space": f.space_text,
                    "note": f.note,
                }
                for f in self.failures
            ],
            "failureCount": self.failure_count,
            "notes": list(self.notes),
        }


def _random_composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Split ``total`` into ``parts`` positive integers, uniformly over cut
    positions."""
    if parts == 1:
        return [total]
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    edges = [0] + cuts + [total]
    return [edges[i + 1] - edges[i] for i in range(parts)]


def _generate_instance(flavor: str, rng: random.Random, k: int, max_n: int):
    """One deterministic instance in the triangle-inequality domain."""
    r = rng.choice(_R_PALETTE)
    if flavor == "tight" and max_n >= k + 1:
        m = rng.randint(1, max_n // (k + 1))
        m0 = rng.randint(m, max_n - k * m)
        spec = TightInstanceSpec(k=k, m=m, m0=m0, r=r)
        return tight_instance(spec), spec, r
    if flavor == "planted" and max_n >= k:
        total = rng.randint(k, max_n)
        sizes = _random_composition(rng, total, k)
        return planted_instance(k, sizes, 0, r, rng.randrange(2**32)), None, r
    n = rng.randint(1, max_n)
    return random_metric_instance(n, r, rng.randrange(2**32)), None, r


def run_suite(config: SuiteConfig) -> VerificationReport:
    """Run the full check catalogue over seeded instances.

    Deterministic per config: the same seed yields the identical report.
    Exact-search budget exhaustion inside a trial is reported in ``notes``
    and the affected check counts as not applicable, never as a failure.
    """
    counts = {pid: [0, 0, 0] for pid in PROP_IDS}
    failures: list[FailureRecord] = []
    notes: list[str] = []
    for trial in range(config.trials):
        rng = random.Random(config.seed * 1_000_003 + trial)
        flavor = config.generator_mix[trial % len(config.generator_mix)]
        k = rng.choice(config.k_values)
        space, tight_spec, r = _generate_instance(flavor, rng, k, config.max_n)
        params = ScaleParams(r=r, k=k)
        for prop_id in PROP_IDS:
            if prop_id == "P1" and tight_spec is None:
                continue
            result = check_proposition(
                space,
                params,
                prop_id,
                tight=tight_spec,
                exact_limit=config.exact_limit,
                node_budget=config.node_budget,
            )
            if not result.applicable:
                if "budget" in result.note:
                    notes.append(f"trial {trial}: {prop_id}: {result.note}")
                continue
            counts[prop_id][0] += 1
            if result.passed:
                counts[prop_id][1] += 1
            else:
                counts[prop_id][2] += 1
                failures.append(
                    FailureRecord(
                        trial=trial,
                        prop_id=prop_id,
                        k=k,
                        r=str(r),
                        lhs=str(result.lhs),
                        rhs=str(result.rhs),
                        space_text=dump_space(space),
                        note=result.note,
                    )
                )
    tallies = tuple(PropTally(pid, *counts[pid]) for pid in PROP_IDS)
    return VerificationReport(
        seed=config.seed,
        trials=config.trials,
        max_n=config.max_n,
        k_values=config.k_values,
        generator_mix=config.generator_mix,
        exact_limit=config.exact_limit,
        tallies=tallies,
        failures=tuple(failures),
        notes=tuple(notes),
    )


def replay_failure(record: FailureRecord, *, exact_limit: int = DEFAULT_EXACT_LIMIT) -> CheckResult:
    """Re-load a failure's embedded instance and re-run its check."""
    space = load_space(record.space_text)
    params = ScaleParams(r=as_fraction(record.r), k=record.k)
    return check_proposition(space, params, record.prop_id, exact_limit=exact_limit)
