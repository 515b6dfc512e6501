"""Instance generators: block witnesses, planted clusters, random metrics,
and the weighted-to-uniform discretization.

Every generator is deterministic for a fixed seed and emits exact rational
distances, so generated instances round-trip through the space file format
bit-for-bit.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .space import (
    FiniteSemimetricSpace,
    SpaceFormatError,
    _parse_space_lines,
    as_fraction,
    build_space,
    dump_space,
    format_rational,
    set_distance,
    space_from_obj,
    space_to_obj,
)

__all__ = [
    "TightInstanceSpec",
    "WeightedFiniteSpace",
    "tight_instance",
    "planted_instance",
    "random_metric_instance",
    "space_from_points",
    "epsilon_partition",
    "uniformize",
    "load_weighted_space",
    "dump_weighted_space",
    "weighted_space_from_obj",
    "weighted_space_to_obj",
]

_RESOLUTION = 1000  # granularity of randomly drawn distances, in units of r


@dataclass(frozen=True)
class TightInstanceSpec:
    """Block witness layout: one block of size m0 and k blocks of size m.

    Distances are r inside a block and 4r across blocks, so medium edges are
    absent and the only 2r-clusters are the blocks. Requiring m0 >= m keeps
    the optimal structure's gap equal to m (one smallest block is dropped).
    """

    k: int
    m: int
    m0: int
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", as_fraction(self.r))
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"block size m must be a positive integer, got {self.m!r}")
        if not isinstance(self.m0, int) or self.m0 < self.m:
            raise ValueError(f"m0 must be an integer >= m (got m0={self.m0!r}, m={self.m!r})")
        if self.r <= 0:
            raise ValueError(f"scale r must be positive, got {self.r}")

    @property
    def n(self) -> int:
        return self.m0 + self.k * self.m


def tight_instance(spec: TightInstanceSpec) -> FiniteSemimetricSpace:
    """Materialize the block witness described by ``spec``."""
    sizes = [spec.m0] + [spec.m] * spec.k
    labels = []
    block_of = []
    for b, size in enumerate(sizes):
        for t in range(size):
            labels.append(f"b{b}_{t}")
            block_of.append(b)
    n = len(labels)
    r = spec.r
    far = 4 * r
    matrix = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(Fraction(0))
            elif block_of[i] == block_of[j]:
                row.append(r)
            else:
                row.append(far)
        matrix.append(row)
    return build_space(labels, matrix)


def planted_instance(
    k: int,
    block_sizes: Sequence[int],
    noise_swap_fraction,
    r,
    seed: int,
) -> FiniteSemimetricSpace:
    """Random blocks with short intra-block and long inter-block distances.

    Intra-block distances are uniform over (0, r], inter-block over (3r, 5r],
    both on a grid of 1/1000-ths of r. Then floor(noise * total_pairs) pairs,
    sampled without replacement, are re-drawn from (r, 3r], so the medium-edge
    count equals the number of re-drawn pairs. Bit-exact for a fixed seed.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    sizes = [int(s) for s in block_sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError(f"block sizes must be positive integers, got {block_sizes!r}")
    if len(sizes) != k:
        raise ValueError(f"expected {k} block sizes, got {len(sizes)}")
    noise = as_fraction(noise_swap_fraction)
    if not 0 <= noise < 1:
        raise ValueError(f"noise fraction must lie in [0, 1), got {noise}")
    r = as_fraction(r)
    if r <= 0:
        raise ValueError(f"scale r must be positive, got {r}")

    rng = random.Random(seed)
    labels = []
    block_of = []
    for b, size in enumerate(sizes):
        for t in range(size):
            labels.append(f"b{b}_{t}")
            block_of.append(b)
    n = len(labels)

    def short() -> Fraction:
        return r * Fraction(rng.randint(1, _RESOLUTION), _RESOLUTION)

    def long() -> Fraction:
        return 3 * r + 2 * r * Fraction(rng.randint(1, _RESOLUTION), _RESOLUTION)

    def medium() -> Fraction:
        return r + 2 * r * Fraction(rng.randint(1, _RESOLUTION), _RESOLUTION)

    dist = [[Fraction(0)] * n for _ in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        d = short() if block_of[i] == block_of[j] else long()
        dist[i][j] = dist[j][i] = d
    redraw_count = int(noise * len(pairs))  # floor: noise is a non-negative Fraction
    for i, j in sorted(rng.sample(pairs, redraw_count)):
        d = medium()
        dist[i][j] = dist[j][i] = d
    return build_space(labels, dist)


def random_metric_instance(n: int, r, seed: int) -> FiniteSemimetricSpace:
    """Uniform random symmetric distances, closed under shortest paths.

    Entries are drawn from multiples of r/2 in [r/2, 5r] and then replaced by
    the exact min-plus closure (all-pairs shortest paths), which enforces the
    triangle inequality while keeping plenty of short/medium/long variety.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"point count must be a non-negative integer, got {n!r}")
    r = as_fraction(r)
    if r <= 0:
        raise ValueError(f"scale r must be positive, got {r}")
    rng = random.Random(seed)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = r * Fraction(rng.randint(1, 10), 2)
            dist[i][j] = dist[j][i] = d
    for via in range(n):
        row_via = dist[via]
        for i in range(n):
            d_iv = dist[i][via]
            row_i = dist[i]
            for j in range(n):
                candidate = d_iv + row_via[j]
                if candidate < row_i[j]:
                    row_i[j] = candidate
                    dist[j][i] = candidate
    return build_space([f"p{i}" for i in range(n)], dist)


def space_from_points(points: Sequence[Sequence], *, metric: str = "l1") -> FiniteSemimetricSpace:
    """Exact metric space from rational coordinates.

    ``metric="l1"`` uses taxicab distance, ``"linf"`` the coordinate maximum;
    both stay rational and satisfy the triangle inequality exactly.
    """
    coords = [tuple(as_fraction(c) for c in p) for p in points]
    if coords and any(len(p) != len(coords[0]) for p in coords):
        raise ValueError("all points must share one dimension")
    if metric not in ("l1", "linf"):
        raise ValueError(f"unknown metric {metric!r} (expected 'l1' or 'linf')")
    n = len(coords)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diffs = [abs(a - b) for a, b in zip(coords[i], coords[j])]
            d = sum(diffs, Fraction(0)) if metric == "l1" else max(diffs, default=Fraction(0))
            dist[i][j] = dist[j][i] = d
    return build_space([f"p{i}" for i in range(n)], dist)


@dataclass(frozen=True)
class WeightedFiniteSpace:
    """A space with a positive rational measure per point; the total weight
    plays the role of the measure of the whole space."""

    base: FiniteSemimetricSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.base.n:
            raise ValueError(f"expected {self.base.n} weights, got {len(weights)}")
        for idx, w in enumerate(weights):
            if w <= 0:
                raise ValueError(f"weight {idx} must be positive, got {w}")

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))


def epsilon_partition(w: WeightedFiniteSpace, eps) -> tuple[tuple[int, ...], ...]:
    """Greedy covering partition with pivot radius eps/2.

    Repeatedly take the lowest-index uncovered point and group every
    uncovered point within distance eps/2 of it. For metric inputs each part
    then has diameter at most eps.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    space = w.base
    radius = eps / 2
    uncovered = set(space.points())
    parts: list[tuple[int, ...]] = []
    for pivot in space.points():
        if pivot not in uncovered:
            continue
        row = space.dist[pivot]
        part = tuple(sorted(p for p in uncovered if row[p] <= radius))
        uncovered.difference_update(part)
        parts.append(part)
    return tuple(parts)


def uniformize(
    w: WeightedFiniteSpace,
    partition: Sequence[Sequence[int]],
    eps,
    *,
    max_total_multiplicity: int = 100_000,
) -> FiniteSemimetricSpace:
    """Collapse a weighted space onto a uniform-measure multiplicity space.

    Each part A_i gets a rational weight q_i with mu(A_i) >= q_i >=
    (1 - eps) * mu(A_i), obtained by decimal truncation at the smallest power
    of ten that satisfies the floor for every part. Parts become blocks of
    q_i-proportional multiplicity (common denominator, reduced by gcd) at
    mutual distance set_distance(A_i, A_j), with distance 0 inside a block.
    """
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    space = w.base
    parts = [sorted(set(part)) for part in partition]
    flat = [p for part in parts for p in part]
    if sorted(flat) != list(space.points()) or any(not part for part in parts):
        raise ValueError("partition must consist of non-empty disjoint parts covering all points")
    measures = [sum((w.weights[p] for p in part), Fraction(0)) for part in parts]

    scale = 1
    power = 0
    while True:
        truncated = [Fraction(int(mu * scale), scale) for mu in measures]
        if all(q >= (1 - eps) * mu for q, mu in zip(truncated, measures)):
            break
        scale *= 10
        power += 1
        if power > 10_000:  # unreachable: truncation error shrinks as 10^-power
            raise RuntimeError("weight truncation failed to converge")
    numerators = [int(q * scale) for q in truncated]

    g = 0
    for a in numerators:
        g = _gcd(g, a)
    multiplicities = [a // g for a in numerators]
    total = sum(multiplicities)
    if total > max_total_multiplicity:
        raise ValueError(
            f"uniformized space needs {total} points, above the cap of {max_total_multiplicity}"
        )

    cross = [[Fraction(0)] * len(parts) for _ in range(len(parts))]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            d = set_distance(space, parts[i], parts[j])
            cross[i][j] = cross[j][i] = d

    labels = []
    block_of = []
    for b, count in enumerate(multiplicities):
        for t in range(count):
            labels.append(f"a{b}_{t}")
            block_of.append(b)
    dist = []
    for i in range(total):
        row = []
        for j in range(total):
            if block_of[i] == block_of[j]:
                row.append(Fraction(0))
            else:
                row.append(cross[block_of[i]][block_of[j]])
        dist.append(row)
    return build_space(labels, dist)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# Weighted space serialization: the plain space format plus one weights line,
# or the structured-object format with an optional "weights" field.
# ---------------------------------------------------------------------------

def dump_weighted_space(w: WeightedFiniteSpace) -> str:
    return dump_space(w.base) + " ".join(format_rational(x) for x in w.weights) + "\n"


def load_weighted_space(text: str) -> WeightedFiniteSpace:
    lines = [line for line in text.splitlines() if line.strip()]
    space, rest = _parse_space_lines(lines)
    if not rest:
        weights = [Fraction(1)] * space.n
    elif len(rest) == 1:
        tokens = rest[0].split()
        if len(tokens) != space.n:
            raise SpaceFormatError(f"weights line: expected {space.n} weights, got {len(tokens)}")
        try:
            weights = [as_fraction(tok) for tok in tokens]
        except ValueError as exc:
            raise SpaceFormatError(f"weights line: {exc}") from exc
    else:
        raise SpaceFormatError(f"unexpected trailing content: {rest[1]!r}")
    return WeightedFiniteSpace(base=space, weights=tuple(weights))


def weighted_space_to_obj(w: WeightedFiniteSpace) -> dict:
    obj = space_to_obj(w.base)
    obj["weights"] = [format_rational(x) for x in w.weights]
    return obj


def weighted_space_from_obj(obj: dict) -> WeightedFiniteSpace:
    space = space_from_obj(obj)
    raw = obj.get("weights")
    if raw is None:
        weights = [Fraction(1)] * space.n
    else:
        if len(raw) != space.n:
            raise SpaceFormatError(f"expected {space.n} weights, got {len(raw)}")
        weights = [as_fraction(x) for x in raw]
    return WeightedFiniteSpace(base=space, weights=tuple(weights))
