"""Greedy cluster decomposition and exact cluster-structure search.

The greedy decomposition repeatedly extracts a maximum-cardinality subset of
diameter at most 2r (a maximum clique in the threshold graph) together with
its strict r-neighborhood, until the point set is exhausted. The exact search
finds a maximum-measure family of k pairwise-separated 2r-clusters by branch
and bound over point assignments.

All tie-breaking is lexicographic by point index, so both procedures are
deterministic and reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import stats
from .space import FiniteSemimetricSpace, ScaleParams, as_fraction

__all__ = [
    "SearchLimitError",
    "DecompositionPart",
    "GreedyDecomposition",
    "ClusterStructure",
    "ExactSearchResult",
    "StructureViolation",
    "StructureValidation",
    "max_cluster",
    "greedy_decomposition",
    "greedy_structure",
    "exact_structure",
    "validate_structure",
]

DEFAULT_EXACT_LIMIT = 14


class SearchLimitError(RuntimeError):
    """Exact search rejected up front: the instance exceeds the point limit."""


@dataclass(frozen=True)
class DecompositionPart:
    """One step of the greedy decomposition.

    ``z`` is the extracted neighborhood, ``x`` its kernel (the maximum
    2r-cluster of the residual set), ``u`` the points covered by a greedy
    maximal matching of long edges inside z - x, and ``y`` the rest.
    ``medium_edges``/``long_edges`` count pairs inside z in (r, 3r] and
    above 3r respectively.
    """

    index: int
    z: frozenset[int]
    x: frozenset[int]
    y: frozenset[int]
    u: frozenset[int]
    matching: tuple[tuple[int, int], ...]
    medium_edges: int
    long_edges: int


@dataclass(frozen=True)
class GreedyDecomposition:
    """Ordered parts plus the derived index sets used by the bound checks.

    ``w`` lists part sizes |Z_i| in descending order. ``i0`` holds the part
    indices of the k largest |Z_i| (ties to earlier parts), ``i1`` the parts
    with (k+1)|X_i| <= |Z_i|, and ``i2`` the parts whose size is at least
    sqrt(delta_hat) * n, decided exactly by squaring. ``far_pair_count``
    totals medium and long pairs inside parts.
    """

    parts: tuple[DecompositionPart, ...]
    w: tuple[int, ...]
    i0: tuple[int, ...]
    i1: tuple[int, ...]
    i2: tuple[int, ...]
    far_pair_count: int


@dataclass(frozen=True)
class ClusterStructure:
    """k disjoint clusters of diameter <= 2r, pairwise at distance >= r.

    Clusters may be empty (padding keeps order-k structures total even when
    fewer parts exist); the measure is the total point count.
    """

    clusters: tuple[frozenset[int], ...]

    @property
    def order(self) -> int:
        return len(self.clusters)

    @property
    def measure(self) -> int:
        return sum(len(c) for c in self.clusters)


@dataclass(frozen=True)
class ExactSearchResult:
    structure: ClusterStructure
    optimal: bool
    nodes_explored: int

    @property
    def measure(self) -> int:
        return self.structure.measure


def max_cluster(space: FiniteSemimetricSpace, points: Iterable[int], d) -> frozenset[int]:
    """Maximum-cardinality subset of ``points`` with diameter at most d.

    Equivalent to a maximum clique in the threshold graph {(u, v): rho <= d}
    restricted to the subset. Branch and bound explores vertices in ascending
    index order with a greedy-coloring upper bound; pruning only discards
    subtrees that cannot strictly beat the incumbent, so the first optimum
    found -- and returned -- is the lexicographically smallest one.
    """
    d = as_fraction(d)
    pts = sorted(set(points))
    if not pts:
        return frozenset()
    adj: dict[int, int] = {}
    for a in pts:
        row = space.dist[a]
        mask = 0
        for b in pts:
            if b != a and row[b] <= d:
                mask |= 1 << b
        adj[a] = mask

    def color_bound(cand: int) -> int:
        # Greedy proper coloring of the candidate set: clique size <= #colors.
        classes: list[int] = []
        m = cand
        while m:
            v_bit = m & -m
            v = v_bit.bit_length() - 1
            m &= m - 1
            for i, cls in enumerate(classes):
                if not (cls & adj[v]):
                    classes[i] = cls | v_bit
                    break
            else:
                classes.append(v_bit)
        return len(classes)

    best: list[int] = []

    def expand(current: list[int], cand: int) -> None:
        nonlocal best
        if len(current) > len(best):
            best = current.copy()
        if not cand:
            return
        if len(current) + cand.bit_count() <= len(best):
            return
        if len(current) + color_bound(cand) <= len(best):
            return
        while cand:
            if len(current) + cand.bit_count() <= len(best):
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            expand(current + [v], cand & adj[v])

    full = 0
    for p in pts:
        full |= 1 << p
    expand([], full)
    return frozenset(best)


def _greedy_long_matching(
    space: FiniteSemimetricSpace, points: Iterable[int], r: Fraction
) -> tuple[tuple[int, int], ...]:
    """Inclusion-wise maximal matching of long edges (rho > 3r), taken
    greedily in lexicographic edge order."""
    pts = sorted(set(points))
    covered: set[int] = set()
    matching: list[tuple[int, int]] = []
    for a_idx in range(len(pts)):
        a = pts[a_idx]
        if a in covered:
            continue
        row = space.dist[a]
        for b_idx in range(a_idx + 1, len(pts)):
            b = pts[b_idx]
            if b in covered:
                continue
            if row[b] > 3 * r:
                matching.append((a, b))
                covered.add(a)
                covered.add(b)
                break
    return tuple(matching)


@lru_cache(maxsize=512)
def greedy_decomposition(space: FiniteSemimetricSpace, params: ScaleParams) -> GreedyDecomposition:
    """Run the greedy extraction until the space is exhausted.

    Each step takes the maximum 2r-cluster ``x`` of the residual set and its
    strict r-neighborhood ``z = {p in residual: rho(p, x) < r}`` (which always
    contains ``x``). The parts partition the space and the kernel sizes are
    non-increasing. Memoized on the immutable inputs; the result is frozen
    and safe to share.
    """
    r = params.r
    k = params.k
    n = space.n
    residual = set(space.points())
    raw: list[tuple[set[int], frozenset[int]]] = []
    while residual:
        x = max_cluster(space, residual, 2 * r)
        z = set()
        for p in residual:
            row = space.dist[p]
            if min(row[q] for q in x) < r:
                z.add(p)
        raw.append((z, x))
        residual -= z
    parts: list[DecompositionPart] = []
    for idx, (z, x) in enumerate(raw):
        matching = _greedy_long_matching(space, z - x, r)
        u = frozenset(p for edge in matching for p in edge)
        y = frozenset(z - x - u)
        parts.append(
            DecompositionPart(
                index=idx,
                z=frozenset(z),
                x=x,
                y=y,
                u=u,
                matching=matching,
                medium_edges=stats.medium_edge_count(space, r, points=z),
                long_edges=stats.long_edge_count(space, r, points=z),
            )
        )
    sizes = [len(p.z) for p in parts]
    order = sorted(range(len(parts)), key=lambda i: (-sizes[i], i))
    total_medium = stats.medium_edge_count(space, r)
    # |Z_i| >= sqrt(delta_hat) * n  <=>  |Z_i|^2 >= delta_hat * n^2 = 2 * M.
    return GreedyDecomposition(
        parts=tuple(parts),
        w=tuple(sorted(sizes, reverse=True)),
        i0=tuple(sorted(order[:k])),
        i1=tuple(i for i in range(len(parts)) if (k + 1) * len(parts[i].x) <= sizes[i]),
        i2=tuple(i for i in range(len(parts)) if sizes[i] ** 2 >= 2 * total_medium),
        far_pair_count=sum(p.medium_edges + p.long_edges for p in parts),
    )


def greedy_structure(
    decomp: GreedyDecomposition, k: int, *, selection: str = "largest"
) -> ClusterStructure:
    """Cluster structure assembled from decomposition kernels.

    ``selection="largest"`` takes the kernels of the k parts with the largest
    |Z_i| (ties to earlier parts); ``selection="first"`` takes the first k
    parts in construction order. Missing clusters are padded with empty sets
    so the result always has order k.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"order k must be a positive integer, got {k!r}")
    parts = decomp.parts
    if selection == "largest":
        sizes = [len(p.z) for p in parts]
        chosen = sorted(sorted(range(len(parts)), key=lambda i: (-sizes[i], i))[:k])
    elif selection == "first":
        chosen = list(range(min(k, len(parts))))
    else:
        raise ValueError(f"unknown selection {selection!r}")
    clusters = [parts[i].x for i in chosen]
    clusters.extend(frozenset() for _ in range(k - len(clusters)))
    return ClusterStructure(clusters=tuple(clusters))


class _NodeBudget(Exception):
    pass


@lru_cache(maxsize=256)
def exact_structure(
    space: FiniteSemimetricSpace,
    params: ScaleParams,
    *,
    max_points: int = DEFAULT_EXACT_LIMIT,
    node_budget: int | None = None,
) -> ExactSearchResult:
    """Maximum-measure order-k structure by branch and bound.

    Points are assigned in ascending index order to one of k clusters or
    discarded. Feasibility (diameter <= 2r inside a cluster, separation >= r
    across clusters) is checked incrementally; symmetry is broken by letting a
    point open cluster c only when clusters below c are already non-empty, so
    cluster labels are ordered by smallest member. The pruning bound is the
    current measure plus the number of unassigned points, and only strictly
    better assignments replace the incumbent, so the witness is the first
    optimum in lexicographic assignment order.

    If ``node_budget`` is exhausted the best structure found so far is
    returned flagged non-optimal. Instances larger than ``max_points`` are
    rejected outright.
    """
    n = space.n
    k = params.k
    r = params.r
    if n > max_points:
        raise SearchLimitError(f"{n} points exceeds the exact-search limit of {max_points}")
    share = []
    sep = []
    for p in range(n):
        row = space.dist[p]
        share_mask = 0
        sep_mask = 0
        for q in range(n):
            if q == p:
                continue
            if row[q] <= 2 * r:
                share_mask |= 1 << q
            if row[q] >= r:
                sep_mask |= 1 << q
        share.append(share_mask)
        sep.append(sep_mask)

    cluster_masks = [0] * k
    best_measure = -1
    best_snapshot: tuple[int, ...] = tuple(cluster_masks)
    nodes = 0

    def rec(p: int, opened: int, measure: int) -> None:
        nonlocal best_measure, best_snapshot, nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise _NodeBudget
        if p == n:
            if measure > best_measure:
                best_measure = measure
                best_snapshot = tuple(cluster_masks)
            return
        if measure + (n - p) <= best_measure:
            return
        bit = 1 << p
        for c in range(min(opened + 1, k)):
            members = cluster_masks[c]
            if members & ~share[p]:
                continue
            feasible = True
            for other in range(opened):
                if other != c and cluster_masks[other] & ~sep[p]:
                    feasible = False
                    break
            if not feasible:
                continue
            cluster_masks[c] = members | bit
            rec(p + 1, max(opened, c + 1), measure + 1)
            cluster_masks[c] = members
        rec(p + 1, opened, measure)

    optimal = True
    try:
        rec(0, 0, 0)
    except _NodeBudget:
        optimal = False

    clusters = []
    for mask in best_snapshot:
        members = frozenset(i for i in range(n) if mask >> i & 1)
        clusters.append(members)
    return ExactSearchResult(
        structure=ClusterStructure(clusters=tuple(clusters)),
        optimal=optimal,
        nodes_explored=nodes,
    )


@dataclass(frozen=True)
class StructureViolation:
    """One failed structure constraint with its witnessing points."""

    kind: str  # "diameter", "separation", or "overlap"
    clusters: tuple[int, ...]
    points: tuple[int, ...]
    distance: Fraction | None


@dataclass(frozen=True)
class StructureValidation:
    violations: tuple[StructureViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_structure(
    space: FiniteSemimetricSpace, structure: ClusterStructure, params: ScaleParams
) -> StructureValidation:
    """Check diameter, pairwise separation, and disjointness, reporting every
    violation with a witness pair. Violations are data, not errors."""
    r = params.r
    violations: list[StructureViolation] = []
    clusters = structure.clusters
    for i, cluster in enumerate(clusters):
        pts = sorted(cluster)
        for a in range(len(pts)):
            row = space.dist[pts[a]]
            for b in range(a + 1, len(pts)):
                if row[pts[b]] > 2 * r:
                    violations.append(
                        StructureViolation(
                            kind="diameter",
                            clusters=(i,),
                            points=(pts[a], pts[b]),
                            distance=row[pts[b]],
                        )
                    )
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            shared = clusters[i] & clusters[j]
            if shared:
                violations.append(
                    StructureViolation(
                        kind="overlap",
                        clusters=(i, j),
                        points=tuple(sorted(shared)),
                        distance=None,
                    )
                )
                continue
            if clusters[i] and clusters[j]:
                witness = None
                for u in sorted(clusters[i]):
                    row = space.dist[u]
                    for v in sorted(clusters[j]):
                        if row[v] < r and (witness is None or row[v] < witness[2]):
                            witness = (u, v, row[v])
                if witness is not None:
                    violations.append(
                        StructureViolation(
                            kind="separation",
                            clusters=(i, j),
                            points=(witness[0], witness[1]),
                            distance=witness[2],
                        )
                    )
    return StructureValidation(violations=tuple(violations))
