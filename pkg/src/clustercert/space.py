"""Exact data model for finite semimetric point sets.

Distances are stored as `fractions.Fraction`, so every threshold comparison
(short/medium/long edge classification, cluster diameters, separation) is
decided exactly. Decimal text is the canonical lossless input form; binary
floats are converted bit-exactly, never rounded through a repr round trip.

A space carries the uniform counting measure: the measure of a point subset
is its cardinality. The triangle inequality is *not* required ("semimetric");
pass ``require_metric=True`` to :func:`build_space` to enforce it for inputs
that are supposed to be genuine metrics.
"""
from __future__ import annotations

import decimal
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "SpaceFormatError",
    "EdgeClass",
    "ScaleParams",
    "FiniteSemimetricSpace",
    "as_fraction",
    "format_rational",
    "build_space",
    "classify_edge",
    "subset_diameter",
    "set_distance",
    "load_space",
    "dump_space",
    "space_to_obj",
    "space_from_obj",
]


class SpaceFormatError(ValueError):
    """A distance table or space file violates a structural invariant."""


def as_fraction(value) -> Fraction:
    """Convert a distance-like value to an exact ``Fraction``.

    Strings may be in decimal ("0.25") or ratio ("1/3") form and are parsed
    exactly. Floats are converted from their exact binary value, so text is
    the safe path for values like 0.1 that have no finite binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    if isinstance(value, decimal.Decimal):
        return Fraction(value)
    if isinstance(value, float):
        try:
            return Fraction(value)
        except (ValueError, OverflowError) as exc:
            raise ValueError(f"not a finite number: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Render a Fraction losslessly: finite decimal when possible, else "p/q".

    The output always parses back to the same Fraction via
    :func:`as_fraction`, which keeps space files exact for denominators that
    are not powers of ten (e.g. distances produced by discretization).
    """
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10**digits // q.denominator
    text = str(scaled).rjust(digits + 1, "0")
    whole, frac = text[:-digits], text[-digits:].rstrip("0")
    sign = "-" if q.numerator < 0 else ""
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


class EdgeClass(Enum):
    """Class of a point pair relative to the scale r: the distance is at most
    r (SHORT), in (r, 3r] (MEDIUM), or above 3r (LONG)."""

    SHORT = "short"
    MEDIUM = "medium"
    LONG = "long"


@dataclass(frozen=True)
class ScaleParams:
    """Scale r > 0 for edge classification and the structure order k >= 1."""

    r: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "r", as_fraction(self.r))
        if self.r <= 0:
            raise ValueError(f"scale r must be positive, got {self.r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"order k must be a positive integer, got {self.k!r}")


@dataclass(frozen=True)
class FiniteSemimetricSpace:
    """Immutable point set with an exact symmetric distance table.

    Queries are pure; instances are safe to share across threads. Use
    :func:`build_space` rather than the constructor so the invariants
    (symmetry, zero diagonal, non-negativity) are checked.
    """

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def points(self) -> range:
        return range(len(self.labels))

    def rho(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None


def build_space(
    labels: Sequence[str],
    matrix: Sequence[Sequence],
    *,
    require_metric: bool = False,
) -> FiniteSemimetricSpace:
    """Validate a label list and distance table into a space.

    Rejections name the offending cell: asymmetry, negative entries, nonzero
    diagonal, and ragged rows are all errors. ``require_metric`` additionally
    checks the triangle inequality (off by default: semimetric inputs are
    legal and some natural instances are not metrics).
    """
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    seen: set[str] = set()
    for idx, label in enumerate(labels):
        if not label or label.split() != [label]:
            raise SpaceFormatError(f"label {idx} is empty or contains whitespace: {label!r}")
        if label in seen:
            raise SpaceFormatError(f"duplicate label {label!r}")
        seen.add(label)
    if len(matrix) != n:
        raise SpaceFormatError(f"expected {n} matrix rows, got {len(matrix)}")
    rows: list[tuple[Fraction, ...]] = []
    for i, row in enumerate(matrix):
        entries = list(row)
        if len(entries) != n:
            raise SpaceFormatError(f"ragged matrix: row {i} has {len(entries)} entries, expected {n}")
        parsed = []
        for j, value in enumerate(entries):
            try:
                q = as_fraction(value)
            except (ValueError, TypeError) as exc:
                raise SpaceFormatError(f"bad distance at ({i},{j}): {exc}") from exc
            if q < 0:
                raise SpaceFormatError(f"negative entry at ({i},{j}): {format_rational(q)}")
            parsed.append(q)
        rows.append(tuple(parsed))
    for i in range(n):
        if rows[i][i] != 0:
            raise SpaceFormatError(f"nonzero diagonal at ({i},{i}): {format_rational(rows[i][i])}")
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise SpaceFormatError(f"asymmetric at ({i},{j})")
    if require_metric:
        for i in range(n):
            for j in range(i + 1, n):
                for via in range(n):
                    if rows[i][j] > rows[i][via] + rows[via][j]:
                        raise SpaceFormatError(
                            f"triangle violation at ({i},{j}) via {via}: "
                            f"{format_rational(rows[i][j])} > "
                            f"{format_rational(rows[i][via] + rows[via][j])}"
                        )
    return FiniteSemimetricSpace(labels=labels, dist=tuple(rows))


def classify_edge(space: FiniteSemimetricSpace, i: int, j: int, r) -> EdgeClass:
    """Classify the pair (i, j) at scale r with exact, inclusive thresholds."""
    if i == j:
        raise ValueError(f"self-edge ({i},{i}) is unclassified")
    r = as_fraction(r)
    if r <= 0:
        raise ValueError(f"scale r must be positive, got {r}")
    d = space.dist[i][j]
    if d <= r:
        return EdgeClass.SHORT
    if d <= 3 * r:
        return EdgeClass.MEDIUM
    return EdgeClass.LONG


def subset_diameter(space: FiniteSemimetricSpace, points: Iterable[int]) -> Fraction:
    """Largest pairwise distance within the subset; 0 for empty or singleton
    subsets, so the empty set is a valid cluster at every scale."""
    pts = sorted(set(points))
    best = Fraction(0)
    for a in range(len(pts)):
        row = space.dist[pts[a]]
        for b in range(a + 1, len(pts)):
            d = row[pts[b]]
            if d > best:
                best = d
    return best


def set_distance(space: FiniteSemimetricSpace, a: Iterable[int], b: Iterable[int]) -> Fraction:
    """Minimum distance over pairs from a x b; 0 whenever the sets share a
    point. Empty operands are an error."""
    pa = sorted(set(a))
    pb = sorted(set(b))
    if not pa or not pb:
        raise ValueError("set distance is undefined for an empty set")
    best = None
    for u in pa:
        row = space.dist[u]
        for v in pb:
            d = row[v]
            if best is None or d < best:
                best = d
    return best


# ---------------------------------------------------------------------------
# File format: line 1 = n, line 2 = labels, then n rows of distances.
# ---------------------------------------------------------------------------

def dump_space(space: FiniteSemimetricSpace) -> str:
    lines = [str(space.n), " ".join(space.labels)]
    for row in space.dist:
        lines.append(" ".join(format_rational(q) for q in row))
    return "\n".join(lines) + "\n"


def _parse_space_lines(lines: list[str]) -> tuple[FiniteSemimetricSpace, list[str]]:
    """Parse the leading space block; return it plus any remaining lines."""
    if not lines:
        raise SpaceFormatError("line 1: missing point count")
    try:
        n = int(lines[0].strip())
    except ValueError as exc:
        raise SpaceFormatError(f"line 1: point count is not an integer: {lines[0]!r}") from exc
    if n < 0:
        raise SpaceFormatError(f"line 1: negative point count {n}")
    if n == 0:
        return build_space([], []), lines[1:]
    if len(lines) < 2:
        raise SpaceFormatError("line 2: missing label line")
    labels = lines[1].split()
    if len(labels) != n:
        raise SpaceFormatError(f"line 2: expected {n} labels, got {len(labels)}")
    if len(lines) < 2 + n:
        raise SpaceFormatError(f"expected {n} distance rows, file ends after {len(lines) - 2}")
    matrix = []
    for i in range(n):
        tokens = lines[2 + i].split()
        if len(tokens) != n:
            raise SpaceFormatError(f"line {3 + i}: expected {n} distances, got {len(tokens)}")
        matrix.append(tokens)
    try:
        space = build_space(labels, matrix)
    except SpaceFormatError as exc:
        raise SpaceFormatError(f"distance table: {exc}") from exc
    return space, lines[2 + n :]


def load_space(text: str) -> FiniteSemimetricSpace:
    """Parse the text space format, rejecting trailing junk."""
    lines = [line for line in text.splitlines() if line.strip()]
    space, rest = _parse_space_lines(lines)
    if rest:
        raise SpaceFormatError(f"unexpected trailing content: {rest[0]!r}")
    return space


def space_to_obj(space: FiniteSemimetricSpace) -> dict:
    """Structured-object form with distances as exact strings."""
    return {
        "n": space.n,
        "labels": list(space.labels),
        "dist": [[format_rational(q) for q in row] for row in space.dist],
    }


def space_from_obj(obj: dict) -> FiniteSemimetricSpace:
    try:
        labels = obj["labels"]
        dist = obj["dist"]
    except (KeyError, TypeError) as exc:
        raise SpaceFormatError(f"space object is missing field: {exc}") from exc
    space = build_space(labels, dist)
    declared = obj.get("n")
    if declared is not None and declared != space.n:
        raise SpaceFormatError(f"declared n={declared} but found {space.n} labels")
    return space
