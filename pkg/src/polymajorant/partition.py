"""
Maximum set, refined partition and the concave-increasing cells.

``refine`` splits a working interval at knots, critical points and
inflection points so that every cell has a fixed monotonicity and curvature
class. The march only ever looks for bridge endpoints inside cells that are
strictly concave and increasing; :func:`concave_increasing_set` extracts
those and :func:`group_by_convex_separators` records which of them are
separated by a convex or linear stretch.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from itertools import pairwise

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .constants import SEPARATING_CURVATURES, Curvature, Monotonicity
from .exceptions import DomainError
from .poly import CubicPiece, PiecewiseCubic, real_roots_in

logger = logging.getLogger(__name__)

_FLIPPED = {
    Monotonicity.INCREASING: Monotonicity.DECREASING,
    Monotonicity.DECREASING: Monotonicity.INCREASING,
    Monotonicity.CONSTANT: Monotonicity.CONSTANT,
}


@dataclass(frozen=True)
class MaxStructure:
    """Global maximum ``value``, the sets where it is attained, and their hull.

    ``maximizers`` holds closed spans; a single point is stored as ``(x, x)``.
    """

    value: float
    maximizers: tuple[tuple[float, float], ...]
    plateau: tuple[float, float]

    @property
    def c1(self) -> float:
        return self.plateau[0]

    @property
    def c2(self) -> float:
        return self.plateau[1]


@dataclass(frozen=True, slots=True)
class Cell:
    """A closed subinterval carrying its source piece and sign classes."""

    lo: float
    hi: float
    piece_index: int
    piece: CubicPiece
    monotonicity: Monotonicity
    curvature: Curvature
    group_id: int | None = None

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def is_concave_increasing(self) -> bool:
        return (
            self.curvature is Curvature.STRICTLY_CONCAVE
            and self.monotonicity is Monotonicity.INCREASING
        )

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def truncated(self, hi: float) -> Cell:
        return replace(self, hi=hi)

    def mirrored(self) -> Cell:
        """The same cell seen through ``x -> -x``."""
        return replace(
            self,
            lo=-self.hi,
            hi=-self.lo,
            piece=self.piece.reflected(),
            monotonicity=_FLIPPED[self.monotonicity],
        )


@dataclass(frozen=True)
class RefinedPartition:
    lo: float
    hi: float
    cells: tuple[Cell, ...]

    @property
    def boundaries(self) -> tuple[float, ...]:
        if not self.cells:
            return (self.lo, self.hi)
        return (self.cells[0].lo, *(c.hi for c in self.cells))

    def covers(self, lo: float, hi: float) -> bool:
        return self.lo <= lo and hi <= self.hi

    def cell_starting_at(self, x: float) -> Cell | None:
        """The cell whose half-open span ``[lo, hi)`` holds ``x``."""
        for cell in self.cells:
            if cell.lo <= x < cell.hi:
                return cell
        return None

    def cell_ending_at(self, x: float) -> Cell | None:
        """The cell whose half-open span ``(lo, hi]`` holds ``x``."""
        for cell in self.cells:
            if cell.lo < x <= cell.hi:
                return cell
        return None

    def overlapping(self, lo: float, hi: float) -> list[Cell]:
        return [c for c in self.cells if c.hi > lo and c.lo < hi]


@dataclass(frozen=True)
class ConcaveIncreasingSet:
    """Strictly concave, increasing cells, left to right."""

    intervals: tuple[Cell, ...]

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def spans(self) -> list[tuple[float, float]]:
        return [(c.lo, c.hi) for c in self.intervals]


def _extrema_points(piece: CubicPiece, lo: float, hi: float, tol: Tolerances) -> list[float]:
    return [lo, *real_roots_in(piece.derivative(), (lo, hi), tol), hi]


def global_max(pw: PiecewiseCubic, tol: Tolerances = DEFAULT_TOLERANCES) -> MaxStructure:
    """Global maximum of ``pw`` with its maximizer spans and plateau ``[c1, c2]``."""
    per_piece = []
    for piece in pw.pieces:
        xs = _extrema_points(piece, piece.lo, piece.hi, tol)
        per_piece.append((xs, [float(piece(x)) for x in xs]))
    value = max(max(vals) for _, vals in per_piece)
    threshold = tol.tol_max(value)

    spans: list[tuple[float, float]] = []
    for piece, (xs, vals) in zip(pw.pieces, per_piece):
        if all(abs(v - value) <= threshold for v in vals):
            spans.append((piece.lo, piece.hi))
        else:
            spans.extend((x, x) for x, v in zip(xs, vals) if v >= value - threshold)

    merged: list[tuple[float, float]] = []
    for lo, hi in sorted(spans):
        if merged and lo <= merged[-1][1] + tol.tol_merge(lo):
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))

    plateau = (merged[0][0], merged[-1][1])
    logger.debug(f"Maximum {value!r} attained on {merged}, plateau {plateau}")
    return MaxStructure(value=value, maximizers=tuple(merged), plateau=plateau)


def _is_linear_on(piece: CubicPiece, lo: float, hi: float, tol: Tolerances) -> bool:
    a3, a2, _, _ = piece.coeffs
    mid, width = 0.5 * (lo + hi), hi - lo
    local_quadratic = 3.0 * a3 * mid + a2
    reference = tol.scale * tol.linear * (1.0 + abs(piece(mid)) + abs(piece.slope(mid)) * width)
    return abs(a3) * width**3 <= reference and abs(local_quadratic) * width**2 <= reference


def classify(
    piece: CubicPiece, lo: float, hi: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[Monotonicity, Curvature]:
    """Monotonicity and curvature of ``piece`` on a cell free of critical and inflection points."""
    mid = 0.5 * (lo + hi)
    slope = piece.slope(mid)
    if _is_linear_on(piece, lo, hi, tol):
        flat = abs(slope) * (hi - lo) <= tol.scale * tol.linear * (1.0 + abs(piece(mid)))
        if flat:
            return Monotonicity.CONSTANT, Curvature.LINEAR
        curvature = Curvature.LINEAR
    else:
        bend = piece.curvature(mid)
        if bend < 0:
            curvature = Curvature.STRICTLY_CONCAVE
        elif bend > 0:
            curvature = Curvature.STRICTLY_CONVEX
        else:
            curvature = Curvature.LINEAR
    if slope > 0:
        return Monotonicity.INCREASING, curvature
    if slope < 0:
        return Monotonicity.DECREASING, curvature
    return Monotonicity.CONSTANT, curvature


def refine(
    pw: PiecewiseCubic,
    working: tuple[float, float],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> RefinedPartition:
    """Split ``working`` at knots, critical points and inflection points, then classify."""
    lo, hi = float(working[0]), float(working[1])
    a, b = pw.domain
    if lo < a or hi > b or lo > hi:
        raise DomainError(f"working interval [{lo}, {hi}] is not inside the domain [{a}, {b}]")

    points = {lo, hi}
    for piece in pw.pieces:
        span_lo, span_hi = max(piece.lo, lo), min(piece.hi, hi)
        if span_hi <= span_lo:
            continue
        points.update((span_lo, span_hi))
        points.update(real_roots_in(piece.derivative(), (span_lo, span_hi), tol))
        points.update(real_roots_in(piece.derivative().derivative(), (span_lo, span_hi), tol))

    boundaries: list[float] = []
    for x in sorted(points):
        if boundaries and x - boundaries[-1] <= tol.tol_merge(x):
            continue
        boundaries.append(x)
    if len(boundaries) > 1 and hi - boundaries[-1] <= tol.tol_merge(hi) and boundaries[-1] != hi:
        boundaries[-1] = hi

    cells = []
    for x0, x1 in pairwise(boundaries):
        index = pw.piece_index(0.5 * (x0 + x1))
        piece = pw.pieces[index]
        monotonicity, curvature = classify(piece, x0, x1, tol)
        cells.append(Cell(x0, x1, index, piece, monotonicity, curvature))
    logger.debug(f"Refined [{lo}, {hi}] into {len(cells)} cells")
    return RefinedPartition(lo, hi, tuple(cells))


def concave_increasing_set(rp: RefinedPartition) -> ConcaveIncreasingSet:
    """Strictly concave increasing cells; touching cells of one source piece are merged."""
    members: list[Cell] = []
    for cell in rp.cells:
        if not cell.is_concave_increasing:
            continue
        if members and members[-1].hi == cell.lo and members[-1].piece_index == cell.piece_index:
            members[-1] = replace(members[-1], hi=cell.hi)
        else:
            members.append(cell)
    return ConcaveIncreasingSet(tuple(members))


def group_by_convex_separators(
    cis: ConcaveIncreasingSet, rp: RefinedPartition
) -> ConcaveIncreasingSet:
    """Set ``group_id``; members share a group iff no convex or linear cell lies between them."""
    separators = [c for c in rp.cells if c.curvature in SEPARATING_CURVATURES]
    grouped: list[Cell] = []
    group = 0
    for member in cis.intervals:
        if grouped:
            left = grouped[-1]
            if any(s.lo >= left.hi and s.hi <= member.lo for s in separators):
                group += 1
        grouped.append(replace(member, group_id=group))
    return ConcaveIncreasingSet(tuple(grouped))


def rightmost_maximizer(
    pw: PiecewiseCubic,
    rp: RefinedPartition,
    upto: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Rightmost point of ``[rp.lo, upto]`` where ``pw`` attains its maximum there."""
    candidates = np.asarray([x for x in rp.boundaries if x <= upto] + [upto])
    values = pw(candidates)
    best = values.max()
    hits = candidates[values >= best - tol.tol_max(best)]
    return float(hits.max())
