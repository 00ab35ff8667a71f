"""
Bridge candidates between concave cells and the strict-chord test.

A bridge is an open interval ``(alpha, beta)`` whose chord touches ``F`` with
matching slope at both ends and lies strictly above ``F`` in between. For two
strictly concave cubic pieces the common slope ``y`` of such a chord is a root
of a degree six polynomial obtained by eliminating both square roots from the
intercept equation; :func:`build_sextic` assembles it and
:func:`candidate_bridges` turns its admissible roots back into endpoint pairs.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .config import DEFAULT_TOLERANCES, Tolerances
from .constants import Curvature, Side
from .exceptions import ContractViolation, DegenerateDegreeError
from .partition import Cell, RefinedPartition, refine
from .poly import CubicPiece, PiecewiseCubic, PolyCoeffs6, real_roots_in

logger = logging.getLogger(__name__)

# Newton steps spent polishing a slope root against the unsquared intercept gap.
_POLISH_STEPS = 8
# Sextic roots whose unsquared gap exceeds this multiple of the strict threshold
# are extraneous and are dropped before polishing.
_LOOSE_FACTOR = 1e3


@dataclass(frozen=True)
class BridgeCandidate:
    """Proposed bridge ``(alpha, beta)`` with chord slope ``slope``.

    A source of ``None`` marks a fixed domain endpoint.
    """

    alpha: float
    beta: float
    slope: float
    left_source: Cell | None = None
    right_source: Cell | None = None

    def __post_init__(self) -> None:
        if not self.alpha < self.beta:
            raise ValueError(f"bridge endpoints out of order: {self.alpha} >= {self.beta}")

    @property
    def span(self) -> tuple[float, float]:
        return (self.alpha, self.beta)

    def chord(self, pw: PiecewiseCubic):
        f_alpha = pw(self.alpha)
        return lambda x: f_alpha + self.slope * (np.asarray(x, dtype=float) - self.alpha)

    def mirrored(self) -> BridgeCandidate:
        return BridgeCandidate(
            alpha=-self.beta,
            beta=-self.alpha,
            slope=-self.slope,
            left_source=self.right_source.mirrored() if self.right_source else None,
            right_source=self.left_source.mirrored() if self.left_source else None,
        )


@dataclass(frozen=True)
class SexticContext:
    """Left cubic ``A x^3 + B x^2 + C x + D``, right cubic ``W x^3 + X x^2 + Y x + Z``.

    ``gamma``, ``delta`` and ``mu1..mu3`` are polynomials in the slope ``y``;
    ``J`` is the common slope range of the two cells (``None`` when empty or
    when no cells were given).
    """

    A: float
    B: float
    C: float
    D: float
    W: float
    X: float
    Y: float
    Z: float
    gamma: Polynomial
    delta: Polynomial
    mu1: Polynomial
    mu2: Polynomial
    mu3: Polynomial
    sextic: PolyCoeffs6
    J: tuple[float, float] | None


def slope_range(cell: Cell, piece: CubicPiece | None = None) -> tuple[float, float]:
    """Range of ``F'`` over a strictly concave cell, as ``(F'(hi), F'(lo))``."""
    if cell.curvature is not Curvature.STRICTLY_CONCAVE:
        raise ContractViolation(
            f"slope range requested for a {cell.curvature.value} cell [{cell.lo}, {cell.hi}]"
        )
    piece = piece or cell.piece
    return (float(piece.slope(cell.hi)), float(piece.slope(cell.lo)))


def _intersect(
    first: tuple[float, float], second: tuple[float, float]
) -> tuple[float, float] | None:
    lo, hi = max(first[0], second[0]), min(first[1], second[1])
    return (lo, hi) if lo <= hi else None


def _is_degenerate(piece: CubicPiece, span: tuple[float, float], tol: Tolerances) -> bool:
    a3, a2, _, _ = piece.coeffs
    if a3 == 0.0:
        return True
    width, mid = span[1] - span[0], 0.5 * (span[0] + span[1])
    return abs(a3) * width <= tol.degree * abs(3.0 * a3 * mid + a2)


def _cubic_intercept_parts(piece: CubicPiece) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Concave-branch tangent intercept as ``mu0 + weight * sqrt(radicand)``."""
    A, B, C, D = piece.coeffs
    radicand = Polynomial([B * B - 3.0 * A * C, 3.0 * A])
    mu0 = Polynomial([D + 2.0 * B**3 / (27.0 * A * A) - B * C / (3.0 * A), B / (3.0 * A)])
    weight = radicand * (2.0 / (27.0 * A * A))
    return mu0, radicand, weight


def _quadratic_intercept(piece: CubicPiece) -> Polynomial:
    """Intercept ``D - (y - C)^2 / (4B)`` of the tangent with slope ``y`` to ``B x^2 + C x + D``."""
    _, B, C, D = piece.coeffs
    if B == 0.0:
        raise ContractViolation("a linear piece has no tangent chord of a given slope")
    return Polynomial([D - C * C / (4.0 * B), C / (2.0 * B), -1.0 / (4.0 * B)])


def _normalised(poly: Polynomial) -> PolyCoeffs6:
    coef = np.asarray(poly.coef, dtype=float)
    peak = np.max(np.abs(coef)) if len(coef) else 0.0
    if peak > 0.0:
        coef = coef / peak
    return PolyCoeffs6.from_polynomial(Polynomial(coef))


def _common_range(L: Cell | None, R: Cell | None) -> tuple[float, float] | None:
    if L is None or R is None:
        return None
    return _intersect(slope_range(L), slope_range(R))


def build_sextic(
    PL: CubicPiece,
    PR: CubicPiece,
    L: Cell | None = None,
    R: Cell | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SexticContext:
    """Slope polynomial whose roots include every common tangent of ``PL`` and ``PR``.

    Raises :class:`DegenerateDegreeError` when either cubic coefficient is
    zero or negligible on its cell.
    """
    left_span = (L.lo, L.hi) if L is not None else PL.interval
    right_span = (R.lo, R.hi) if R is not None else PR.interval
    if _is_degenerate(PL, left_span, tol) or _is_degenerate(PR, right_span, tol):
        raise DegenerateDegreeError(
            f"cubic coefficient negligible (A = {PL.coeffs[0]!r}, W = {PR.coeffs[0]!r})"
        )

    mu0_left, gamma, mu2 = _cubic_intercept_parts(PL)
    mu0_right, delta, mu3 = _cubic_intercept_parts(PR)
    mu1 = mu0_right - mu0_left
    inner = mu1**2 - mu2**2 * gamma - mu3**2 * delta
    sextic = inner**2 - 4.0 * mu2**2 * mu3**2 * gamma * delta

    A, B, C, D = PL.coeffs
    W, X, Y, Z = PR.coeffs
    return SexticContext(
        A=A, B=B, C=C, D=D, W=W, X=X, Y=Y, Z=Z,
        gamma=gamma,
        delta=delta,
        mu1=mu1,
        mu2=mu2,
        mu3=mu3,
        sextic=_normalised(sextic),
        J=_common_range(L, R),
    )


def reduced_pair_polynomial(
    PL: CubicPiece,
    PR: CubicPiece,
    L: Cell | None = None,
    R: Cell | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PolyCoeffs6:
    """Slope polynomial of degree at most four for pairs where a side is quadratic."""
    left_span = (L.lo, L.hi) if L is not None else PL.interval
    right_span = (R.lo, R.hi) if R is not None else PR.interval
    left_quadratic = _is_degenerate(PL, left_span, tol)
    right_quadratic = _is_degenerate(PR, right_span, tol)

    if left_quadratic and right_quadratic:
        return _normalised(_quadratic_intercept(PR) - _quadratic_intercept(PL))
    if left_quadratic:
        mu0, radicand, weight = _cubic_intercept_parts(PR)
        gap = mu0 - _quadratic_intercept(PL)
    else:
        mu0, radicand, weight = _cubic_intercept_parts(PL)
        gap = _quadratic_intercept(PR) - mu0
    return _normalised(gap**2 - weight**2 * radicand)


def derivative_preimages(piece: CubicPiece, y: float) -> list[tuple[float, Curvature]]:
    """Solutions of ``P'(x) = y`` tagged with the branch they sit on.

    A double root is returned on both branches.
    """
    A, B, C, _ = piece.coeffs
    if A == 0.0:
        if B == 0.0:
            return []
        x = (y - C) / (2.0 * B)
        return [(x, Curvature.STRICTLY_CONCAVE if B < 0 else Curvature.STRICTLY_CONVEX)]

    radicand = B * B - 3.0 * A * C + 3.0 * A * y
    if radicand < 0.0:
        if radicand < -1e-14 * (B * B + abs(3.0 * A * C) + abs(3.0 * A * y)):
            return []
        radicand = 0.0
    root = math.sqrt(radicand)
    q = -(B + math.copysign(root, B))
    if q == 0.0:
        x = -B / (3.0 * A)
        return [(x, Curvature.STRICTLY_CONCAVE), (x, Curvature.STRICTLY_CONVEX)]

    out = []
    for x in (q / (3.0 * A), (C - y) / q):
        bend = piece.curvature(x)
        if bend < 0:
            out.append((x, Curvature.STRICTLY_CONCAVE))
        elif bend > 0:
            out.append((x, Curvature.STRICTLY_CONVEX))
        else:
            out.extend(((x, Curvature.STRICTLY_CONCAVE), (x, Curvature.STRICTLY_CONVEX)))
    return out


def _preimage_on(piece: CubicPiece, y: float, branch: Curvature) -> float | None:
    for x, tag in derivative_preimages(piece, y):
        if tag is branch:
            return x
    return None


def _intercept_gap(
    PL: CubicPiece, PR: CubicPiece, y: float, branches: tuple[Curvature, Curvature]
) -> tuple[float, float, float] | None:
    """``(E, a, b)`` where ``E`` is the difference of the two tangent intercepts at slope ``y``."""
    a = _preimage_on(PL, y, branches[0])
    b = _preimage_on(PR, y, branches[1])
    if a is None or b is None:
        return None
    return (PR(b) - y * b) - (PL(a) - y * a), a, b


def _polish(
    PL: CubicPiece, PR: CubicPiece, y: float, branches: tuple[Curvature, Curvature]
) -> tuple[float, tuple[float, float, float]] | None:
    # dE/dy = a - b
    current = _intercept_gap(PL, PR, y, branches)
    if current is None:
        return None
    best_y, best = y, current
    for _ in range(_POLISH_STEPS):
        gap, a, b = current
        if gap == 0.0 or a == b:
            break
        y_next = y - gap / (a - b)
        trial = _intercept_gap(PL, PR, y_next, branches)
        if trial is None or abs(trial[0]) >= abs(best[0]):
            break
        y, current = y_next, trial
        best_y, best = y, trial
    return best_y, best


def _bracket_concave_root(
    PL: CubicPiece, PR: CubicPiece, J: tuple[float, float], tol: Tolerances
) -> float | None:
    """The concave-branch slope root on ``J``, where the gap is monotone."""
    branches = (Curvature.STRICTLY_CONCAVE, Curvature.STRICTLY_CONCAVE)
    lo, hi = J
    if hi <= lo:
        return None
    ends = [_intercept_gap(PL, PR, y, branches) for y in (lo, hi)]
    if ends[0] is None or ends[1] is None:
        return None
    g_lo, g_hi = ends[0][0], ends[1][0]
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if g_lo * g_hi > 0.0:
        return None

    def gap(y: float) -> float:
        value = _intercept_gap(PL, PR, y, branches)
        return value[0] if value is not None else math.nan

    return brentq(gap, lo, hi, xtol=tol.tol_root(max(abs(lo), abs(hi))))


def _dedupe(candidates: Iterable[BridgeCandidate], tol: Tolerances) -> list[BridgeCandidate]:
    unique: list[BridgeCandidate] = []
    for cand in sorted(candidates, key=lambda c: (c.beta, c.alpha)):
        if any(
            abs(cand.alpha - u.alpha) <= tol.tol_tan(0.0, cand.alpha)
            and abs(cand.beta - u.beta) <= tol.tol_tan(0.0, cand.beta)
            for u in unique
        ):
            continue
        unique.append(cand)
    return unique


def candidate_bridges(
    L: Cell, R: Cell, tol: Tolerances = DEFAULT_TOLERANCES
) -> list[BridgeCandidate]:
    """Common tangent chords of the pieces of ``L`` and ``R`` with slope in both ranges.

    Roots come from the slope polynomial (the sextic, or its reduced form for
    quadratic pieces) plus a bracketed concave-branch root. Each root is
    inverted on every branch, polished on the unsquared intercept gap and
    kept only if that gap vanishes. Endpoints may fall anywhere in the source
    pieces; the march filters them to the cells.
    """
    J = _common_range(L, R)
    if J is None:
        return []
    PL, PR = L.piece, R.piece

    try:
        slope_poly = build_sextic(PL, PR, L, R, tol).sextic
    except DegenerateDegreeError as exc:
        logger.warning(f"Routing pair [{L.lo}, {L.hi}] x [{R.lo}, {R.hi}] to reduced solve: {exc}")
        slope_poly = reduced_pair_polynomial(PL, PR, L, R, tol)

    slack = tol.tol_tan(max(abs(J[0]), abs(J[1])), 0.0)
    roots = real_roots_in(slope_poly, (J[0] - slack, J[1] + slack), tol)
    bracketed = _bracket_concave_root(PL, PR, J, tol)
    if bracketed is not None:
        roots.append(bracketed)

    found = []
    branch_pairs = [
        (left, right)
        for left in (Curvature.STRICTLY_CONCAVE, Curvature.STRICTLY_CONVEX)
        for right in (Curvature.STRICTLY_CONCAVE, Curvature.STRICTLY_CONVEX)
    ]
    for y0 in roots:
        for branches in branch_pairs:
            first = _intercept_gap(PL, PR, y0, branches)
            if first is None:
                continue
            gap, a, b = first
            if not (PL.lo <= a <= PL.hi and PR.lo <= b <= PR.hi and a < b):
                continue
            scale = 1.0 + abs(PL(a)) + abs(PR(b))
            if abs(gap) > _LOOSE_FACTOR * tol.tol_tan(y0, b - a) * scale:
                continue
            polished = _polish(PL, PR, y0, branches)
            if polished is None:
                continue
            y, (gap, a, b) = polished
            if not (PL.lo <= a <= PL.hi and PR.lo <= b <= PR.hi and a < b):
                continue
            if abs(gap) > tol.tol_tan(y, b - a) * (1.0 + abs(PL(a)) + abs(PR(b))):
                logger.warning(f"Rejected slope root {y!r}: residual {gap:.3e} after polishing")
                continue
            found.append(BridgeCandidate(a, b, y, left_source=L, right_source=R))

    unique = _dedupe(found, tol)
    logger.debug(
        f"Pair [{L.lo}, {L.hi}] x [{R.lo}, {R.hi}]: {len(roots)} slope roots, "
        f"{len(unique)} candidates"
    )
    return unique


def tangency_direct(
    fixed_point: tuple[float, float],
    cell: Cell,
    side: Side = Side.LEFT,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[BridgeCandidate]:
    """Tangent chords from a fixed point to the source piece of ``cell``.

    With ``Side.LEFT`` the fixed point is the chord's left end and the
    tangency lies to its right; ``Side.RIGHT`` is solved in the mirrored frame.
    """
    x0, f0 = float(fixed_point[0]), float(fixed_point[1])
    if side is Side.RIGHT:
        mirrored = tangency_direct((-x0, f0), cell.mirrored(), Side.LEFT, tol)
        return [cand.mirrored() for cand in mirrored]

    piece = cell.piece
    poly = piece.polynomial()
    # P'(t) (t - x0) - P(t) + F(x0)
    tangency = poly.deriv() * Polynomial([-x0, 1.0]) - poly + f0
    roots = real_roots_in(tangency, piece.interval, tol)
    floor = x0 + tol.tol_tan(0.0, piece.width)
    return [
        BridgeCandidate(x0, t, float(piece.slope(t)), left_source=None, right_source=cell)
        for t in roots
        if t > floor
    ]


def _concave_run(rp: RefinedPartition, cell: Cell) -> tuple[float, float]:
    """Span of the maximal run of adjacent strictly concave cells around ``cell``."""
    cells = rp.cells
    i = j = cells.index(cell)
    while i > 0 and cells[i - 1].curvature is Curvature.STRICTLY_CONCAVE:
        i -= 1
    while j + 1 < len(cells) and cells[j + 1].curvature is Curvature.STRICTLY_CONCAVE:
        j += 1
    return cells[i].lo, cells[j].hi


def _check_points(
    cell: Cell, lo: float, hi: float, slope: float, tol: Tolerances
) -> list[float]:
    points = [lo, hi, 0.5 * (lo + hi)]
    if cell.curvature is Curvature.STRICTLY_CONCAVE:
        level = cell.piece.polynomial().deriv() - slope
        points.extend(real_roots_in(level, (lo, hi), tol))
    return points


def verify_bridge(
    pw: PiecewiseCubic,
    rp: RefinedPartition | None,
    cand: BridgeCandidate,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> bool:
    """True when the chord lies above ``F`` by more than the gap margin on ``(alpha, beta)``.

    ``F - chord`` is concave on strictly concave cells and convex elsewhere,
    so its maximum on a cell sits at a clipped endpoint or, for concave
    cells, at a root of ``P' = slope``. Next to an endpoint where the chord is
    tangent inside a strictly concave cell the difference is non-positive
    across the whole run of adjacent strictly concave cells, which is skipped.
    """
    alpha, beta, slope = cand.alpha, cand.beta, cand.slope
    if rp is None or not rp.covers(alpha, beta):
        rp = refine(pw, (alpha, beta), tol)
    chord = cand.chord(pw)
    margin = tol.tol_gap(max(abs(pw(alpha)), abs(pw(beta))))
    tangent_tol = tol.tol_tan(slope, beta - alpha)

    skip_lo, skip_hi = alpha, beta
    left_cell = rp.cell_starting_at(alpha)
    if (
        left_cell is not None
        and left_cell.curvature is Curvature.STRICTLY_CONCAVE
        and abs(left_cell.piece.slope(alpha) - slope) <= tangent_tol
    ):
        skip_lo = _concave_run(rp, left_cell)[1]
    right_cell = rp.cell_ending_at(beta)
    if (
        right_cell is not None
        and right_cell.curvature is Curvature.STRICTLY_CONCAVE
        and abs(right_cell.piece.slope(beta) - slope) <= tangent_tol
    ):
        skip_hi = _concave_run(rp, right_cell)[0]
    if skip_lo >= skip_hi:
        # both tangencies sit in concave cells that meet or overlap
        return False

    points: list[float] = []
    for cell in rp.overlapping(skip_lo, skip_hi):
        lo, hi = max(cell.lo, skip_lo), min(cell.hi, skip_hi)
        if hi > lo:
            points.extend(_check_points(cell, lo, hi, slope, tol))
    points = [x for x in points if alpha < x < beta]
    if not points:
        return True
    xs = np.asarray(points)
    excess = chord(xs) - pw(xs)
    worst = int(np.argmin(excess))
    ok = bool(excess[worst] > margin)
    logger.debug(
        f"Chord ({alpha!r}, {beta!r}) slope {slope!r}: min excess {excess[worst]:.3e} "
        f"at {xs[worst]!r} -> {'accept' if ok else 'reject'}"
    )
    return ok


@dataclass(frozen=True)
class PruneContext:
    """State the pair filter needs: rightmost maximizer of ``F`` left of ``R``."""

    rightmost_maximizer: float
    tol: Tolerances = DEFAULT_TOLERANCES


def prune(L: Cell, R: Cell, ctx: PruneContext) -> bool:
    """False when ``L`` cannot hold the left end of a bridge ending in ``R``."""
    if _intersect(slope_range(L), slope_range(R)) is None:
        return False
    if L.group_id is not None and L.group_id == R.group_id:
        return False
    if L.lo > ctx.rightmost_maximizer + ctx.tol.tol_merge(L.lo):
        return False
    return True


def check_nested_ordering(
    candidates: Sequence[BridgeCandidate],
) -> list[tuple[BridgeCandidate, BridgeCandidate]]:
    """Pairs of intersecting bridges with ``b1 < b2`` but not ``a2 < a1``."""
    violations = []
    ordered = sorted(candidates, key=lambda c: c.beta)
    for i, first in enumerate(ordered):
        for second in ordered[i + 1 :]:
            intersect = first.alpha < second.beta and second.alpha < first.beta
            if intersect and first.beta < second.beta and not second.alpha < first.alpha:
                violations.append((first, second))
    return violations
