"""
Least concave majorant of a C1 piecewise cubic.

The majorant equals ``F`` except on finitely many component intervals where
it is the chord between the endpoints. Components left of the plateau come
from a right-to-left march over the strictly concave increasing cells,
components inside the plateau from a scan for sub-maximal stretches, and
components right of the plateau from the same march run on the reflected
function.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from itertools import pairwise
from typing import Any

import numpy as np

from .bridge import (
    BridgeCandidate,
    PruneContext,
    candidate_bridges,
    check_nested_ordering,
    prune,
    tangency_direct,
    verify_bridge,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .constants import Side, TraceEvent
from .exceptions import ContractViolation
from .partition import (
    Cell,
    ConcaveIncreasingSet,
    MaxStructure,
    RefinedPartition,
    concave_increasing_set,
    global_max,
    group_by_convex_separators,
    refine,
    rightmost_maximizer,
)
from .poly import CubicPiece, PiecewiseCubic, check_continuity, reflect

logger = logging.getLogger(__name__)

TraceSink = Callable[[dict[str, Any]], None]
Interval = tuple[float, float]


def _emit(trace: TraceSink | None, event: TraceEvent, side: Side, **payload: Any) -> None:
    if trace is not None:
        trace({"event": event.value, "side": side.value, **payload})


def _describe(cands: list[BridgeCandidate]) -> list[list[float]]:
    return [[c.alpha, c.beta, c.slope] for c in cands]


def _report_ordering(seen: list[BridgeCandidate], trace: TraceSink | None, side: Side) -> None:
    violations = check_nested_ordering(seen)
    for first, second in violations:
        logger.warning(f"Bridges {first.span} and {second.span} intersect without nesting")
    _emit(
        trace,
        TraceEvent.ORDERING,
        side,
        violations=[[list(first.span), list(second.span)] for first, second in violations],
    )


@dataclass(frozen=True)
class MajorantResult:
    """Components of ``{F_hat > F}``, the assembled majorant and the maximum structure."""

    source: PiecewiseCubic
    components: tuple[Interval, ...]
    majorant: PiecewiseCubic
    max_structure: MaxStructure

    @cached_property
    def level(self) -> PiecewiseCubic:
        """Derivative of the majorant."""
        return self.majorant.derivative()


def _terminal_component(
    pw: PiecewiseCubic,
    rp: RefinedPartition,
    members: list[Cell],
    lo: float,
    hi: float,
    tol: Tolerances,
    trace: TraceSink | None,
    side: Side,
) -> BridgeCandidate | None:
    """Component ending at the domain end ``hi`` when the maximum sits there."""
    f_lo, f_hi = pw(lo), pw(hi)
    whole = BridgeCandidate(lo, hi, (f_hi - f_lo) / (hi - lo))
    if verify_bridge(pw, rp, whole, tol):
        return whole

    cands = []
    for member in members:
        cands.extend(
            c
            for c in tangency_direct((hi, f_hi), member, Side.RIGHT, tol)
            if member.contains(c.alpha) and c.alpha > lo
        )
    _emit(trace, TraceEvent.ENDPOINT_CANDIDATES, side, anchor=hi, candidates=_describe(cands))
    verified = [c for c in cands if verify_bridge(pw, rp, c, tol)]
    _emit(trace, TraceEvent.VERIFY, side, accepted=_describe(verified))
    return min(verified, key=lambda c: c.alpha) if verified else None


def components_left(
    pw: PiecewiseCubic,
    working: Interval,
    cis: ConcaveIncreasingSet | None = None,
    *,
    tol: Tolerances = DEFAULT_TOLERANCES,
    trace: TraceSink | None = None,
    side: Side = Side.LEFT,
) -> list[Interval]:
    """Components inside ``working = [a, c1]`` found by the right-to-left march.

    Each round takes the rightmost remaining concave increasing member ``R``
    and first tries a chord from the left end of ``working`` tangent in ``R``,
    then chords from members ``L`` that survive :func:`prune`. An accepted
    bridge ``(alpha, beta)`` removes every member right of ``alpha`` and cuts
    the member holding ``alpha`` there; a round with no bridge drops ``R``.
    """
    lo, hi = float(working[0]), float(working[1])
    if hi - lo <= tol.tol_merge(hi):
        return []
    rp = refine(pw, (lo, hi), tol)
    if cis is None:
        cis = group_by_convex_separators(concave_increasing_set(rp), rp)
    members = list(cis)
    logger.debug(f"March on [{lo}, {hi}] over {len(members)} concave increasing cells")

    found: list[Interval] = []
    seen: list[BridgeCandidate] = []
    f_lo = pw(lo)

    if hi >= pw.domain[1] - tol.tol_merge(hi):
        terminal = _terminal_component(pw, rp, members, lo, hi, tol, trace, side)
        if terminal is not None:
            _emit(trace, TraceEvent.ACCEPT, side, bridge=[terminal.alpha, terminal.beta])
            found.append(terminal.span)
            seen.append(terminal)
            if terminal.alpha <= lo:
                _report_ordering(seen, trace, side)
                return found
            members = _cut(members, terminal.alpha, tol)

    while members:
        R = members[-1]
        cands = [
            c
            for c in tangency_direct((lo, f_lo), R, Side.LEFT, tol)
            if R.contains(c.beta) and c.beta > lo
        ]
        _emit(
            trace, TraceEvent.ENDPOINT_CANDIDATES, side, R=[R.lo, R.hi], candidates=_describe(cands)
        )
        verified = [c for c in cands if verify_bridge(pw, rp, c, tol)]
        seen.extend(verified)
        _emit(trace, TraceEvent.VERIFY, side, R=[R.lo, R.hi], accepted=_describe(verified))

        accepted = max(verified, key=lambda c: (c.beta, -c.alpha)) if verified else None
        if accepted is None:
            ctx = PruneContext(rightmost_maximizer(pw, rp, R.lo, tol), tol)
            for L in members[:-1]:
                keep = prune(L, R, ctx)
                _emit(trace, TraceEvent.PRUNE, side, L=[L.lo, L.hi], R=[R.lo, R.hi], keep=keep)
                if not keep:
                    continue
                cands = [
                    c
                    for c in candidate_bridges(L, R, tol)
                    if L.contains(c.alpha) and R.contains(c.beta)
                ]
                _emit(
                    trace,
                    TraceEvent.PAIR_CANDIDATES,
                    side,
                    L=[L.lo, L.hi],
                    R=[R.lo, R.hi],
                    candidates=_describe(cands),
                )
                verified = [c for c in cands if verify_bridge(pw, rp, c, tol)]
                seen.extend(verified)
                _emit(trace, TraceEvent.VERIFY, side, R=[R.lo, R.hi], accepted=_describe(verified))
                if verified:
                    accepted = max(verified, key=lambda c: (c.beta, -c.alpha))
                    break

        if accepted is None:
            _emit(trace, TraceEvent.DISCARD, side, R=[R.lo, R.hi])
            members.pop()
            continue

        _emit(trace, TraceEvent.ACCEPT, side, bridge=[accepted.alpha, accepted.beta])
        logger.debug(f"Accepted bridge ({accepted.alpha!r}, {accepted.beta!r})")
        found.append(accepted.span)
        if accepted.alpha <= lo:
            break
        members = _cut(members, accepted.alpha, tol)

    _report_ordering(seen, trace, side)
    return sorted(found)


def _cut(members: list[Cell], at: float, tol: Tolerances) -> list[Cell]:
    """Members left of ``at``, the one holding ``at`` truncated there."""
    kept = []
    for member in members:
        if member.lo >= at - tol.tol_merge(at):
            continue
        kept.append(member.truncated(at) if member.hi > at else member)
    return kept


def plateau_components(
    pw: PiecewiseCubic, ms: MaxStructure, tol: Tolerances = DEFAULT_TOLERANCES
) -> list[Interval]:
    """Maximal open stretches of ``(c1, c2)`` where ``F`` stays below the maximum."""
    if ms.c2 - ms.c1 <= tol.tol_merge(ms.c2):
        return []
    rp = refine(pw, ms.plateau, tol)
    threshold = ms.value - tol.tol_gap(ms.value)
    spans: list[Interval] = []
    for cell in rp.cells:
        if not pw(cell.midpoint) < threshold:
            continue
        if spans and spans[-1][1] == cell.lo and pw(cell.lo) < threshold:
            spans[-1] = (spans[-1][0], cell.hi)
        else:
            spans.append((cell.lo, cell.hi))
    return spans


def _components_with_max(
    pw: PiecewiseCubic, tol: Tolerances, trace: TraceSink | None
) -> tuple[list[Interval], MaxStructure]:
    check_continuity(pw, tol)
    ms = global_max(pw, tol)
    a, b = pw.domain

    left = components_left(pw, (a, ms.c1), tol=tol, trace=trace, side=Side.LEFT)
    middle = plateau_components(pw, ms, tol)
    mirrored = components_left(reflect(pw), (-b, -ms.c2), tol=tol, trace=trace, side=Side.RIGHT)
    right = [(-beta, -alpha) for alpha, beta in mirrored]

    logger.info(
        f"Components: {len(left)} left of the plateau, {len(middle)} inside, {len(right)} right"
    )
    return sorted(left + middle + right), ms


def components(
    pw: PiecewiseCubic,
    tol: Tolerances = DEFAULT_TOLERANCES,
    trace: TraceSink | None = None,
) -> list[Interval]:
    """All component intervals of ``{F_hat > F}`` in ascending order."""
    return _components_with_max(pw, tol, trace)[0]


def _inside_any(x: float, comps: list[Interval]) -> bool:
    return any(alpha < x < beta for alpha, beta in comps)


def assemble_majorant(
    pw: PiecewiseCubic,
    comps: list[Interval],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PiecewiseCubic:
    """``F`` with each component replaced by its chord."""
    comps = sorted((float(alpha), float(beta)) for alpha, beta in comps)
    a, b = pw.domain
    for alpha, beta in comps:
        if not a <= alpha < beta <= b:
            raise ContractViolation(f"component ({alpha}, {beta}) is not inside [{a}, {b}]")
    for (_, first_hi), (second_lo, _) in pairwise(comps):
        if second_lo < first_hi - tol.tol_merge(first_hi):
            raise ContractViolation(f"components overlap at {second_lo} < {first_hi}")

    ends = {x for comp in comps for x in comp}
    breaks = set(ends)
    for knot in pw.knots:
        if _inside_any(knot, comps):
            continue
        if any(abs(knot - e) <= tol.tol_merge(e) for e in ends):
            continue
        breaks.add(knot)
    breaks = sorted(breaks)

    pieces = []
    for x0, x1 in pairwise(breaks):
        chord = next(((al, be) for al, be in comps if al <= x0 and x1 <= be), None)
        if chord is None:
            pieces.append(pw.piece_at(0.5 * (x0 + x1)).restrict(x0, x1))
            continue
        alpha, beta = chord
        f_alpha = pw(alpha)
        slope = (pw(beta) - f_alpha) / (beta - alpha)
        pieces.append(CubicPiece(x0, x1, (0.0, 0.0, slope, f_alpha - slope * alpha)))
    return PiecewiseCubic(tuple(breaks), tuple(pieces))


def level_function(result: MajorantResult) -> PiecewiseCubic:
    """Derivative of the majorant, piecewise of degree at most two."""
    return result.level


def least_concave_majorant(
    pw: PiecewiseCubic,
    tol: Tolerances = DEFAULT_TOLERANCES,
    trace: TraceSink | None = None,
) -> MajorantResult:
    comps, ms = _components_with_max(pw, tol, trace)
    majorant = assemble_majorant(pw, comps, tol)
    return MajorantResult(source=pw, components=tuple(comps), majorant=majorant, max_structure=ms)


def integrate_level(result: MajorantResult, x: float) -> float:
    """``F(a)`` plus the integral of the level function from ``a`` to ``x``."""
    level = result.level
    a, _ = level.domain
    total = result.source(a)
    for piece in level.pieces:
        if piece.lo >= x:
            break
        upper = min(piece.hi, x)
        antiderivative = piece.polynomial().integ()
        total += float(antiderivative(upper) - antiderivative(piece.lo))
    return total


def contraction_gap(
    F: PiecewiseCubic,
    G: PiecewiseCubic,
    grid_n: int = 2001,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[float, float]:
    """``(sup |level_F - level_G|, sup |F' - G'|)`` on a shared uniform grid."""
    lo = max(F.domain[0], G.domain[0])
    hi = min(F.domain[1], G.domain[1])
    if not lo < hi:
        raise ValueError(f"domains {F.domain} and {G.domain} do not overlap")
    xs = np.linspace(lo, hi, grid_n)
    level_f = least_concave_majorant(F, tol).level(xs)
    level_g = least_concave_majorant(G, tol).level(xs)
    level_gap = float(np.max(np.abs(level_f - level_g)))
    slope_gap = float(np.max(np.abs(F.slope(xs) - G.slope(xs))))
    return level_gap, slope_gap
