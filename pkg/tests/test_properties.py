"""
Property tests of the majorant on random C1 piecewise cubics and spline pairs.

Inputs come from seeded generators rather than hypothesis float strategies so
that knots, values and slopes are generic (no exact ties). Each seed is solved
once and shared by every check.
"""
from functools import lru_cache

import numpy as np
import pytest

from polymajorant import (
    SplineProblem,
    clamped_spline,
    compare,
    components,
    contraction_gap,
    least_concave_majorant,
    refine,
)
from polymajorant.constants import Curvature, TraceEvent
from polymajorant.datasets import random_hermite

pytestmark = pytest.mark.slow

SEEDS = range(1000)
SPLINE_PAIRS = range(200)
GRID_N = 2001


@lru_cache(maxsize=None)
def solved(seed):
    pw = random_hermite(seed)
    events = []
    result = least_concave_majorant(pw, trace=events.append)
    return pw, result, events


def grid(pw, n=GRID_N):
    return np.linspace(*pw.domain, n)


def outside_components(xs, comps):
    mask = np.ones_like(xs, dtype=bool)
    for alpha, beta in comps:
        mask &= ~((xs >= alpha) & (xs <= beta))
    return mask


@pytest.mark.parametrize("seed", SEEDS)
def test_majorant_dominates(seed):
    """F_hat >= F on the grid."""
    pw, result, _ = solved(seed)
    xs = grid(pw)
    f = pw(xs)
    assert np.all(result.majorant(xs) >= f - 1e-9 * (1.0 + np.abs(f)))


@pytest.mark.parametrize("seed", SEEDS)
def test_breakpoint_slopes_never_increase(seed):
    """Slopes at the ends of consecutive majorant pieces form a non-increasing sequence."""
    _, result, _ = solved(seed)
    slopes = np.array([[p.slope(p.lo), p.slope(p.hi)] for p in result.majorant.pieces]).ravel()
    assert np.all(np.diff(slopes) <= 1e-9 * (1.0 + np.max(np.abs(slopes))))


@pytest.mark.parametrize("seed", SEEDS)
def test_majorant_equals_f_off_components(seed):
    """Outside the closed components F_hat and F coincide."""
    pw, result, _ = solved(seed)
    xs = grid(pw)
    keep = outside_components(xs, result.components)
    np.testing.assert_allclose(result.majorant(xs[keep]), pw(xs[keep]), atol=1e-7)


@pytest.mark.parametrize("seed", SEEDS)
def test_components_are_disjoint_and_contain_a_non_concave_cell(seed):
    """Components are ordered, disjoint, and never purely strictly concave."""
    pw, result, _ = solved(seed)
    comps = result.components
    for (_, first_hi), (second_lo, _) in zip(comps, comps[1:]):
        assert first_hi <= second_lo
    for alpha, beta in comps:
        cells = refine(pw, (alpha, beta)).cells
        assert any(cell.curvature is not Curvature.STRICTLY_CONCAVE for cell in cells)


@pytest.mark.parametrize("seed", SEEDS)
def test_interior_endpoints_are_tangent(seed):
    """At every endpoint inside (a, b) the chord slope equals F'."""
    pw, result, _ = solved(seed)
    a, b = pw.domain
    for alpha, beta in result.components:
        slope = (pw(beta) - pw(alpha)) / (beta - alpha)
        for end in (alpha, beta):
            if a < end < b:
                assert pw.slope(end) == pytest.approx(slope, abs=1e-6 * (1.0 + abs(slope)))


@pytest.mark.parametrize("seed", SEEDS)
def test_majorant_is_idempotent(seed):
    """The majorant has no components of its own."""
    _, result, _ = solved(seed)
    assert components(result.majorant) == []


@pytest.mark.parametrize("seed", SEEDS)
def test_agrees_with_grid_hull(seed):
    """The grid hull matches the exact majorant to second order in h."""
    pw, result, _ = solved(seed)
    a, b = pw.domain
    h = (b - a) / (GRID_N - 1)
    bend = max(max(abs(p.curvature(p.lo)), abs(p.curvature(p.hi))) for p in pw.pieces)
    metrics = compare(result, grid_n=GRID_N)
    assert metrics.sup_diff <= bend * h * h + 1e-6


@pytest.mark.parametrize("seed", SEEDS)
def test_intersecting_bridges_are_nested(seed):
    """No march verifies two crossing chords."""
    _, _, events = solved(seed)
    reports = [e for e in events if e["event"] == TraceEvent.ORDERING.value]
    assert reports
    assert all(report["violations"] == [] for report in reports)


def spline_pair(seed):
    """Two clamped splines on one random mesh with nearby data."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 13))
    nodes = np.concatenate([[0.0], np.cumsum(rng.uniform(0.3, 1.5, size=n))])
    values = rng.uniform(-2.0, 2.0, size=n + 1)
    clamps = rng.uniform(-3.0, 3.0, size=2)
    shift = rng.normal(scale=0.2, size=n + 1)
    clamp_shift = rng.normal(scale=0.5, size=2)
    first = clamped_spline(SplineProblem(tuple(nodes), tuple(values), *clamps))
    second = clamped_spline(
        SplineProblem(tuple(nodes), tuple(values + shift), *(clamps + clamp_shift))
    )
    return first, second


@pytest.mark.parametrize("seed", SPLINE_PAIRS)
def test_level_functions_contract(seed):
    """Level functions of two splines are no further apart than their derivatives."""
    level_gap, slope_gap = contraction_gap(*spline_pair(seed), grid_n=GRID_N)
    assert level_gap <= slope_gap + 1e-9
