"""Reference functions used by the demo command and the acceptance tests."""

from __future__ import annotations

import logging

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm

from .poly import PiecewiseCubic
from .spline import SplineProblem, mesh_for_tolerance

logger = logging.getLogger(__name__)

# (a3, a2, a1, a0) for the piece on [k - 1, k], k = 1..10
EXAMPLE1_ROWS = (
    (-1.1, 1.1, 1.0, 1.0),
    (1.3, -5.3, 6.6, -0.6),
    (-0.9, 6.0, -12.2, 9.4),
    (-1.5, 16.0, -56.0, 67.0),
    (0.0, 0.0, 0.0, 3.0),
    (0.5, -8.75, 50.0, -90.75),
    (0.0, 1.0, -13.0, 44.25),
    (-0.5, 10.75, -76.0, 179.0),
    (1.0, -25.5, 216.0, -605.0),
    (0.6, -16.6, 153.0, -467.3),
)

TRIMODAL_DOMAIN = (0.0, 6.0)
TRIMODAL_M4_BOUND = 700.0
TRIMODAL_EPS = 1e-3

# (weight, centre, scale) of each normal bump of the density
_TRIMODAL_BUMPS = ((0.5, 3.0, 1.0), (0.3, 3.8, 0.1), (0.2, 4.2, 0.1))


def example1() -> PiecewiseCubic:
    """Ten-piece C1 cubic on ``[0, 10]`` with maximum 3 on ``[4, 5]`` and at 8."""
    return PiecewiseCubic.from_coefficients(range(11), EXAMPLE1_ROWS)


def trimodal_density(x):
    """Mixture of three normal bumps restricted to the positive axis."""
    x = np.asarray(x, dtype=float)
    return sum(w * norm.pdf(x, loc=c, scale=s) for w, c, s in _TRIMODAL_BUMPS)


def trimodal_cdf(x):
    """Integral of :func:`trimodal_density` from 0, in closed form."""
    x = np.asarray(x, dtype=float)
    return sum(
        w * (norm.cdf(x, loc=c, scale=s) - norm.cdf(0.0, loc=c, scale=s))
        for w, c, s in _TRIMODAL_BUMPS
    )


def trimodal_cdf_quad(x, epsabs: float = 1e-12):
    """Integral of :func:`trimodal_density` from 0 by adaptive quadrature."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for i, upper in enumerate(xs):
        breaks = [c for _, c, _ in _TRIMODAL_BUMPS if 0.0 < c < upper] or None
        out[i] = quad(trimodal_density, 0.0, upper, epsabs=epsabs, points=breaks, limit=200)[0]
    return out if np.ndim(x) else float(out[0])


def example2_problem(count: int | None = None, use_quadrature: bool = True) -> SplineProblem:
    """Clamped-spline problem for the trimodal distribution function on ``[0, 6]``.

    ``count`` defaults to the number of equal cells that certifies slope
    accuracy ``TRIMODAL_EPS``.
    """
    lo, hi = TRIMODAL_DOMAIN
    if count is None:
        count = mesh_for_tolerance(TRIMODAL_EPS, TRIMODAL_M4_BOUND, hi - lo).count
    nodes = np.linspace(lo, hi, count + 1)
    cdf = trimodal_cdf_quad if use_quadrature else trimodal_cdf
    logger.info(f"Sampling the trimodal distribution function at {len(nodes)} nodes")
    return SplineProblem.sample(
        cdf,
        nodes,
        d_left=float(trimodal_density(lo)),
        d_right=float(trimodal_density(hi)),
        m4_bound=TRIMODAL_M4_BOUND,
    )


def random_hermite(seed: int, max_pieces: int = 8) -> PiecewiseCubic:
    """C1 piecewise cubic with random knot spacing, values and slopes.

    Knots start at 0 with gaps in ``[0.5, 2]``; values lie in ``[-2, 2]`` and
    slopes in ``[-3, 3]``. The same seed always yields the same function.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_pieces + 1))
    knots = np.concatenate([[0.0], np.cumsum(rng.uniform(0.5, 2.0, size=n))])
    values = rng.uniform(-2.0, 2.0, size=n + 1)
    slopes = rng.uniform(-3.0, 3.0, size=n + 1)
    return PiecewiseCubic.from_hermite(knots, values, slopes)
