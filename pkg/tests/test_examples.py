"""
Acceptance tests on the trimodal distribution function.

The distribution function of a three-bump normal mixture on [0, 6] is
replaced by its clamped spline on the certified mesh; the majorant of the
spline must sit within the certificate of the exact majorant.
"""
import numpy as np
import pytest
from scipy.optimize import brentq

from polymajorant import certify, clamped_spline, grid_upper_hull, least_concave_majorant
from polymajorant.datasets import (
    TRIMODAL_DOMAIN,
    TRIMODAL_EPS,
    example2_problem,
    trimodal_cdf,
    trimodal_cdf_quad,
    trimodal_density,
)

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def trimodal_problem():
    """Spline problem on the 185-cell certified mesh."""
    return example2_problem()


@pytest.fixture(scope="module")
def trimodal_result(trimodal_problem):
    """Majorant of the clamped spline of the trimodal distribution function."""
    return least_concave_majorant(clamped_spline(trimodal_problem))


def tangency_from_origin():
    """beta with F(beta) = beta f(beta): the chord from the origin touches F there."""
    return brentq(lambda b: trimodal_cdf(b) - b * trimodal_density(b), 4.25, 5.0)


class TestTrimodalData:
    """Tests for the reference density and its distribution function."""

    def test_quadrature_matches_closed_form(self):
        """Adaptive quadrature agrees with the normal CDF expression."""
        xs = np.linspace(0.0, 6.0, 13)
        np.testing.assert_allclose(trimodal_cdf_quad(xs), trimodal_cdf(xs), atol=1e-10)

    def test_problem_uses_the_certified_mesh(self, trimodal_problem):
        """185 equal cells, clamped with the density at both ends."""
        assert len(trimodal_problem.nodes) == 186
        assert trimodal_problem.domain == TRIMODAL_DOMAIN
        assert trimodal_problem.d_left == pytest.approx(float(trimodal_density(0.0)))
        assert certify(trimodal_problem).deriv_bound <= TRIMODAL_EPS


class TestTrimodalMajorant:
    """Tests for the majorant of the spline approximation."""

    def test_single_component_from_the_origin(self, trimodal_result):
        """One chord from 0 tangent near the right bumps."""
        [(alpha, beta)] = trimodal_result.components
        assert alpha == pytest.approx(0.0, abs=1e-12)
        assert beta == pytest.approx(tangency_from_origin(), abs=5e-3)

    def test_maximum_at_the_right_end(self, trimodal_result):
        """The distribution function increases, so the plateau is {6}."""
        assert trimodal_result.max_structure.plateau == pytest.approx((6.0, 6.0))

    def test_within_certificate_of_the_exact_majorant(self, trimodal_problem, trimodal_result):
        """Against a dense hull of the true distribution function."""
        xs = np.linspace(*TRIMODAL_DOMAIN, 10001)
        hull = grid_upper_hull(xs, trimodal_cdf(xs))
        cert = certify(trimodal_problem)
        bound = np.asarray([cert.majorant_bound_at(x) for x in xs])
        excess = np.abs(trimodal_result.majorant(xs) - hull.hull_ys) - bound
        assert np.max(excess) <= 1e-4

    def test_level_within_slope_certificate(self, trimodal_problem, trimodal_result):
        """Level functions differ by at most the slope bound (plus the hull's grid error)."""
        xs = np.linspace(*TRIMODAL_DOMAIN, 6001)
        beta = tangency_from_origin()
        exact = np.where(xs < beta, trimodal_cdf(beta) / beta, trimodal_density(xs))
        gap = np.abs(trimodal_result.level(xs) - exact)
        assert np.max(gap) <= certify(trimodal_problem).deriv_bound + 1e-3
