"""
Tests for the maximum set, refined partition and concave increasing cells.
"""
import numpy as np
import pytest

from polymajorant import (
    PiecewiseCubic,
    concave_increasing_set,
    global_max,
    group_by_convex_separators,
    refine,
    reflect,
)
from polymajorant.constants import Curvature, Monotonicity
from polymajorant.exceptions import DomainError
from polymajorant.partition import rightmost_maximizer

LEFT_INTERIOR_BREAKS = [1 / 3, 0.97687, 1.35897, 1.75204, 2.22222, 2.87011, 3.11111, 3.55556]


def grouped(pw, working):
    rp = refine(pw, working)
    return rp, group_by_convex_separators(concave_increasing_set(rp), rp)


class TestGlobalMax:
    """Tests for the maximum structure."""

    def test_reference_function(self, ten_piece):
        """Maximum 3 on [4, 5] and at 8, plateau [4, 8]."""
        ms = global_max(ten_piece)
        assert ms.value == pytest.approx(3.0, abs=1e-9)
        assert ms.c1 == pytest.approx(4.0, abs=1e-9)
        assert ms.c2 == pytest.approx(8.0, abs=1e-9)
        assert len(ms.maximizers) == 2
        np.testing.assert_allclose(ms.maximizers[0], (4.0, 5.0), atol=1e-9)
        np.testing.assert_allclose(ms.maximizers[1], (8.0, 8.0), atol=1e-9)

    def test_interior_single_maximizer(self):
        """-(x - 0.3)^2 peaks at 0.3."""
        pw = PiecewiseCubic.from_coefficients([0.0, 1.0], [(0.0, -1.0, 0.6, -0.09)])
        ms = global_max(pw)
        assert ms.value == pytest.approx(0.0, abs=1e-12)
        assert ms.plateau == pytest.approx((0.3, 0.3), abs=1e-9)

    def test_constant_function(self):
        """A constant attains its maximum everywhere."""
        pw = PiecewiseCubic.from_coefficients([0.0, 1.0, 2.0], [(0, 0, 0, 1), (0, 0, 0, 1)])
        ms = global_max(pw)
        assert ms.maximizers == ((0.0, 2.0),)
        assert ms.plateau == (0.0, 2.0)

    def test_maximum_at_right_end(self, convex_parabola):
        """An increasing function peaks at b."""
        ms = global_max(convex_parabola)
        assert ms.plateau == (1.0, 1.0)


class TestRefine:
    """Tests for splitting a working interval into classified cells."""

    def test_reference_left_breaks(self, ten_piece):
        """Critical and inflection points of the first four pieces."""
        rp = refine(ten_piece, (0.0, 4.0))
        boundaries = np.asarray(rp.boundaries)
        assert boundaries[0] == 0.0 and boundaries[-1] == 4.0
        for expected in LEFT_INTERIOR_BREAKS + [1.0, 2.0, 3.0]:
            assert np.min(np.abs(boundaries - expected)) < 1e-4, expected

    def test_cells_tile_the_interval(self, ten_piece):
        """Consecutive cells share endpoints."""
        rp = refine(ten_piece, (0.0, 10.0))
        for first, second in zip(rp.cells, rp.cells[1:]):
            assert first.hi == second.lo
        assert rp.cells[0].lo == 0.0 and rp.cells[-1].hi == 10.0

    def test_classes_match_derivative_signs(self, ten_piece):
        """Sampled F' and F'' agree with each cell's classes."""
        rp = refine(ten_piece, (0.0, 10.0))
        for cell in rp.cells:
            for t in (0.25, 0.5, 0.75):
                x = cell.lo + t * (cell.hi - cell.lo)
                if cell.monotonicity is Monotonicity.INCREASING:
                    assert cell.piece.slope(x) > 0
                elif cell.monotonicity is Monotonicity.DECREASING:
                    assert cell.piece.slope(x) < 0
                if cell.curvature is Curvature.STRICTLY_CONCAVE:
                    assert cell.piece.curvature(x) < 0
                elif cell.curvature is Curvature.STRICTLY_CONVEX:
                    assert cell.piece.curvature(x) > 0

    def test_constant_piece_is_linear(self, ten_piece):
        """The flat piece on [4, 5] is constant and linear."""
        rp = refine(ten_piece, (4.0, 5.0))
        assert len(rp.cells) == 1
        assert rp.cells[0].monotonicity is Monotonicity.CONSTANT
        assert rp.cells[0].curvature is Curvature.LINEAR

    def test_cubic_inflection(self):
        """x^3 on [-1, 1] splits at 0 into concave and convex increasing cells."""
        pw = PiecewiseCubic.from_coefficients([-1.0, 1.0], [(1.0, 0.0, 0.0, 0.0)])
        rp = refine(pw, pw.domain)
        assert rp.boundaries == pytest.approx((-1.0, 0.0, 1.0), abs=1e-12)
        first, second = rp.cells
        assert (first.monotonicity, first.curvature) == (
            Monotonicity.INCREASING,
            Curvature.STRICTLY_CONCAVE,
        )
        assert (second.monotonicity, second.curvature) == (
            Monotonicity.INCREASING,
            Curvature.STRICTLY_CONVEX,
        )

    def test_single_concave_increasing_piece(self):
        """No interior critical or inflection point leaves one cell."""
        pw = PiecewiseCubic.from_coefficients([0.0, 1.0], [(-0.1, -1.0, 4.0, 0.0)])
        rp = refine(pw, pw.domain)
        assert len(rp.cells) == 1
        assert rp.cells[0].is_concave_increasing

    def test_working_interval_outside_domain(self, ten_piece):
        """The working interval must sit inside the domain."""
        with pytest.raises(DomainError):
            refine(ten_piece, (-1.0, 4.0))

    def test_cell_lookup_is_half_open(self, ten_piece):
        """A boundary starts the cell on its right and ends the cell on its left."""
        rp = refine(ten_piece, (0.0, 4.0))
        assert rp.cell_starting_at(1.0).lo == 1.0
        assert rp.cell_ending_at(1.0).hi == 1.0
        assert rp.cell_starting_at(4.0) is None


class TestConcaveIncreasingSet:
    """Tests for extracting and grouping concave increasing cells."""

    def test_reference_left_members(self, ten_piece):
        """Three members on [0, 4] in three groups."""
        _, cis = grouped(ten_piece, (0.0, 4.0))
        np.testing.assert_allclose(
            cis.spans(), [(1 / 3, 0.97687), (2.22222, 2.87011), (3.55556, 4.0)], atol=1e-4
        )
        assert [m.group_id for m in cis] == [0, 1, 2]

    def test_reference_right_members_after_reflection(self, ten_piece):
        """Right of the plateau, seen through x -> -x."""
        _, cis = grouped(reflect(ten_piece), (-10.0, -8.0))
        np.testing.assert_allclose(cis.spans(), [(-9.22222, -9.0), (-8.5, -8.0)], atol=1e-4)
        assert len({m.group_id for m in cis}) == 2

    def test_convex_function_has_no_members(self, convex_parabola):
        """x^2 has no concave cells."""
        _, cis = grouped(convex_parabola, convex_parabola.domain)
        assert len(cis) == 0

    def test_members_split_by_a_knot_share_a_group(self, concave_increasing):
        """Two pieces of one concave stretch are separate members in one group."""
        _, cis = grouped(concave_increasing, concave_increasing.domain)
        assert cis.spans() == [(0.0, 1.0), (1.0, 2.0)]
        assert [m.group_id for m in cis] == [0, 0]

    def test_members_are_strictly_concave_and_increasing(self, ten_piece):
        """Every member carries both classes."""
        _, cis = grouped(ten_piece, (0.0, 4.0))
        assert all(m.is_concave_increasing for m in cis)

    def test_rightmost_maximizer(self, ten_piece):
        """F increases on I3, so the rightmost maximizer left of it is its left end."""
        rp, cis = grouped(ten_piece, (0.0, 4.0))
        right = cis.intervals[-1]
        assert rightmost_maximizer(ten_piece, rp, right.lo) == pytest.approx(right.lo)
