"""Pytest fixtures for polymajorant tests.

Small hand-built piecewise cubics with known majorants and the ten-piece
reference function.
"""
import pytest

from polymajorant import PiecewiseCubic
from polymajorant.datasets import example1


@pytest.fixture
def ten_piece():
    """Ten cubic pieces on [0, 10]; maximum 3 on [4, 5] and at 8."""
    return example1()


@pytest.fixture
def concave_increasing():
    """-x^2 + 4x on [0, 2], split at a knot so two pieces share one polynomial."""
    return PiecewiseCubic.from_coefficients([0.0, 1.0, 2.0], [(0, -1, 4, 0), (0, -1, 4, 0)])


@pytest.fixture
def convex_parabola():
    """x^2 on [0, 1]."""
    return PiecewiseCubic.from_coefficients([0.0, 1.0], [(0, 1, 0, 0)])


@pytest.fixture
def convex_then_concave():
    """x^2 on [0, 1] joined C1 to -x^2 + 4x - 2 on [1, 3]; single component (0, sqrt 2)."""
    return PiecewiseCubic.from_coefficients([0.0, 1.0, 3.0], [(0, 1, 0, 0), (0, -1, 4, -2)])


@pytest.fixture
def twin_peaks():
    """Equal maxima 1 at x = 1 and x = 3 separated by a valley; plateau component (1, 3)."""
    return PiecewiseCubic.from_hermite(
        [0.0, 1.0, 2.0, 3.0, 4.0],
        [0.5, 1.0, 0.2, 1.0, 0.5],
        [1.0, 0.0, 0.0, 0.0, -1.0],
    )
