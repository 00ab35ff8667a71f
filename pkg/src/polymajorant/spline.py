"""
Clamped cubic spline interpolation and its error certificates.

A smooth ``G`` is replaced by the clamped spline ``S`` on a mesh of norm
``h``; with ``m4`` bounding ``|G''''|`` the slopes satisfy
``|G' - S'| <= m4 h^3 / 24`` and the same bound carries over to the level
functions, while the majorants differ by at most ``min(x - a, b - x)`` times
that bound.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import solve_banded

from .exceptions import SplineInputError
from .poly import CubicPiece, PiecewiseCubic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplineProblem:
    """Nodes, values and clamped end slopes of a spline interpolation."""

    nodes: tuple[float, ...]
    values: tuple[float, ...]
    d_left: float
    d_right: float
    m4_bound: float = 0.0

    def __post_init__(self) -> None:
        nodes = tuple(float(x) for x in self.nodes)
        values = tuple(float(v) for v in self.values)
        if len(nodes) < 3:
            raise SplineInputError(f"a clamped spline needs at least 3 nodes, got {len(nodes)}")
        if len(values) != len(nodes):
            raise SplineInputError(f"{len(nodes)} nodes but {len(values)} values")
        if not all(math.isfinite(v) for v in (*nodes, *values, self.d_left, self.d_right)):
            raise SplineInputError("nodes, values and end slopes must be finite")
        if any(x1 <= x0 for x0, x1 in zip(nodes, nodes[1:])):
            raise SplineInputError("nodes must be strictly increasing")
        if not math.isfinite(self.m4_bound) or self.m4_bound < 0:
            raise SplineInputError(f"m4_bound must be finite and >= 0, got {self.m4_bound!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "d_left", float(self.d_left))
        object.__setattr__(self, "d_right", float(self.d_right))
        object.__setattr__(self, "m4_bound", float(self.m4_bound))

    @classmethod
    def sample(
        cls,
        func,
        nodes: Sequence[float],
        d_left: float,
        d_right: float,
        m4_bound: float = 0.0,
    ) -> SplineProblem:
        """Problem built from values of ``func`` at ``nodes``."""
        xs = np.asarray(nodes, dtype=float)
        return cls(tuple(xs), tuple(np.asarray(func(xs), dtype=float)), d_left, d_right, m4_bound)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.nodes[0], self.nodes[-1])


def _moments(x: np.ndarray, y: np.ndarray, d_left: float, d_right: float) -> np.ndarray:
    h = np.diff(x)
    delta = np.diff(y) / h
    n = len(x)

    bands = np.zeros((3, n))
    bands[0, 1:] = h
    bands[1, 0] = 2.0 * h[0]
    bands[1, 1:-1] = 2.0 * (h[:-1] + h[1:])
    bands[1, -1] = 2.0 * h[-1]
    bands[2, :-1] = h

    rhs = np.empty(n)
    rhs[0] = 6.0 * (delta[0] - d_left)
    rhs[1:-1] = 6.0 * (delta[1:] - delta[:-1])
    rhs[-1] = 6.0 * (d_right - delta[-1])
    return solve_banded((1, 1), bands, rhs)


def clamped_spline(prob: SplineProblem) -> PiecewiseCubic:
    """The C2 cubic spline through ``prob``'s values with the prescribed end slopes."""
    x = np.asarray(prob.nodes)
    y = np.asarray(prob.values)
    m = _moments(x, y, prob.d_left, prob.d_right)
    h = np.diff(x)
    delta = np.diff(y) / h

    pieces = []
    for i in range(len(h)):
        b = delta[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0
        local = Polynomial([y[i], b, 0.5 * m[i], (m[i + 1] - m[i]) / (6.0 * h[i])])
        shifted = local(Polynomial([-x[i], 1.0]))
        pieces.append(CubicPiece.from_polynomial(shifted, x[i], x[i + 1]))
    logger.info(f"Clamped spline on {len(pieces)} intervals over [{x[0]}, {x[-1]}]")
    return PiecewiseCubic(tuple(float(v) for v in x), tuple(pieces))


@dataclass(frozen=True)
class MeshPlan:
    norm_h: float
    count: int


def mesh_for_tolerance(eps: float, m4_bound: float, length: float) -> MeshPlan:
    """Mesh norm with ``m4 h^3 / 24 = eps`` and the smallest count of equal cells finer than it."""
    for name, value in (("eps", eps), ("m4_bound", m4_bound), ("length", length)):
        if not math.isfinite(value) or value <= 0:
            raise SplineInputError(f"{name} must be positive and finite, got {value!r}")
    norm_h = (24.0 * eps / m4_bound) ** (1.0 / 3.0)
    count = math.floor(length / norm_h) + 1
    return MeshPlan(norm_h=norm_h, count=count)


def mesh_norm(nodes: Sequence[float]) -> float:
    """Largest gap between consecutive nodes."""
    return float(np.max(np.diff(np.asarray(nodes, dtype=float))))


@dataclass(frozen=True)
class ErrorCertificate:
    """Sup bound on slope and level-function error, and the pointwise majorant bound."""

    deriv_bound: float
    lo: float
    hi: float

    def majorant_bound_at(self, x: float) -> float:
        if not self.lo <= x <= self.hi:
            raise ValueError(f"x = {x!r} lies outside [{self.lo}, {self.hi}]")
        return min(x - self.lo, self.hi - x) * self.deriv_bound


def certify(prob: SplineProblem, spline_norm_h: float | None = None) -> ErrorCertificate:
    """Error certificate for the clamped spline of ``prob`` with mesh norm ``spline_norm_h``."""
    norm_h = mesh_norm(prob.nodes) if spline_norm_h is None else float(spline_norm_h)
    if norm_h <= 0:
        raise SplineInputError(f"mesh norm must be positive, got {norm_h!r}")
    deriv_bound = prob.m4_bound * norm_h**3 / 24.0
    lo, hi = prob.domain
    logger.info(f"Certificate: slope error <= {deriv_bound:.6g} for mesh norm {norm_h:.6g}")
    return ErrorCertificate(deriv_bound=deriv_bound, lo=lo, hi=hi)
