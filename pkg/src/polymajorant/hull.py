"""
Brute-force oracle: the upper hull of densely sampled values.

Used to cross-check the exact majorant. Grid evaluation can be spread over
threads; each worker evaluates a contiguous slice and the slices are joined
in order, so the result does not depend on the thread count.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .majorant import MajorantResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridHull:
    xs: np.ndarray
    ys: np.ndarray
    hull_ys: np.ndarray
    hull_vertices: np.ndarray

    @property
    def gap(self) -> np.ndarray:
        return self.hull_ys - self.ys


def grid_upper_hull(xs, ys) -> GridHull:
    """Monotone-chain upper hull of ``(xs, ys)``, interpolated back onto ``xs``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise ValueError("xs and ys must be 1-D arrays of equal length >= 2")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("xs must be strictly increasing")

    vertices: list[int] = []
    for i in range(len(xs)):
        while len(vertices) >= 2:
            o, a = vertices[-2], vertices[-1]
            cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o])
            if cross >= 0:
                vertices.pop()
            else:
                break
        vertices.append(i)

    idx = np.asarray(vertices)
    hull_ys = np.interp(xs, xs[idx], ys[idx])
    hull_ys[idx] = ys[idx]
    return GridHull(xs=xs, ys=ys, hull_ys=np.maximum(hull_ys, ys), hull_vertices=idx)


def grid_values(func: Callable[[np.ndarray], np.ndarray], xs, threads: int = 1) -> np.ndarray:
    """``func`` over ``xs``, split into ``threads`` contiguous slices."""
    xs = np.asarray(xs, dtype=float)
    if threads <= 1 or len(xs) < 2 * threads:
        return np.asarray(func(xs), dtype=float)
    chunks = np.array_split(xs, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda chunk: np.asarray(func(chunk), dtype=float), chunks))
    return np.concatenate(parts)


def gap_runs(hull: GridHull, threshold: float) -> list[tuple[float, float]]:
    """Intervals spanned by maximal runs of grid points where the hull clears the data."""
    above = hull.gap > threshold
    runs = []
    i, n = 0, len(above)
    while i < n:
        if not above[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and above[j + 1]:
            j += 1
        runs.append((float(hull.xs[max(i - 1, 0)]), float(hull.xs[min(j + 1, n - 1)])))
        i = j + 1
    return runs


@dataclass(frozen=True)
class ComparisonMetrics:
    sup_diff: float
    component_endpoint_diffs: tuple[tuple[float, float], ...]
    exact_count: int
    oracle_count: int

    @property
    def count_mismatch(self) -> bool:
        return self.exact_count != self.oracle_count

    def as_dict(self) -> dict:
        return {
            "sup_diff": self.sup_diff,
            "component_endpoint_diffs": [
                [v if math.isfinite(v) else None for v in d] for d in self.component_endpoint_diffs
            ],
            "exact_count": self.exact_count,
            "oracle_count": self.oracle_count,
            "count_mismatch": self.count_mismatch,
        }


def compare(
    result: MajorantResult,
    grid_n: int = 10001,
    threads: int = 1,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ComparisonMetrics:
    """Distance between the exact majorant and the grid hull of the source function."""
    if grid_n < 1000:
        raise ValueError(f"grid_n must be at least 1000, got {grid_n}")
    a, b = result.source.domain
    xs = np.linspace(a, b, grid_n)
    hull = grid_upper_hull(xs, grid_values(result.source, xs, threads))
    exact = grid_values(result.majorant, xs, threads)
    sup_diff = float(np.max(np.abs(exact - hull.hull_ys)))

    runs = gap_runs(hull, tol.tol_max(float(np.max(np.abs(hull.ys)))))
    diffs = []
    for alpha, beta in result.components:
        if not runs:
            diffs.append((math.inf, math.inf))
            continue
        nearest = min(runs, key=lambda r: abs(r[0] - alpha) + abs(r[1] - beta))
        diffs.append((abs(nearest[0] - alpha), abs(nearest[1] - beta)))

    metrics = ComparisonMetrics(
        sup_diff=sup_diff,
        component_endpoint_diffs=tuple(diffs),
        exact_count=len(result.components),
        oracle_count=len(runs),
    )
    if metrics.count_mismatch:
        logger.warning(
            f"Oracle found {metrics.oracle_count} gap runs for {metrics.exact_count} components"
        )
    return metrics
