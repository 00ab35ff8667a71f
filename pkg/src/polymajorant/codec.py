"""
JSON documents read and written by the command-line front end.

Input documents:

* piecewise cubic: ``{"knots": [x0, ..., xn], "pieces": [[a3, a2, a1, a0], ...]}``
* samples: ``{"nodes": [...], "values": [...]}`` with optional
  ``clamp_left``, ``clamp_right`` and ``g4`` keys

Parsing errors are reported as :class:`InputFormatError` naming the field.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import InputFormatError
from .majorant import MajorantResult
from .partition import (
    MaxStructure,
    RefinedPartition,
    concave_increasing_set,
    group_by_convex_separators,
)
from .poly import PiecewiseCubic
from .spline import MeshPlan, SplineProblem

logger = logging.getLogger(__name__)


def read_document(path: str | Path) -> Mapping[str, Any]:
    """Load a JSON object from ``path``."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, Mapping):
        raise InputFormatError("document", f"expected a JSON object, got {type(doc).__name__}")
    return doc


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputFormatError(field, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InputFormatError(field, f"expected a finite number, got {value!r}")
    return value


def _numbers(doc: Mapping[str, Any], field: str) -> list[float]:
    if field not in doc:
        raise InputFormatError(field, "missing")
    raw = doc[field]
    if not isinstance(raw, list):
        raise InputFormatError(field, f"expected a list, got {type(raw).__name__}")
    return [_number(v, f"{field}[{i}]") for i, v in enumerate(raw)]


def parse_piecewise(doc: Mapping[str, Any]) -> PiecewiseCubic:
    knots = _numbers(doc, "knots")
    if "pieces" not in doc:
        raise InputFormatError("pieces", "missing")
    raw_pieces = doc["pieces"]
    if not isinstance(raw_pieces, list):
        raise InputFormatError("pieces", f"expected a list, got {type(raw_pieces).__name__}")
    rows = []
    for k, row in enumerate(raw_pieces):
        if not isinstance(row, list) or len(row) != 4:
            raise InputFormatError(f"pieces[{k}]", "expected [a3, a2, a1, a0]")
        rows.append([_number(v, f"pieces[{k}][{j}]") for j, v in enumerate(row)])
    if len(rows) != len(knots) - 1:
        raise InputFormatError(
            "pieces", f"{len(knots)} knots require {len(knots) - 1} pieces, got {len(rows)}"
        )
    try:
        return PiecewiseCubic.from_coefficients(knots, rows)
    except ValueError as exc:
        raise InputFormatError("knots", str(exc)) from exc


def dump_piecewise(pw: PiecewiseCubic) -> dict[str, Any]:
    return {"knots": list(pw.knots), "pieces": pw.coefficient_rows()}


def parse_samples(
    doc: Mapping[str, Any],
    clamp_left: float | None = None,
    clamp_right: float | None = None,
    m4_bound: float | None = None,
) -> SplineProblem:
    """Spline problem from a samples document; explicit arguments override document keys."""
    nodes = _numbers(doc, "nodes")
    values = _numbers(doc, "values")
    ends = {}
    for field, override in (("clamp_left", clamp_left), ("clamp_right", clamp_right)):
        if override is not None:
            ends[field] = float(override)
        elif field in doc:
            ends[field] = _number(doc[field], field)
        else:
            raise InputFormatError(field, "missing from the document and the command line")
    if m4_bound is None:
        m4_bound = _number(doc["g4"], "g4") if "g4" in doc else 0.0
    return SplineProblem(
        nodes=tuple(nodes),
        values=tuple(values),
        d_left=ends["clamp_left"],
        d_right=ends["clamp_right"],
        m4_bound=m4_bound,
    )


def dump_samples(prob: SplineProblem) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "nodes": list(prob.nodes),
        "values": list(prob.values),
        "clamp_left": prob.d_left,
        "clamp_right": prob.d_right,
    }
    if prob.m4_bound:
        doc["g4"] = prob.m4_bound
    return doc


def components_document(result: MajorantResult) -> dict[str, Any]:
    ms = result.max_structure
    return {
        "M": ms.value,
        "C": [ms.c1, ms.c2],
        "D": [list(span) for span in ms.maximizers],
        "components": [list(comp) for comp in result.components],
    }


def partition_document(rp: RefinedPartition, ms: MaxStructure) -> dict[str, Any]:
    grouped = group_by_convex_separators(concave_increasing_set(rp), rp)
    cells = []
    for cell in rp.cells:
        group = None
        if cell.is_concave_increasing:
            group = next(
                (m.group_id for m in grouped if m.lo <= cell.lo and cell.hi <= m.hi), None
            )
        cells.append(
            {
                "lo": cell.lo,
                "hi": cell.hi,
                "piece": cell.piece_index,
                "monotonicity": cell.monotonicity.value,
                "curvature": cell.curvature.value,
                "group": group,
            }
        )
    return {
        "M": ms.value,
        "C": [ms.c1, ms.c2],
        "working": [rp.lo, rp.hi],
        "cells": cells,
    }


def level_document(result: MajorantResult) -> dict[str, Any]:
    level = result.level
    return {
        "breakpoints": list(level.knots),
        "pieces": [list(p.coeffs[1:]) for p in level.pieces],
    }


def mesh_document(plan: MeshPlan) -> dict[str, Any]:
    return {"norm_h": plan.norm_h, "count": int(plan.count)}


def sample_points(result: MajorantResult, samples: int) -> np.ndarray:
    """``samples`` uniform points over the domain plus every component endpoint."""
    if samples < 2:
        raise InputFormatError("samples", f"need at least 2 samples, got {samples}")
    a, b = result.source.domain
    ends = [x for comp in result.components for x in comp]
    return np.unique(np.concatenate([np.linspace(a, b, samples), np.asarray(ends, dtype=float)]))


def majorant_rows(result: MajorantResult, samples: int) -> tuple[tuple[float, ...], ...]:
    xs = sample_points(result, samples)
    columns = (xs, result.source(xs), result.majorant(xs), result.level(xs))
    return tuple(tuple(float(v) for v in row) for row in zip(*columns))


def level_rows(result: MajorantResult, samples: int) -> tuple[tuple[float, ...], ...]:
    xs = sample_points(result, samples)
    return tuple((float(x), float(v)) for x, v in zip(xs, result.level(xs)))
