"""
Polynomial primitives and the piecewise cubic container.

Everything here works in global coordinates: a piece on ``[lo, hi]`` stores
``(a3, a2, a1, a0)`` meaning ``a3 x^3 + a2 x^2 + a1 x + a0`` for the actual
abscissa ``x``, never a re-centred variable.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import pairwise
from typing import Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .config import DEFAULT_TOLERANCES, Tolerances
from .exceptions import ContinuityError, DomainError

logger = logging.getLogger(__name__)

Coeffs4 = tuple[float, float, float, float]

# Leading coefficients whose weighted contribution falls below this share of the
# polynomial's scale are treated as zero by root isolation.
_NEGLIGIBLE_LEADING = 1e-15
# Values within this share of the polynomial's scale are evaluation noise and count as zero.
_ROUNDOFF = 64.0 * np.finfo(float).eps


def _finite_floats(values: Iterable[float], name: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"{name} must be finite, got {out!r}")
    return out


@dataclass(frozen=True, slots=True)
class CubicPiece:
    """One cubic polynomial on the closed interval ``[lo, hi]``."""

    lo: float
    hi: float
    coeffs: Coeffs4

    def __post_init__(self) -> None:
        coeffs = _finite_floats(self.coeffs, "coeffs")
        if len(coeffs) != 4:
            raise ValueError(f"a cubic piece needs 4 coefficients, got {len(coeffs)}")
        lo, hi = _finite_floats((self.lo, self.hi), "interval")
        if lo > hi:
            raise ValueError(f"interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __call__(self, x):
        a3, a2, a1, a0 = self.coeffs
        return ((a3 * x + a2) * x + a1) * x + a0

    def slope(self, x):
        """First derivative at ``x``."""
        a3, a2, a1, _ = self.coeffs
        return (3.0 * a3 * x + 2.0 * a2) * x + a1

    def curvature(self, x):
        """Second derivative at ``x``."""
        a3, a2, _, _ = self.coeffs
        return 6.0 * a3 * x + 2.0 * a2

    def derivative(self) -> CubicPiece:
        a3, a2, a1, _ = self.coeffs
        return CubicPiece(self.lo, self.hi, (0.0, 3.0 * a3, 2.0 * a2, a1))

    def restrict(self, lo: float, hi: float) -> CubicPiece:
        """Same polynomial on a sub-interval."""
        return CubicPiece(lo, hi, self.coeffs)

    def reflected(self) -> CubicPiece:
        """The piece ``x -> P(-x)`` on ``[-hi, -lo]``."""
        a3, a2, a1, a0 = self.coeffs
        return CubicPiece(-self.hi, -self.lo, (-a3, a2, -a1, a0))

    def polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs[::-1])

    @classmethod
    def from_polynomial(cls, poly: Polynomial, lo: float, hi: float) -> CubicPiece:
        coef = np.zeros(4)
        raw = np.asarray(poly.coef, dtype=float)
        if len(raw) > 4 and np.any(raw[4:]):
            raise ValueError(f"polynomial of degree {len(raw) - 1} is not a cubic")
        coef[: min(len(raw), 4)] = raw[:4]
        return cls(lo, hi, tuple(coef[::-1]))


@dataclass(frozen=True, slots=True)
class PolyCoeffs6:
    """Polynomial of degree at most six, highest power first.

    The stored leading coefficient may be zero; root isolation trims it.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = _finite_floats(self.coeffs, "coeffs")
        if not 1 <= len(coeffs) <= 7:
            raise ValueError(f"expected 1 to 7 coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polyval(self.coeffs, x)

    def polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs[::-1])

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> PolyCoeffs6:
        coef = np.trim_zeros(np.asarray(poly.coef, dtype=float), "b")
        if len(coef) == 0:
            coef = np.zeros(1)
        return cls(tuple(coef[::-1]))


PolyLike = Union[PolyCoeffs6, CubicPiece, Polynomial, Sequence[float]]


def _as_polynomial(p: PolyLike) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, (PolyCoeffs6, CubicPiece)):
        return p.polynomial()
    return Polynomial(tuple(float(c) for c in p)[::-1])


def poly_scale(p: PolyLike, interval: tuple[float, float]) -> float:
    """Magnitude used to judge whether a polynomial value counts as zero on ``interval``."""
    poly = _as_polynomial(p)
    coef = np.trim_zeros(np.asarray(poly.coef, dtype=float), "b")
    if len(coef) == 0:
        return 0.0
    radius = max(1.0, abs(interval[0]), abs(interval[1]))
    return float(np.max(np.abs(coef))) * radius ** (len(coef) - 1)


def _trim_negligible(poly: Polynomial, lo: float, hi: float) -> Polynomial:
    coef = np.asarray(poly.coef, dtype=float)
    radius = max(1.0, abs(lo), abs(hi))
    weights = np.abs(coef) * radius ** np.arange(len(coef))
    total = weights.max() if len(weights) else 0.0
    if total == 0.0:
        return Polynomial([0.0])
    keep = len(coef)
    while keep > 1 and weights[keep - 1] <= _NEGLIGIBLE_LEADING * total:
        keep -= 1
    return Polynomial(coef[:keep])


def _merge_sorted(roots: Iterable[float], tol: Tolerances) -> list[float]:
    merged: list[float] = []
    for r in sorted(roots):
        if merged and r - merged[-1] <= max(tol.tol_root(r), tol.tol_merge(r)):
            continue
        merged.append(float(r))
    return merged


def _isolate(poly: Polynomial, lo: float, hi: float, tol: Tolerances) -> list[float]:
    poly = _trim_negligible(poly, lo, hi)
    if poly.degree() < 1:
        return []

    critical = _isolate(poly.deriv(), lo, hi, tol) if poly.degree() >= 2 else []
    points = [lo, *(c for c in critical if lo < c < hi), hi]
    scale = poly_scale(poly, (lo, hi))
    raw = poly(np.asarray(points))
    values = np.where(np.abs(raw) <= _ROUNDOFF * scale, 0.0, raw)

    # p is monotone between consecutive points, so each strict sign change
    # brackets exactly one root.
    roots = [x for x, v in zip(points, values) if v == 0.0]
    for (x0, v0), (x1, v1) in pairwise(zip(points, values)):
        if v0 * v1 < 0.0:
            xtol = tol.tol_root(max(abs(x0), abs(x1)))
            roots.append(brentq(poly, x0, x1, xtol=xtol))

    # small values with the same sign as both neighbours are touching roots
    threshold = tol.scale * tol.root * scale
    for i, (x, v) in enumerate(zip(points, values)):
        if v == 0.0 or abs(v) > threshold:
            continue
        if np.all(values[max(i - 1, 0) : i + 2] * v > 0.0):
            roots.append(x)
    return _merge_sorted(roots, tol)


def real_roots_in(
    p: PolyLike,
    interval: tuple[float, float],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[float]:
    """Sorted real roots of ``p`` in the closed ``interval``.

    Sign-change roots are bracketed between consecutive critical points
    (found recursively on the derivative) and polished with ``brentq``.
    Critical points and endpoints where ``|p|`` falls below
    ``tol.root * poly_scale(p, interval)`` without a sign change on either
    side are reported as roots too, which catches even-multiplicity roots.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    return _isolate(_as_polynomial(p), lo, hi, tol)


def derivative(p: CubicPiece) -> CubicPiece:
    return p.derivative()


def _hermite_piece(x0: float, x1: float, y0: float, y1: float, d0: float, d1: float) -> CubicPiece:
    h = x1 - x0
    delta = (y1 - y0) / h
    c2 = (3.0 * delta - 2.0 * d0 - d1) / h
    c3 = (d0 + d1 - 2.0 * delta) / (h * h)
    local = Polynomial([y0, d0, c2, c3])
    return CubicPiece.from_polynomial(local(Polynomial([-x0, 1.0])), x0, x1)


@dataclass(frozen=True)
class PiecewiseCubic:
    """Ordered knots with one cubic piece per knot interval.

    The constructor checks structure only (increasing knots, matching piece
    intervals). Value and slope continuity are checked by
    :func:`check_continuity`, which every algorithm entry point calls.
    """

    knots: tuple[float, ...]
    pieces: tuple[CubicPiece, ...]
    _knot_array: np.ndarray = field(init=False, repr=False, compare=False)
    _coeff_array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        knots = _finite_floats(self.knots, "knots")
        pieces = tuple(self.pieces)
        if len(knots) < 2:
            raise ValueError("a piecewise cubic needs at least two knots")
        if len(pieces) != len(knots) - 1:
            raise ValueError(
                f"{len(knots)} knots require {len(knots) - 1} pieces, got {len(pieces)}"
            )
        for k, (k0, k1) in enumerate(pairwise(knots)):
            if not k1 > k0:
                raise ValueError(f"knots must be strictly increasing (knot {k + 1} = {k1})")
        for k, piece in enumerate(pieces):
            if piece.lo != knots[k] or piece.hi != knots[k + 1]:
                raise ValueError(
                    f"piece {k} spans {piece.interval}, expected {(knots[k], knots[k + 1])}"
                )
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_knot_array", np.asarray(knots))
        object.__setattr__(self, "_coeff_array", np.asarray([p.coeffs for p in pieces]))

    @classmethod
    def from_coefficients(
        cls, knots: Sequence[float], rows: Sequence[Sequence[float]]
    ) -> PiecewiseCubic:
        knots = tuple(float(k) for k in knots)
        if len(rows) != len(knots) - 1:
            raise ValueError(f"{len(knots)} knots require {len(knots) - 1} pieces, got {len(rows)}")
        pieces = tuple(
            CubicPiece(knots[k], knots[k + 1], tuple(row)) for k, row in enumerate(rows)
        )
        return cls(knots, pieces)

    @classmethod
    def from_hermite(
        cls,
        knots: Sequence[float],
        values: Sequence[float],
        slopes: Sequence[float],
    ) -> PiecewiseCubic:
        """C1 piecewise cubic through ``(knot, value)`` with the given slopes."""
        if not len(knots) == len(values) == len(slopes):
            raise ValueError("knots, values and slopes must have equal length")
        pieces = tuple(
            _hermite_piece(
                knots[k], knots[k + 1], values[k], values[k + 1], slopes[k], slopes[k + 1]
            )
            for k in range(len(knots) - 1)
        )
        return cls(tuple(float(k) for k in knots), pieces)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.knots[0], self.knots[-1])

    def _locate(self, xs: np.ndarray) -> np.ndarray:
        a, b = self.domain
        if np.any(xs < a) or np.any(xs > b) or np.any(np.isnan(xs)):
            bad = xs[(xs < a) | (xs > b) | np.isnan(xs)].flat[0]
            raise DomainError(f"x = {bad!r} lies outside the domain [{a}, {b}]")
        # a knot resolves to the piece on its left, except the first knot
        idx = np.searchsorted(self._knot_array, xs, side="left") - 1
        return np.clip(idx, 0, len(self.pieces) - 1)

    def piece_index(self, x: float) -> int:
        return int(self._locate(np.asarray(float(x))))

    def piece_at(self, x: float) -> CubicPiece:
        return self.pieces[self.piece_index(x)]

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        c = self._coeff_array[self._locate(xs)]
        out = ((c[..., 0] * xs + c[..., 1]) * xs + c[..., 2]) * xs + c[..., 3]
        return float(out) if out.ndim == 0 else out

    @cached_property
    def _derivative(self) -> PiecewiseCubic:
        return PiecewiseCubic(self.knots, tuple(p.derivative() for p in self.pieces))

    def derivative(self) -> PiecewiseCubic:
        """Piecewise derivative; pieces keep the cubic shape with a3 = 0."""
        return self._derivative

    def slope(self, x):
        return self._derivative(x)

    def coefficient_rows(self) -> list[list[float]]:
        return [list(p.coeffs) for p in self.pieces]


def evaluate(obj: CubicPiece | PiecewiseCubic, x: float) -> float:
    """Value at ``x``, rejecting points outside the piece or domain."""
    if isinstance(obj, CubicPiece):
        if not obj.lo <= x <= obj.hi:
            raise DomainError(f"x = {x!r} lies outside [{obj.lo}, {obj.hi}]")
        return float(obj(float(x)))
    return obj(float(x))


def reflect(pw: PiecewiseCubic) -> PiecewiseCubic:
    """``G`` with ``G(-x) = F(x)``: knots negated and reversed, odd powers negated."""
    knots = tuple(-k for k in reversed(pw.knots))
    pieces = tuple(p.reflected() for p in reversed(pw.pieces))
    return PiecewiseCubic(knots, pieces)


def check_continuity(pw: PiecewiseCubic, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
    """Raise :class:`ContinuityError` at the first knot with a value or slope jump."""
    for k in range(1, len(pw.knots) - 1):
        left, right = pw.pieces[k - 1], pw.pieces[k]
        x = pw.knots[k]
        v_left, v_right = left(x), right(x)
        jump = abs(v_left - v_right)
        if jump > tol.tol_cont(max(abs(v_left), abs(v_right))):
            raise ContinuityError(k, x, "value", jump)
        d_left, d_right = left.slope(x), right.slope(x)
        jump = abs(d_left - d_right)
        if jump > tol.tol_cont(max(abs(d_left), abs(d_right))):
            raise ContinuityError(k, x, "derivative", jump)
