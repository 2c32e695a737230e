"""Weighted L^p machinery on a truncated uniform grid.

Fields live on [-L, L) sampled at n equally spaced nodes and are measured
in the norm

    ||u|| = (sum_i rho(x_i) |u(x_i)|^p dx)^(1/p),

a composite trapezoid quadrature of the integral over the truncated
domain (the integrand is treated as even-extended at the cut, so the
plain sum and the trapezoid rule coincide up to the boundary weight).
Mass beyond the cut is never silently dropped: tail_mass gives the exact
weight mass outside a radius and norm_tail_gap turns it into an error
bar for a norm value.

Two weight families are shipped, both normalized to unit mass over the
real line:

    cauchy     rho(x) = 1 / (pi (1 + x^2))
    gaussian   rho(x) = exp(-x^2/2) / sqrt(2 pi)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import _accel
from .errors import DomainTooSmallError, GridMismatchError, InvalidFieldError

WEIGHT_CAUCHY = "cauchy"
WEIGHT_GAUSSIAN = "gaussian"
_WEIGHT_KINDS = (WEIGHT_CAUCHY, WEIGHT_GAUSSIAN)


@dataclass(frozen=True)
class WeightFunction:
    """A positive, even, unit-mass weight density on the line."""

    kind: str

    def __post_init__(self):
        if self.kind not in _WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}; expected one of {_WEIGHT_KINDS}")

    @classmethod
    def cauchy(cls) -> "WeightFunction":
        return cls(WEIGHT_CAUCHY)

    @classmethod
    def gaussian(cls) -> "WeightFunction":
        return cls(WEIGHT_GAUSSIAN)

    def __call__(self, x):
        """Evaluate the density at x (scalar or array)."""
        x = np.asarray(x, dtype=float)
        if self.kind == WEIGHT_CAUCHY:
            return 1.0 / (math.pi * (1.0 + x * x))
        return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)

    def log_density(self, x):
        """log rho(x); finite even where the density itself underflows."""
        x = np.asarray(x, dtype=float)
        if self.kind == WEIGHT_CAUCHY:
            return -np.log(math.pi * (1.0 + x * x))
        return -0.5 * x * x - 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid x_i = -L + i dx, i = 0..n-1, with dx = 2L/n.

    The right endpoint +L is not a node, which keeps the node count equal
    to the FFT length used by the convolution routines.
    """

    half_length: float
    n_points: int

    def __post_init__(self):
        if not (self.half_length >= 4.0):
            raise ValueError(f"half_length must be >= 4, got {self.half_length}")
        if self.n_points < 16:
            raise ValueError(f"n_points must be >= 16, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -self.half_length + self.spacing * np.arange(self.n_points)
        x.setflags(write=False)
        return x

    def interior_mask(self, margin: float = 1.0) -> np.ndarray:
        """Nodes at least `margin` away from both cuts.

        Zero extension makes convolution against a unit-support kernel
        exact only on this interior set.
        """
        return np.abs(self.nodes) <= self.half_length - margin - 0.5 * self.spacing


@dataclass(frozen=True, eq=False)
class WeightedField:
    """Samples of a field on a grid, measured against a weight."""

    grid: Grid1D
    weight: WeightFunction
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_points,):
            raise InvalidFieldError(
                f"expected {self.grid.n_points} samples, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidFieldError("field samples must be finite")
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray) -> "WeightedField":
        return WeightedField(self.grid, self.weight, values)

    def same_space(self, other: "WeightedField") -> None:
        if self.grid != other.grid or self.weight != other.weight:
            raise GridMismatchError("fields live on different grids or weights")


@lru_cache(maxsize=32)
def quad_weights(weight: WeightFunction, grid: Grid1D) -> np.ndarray:
    """Quadrature weights rho(x_i) dx, cached per (weight, grid)."""
    w = weight(grid.nodes) * grid.spacing
    w.setflags(write=False)
    return w


def _check_p(p: float) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise ValueError(f"exponent p must lie in (1, inf), got {p}")
    return p


def weighted_norm(u: WeightedField, p: float = 2.0) -> float:
    """Truncated-domain weighted p-norm of the field."""
    p = _check_p(p)
    s = _accel.wpow_sum(u.values, quad_weights(u.weight, u.grid), p)
    return s ** (1.0 / p)


def truncated_mass(weight: WeightFunction, grid: Grid1D) -> float:
    """Quadrature mass of the weight over the grid (slightly below 1)."""
    return float(np.sum(quad_weights(weight, grid)))


def norm_tail_gap(u: WeightedField, p: float = 2.0) -> float:
    """Upper bound on the norm increase if the field extended past the cut.

    Assumes |u| beyond the cut is no larger than its on-grid maximum, so
    the p-th power of the full-line norm exceeds the truncated one by at
    most tail_mass(L) * max|u|^p.  Returned as a gap on the norm itself.
    """
    p = _check_p(p)
    base = weighted_norm(u, p)
    tail = tail_mass(u.weight, u.grid.half_length * (1.0 - 1e-12))
    sup = float(np.max(np.abs(u.values))) if u.values.size else 0.0
    upper = (base**p + tail * sup**p) ** (1.0 / p)
    return upper - base


def tail_mass(weight: WeightFunction, radius: float, grid: Grid1D | None = None) -> float:
    """Weight mass outside [-radius, radius], in closed form.

    When a grid is supplied the radius must fall inside the truncated
    domain, otherwise exterior quadrature on that grid would be vacuous.
    """
    if not (radius > 0.0):
        raise ValueError(f"radius must be positive, got {radius}")
    if grid is not None and radius >= grid.half_length:
        raise DomainTooSmallError(
            f"radius {radius} does not fit inside the domain half-length {grid.half_length}"
        )
    if weight.kind == WEIGHT_CAUCHY:
        return (2.0 / math.pi) * math.atan(1.0 / radius)
    return math.erfc(radius / math.sqrt(2.0))


def radius_for_tail(weight: WeightFunction, mass_bound: float) -> float:
    """Smallest radius whose exterior weight mass is at most mass_bound."""
    if not (0.0 < mass_bound < 1.0):
        raise ValueError(f"mass bound must lie in (0, 1), got {mass_bound}")
    lo, hi = 1e-12, 1.0
    while tail_mass(weight, hi) > mass_bound:
        hi *= 2.0
        if hi > 1e12:
            raise ValueError("tail bound unreachable")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tail_mass(weight, mid) > mass_bound:
            lo = mid
        else:
            hi = mid
    return hi


def _estimate_K_from_samples(log_rho: np.ndarray, window: int) -> float:
    """exp of max over nodes y of (max log rho near y) - log rho(y)."""
    if window < 1:
        raise ValueError("window must cover at least one node")
    pad = np.full(window, -np.inf)
    padded = np.concatenate([pad, log_rho, pad])
    view = np.lib.stride_tricks.sliding_window_view(padded, 2 * window + 1)
    return float(np.exp(np.max(view.max(axis=1) - log_rho)))


def estimate_K(weight: WeightFunction, grid: Grid1D) -> float:
    """Grid estimate of sup_y max_{|x-y|<=1} rho(x)/rho(y).

    The window holds every node within distance 1 of the center; with a
    spacing that divides 1 exactly the window endpoints land on the
    continuum extremum and the estimate is sharp to O(dx^2).  The ratio
    is formed in log space, so weights whose edge densities underflow
    (the gaussian on a wide grid) still give a finite answer.
    """
    window = int(math.floor(1.0 / grid.spacing + 1e-9))
    return _estimate_K_from_samples(weight.log_density(grid.nodes), window)


def rho_inf_unit_ball(weight: WeightFunction, n_samples: int = 20001) -> float:
    """min of the weight over [-1, 1], sampled with both endpoints included."""
    y = np.linspace(-1.0, 1.0, n_samples)
    return float(np.min(weight(y)))


def holder_constant(p: float, q: float, weight: WeightFunction, grid: Grid1D) -> float:
    """Constant C with ||u||_p <= C ||u||_q for p < q (discrete Hoelder)."""
    p, q = _check_p(p), _check_p(q)
    if p >= q:
        raise ValueError(f"need p < q, got p={p}, q={q}")
    mass = truncated_mass(weight, grid)
    return mass ** (1.0 / p - 1.0 / q)


def finite_difference(u: WeightedField) -> WeightedField:
    """Centered first derivative, one-sided at the two boundary nodes."""
    d = np.gradient(u.values, u.grid.spacing, edge_order=1)
    return u.with_values(d)


def w1p_seminorm(u: WeightedField, p: float = 2.0, radius: float | None = None) -> float:
    """Weighted norm of the finite-difference derivative.

    With a radius, only nodes inside [-radius, radius] contribute, which
    is the seminorm used by the compactness diagnostics.  Non-smooth
    fields give values that grow like dx^(1/p - 1); callers should treat
    a seminorm that explodes under refinement as a non-smoothness flag.
    """
    p = _check_p(p)
    d = np.gradient(u.values, u.grid.spacing, edge_order=1)
    w = quad_weights(u.weight, u.grid)
    if radius is not None:
        if radius >= u.grid.half_length:
            raise DomainTooSmallError(
                f"radius {radius} does not fit inside the domain half-length {u.grid.half_length}"
            )
        mask = np.abs(u.grid.nodes) <= radius
        d = d[mask]
        w = w[mask]
    return _accel.wpow_sum(np.ascontiguousarray(d), np.ascontiguousarray(w), p) ** (1.0 / p)
