"""Root structure of the spatially constant states.

A constant field s is stationary exactly when s = g(beta s + beta h)
for the constant forcing level h.  count_roots scans that scalar
equation, and compute_h_star locates the forcing threshold where the
root count drops from three to one, which is the largest forcing the
bistable regime survives.

For g = tanh the threshold has the closed form

    h*(beta) = sqrt(1 - 1/beta) - artanh(sqrt(1 - 1/beta)) / beta,

kept here as tanh_h_star purely as an independent cross-check;
compute_h_star never consults it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Nonlinearity
from .errors import NotBistableError

log = logging.getLogger(__name__)

SCAN_INTERVAL = (-1.5, 1.5)
SCAN_POINTS = 100_000
ROOT_XTOL = 1e-12
ROOT_SEPARATION = 1e-8
TANGENCY_TOL = 1e-8


@dataclass(frozen=True)
class RootReport:
    """Roots of s = g(beta s + beta h), sorted increasing."""

    beta: float
    h: float
    roots: tuple[float, ...]
    residuals: tuple[float, ...]
    tangencies: tuple[float, ...]

    @property
    def count(self) -> int:
        return len(self.roots)


def _bisect(f, lo: float, hi: float, xtol: float) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def count_roots(beta: float, h: float, g: Nonlinearity,
                interval: tuple[float, float] = SCAN_INTERVAL,
                scan_points: int = SCAN_POINTS) -> RootReport:
    """Scan for sign changes of g(beta s + beta h) - s, then bisect each.

    Exact zeros at scan nodes count as roots; near-tangent dips of |phi|
    below the tangency tolerance that do not produce a sign change are
    reported separately and never enter the count.
    """
    if not (beta > 0.0):
        raise ValueError(f"beta must be positive, got {beta}")

    def phi(s):
        return g(beta * s + beta * h) - s

    s = np.linspace(interval[0], interval[1], scan_points)
    vals = phi(s)
    sign = np.sign(vals)

    roots: list[float] = []
    # maximal runs of exact zeros, one root each
    zero = sign == 0.0
    i = 0
    while i < scan_points:
        if zero[i]:
            j = i
            while j + 1 < scan_points and zero[j + 1]:
                j += 1
            roots.append(float(0.5 * (s[i] + s[j])))
            i = j + 1
        else:
            i += 1
    # strict sign changes between adjacent nonzero nodes
    change = (sign[:-1] * sign[1:]) < 0.0
    for i in np.flatnonzero(change):
        roots.append(_bisect(phi, float(s[i]), float(s[i + 1]), ROOT_XTOL))

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if not merged or r - merged[-1] > ROOT_SEPARATION:
            merged.append(r)

    # second pass: |phi| local minima below tolerance without a sign change
    a = np.abs(vals)
    interior = np.arange(1, scan_points - 1)
    is_min = (a[interior] <= a[interior - 1]) & (a[interior] <= a[interior + 1])
    small = a[interior] < TANGENCY_TOL
    tangencies: list[float] = []
    for i in interior[is_min & small]:
        if sign[i] != 0.0 and not (change[i - 1] or change[i]):
            si = float(s[i])
            if all(abs(si - r) > ROOT_SEPARATION for r in merged):
                if not tangencies or si - tangencies[-1] > ROOT_SEPARATION:
                    tangencies.append(si)

    residuals = tuple(abs(float(phi(r))) for r in merged)
    return RootReport(beta=beta, h=h, roots=tuple(merged),
                      residuals=residuals, tangencies=tuple(tangencies))


def compute_h_star(beta: float, g: Nonlinearity, tol: float = 1e-8,
                   h_max: float = 2.0) -> float:
    """Threshold forcing: supremum of h with three transversal roots.

    Located by bisection on the root count over [0, h_max].  For beta <= 1
    the equation is never bistable; that regime returns 0 with a warning
    rather than an error so parameter sweeps can cross it.
    """
    if not (beta > 0.0):
        raise ValueError(f"beta must be positive, got {beta}")
    if beta <= 1.0:
        log.warning("beta=%g is at or below the bistability threshold; h* undefined, returning 0",
                    beta)
        return 0.0

    lo, hi = 0.0, h_max
    if count_roots(beta, lo, g).count < 3:
        raise NotBistableError(
            f"no three-root regime at h=0 for beta={beta}; family is not bistable")
    if count_roots(beta, hi, g).count >= 3:
        raise NotBistableError(
            f"still three roots at h={h_max} for beta={beta}; no transition in range")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if count_roots(beta, mid, g).count >= 3:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def tanh_h_star(beta: float) -> float:
    """Closed-form threshold for g = tanh (independent cross-check)."""
    if beta <= 1.0:
        return 0.0
    r = math.sqrt(1.0 - 1.0 / beta)
    return r - math.atanh(r) / beta
