"""Hot numerical kernels: numba-jitted loops with pure-numpy fallbacks.

The backend is fixed at import time.  Numba is used when importable unless
the environment variable NLFIELD_NO_NUMBA=1 is set, in which case the
vectorized numpy implementations run instead.  Both paths implement the
same arithmetic contract; tests assert they agree to near machine
precision, and benchmarks/bench_backends.py times them side by side.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and os.environ.get("NLFIELD_NO_NUMBA", "0") != "1"


# ---------------------------------------------------------------------------
# loop bodies (compiled by numba when available, kept in pure python form
# so the numpy fallback can be checked against the exact same semantics)
# ---------------------------------------------------------------------------

def _conv_direct_loop(u, kernel, dx):
    # kernel holds samples at offsets -m..m times dx; u is zero outside
    n = u.shape[0]
    m = kernel.shape[0] // 2
    out = np.zeros(n)
    for i in range(n):
        lo = i - m
        if lo < 0:
            lo = 0
        hi = i + m + 1
        if hi > n:
            hi = n
        acc = 0.0
        for j in range(lo, hi):
            acc += kernel[m + i - j] * u[j]
        out[i] = acc * dx
    return out


def _wpow_sum_loop(u, w, p):
    # sum_i w_i |u_i|^p, with the p == 2 branch avoiding a float pow
    acc = 0.0
    if p == 2.0:
        for i in range(u.shape[0]):
            acc += w[i] * u[i] * u[i]
    else:
        for i in range(u.shape[0]):
            acc += w[i] * abs(u[i]) ** p
    return acc


def _pairwise_lp_loop(A, B, w, p):
    # weighted l^p distances between every row of A and every row of B
    ka = A.shape[0]
    kb = B.shape[0]
    n = A.shape[1]
    out = np.empty((ka, kb))
    inv = 1.0 / p
    for a in range(ka):
        for b in range(kb):
            acc = 0.0
            if p == 2.0:
                for i in range(n):
                    d = A[a, i] - B[b, i]
                    acc += w[i] * d * d
            else:
                for i in range(n):
                    acc += w[i] * abs(A[a, i] - B[b, i]) ** p
            out[a, b] = acc ** inv
    return out


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------

def conv_direct_numpy(u, kernel, dx):
    return np.convolve(u, kernel, mode="same") * dx


def wpow_sum_numpy(u, w, p):
    if p == 2.0:
        return float(np.dot(w, u * u))
    return float(np.dot(w, np.abs(u) ** p))


def pairwise_lp_numpy(A, B, w, p):
    diff = np.abs(A[:, None, :] - B[None, :, :])
    if p == 2.0:
        acc = np.einsum("abi,i->ab", diff * diff, w)
    else:
        acc = np.einsum("abi,i->ab", diff**p, w)
    return acc ** (1.0 / p)


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    conv_direct_numba = njit(cache=True)(_conv_direct_loop)
    wpow_sum_numba = njit(cache=True)(_wpow_sum_loop)
    pairwise_lp_numba = njit(cache=True)(_pairwise_lp_loop)

if NUMBA_ENABLED:
    conv_direct = conv_direct_numba
    wpow_sum = wpow_sum_numba
    pairwise_lp = pairwise_lp_numba
else:
    conv_direct = conv_direct_numpy
    wpow_sum = wpow_sum_numpy
    pairwise_lp = pairwise_lp_numpy


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
