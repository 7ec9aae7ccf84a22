"""Hot numeric kernels with interchangeable numba and pure-numpy backends.

Two kernels dominate ensemble runtime: the cyclic-Jacobi eigensolver and
the nearest-neighbor coupling recursion. Both are implemented twice with
identical operation order: once as plain numpy (vectorized per rotation)
and once as numba ``@njit`` loops. The active backend is resolved once at
import time from the ``CHAINRECON_BACKEND`` environment variable
("numba" or "numpy"); the default is numba when importable.

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import math
import os

import numpy as np

BACKEND_ENV = "CHAINRECON_BACKEND"

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

# Rotations with |theta| beyond this use the first-order angle 1/(2 theta);
# squaring theta would overflow long before the approximation error matters.
_THETA_BIG = 1e100


def _jacobi_sweeps_numpy(a, v, tiny, max_sweeps):
    """Cyclic Jacobi rotations on symmetric ``a``, accumulating ``v``.

    Mutates ``a`` toward diagonal form and ``v`` toward the eigenvector
    matrix. Off-diagonal entries with magnitude <= ``tiny`` are skipped;
    convergence is a full sweep that performs no rotation. Returns the
    number of sweeps used, or -1 if ``max_sweeps`` was exhausted.
    """
    n = a.shape[0]
    if n < 2:
        return 0
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tiny:
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > _THETA_BIG:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = 1.0 / (theta - math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
        if not rotated:
            return sweep
    return -1


def _jacobi_sweeps_loops(a, v, tiny, max_sweeps):
    """Elementwise twin of :func:`_jacobi_sweeps_numpy` for numba."""
    n = a.shape[0]
    if n < 2:
        return 0
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tiny:
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > _THETA_BIG:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = 1.0 / (theta - math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
        if not rotated:
            return sweep
    return -1


def _nn_recursion_numpy(eigenvalues, site1_overlaps, max_terms, floor):
    """Nearest-neighbor coupling recursion from site-1 spectral data.

    Returns ``(couplings, overlap_rows, breakdown)`` where ``breakdown``
    is 0 on full completion or the 1-based step at which the squared
    coupling fell to ``floor`` or below. ``overlap_rows[m]`` holds the
    estimated overlaps of site m+1; row 0 is the input.
    """
    n = eigenvalues.shape[0]
    couplings = np.zeros(max_terms)
    rows = np.zeros((max_terms + 1, n))
    rows[0] = site1_overlaps
    prev = np.zeros(n)
    cur = rows[0]
    c_prev = 0.0
    for m in range(1, max_terms + 1):
        resid = eigenvalues * cur - c_prev * prev
        sq = np.dot(resid, resid)
        if sq <= floor:
            return couplings, rows, m
        c_m = math.sqrt(sq)
        couplings[m - 1] = c_m
        rows[m] = resid / c_m
        prev = cur
        cur = rows[m]
        c_prev = c_m
    return couplings, rows, 0


def _nn_recursion_loops(eigenvalues, site1_overlaps, max_terms, floor):
    """Elementwise twin of :func:`_nn_recursion_numpy` for numba."""
    n = eigenvalues.shape[0]
    couplings = np.zeros(max_terms)
    rows = np.zeros((max_terms + 1, n))
    for k in range(n):
        rows[0, k] = site1_overlaps[k]
    prev = np.zeros(n)
    cur = rows[0]
    c_prev = 0.0
    resid = np.zeros(n)
    for m in range(1, max_terms + 1):
        for k in range(n):
            resid[k] = eigenvalues[k] * cur[k] - c_prev * prev[k]
        sq = np.dot(resid, resid)
        if sq <= floor:
            return couplings, rows, m
        c_m = math.sqrt(sq)
        couplings[m - 1] = c_m
        for k in range(n):
            rows[m, k] = resid[k] / c_m
        prev = cur
        cur = rows[m]
        c_prev = c_m
    return couplings, rows, 0


if NUMBA_AVAILABLE:
    _jacobi_sweeps_numba = njit(cache=True)(_jacobi_sweeps_loops)
    _nn_recursion_numba = njit(cache=True)(_nn_recursion_loops)


def _resolve_backend():
    requested = os.environ.get(BACKEND_ENV, "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError(f"{BACKEND_ENV}=numba requested but numba is not importable")
    if requested:
        return requested
    return "numba" if NUMBA_AVAILABLE else "numpy"


BACKEND = _resolve_backend()

if BACKEND == "numba":
    jacobi_sweeps = _jacobi_sweeps_numba
    nn_recursion = _nn_recursion_numba
else:
    jacobi_sweeps = _jacobi_sweeps_numpy
    nn_recursion = _nn_recursion_numpy


def warmup():
    """Trigger JIT compilation once, e.g. before forking worker processes."""
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    v = np.eye(2)
    jacobi_sweeps(a, v, 1e-16, 50)
    w = np.full(2, 1.0 / math.sqrt(2.0))
    nn_recursion(np.array([-1.0, 1.0]), w, 1, 0.0)
