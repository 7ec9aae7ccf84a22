"""Coupling reconstruction recursions and their error metrics.

Two schemes are implemented. The nearest-neighbor recursion assumes a
pure chain and needs only site-1 data: c_1^2 = sum_k e_k^2 w_k^2, then
each residual e_k <n| - c_{n-1} <n-1| yields the next coupling as its
root-sum-square and the next overlap row after dividing by it. The
extended recursion assumes a chain plus next-nearest edges of strength
epsilon*d_l and consumes signed site-1 and site-2 data: couplings come
from c_n = sum_k e_k <n|e_k><e_k|n+1>, the residual left after removing
both chain terms has norm epsilon*d_n and, normalized, is the overlap
row two sites down.

Applying the nearest-neighbor scheme to perturbed data produces biased
couplings c_n^eps; the per-site error is Delta_n = sqrt(|c_n^eps^2 - c_n^2|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError

# The recursions divide by each new coupling (or epsilon*d); squared
# values at or below this fraction of the mean squared eigenvalue stop
# the recursion instead of amplifying noise.
BREAKDOWN_FLOOR = 1e-14

_NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class ReconstructionResult:
    """Chain couplings estimated by the nearest-neighbor recursion.

    ``estimated_overlaps[m]`` holds the overlap row of site m+1 produced
    by the recursion (row 0 is the input). ``errors_delta`` is filled
    only when true couplings were supplied. ``breakdown_at`` is the step
    whose squared coupling fell below the floor, or None.
    """

    estimated: np.ndarray
    estimated_overlaps: np.ndarray
    breakdown_at: int | None = None
    errors_delta: np.ndarray | None = None


@dataclass(frozen=True)
class ExtendedReconstructionResult:
    """Chain and next-nearest couplings from the extended recursion."""

    estimated_c: np.ndarray
    estimated_d: np.ndarray
    breakdown_at: int | None = None


def _checked_overlaps(values, n, what):
    w = np.asarray(values, dtype=np.float64)
    if w.shape != (n,):
        raise ValidationError(f"{what} must have length {n}, got shape {w.shape}")
    norm = float(np.dot(w, w))
    if abs(norm - 1.0) > _NORMALIZATION_TOL:
        raise ValidationError(f"{what} are not normalized: sum of squares = {norm!r}")
    return w


def breakdown_floor(eigenvalues) -> float:
    """Squared-coupling floor, relative to the mean squared eigenvalue."""
    e = np.asarray(eigenvalues, dtype=np.float64)
    return BREAKDOWN_FLOOR * float(np.dot(e, e)) / e.shape[0]


def reconstruct_nearest_neighbor(
    eigenvalues,
    site1_overlaps,
    max_terms: int | None = None,
    true_nearest=None,
) -> ReconstructionResult:
    """Run the chain recursion on eigenvalues and signed site-1 overlaps.

    On exact chain data this reproduces the true couplings; on perturbed
    data it returns the biased estimates c_n^eps. Stops early (with
    ``breakdown_at`` set) if a squared coupling falls below the floor.
    """
    e = np.asarray(eigenvalues, dtype=np.float64)
    if e.ndim != 1 or e.size == 0:
        raise ValidationError(f"eigenvalues must be a non-empty 1-D sequence, got shape {e.shape}")
    n = e.shape[0]
    w1 = _checked_overlaps(site1_overlaps, n, "site-1 overlaps")
    if max_terms is None:
        max_terms = n - 1
    if not 0 <= max_terms <= n - 1:
        raise ValidationError(f"max_terms must lie in [0, {n - 1}], got {max_terms}")

    couplings, rows, breakdown = kernels.nn_recursion(e, w1, max_terms, breakdown_floor(e))
    n_est = breakdown - 1 if breakdown else max_terms
    estimated = couplings[:n_est].copy()
    overlaps = rows[: n_est + 1].copy()
    errors = None
    if true_nearest is not None:
        errors = estimation_errors(true_nearest, estimated)
    return ReconstructionResult(
        estimated=estimated,
        estimated_overlaps=overlaps,
        breakdown_at=breakdown if breakdown else None,
        errors_delta=errors,
    )


def reconstruct_next_nearest(
    eigenvalues,
    site1_overlaps,
    site2_overlaps,
    epsilon: float,
) -> ExtendedReconstructionResult:
    """Recover chain couplings c_n and next-nearest weights d_n.

    Requires epsilon > 0 (the recursion divides by epsilon*d_n); with no
    perturbation use :func:`reconstruct_nearest_neighbor` instead.
    """
    e = np.asarray(eigenvalues, dtype=np.float64)
    if e.ndim != 1 or e.size < 2:
        raise ValidationError(f"need at least 2 eigenvalues, got shape {e.shape}")
    n = e.shape[0]
    epsilon = float(epsilon)
    if epsilon <= 0.0:
        raise ValidationError(
            "epsilon must be > 0 for the extended recursion; "
            "use reconstruct_nearest_neighbor for an unperturbed chain"
        )
    rows = np.zeros((n, n))
    rows[0] = _checked_overlaps(site1_overlaps, n, "site-1 overlaps")
    rows[1] = _checked_overlaps(site2_overlaps, n, "site-2 overlaps")

    floor = breakdown_floor(e)
    c = np.zeros(n - 1)
    d = np.zeros(max(n - 2, 0))
    breakdown = None
    for m in range(1, n - 1):
        c[m - 1] = float(np.dot(e * rows[m - 1], rows[m]))
        resid = e * rows[m - 1] - c[m - 1] * rows[m]
        if m >= 2:
            resid -= c[m - 2] * rows[m - 2]
        sq = float(np.dot(resid, resid))
        if sq <= floor:
            breakdown = m
            return ExtendedReconstructionResult(
                estimated_c=c[:m].copy(), estimated_d=d[: m - 1].copy(), breakdown_at=breakdown
            )
        d[m - 1] = math.sqrt(sq) / epsilon
        rows[m + 1] = resid / math.sqrt(sq)
    c[n - 2] = float(np.dot(e * rows[n - 2], rows[n - 1]))
    return ExtendedReconstructionResult(estimated_c=c, estimated_d=d, breakdown_at=None)


def estimation_errors(true_couplings, estimated) -> np.ndarray:
    """Per-site error Delta_n = sqrt(|c_n_est^2 - c_n^2|)."""
    true_c = np.asarray(true_couplings, dtype=np.float64)
    est = np.asarray(estimated, dtype=np.float64)
    if est.shape[0] > true_c.shape[0]:
        raise ValidationError(
            f"{est.shape[0]} estimates exceed {true_c.shape[0]} true couplings"
        )
    return np.sqrt(np.abs(est**2 - true_c[: est.shape[0]] ** 2))
