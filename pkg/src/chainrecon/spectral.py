"""Deterministic eigendecomposition of real symmetric Hamiltonians.

The estimation recursions consume eigenvalues e_k and signed overlaps
<n|e_k>; both come from a cyclic-Jacobi diagonalization with a fixed
rotation order, so identical input bits always produce identical output
bits (per backend). A sign convention pins each eigenvector: the first
entry of largest magnitude is made non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, ValidationError

# Adjacent eigenvalues closer than this mark the decomposition as suspect
# for the recursions (Jacobi chain matrices have simple spectra).
DEGENERACY_GAP = 1e-9

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues (ascending) and eigenvector columns of a Hamiltonian.

    ``eigenvectors[n-1, k-1]`` is the overlap of site n with the k-th
    eigenvector. ``degenerate`` flags adjacent eigenvalues closer than
    DEGENERACY_GAP; results built on such data are suspect.
    """

    dim: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degenerate: bool = False


def eigendecompose(h, max_sweeps: int = 60) -> SpectralData:
    """Diagonalize a real symmetric matrix with cyclic Jacobi rotations.

    Raises ValidationError for non-square, non-finite or non-symmetric
    input and ConvergenceError if the sweep budget is exhausted.
    """
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValidationError("matrix entries must be finite")
    if not np.array_equal(h, h.T):
        raise ValidationError("matrix must be exactly symmetric")

    n = h.shape[0]
    a = h.copy()
    v = np.eye(n)
    scale = float(np.max(np.abs(h))) if n else 0.0
    tiny = _EPS * scale
    sweeps = kernels.jacobi_sweeps(a, v, tiny, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi rotations did not settle within {max_sweeps} sweeps")

    vals = np.diagonal(a).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = v[:, order]
    for k in range(n):
        lead = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[lead, k] < 0.0:
            vecs[:, k] = -vecs[:, k]
    degenerate = bool(n > 1 and np.min(np.diff(vals)) <= DEGENERACY_GAP)
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralData(dim=n, eigenvalues=vals, eigenvectors=vecs, degenerate=degenerate)


def site_overlaps(s: SpectralData, site: int) -> np.ndarray:
    """Signed overlaps <site|e_k> for k = 1..N (site is 1-indexed)."""
    if not 1 <= site <= s.dim:
        raise ValidationError(f"site {site} out of range 1..{s.dim}")
    return s.eigenvectors[site - 1].copy()


def moment(s: SpectralData, site: int, power: int) -> float:
    """Local spectral moment sum_k e_k^power * <site|e_k>^2."""
    if power < 0:
        raise ValidationError(f"power must be >= 0, got {power}")
    w = site_overlaps(s, site)
    return float(np.sum(s.eigenvalues**power * w * w))
