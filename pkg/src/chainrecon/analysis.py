"""Ensemble statistics: per-site error profiles, the heuristic error
bound, critical lengths, and topology comparisons.

Instances are fully determined by (master_seed, instance, epsilon) keys,
run independently (optionally in parallel), and reduced in instance
order, so aggregates do not depend on the worker count. Instances whose
recursion broke down before a site are excluded from that site's
statistics; instances whose eigensolver failed to converge are skipped
entirely. Both exclusions are counted, never silent.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import kernels
from .ensemble import EnsembleConfig, TopologySpec, sample_instance
from .errors import ConvergenceError, ValidationError
from .estimation import reconstruct_nearest_neighbor
from .model import build_perturbed_hamiltonian
from .spectral import eigendecompose, site_overlaps

DEFAULT_EXPONENT = 7.0 / 6.0
DEFAULT_PRECISION = 0.122


@dataclass(frozen=True)
class AnsatzParams:
    """Parameters of the per-site error bound n^p * epsilon * max_d."""

    p: float
    max_d: float
    epsilon: float

    def __post_init__(self):
        if self.p <= 0.0:
            raise ValidationError(f"exponent p must be > 0, got {self.p}")
        if self.max_d <= 0.0:
            raise ValidationError(f"max_d must be > 0, got {self.max_d}")
        if self.epsilon < 0.0:
            raise ValidationError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class ErrorProfile:
    """Mean and spread of Delta_n at one site over an ensemble."""

    site: int
    mean_delta: float
    std_delta: float
    bound: float
    instance_count: int
    n_excluded: int


@dataclass(frozen=True)
class CriticalLengthResult:
    """Mean and spread of the estimable chain length at one epsilon."""

    epsilon: float
    n_sites: int
    threshold: float
    mean_lc: float
    std_lc: float
    instance_count: int
    n_excluded: int


def ansatz_bound(n: int, params: AnsatzParams) -> float:
    """Heuristic per-site error bound n^p * epsilon * max_d."""
    if n < 1:
        raise ValidationError(f"site index must be >= 1, got {n}")
    return float(n) ** params.p * params.epsilon * params.max_d


def critical_length(deltas, threshold: float) -> int:
    """One plus the number of leading couplings with Delta_n <= threshold.

    A missing or non-finite entry (recursion breakdown) counts as a
    failure. A full pass over all N-1 couplings therefore yields N.
    """
    if threshold <= 0.0:
        raise ValidationError(f"threshold must be > 0, got {threshold}")
    passing = 0
    for delta in deltas:
        if not delta <= threshold:
            break
        passing += 1
    return 1 + passing


def instance_deltas(config: EnsembleConfig, instance_index: int, epsilon: float, epsilon_index: int):
    """Delta_n for one sampled instance, nan-padded past any breakdown.

    Returns None if the eigensolver did not converge (a skipped
    instance).
    """
    chain, pert = sample_instance(config, instance_index, epsilon, epsilon_index)
    h = build_perturbed_hamiltonian(chain, pert)
    try:
        s = eigendecompose(h)
    except ConvergenceError:
        return None
    result = reconstruct_nearest_neighbor(
        s.eigenvalues, site_overlaps(s, 1), true_nearest=chain.nearest
    )
    deltas = np.full(config.n_sites - 1, np.nan)
    deltas[: result.errors_delta.shape[0]] = result.errors_delta
    return deltas


def _delta_task(instance_index, config, epsilon, epsilon_index):
    return instance_deltas(config, instance_index, epsilon, epsilon_index)


def _run_instances(config, epsilon, epsilon_index, workers):
    task = partial(_delta_task, config=config, epsilon=epsilon, epsilon_index=epsilon_index)
    indices = range(config.instances)
    if workers <= 1:
        return [task(i) for i in indices]
    kernels.warmup()
    chunk = max(1, config.instances // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, indices, chunksize=chunk))


def error_profile(
    config: EnsembleConfig,
    epsilon: float,
    epsilon_index: int = 0,
    ansatz: AnsatzParams | None = None,
    workers: int = 1,
) -> list:
    """Per-site mean/std of Delta_n over the ensemble, with bound attached."""
    if ansatz is None:
        ansatz = AnsatzParams(p=DEFAULT_EXPONENT, max_d=config.coupling_high, epsilon=epsilon)
    rows = _run_instances(config, epsilon, epsilon_index, workers)
    skipped = sum(1 for r in rows if r is None)
    stacked = np.full((config.instances, config.n_sites - 1), np.nan)
    kept = [r for r in rows if r is not None]
    if kept:
        stacked[: len(kept)] = np.stack(kept)
    profiles = []
    for n in range(1, config.n_sites):
        column = stacked[: len(kept), n - 1]
        valid = column[np.isfinite(column)]
        count = int(valid.size)
        mean = float(np.mean(valid)) if count else math.nan
        std = float(np.std(valid)) if count else math.nan
        profiles.append(
            ErrorProfile(
                site=n,
                mean_delta=mean,
                std_delta=std,
                bound=ansatz_bound(n, ansatz),
                instance_count=count,
                n_excluded=config.instances - count,
            )
        )
    return profiles


def _lc_task(instance_index, config, epsilon, epsilon_index, threshold):
    deltas = instance_deltas(config, instance_index, epsilon, epsilon_index)
    if deltas is None:
        return None
    return critical_length(deltas, threshold)


def critical_length_sweep(
    config: EnsembleConfig,
    threshold: float = DEFAULT_PRECISION,
    workers: int = 1,
) -> list:
    """Mean/std of the critical length per epsilon in the config grid."""
    if threshold <= 0.0:
        raise ValidationError(f"threshold must be > 0, got {threshold}")
    results = []
    for eps_index, epsilon in enumerate(config.epsilon_grid):
        task = partial(
            _lc_task,
            config=config,
            epsilon=epsilon,
            epsilon_index=eps_index,
            threshold=threshold,
        )
        indices = range(config.instances)
        if workers <= 1:
            values = [task(i) for i in indices]
        else:
            kernels.warmup()
            chunk = max(1, config.instances // (workers * 4))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                values = list(pool.map(task, indices, chunksize=chunk))
        kept = np.array([v for v in values if v is not None], dtype=np.float64)
        count = int(kept.size)
        results.append(
            CriticalLengthResult(
                epsilon=epsilon,
                n_sites=config.n_sites,
                threshold=threshold,
                mean_lc=float(np.mean(kept)) if count else math.nan,
                std_lc=float(np.std(kept)) if count else math.nan,
                instance_count=count,
                n_excluded=config.instances - count,
            )
        )
    return results


def topology_compare(
    variants,
    config: EnsembleConfig,
    epsilon: float,
    epsilon_index: int = 0,
    workers: int = 1,
) -> list:
    """Error profiles per (label, topology) variant with paired instances.

    Every variant reuses the same instance keys, so coupling draws match
    across variants; only the perturbation layout differs.
    """
    out = []
    for label, topology in variants:
        if not isinstance(topology, TopologySpec):
            topology = TopologySpec.parse(str(topology))
        profiles = error_profile(
            config.with_topology(topology), epsilon, epsilon_index=epsilon_index, workers=workers
        )
        out.append((label, profiles))
    return out
