"""Coupling specifications and dense hopping-Hamiltonian assembly.

Sites are 1-indexed in every external format (JSON documents, edge
triples, CLI arguments); numpy arrays are 0-indexed internally. All
Hamiltonians are real symmetric with zero diagonal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


def _as_float_tuple(values):
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class ChainSpec:
    """An open chain of ``n_sites`` sites with nearest-neighbor couplings.

    ``nearest[n-1]`` couples sites n and n+1; all couplings must be
    positive (complex phases are assumed gauged away).
    """

    n_sites: int
    nearest: tuple

    def __post_init__(self):
        if not isinstance(self.n_sites, int) or self.n_sites < 1:
            raise ValidationError(f"n_sites must be a positive integer, got {self.n_sites!r}")
        nearest = _as_float_tuple(self.nearest)
        object.__setattr__(self, "nearest", nearest)
        if len(nearest) != self.n_sites - 1:
            raise ValidationError(
                f"expected {self.n_sites - 1} nearest-neighbor couplings, got {len(nearest)}"
            )
        for idx, c in enumerate(nearest, start=1):
            if not math.isfinite(c) or c <= 0.0:
                raise ValidationError(f"coupling c_{idx} must be finite and > 0, got {c}")


@dataclass(frozen=True)
class PerturbationSpec:
    """Extra weighted edges (i, j, d) with |i - j| >= 2, scaled by epsilon."""

    epsilon: float
    edges: tuple

    def __post_init__(self):
        eps = float(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not math.isfinite(eps) or not 0.0 <= eps <= 1.0:
            raise ValidationError(f"epsilon must lie in [0, 1], got {eps}")
        edges = []
        seen = set()
        for edge in self.edges:
            if len(edge) != 3:
                raise ValidationError(f"edge must be a triple (i, j, d), got {edge!r}")
            i, j, d = int(edge[0]), int(edge[1]), float(edge[2])
            if i < 1 or j < 1 or i >= j:
                raise ValidationError(f"edge ({i}, {j}) must satisfy 1 <= i < j")
            if j - i < 2:
                raise ValidationError(f"edge ({i}, {j}) is nearest-neighbor; require j - i >= 2")
            if (i, j) in seen:
                raise ValidationError(f"duplicate edge ({i}, {j})")
            if not math.isfinite(d) or d <= 0.0:
                raise ValidationError(f"edge weight for ({i}, {j}) must be finite and > 0, got {d}")
            seen.add((i, j))
            edges.append((i, j, d))
        object.__setattr__(self, "edges", tuple(edges))


def nnn_perturbation(d_values, epsilon) -> PerturbationSpec:
    """Canonical next-nearest-neighbor topology: edges (l, l+2, d_l)."""
    d_values = _as_float_tuple(d_values)
    edges = tuple((l, l + 2, d) for l, d in enumerate(d_values, start=1))
    return PerturbationSpec(epsilon=epsilon, edges=edges)


def build_chain_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Dense N x N matrix with spec.nearest on the super/sub diagonal."""
    n = spec.n_sites
    h = np.zeros((n, n), dtype=np.float64)
    for idx, c in enumerate(spec.nearest):
        h[idx, idx + 1] = c
        h[idx + 1, idx] = c
    h.setflags(write=False)
    return h


def build_perturbed_hamiltonian(spec: ChainSpec, pert: PerturbationSpec) -> np.ndarray:
    """Chain Hamiltonian plus epsilon * d on each perturbation edge."""
    n = spec.n_sites
    h = np.array(build_chain_hamiltonian(spec))
    for i, j, d in pert.edges:
        if j > n:
            raise ValidationError(f"edge ({i}, {j}) is out of range for {n} sites")
        h[i - 1, j - 1] = pert.epsilon * d
        h[j - 1, i - 1] = pert.epsilon * d
    h.setflags(write=False)
    return h


def spec_to_dict(spec: ChainSpec, pert: PerturbationSpec | None = None) -> dict:
    doc = {"n_sites": spec.n_sites, "nearest": list(spec.nearest)}
    if pert is not None:
        doc["perturbation"] = {
            "epsilon": pert.epsilon,
            "edges": [[i, j, d] for i, j, d in pert.edges],
        }
    return doc


def spec_from_dict(doc: dict):
    """Parse a chain + optional perturbation document; absent means epsilon=0."""
    try:
        spec = ChainSpec(n_sites=int(doc["n_sites"]), nearest=tuple(doc["nearest"]))
    except KeyError as exc:
        raise ValidationError(f"spec document is missing key {exc}") from exc
    pert = None
    if "perturbation" in doc and doc["perturbation"] is not None:
        pdoc = doc["perturbation"]
        pert = PerturbationSpec(
            epsilon=pdoc.get("epsilon", 0.0),
            edges=tuple(tuple(e) for e in pdoc.get("edges", [])),
        )
    return spec, pert


def load_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(path, spec: ChainSpec, pert: PerturbationSpec | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec, pert), fh, indent=2)
        fh.write("\n")
