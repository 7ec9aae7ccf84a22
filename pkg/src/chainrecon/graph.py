"""Zero-forcing utilities on coupling graphs.

A blue vertex forces its unique white neighbor blue; iterating to a fixed
point decides which measured-site sets suffice to estimate all couplings
of a topology. Vertices are 1-indexed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import UnsupportedSizeError, ValidationError

# Minimum-set search is exhaustive over subsets; refuse beyond this size.
BRUTE_FORCE_CAP = 16


@dataclass(frozen=True)
class CouplingGraph:
    """Simple undirected graph: vertex count plus unique unordered edges."""

    n_vertices: int
    edges: frozenset

    @classmethod
    def from_edges(cls, n_vertices: int, edges) -> "CouplingGraph":
        if not isinstance(n_vertices, int) or n_vertices < 1:
            raise ValidationError(f"n_vertices must be a positive integer, got {n_vertices!r}")
        normalized = set()
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            if i == j:
                raise ValidationError(f"self-loop at vertex {i}")
            if not (1 <= i <= n_vertices and 1 <= j <= n_vertices):
                raise ValidationError(f"edge ({i}, {j}) out of range 1..{n_vertices}")
            normalized.add((min(i, j), max(i, j)))
        return cls(n_vertices=n_vertices, edges=frozenset(normalized))

    @classmethod
    def from_specs(cls, spec, pert=None) -> "CouplingGraph":
        """Topology of a chain spec plus optional perturbation edges."""
        edges = [(n, n + 1) for n in range(1, spec.n_sites)]
        if pert is not None:
            edges.extend((i, j) for i, j, _ in pert.edges)
        return cls.from_edges(spec.n_sites, edges)

    def neighbors(self) -> dict:
        adj = {u: set() for u in range(1, self.n_vertices + 1)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def _check_vertices(graph: CouplingGraph, vertices):
    vs = {int(u) for u in vertices}
    for u in vs:
        if not 1 <= u <= graph.n_vertices:
            raise ValidationError(f"vertex {u} out of range 1..{graph.n_vertices}")
    return vs


def zero_forcing_closure(graph: CouplingGraph, initial_blue) -> frozenset:
    """Fixed point of the forcing rule; independent of force order.

    Each sweep collects every force applicable under the current coloring
    and applies them as a batch, so the result is order-free by
    construction.
    """
    blue = _check_vertices(graph, initial_blue)
    adj = graph.neighbors()
    while True:
        forced = set()
        for u in blue:
            white = [w for w in adj[u] if w not in blue]
            if len(white) == 1:
                forced.add(white[0])
        if not forced:
            return frozenset(blue)
        blue |= forced


def is_zero_forcing_set(graph: CouplingGraph, candidate) -> bool:
    """True iff the closure of ``candidate`` colors every vertex."""
    return len(zero_forcing_closure(graph, candidate)) == graph.n_vertices


def minimum_zero_forcing_number(graph: CouplingGraph, max_vertices: int = BRUTE_FORCE_CAP) -> int:
    """Smallest k for which some k-subset is zero forcing (exhaustive)."""
    n = graph.n_vertices
    if n > max_vertices:
        raise UnsupportedSizeError(
            f"minimum zero-forcing search is exponential; {n} vertices exceeds cap {max_vertices}"
        )
    everything = range(1, n + 1)
    for k in range(1, n + 1):
        for subset in combinations(everything, k):
            if is_zero_forcing_set(graph, subset):
                return k
    return n
