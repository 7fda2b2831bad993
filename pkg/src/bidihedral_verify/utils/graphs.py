"""Simple undirected graphs and graphs certified by a group acting on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from bidihedral_verify.utils.actions import GroupAction
from bidihedral_verify.utils.errors import DomainError, VerificationError

Edge = Tuple[int, int]


@dataclass(frozen=True)
class SimpleGraph:
    """Graph on {0, ..., n-1}; edges are stored once as (u, v) with u < v."""

    n: int
    edges: FrozenSet[Edge]
    _neighbors: Tuple[Tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError("vertex count must be non-negative")
        canonical = set()
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(f"edge ({u}, {v}) leaves 0..{self.n - 1}")
            canonical.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canonical))
        adjacency: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in canonical:
            adjacency[u].append(v)
            adjacency[v].append(u)
        object.__setattr__(self, "_neighbors", tuple(tuple(sorted(a)) for a in adjacency))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        return cls(n, frozenset((int(u), int(v)) for u, v in edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "SimpleGraph":
        nodes = sorted(graph.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges()))

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._neighbors[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    def degree_sequence(self) -> List[int]:
        return sorted((len(a) for a in self._neighbors), reverse=True)

    def valency(self) -> Optional[int]:
        """Common degree, or None when the graph is not regular."""
        degrees = {len(a) for a in self._neighbors}
        return degrees.pop() if len(degrees) == 1 else None

    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def arcs(self) -> List[Edge]:
        return [(u, v) for u in range(self.n) for v in self._neighbors[u]]

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = 1
        return matrix

    def complement(self) -> "SimpleGraph":
        return SimpleGraph.from_edges(
            self.n, ((u, v) for u in range(self.n) for v in range(u + 1, self.n) if not self.has_edge(u, v))
        )

    def bipartite_complement(self, part: Iterable[int]) -> "SimpleGraph":
        """Swap edges and non-edges between ``part`` and the remaining vertices."""
        side = set(part)
        other = [v for v in range(self.n) if v not in side]
        if any(u in side and v in side or u not in side and v not in side for u, v in self.edges):
            raise DomainError("the given part is not one side of a bipartition")
        return SimpleGraph.from_edges(
            self.n, ((u, v) for u in sorted(side) for v in other if not self.has_edge(u, v))
        )

    def relabel(self, mapping: Sequence[int]) -> "SimpleGraph":
        """Graph with vertex v renamed mapping[v]."""
        return SimpleGraph.from_edges(self.n, ((mapping[u], mapping[v]) for u, v in self.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def preserved_by(self, images: Sequence[int]) -> bool:
        return all(self.has_edge(images[u], images[v]) for u, v in self.edges)


@dataclass
class CertifiedGraph:
    """A graph with a group action that preserves it.

    ``facts`` collects plain values the construction computed about itself
    (valency formulas, connectivity flags, orbit sizes); ``extras`` holds
    companion objects such as overgroups or regular subgroups; ``provenance``
    names the family and parameters.
    """

    graph: SimpleGraph
    action: GroupAction
    provenance: str
    facts: Dict[str, Any] = field(default_factory=dict)
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.action.domain_size != self.graph.n:
            raise DomainError(
                f"group acts on {self.action.domain_size} points, graph has {self.graph.n} vertices"
            )
        for g in self.action.group.generators:
            if not self.graph.preserved_by(g.images):
                raise VerificationError(f"{self.provenance}: generator {g} does not preserve the edges")

    @property
    def group(self):
        return self.action.group
