"""Graph predicates, isomorphism and symmetry analysis at desk scale.

Isomorphism and automorphism searches individualize one vertex at a time and
refine to an equitable colouring between choices; every mapping returned is
checked edge by edge.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import prod
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from bidihedral_verify.utils.actions import BlockSystem, GroupAction, orbit_of_pairs
from bidihedral_verify.utils.config import enforce_limit, get_limit
from bidihedral_verify.utils.errors import (
    PreconditionError,
    VerificationError,
)
from bidihedral_verify.utils.graphs import SimpleGraph
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.perm_group import (
    PermutationGroup,
    conjugacy_class_reps,
    subgroup_conjugation_orbit,
    trivial_group,
)
from bidihedral_verify.utils.permutation import Permutation

NOT_A_COVER = "not-a-cover"


def is_connected(graph: SimpleGraph) -> bool:
    if graph.n <= 1:
        return True
    return nx.is_connected(graph.to_networkx())


def is_bipartite(graph: SimpleGraph) -> Optional[Tuple[List[int], List[int]]]:
    """The bipartition with vertex 0's side first, or None."""
    nx_graph = graph.to_networkx()
    if not nx.is_bipartite(nx_graph):
        return None
    colour = nx.bipartite.color(nx_graph)
    if graph.n == 0:
        return [], []
    side = colour[0]
    first = [v for v in range(graph.n) if colour[v] == side]
    second = [v for v in range(graph.n) if colour[v] != side]
    return first, second


def graph_fingerprint(graph: SimpleGraph) -> Tuple:
    """Isomorphism invariant: order, size, degrees and triangle counts per vertex."""
    matrix = graph.adjacency_matrix()
    triangles = np.diagonal(matrix @ matrix @ matrix) // 2 if graph.n else np.zeros(0, dtype=np.int64)
    per_vertex = sorted(zip((graph.degree(v) for v in range(graph.n)), triangles.tolist()))
    return graph.n, graph.edge_count(), tuple(per_vertex)


def _check_size(graph: SimpleGraph) -> None:
    enforce_limit("analysis_vertices", graph.n, "vertex count")


def _refine_pair(
    A1: np.ndarray, A2: np.ndarray, c1: np.ndarray, c2: np.ndarray
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Jointly refine two colourings to equitable ones; None once their cells disagree."""
    n = len(c1)
    cells = -1
    while True:
        k = int(max(c1.max(), c2.max())) + 1
        basis = np.eye(k, dtype=np.int64)
        rows1 = np.hstack([c1[:, None], A1 @ basis[c1]])
        rows2 = np.hstack([c2[:, None], A2 @ basis[c2]])
        _, inverse = np.unique(np.vstack([rows1, rows2]), axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        c1, c2 = inverse[:n], inverse[n:]
        width = int(inverse.max()) + 1
        if not np.array_equal(np.bincount(c1, minlength=width), np.bincount(c2, minlength=width)):
            return None
        count = len(np.unique(c1))
        if count == cells:
            return c1, c2
        cells = count


def _individualize(colours: np.ndarray, vertex: int) -> np.ndarray:
    result = colours.copy()
    result[vertex] = int(colours.max()) + 1
    return result


def _first_open_cell(colours: np.ndarray) -> Optional[int]:
    sizes = np.bincount(colours)
    open_cells = np.flatnonzero(sizes > 1)
    return int(open_cells[0]) if len(open_cells) else None


def _search(
    g1: SimpleGraph,
    g2: SimpleGraph,
    A1: np.ndarray,
    A2: np.ndarray,
    c1: np.ndarray,
    c2: np.ndarray,
) -> Optional[List[int]]:
    refined = _refine_pair(A1, A2, c1, c2)
    if refined is None:
        return None
    c1, c2 = refined
    cell = _first_open_cell(c1)
    if cell is None:
        position = {int(colour): w for w, colour in enumerate(c2)}
        mapping = [position[int(colour)] for colour in c1]
        if all(g2.has_edge(mapping[u], mapping[v]) for u, v in g1.edges):
            return mapping
        return None
    v = int(np.flatnonzero(c1 == cell)[0])
    for w in np.flatnonzero(c2 == cell):
        found = _search(g1, g2, A1, A2, _individualize(c1, v), _individualize(c2, int(w)))
        if found is not None:
            return found
    return None


def _verify_isomorphism(g1: SimpleGraph, g2: SimpleGraph, mapping: List[int]) -> None:
    if sorted(mapping) != list(range(g1.n)) or g1.edge_count() != g2.edge_count():
        raise VerificationError("isomorphism search returned a non-bijection")
    if any(not g2.has_edge(mapping[u], mapping[v]) for u, v in g1.edges):
        raise VerificationError("isomorphism search returned a map that breaks an edge")


def are_isomorphic(g1: SimpleGraph, g2: SimpleGraph) -> Optional[List[int]]:
    """A vertex bijection carrying g1 onto g2, or None."""
    _check_size(g1)
    _check_size(g2)
    if graph_fingerprint(g1) != graph_fingerprint(g2):
        return None
    if g1.n == 0:
        return []
    zeros = np.zeros(g1.n, dtype=np.int64)
    mapping = _search(g1, g2, g1.adjacency_matrix(), g2.adjacency_matrix(), zeros, zeros.copy())
    if mapping is not None:
        _verify_isomorphism(g1, g2, mapping)
    return mapping


def _orbit(point: int, gens: List[Permutation]) -> set:
    seen = {point}
    pending = [point]
    for x in pending:
        for g in gens:
            y = g.images[x]
            if y not in seen:
                seen.add(y)
                pending.append(y)
    return seen


def automorphism_group(graph: SimpleGraph) -> PermutationGroup:
    """Full automorphism group with its order certified by the stabilizer chain.

    Walks down one individualization path to a discrete colouring, then from
    the deepest level upwards finds an automorphism for each cell member not
    yet in the orbit of the chosen vertex. The order is the product of the
    orbit lengths along the path.
    """
    _check_size(graph)
    if graph.n == 0:
        raise PreconditionError("the empty graph has no permutation group")
    A = graph.adjacency_matrix()
    colours = np.zeros(graph.n, dtype=np.int64)
    levels: List[Tuple[np.ndarray, int, List[int]]] = []
    while True:
        refined = _refine_pair(A, A, colours, colours.copy())
        assert refined is not None
        colours = refined[0]
        cell = _first_open_cell(colours)
        if cell is None:
            break
        members = [int(v) for v in np.flatnonzero(colours == cell)]
        levels.append((colours, members[0], members))
        colours = _individualize(colours, members[0])

    gens: List[Permutation] = []
    orbit_lengths = []
    for colours, v, members in reversed(levels):
        orbit = _orbit(v, gens)
        fixed = _individualize(colours, v)
        for w in members:
            if w in orbit:
                continue
            mapping = _search(graph, graph, A, A, fixed, _individualize(colours, w))
            if mapping is not None:
                gens.append(Permutation(tuple(mapping)))
                orbit = _orbit(v, gens)
        orbit_lengths.append(len(orbit))
    order = prod(orbit_lengths)
    log_debug(f"automorphism group of a {graph.n}-vertex graph: order {order}, {len(gens)} generators")
    if not gens:
        return trivial_group(graph.n)
    return PermutationGroup(gens, known_order=order, name="Aut")


def _require_preserves(graph: SimpleGraph, action: GroupAction) -> None:
    if action.domain_size != graph.n:
        raise PreconditionError("group and graph live on different vertex sets")
    for g in action.group.generators:
        if not graph.preserved_by(g.images):
            raise PreconditionError(f"generator {g} does not preserve the graph")


def is_arc_transitive(graph: SimpleGraph, action: GroupAction) -> bool:
    """True iff the arcs form one orbit; an edgeless graph is not arc-transitive."""
    _require_preserves(graph, action)
    arcs = graph.arcs()
    if not arcs:
        return False
    return len(orbit_of_pairs(action, arcs[0])) == len(arcs)


def is_edge_transitive(graph: SimpleGraph, action: GroupAction) -> bool:
    _require_preserves(graph, action)
    if not graph.edges:
        return False
    undirected = {frozenset(arc) for arc in orbit_of_pairs(action, graph.sorted_edges()[0])}
    return len(undirected) == graph.edge_count()


@dataclass
class QuotientResult:
    """Quotient by the orbits of a normal subgroup, with cover diagnostics.

    ``multiplicity_table`` maps r to the number of (vertex, adjacent block)
    pairs that see exactly r neighbours in that block.
    """

    quotient: SimpleGraph
    blocks: BlockSystem
    r: Union[int, str]
    multiplicity_table: Dict[int, int]
    internal_edges: int = 0

    @property
    def is_cover(self) -> bool:
        return self.r != NOT_A_COVER


def normal_quotient(graph: SimpleGraph, action: GroupAction, N: PermutationGroup) -> QuotientResult:
    _require_preserves(graph, action)
    if not N.is_normal_in(action.group):
        raise PreconditionError("N is not a normal subgroup of G")
    if N.is_transitive():
        raise PreconditionError("N is transitive, the quotient would be a single vertex")
    blocks = BlockSystem(tuple(tuple(o) for o in N.orbits()))
    quotient_edges = set()
    table: Counter = Counter()
    internal = 0
    for v in range(graph.n):
        own = blocks.block_of(v)
        seen: Counter = Counter(blocks.block_of(w) for w in graph.neighbors(v))
        for block, count in seen.items():
            if block == own:
                continue
            table[count] += 1
            quotient_edges.add((min(own, block), max(own, block)))
    for u, v in graph.edges:
        if blocks.block_of(u) == blocks.block_of(v):
            internal += 1
    quotient = SimpleGraph.from_edges(len(blocks.blocks), quotient_edges)
    if len(table) == 1:
        r: Union[int, str] = next(iter(table))
    elif not table:
        r = NOT_A_COVER if internal else 1
    else:
        r = NOT_A_COVER
    return QuotientResult(quotient, blocks, r, dict(sorted(table.items())), internal)


def find_biregular_dihedral(
    graph: Optional[SimpleGraph], action: GroupAction, cap: Optional[int] = None
) -> List[PermutationGroup]:
    """Bi-regular dihedral subgroups D_2n of G on 4n points, one per G-conjugacy class.

    a runs over class representatives with four n-cycles; b over involutions
    of G inverting a. A pair is kept when <a, b> has order 2n and two orbits.
    """
    if graph is not None:
        _require_preserves(graph, action)
    G = action.group
    degree = action.domain_size
    if degree % 4 or degree < 8:
        raise PreconditionError(f"bi-dihedrants need 4n vertices with n >= 2, got {degree}")
    n = degree // 4
    limit = cap if cap is not None else get_limit("enumeration_cap")
    elements = G.elements(limit)
    involutions = [b for b in elements if b.is_involution()]
    target_type = (n,) * 4
    found: List[PermutationGroup] = []
    seen_keys: set = set()
    for a in conjugacy_class_reps(G, limit):
        if a.cycle_type() != target_type:
            continue
        a_inv = a.inverse()
        for b in involutions:
            if b * a * b != a_inv:
                continue
            H = PermutationGroup([a, b], name=f"D{2 * n}")
            if H.order() != 2 * n or len(H.orbits()) != 2:
                continue
            key = frozenset(h.images for h in H.elements())
            if key in seen_keys:
                continue
            seen_keys.update(subgroup_conjugation_orbit(G, H))
            found.append(H)
    log_debug(f"found {len(found)} bi-regular dihedral classes on {degree} points")
    return found
