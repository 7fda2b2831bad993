"""Tests for graph isomorphism, automorphism groups, quotients and bi-dihedral searches."""

import os
import random
import sys

import networkx as nx
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.utils.actions import is_biregular, natural_action
from bidihedral_verify.utils.errors import CapacityError, PreconditionError
from bidihedral_verify.utils.graph_analysis import (
    NOT_A_COVER,
    are_isomorphic,
    automorphism_group,
    find_biregular_dihedral,
    graph_fingerprint,
    is_arc_transitive,
    is_bipartite,
    is_connected,
    is_edge_transitive,
    normal_quotient,
)
from bidihedral_verify.utils.graphs import SimpleGraph
from bidihedral_verify.utils.perm_group import group_from_generators
from bidihedral_verify.utils.permutation import perm_from_cycles


def from_nx(graph):
    return SimpleGraph.from_networkx(graph)


def cycle_graph(n):
    return SimpleGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def rotations_and_reflection(n):
    return group_from_generators(
        [
            perm_from_cycles(n, [list(range(n))]),
            perm_from_cycles(n, [[i, n - i] for i in range(1, (n + 1) // 2)]),
        ]
    )


def test_connectivity_and_bipartition():
    assert is_connected(cycle_graph(6))
    assert not is_connected(SimpleGraph.from_edges(4, [(0, 1), (2, 3)]))
    first, second = is_bipartite(from_nx(nx.heawood_graph()))
    assert 0 in first
    assert len(first) == len(second) == 7
    assert is_bipartite(from_nx(nx.petersen_graph())) is None


@pytest.mark.parametrize(
    ("graph", "expected"),
    [
        (nx.petersen_graph(), 120),
        (nx.heawood_graph(), 336),
        (nx.hypercube_graph(3), 48),
        (nx.complete_graph(4), 24),
        (nx.cycle_graph(7), 14),
        (nx.empty_graph(3), 6),
    ],
)
def test_automorphism_group_orders(graph, expected):
    """Orders agree with the networkx isomorphism matcher."""
    simple = from_nx(graph)
    aut = automorphism_group(simple)
    assert aut.order() == expected
    for g in aut.generators:
        assert simple.preserved_by(g.images)
    matcher = nx.algorithms.isomorphism.GraphMatcher(simple.to_networkx(), simple.to_networkx())
    assert sum(1 for _ in matcher.isomorphisms_iter()) == expected


def test_asymmetric_graph_has_trivial_group():
    """The smallest asymmetric tree has seven vertices."""
    tree = SimpleGraph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)])
    assert automorphism_group(tree).order() == 1


def test_automorphism_group_of_empty_vertex_set():
    with pytest.raises(PreconditionError):
        automorphism_group(SimpleGraph.from_edges(0, []))


def test_analysis_capacity(small_limits):
    with pytest.raises(CapacityError):
        automorphism_group(from_nx(nx.heawood_graph()))


def test_isomorphism_of_shuffled_petersen():
    petersen = from_nx(nx.petersen_graph())
    shuffle = list(range(10))
    random.Random(3).shuffle(shuffle)
    mapping = are_isomorphic(petersen, petersen.relabel(shuffle))
    assert mapping is not None
    assert all(petersen.relabel(shuffle).has_edge(mapping[u], mapping[v]) for u, v in petersen.edges)


def test_petersen_is_not_the_pentagonal_prism():
    """Same order, size, degrees and triangle counts, different girth."""
    petersen = from_nx(nx.petersen_graph())
    prism = from_nx(nx.circular_ladder_graph(5))
    assert graph_fingerprint(petersen) == graph_fingerprint(prism)
    assert are_isomorphic(petersen, prism) is None


def test_fingerprint_separates_sizes():
    assert are_isomorphic(cycle_graph(5), cycle_graph(6)) is None


def test_arc_and_edge_transitivity():
    petersen = from_nx(nx.petersen_graph())
    action = natural_action(automorphism_group(petersen))
    assert is_arc_transitive(petersen, action)
    assert is_edge_transitive(petersen, action)

    path = SimpleGraph.from_edges(3, [(0, 1), (1, 2)])
    flip = natural_action(group_from_generators([perm_from_cycles(3, [[0, 2]])]))
    assert is_edge_transitive(path, flip)
    assert not is_arc_transitive(path, flip)


def test_transitivity_needs_a_preserving_group():
    rotation = natural_action(group_from_generators([perm_from_cycles(5, [[0, 2, 1, 3, 4]])]))
    with pytest.raises(PreconditionError):
        is_arc_transitive(cycle_graph(5), rotation)


def test_edgeless_graph_is_not_arc_transitive():
    empty = SimpleGraph.from_edges(3, [])
    action = natural_action(group_from_generators([perm_from_cycles(3, [[0, 1, 2]])]))
    assert not is_arc_transitive(empty, action)
    assert not is_edge_transitive(empty, action)


def test_hexagon_covers_triangle():
    hexagon = cycle_graph(6)
    action = natural_action(rotations_and_reflection(6))
    half_turn = group_from_generators([perm_from_cycles(6, [[0, 3], [1, 4], [2, 5]])])
    result = normal_quotient(hexagon, action, half_turn)
    assert result.is_cover
    assert result.r == 1
    assert result.quotient.n == 3
    assert result.quotient.edge_count() == 3
    assert result.internal_edges == 0


def test_hexagon_over_an_edge_is_two_to_one():
    hexagon = cycle_graph(6)
    action = natural_action(rotations_and_reflection(6))
    thirds = group_from_generators([perm_from_cycles(6, [[0, 2, 4], [1, 3, 5]])])
    result = normal_quotient(hexagon, action, thirds)
    assert result.r == 2
    assert result.multiplicity_table == {2: 6}
    assert result.quotient.edge_count() == 1


def test_square_quotients():
    square = cycle_graph(4)
    action = natural_action(rotations_and_reflection(4))
    N = group_from_generators([perm_from_cycles(4, [[0, 1], [2, 3]]), perm_from_cycles(4, [[0, 3], [1, 2]])])
    with pytest.raises(PreconditionError):
        normal_quotient(square, action, N)
    half_turn = group_from_generators([perm_from_cycles(4, [[0, 2], [1, 3]])])
    result = normal_quotient(square, action, half_turn)
    assert result.r == 2
    assert result.quotient.edge_count() == 1


def test_quotient_requires_normal_subgroup():
    hexagon = cycle_graph(6)
    action = natural_action(rotations_and_reflection(6))
    reflection = group_from_generators([perm_from_cycles(6, [[1, 5], [2, 4]])])
    with pytest.raises(PreconditionError):
        normal_quotient(hexagon, action, reflection)


def test_quotient_with_only_internal_edges_is_not_a_cover():
    matching = SimpleGraph.from_edges(4, [(0, 1), (2, 3)])
    N = group_from_generators([perm_from_cycles(4, [[0, 1]]), perm_from_cycles(4, [[2, 3]])])
    result = normal_quotient(matching, natural_action(N), N)
    assert result.r == NOT_A_COVER
    assert not result.is_cover
    assert result.internal_edges == 2
    assert result.quotient.edge_count() == 0


def test_biregular_dihedral_subgroups_of_octagon():
    octagon = cycle_graph(8)
    action = natural_action(rotations_and_reflection(8))
    found = find_biregular_dihedral(octagon, action)
    assert found
    for H in found:
        assert H.order() == 4
        assert is_biregular(action, H)


def test_biregular_search_needs_four_n_points():
    action = natural_action(rotations_and_reflection(6))
    with pytest.raises(PreconditionError):
        find_biregular_dihedral(None, action)
