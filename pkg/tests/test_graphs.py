"""Tests for simple graphs, certified graphs and graph/group files."""

import os
import sys

import networkx as nx
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.utils.actions import natural_action
from bidihedral_verify.utils.errors import DomainError, VerificationError
from bidihedral_verify.utils.graph_io import (
    dump_group,
    format_graph,
    from_edgelist,
    export_graph,
    from_graph6,
    load_graph,
    load_group,
    load_packaged_group,
    parse_group_file,
    to_edgelist,
    to_graph6,
)
from bidihedral_verify.utils.graphs import CertifiedGraph, SimpleGraph
from bidihedral_verify.utils.perm_group import group_from_generators
from bidihedral_verify.utils.permutation import perm_from_cycles


def cycle_graph(n):
    return SimpleGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def test_edges_are_canonical():
    g = SimpleGraph.from_edges(3, [(1, 0), (2, 1), (0, 1)])
    assert g.sorted_edges() == [(0, 1), (1, 2)]
    assert g.neighbors(1) == (0, 2)
    assert g.degree_sequence() == [2, 1, 1]
    assert g.valency() is None


def test_invalid_edges():
    with pytest.raises(DomainError):
        SimpleGraph.from_edges(3, [(1, 1)])
    with pytest.raises(DomainError):
        SimpleGraph.from_edges(3, [(0, 3)])
    with pytest.raises(DomainError):
        SimpleGraph(-1, frozenset())


def test_arcs_and_adjacency():
    g = cycle_graph(5)
    assert g.valency() == 2
    assert len(g.arcs()) == 10
    matrix = g.adjacency_matrix()
    assert matrix.sum() == 10
    assert (matrix == matrix.T).all()


def test_complement_of_pentagon_is_a_pentagon():
    g = cycle_graph(5)
    complement = g.complement()
    assert complement.edge_count() == 5
    assert complement.valency() == 2
    assert not complement.has_edge(0, 1)


def test_bipartite_complement_of_heawood():
    heawood = SimpleGraph.from_networkx(nx.heawood_graph())
    part = [v for v in range(14) if v % 2 == 0]
    complement = heawood.bipartite_complement(part)
    assert complement.valency() == 4
    with pytest.raises(DomainError):
        heawood.bipartite_complement([0, 1])


def test_relabel_and_networkx_round_trip():
    g = cycle_graph(4)
    relabelled = g.relabel([1, 2, 3, 0])
    assert relabelled.edges == g.edges
    assert SimpleGraph.from_networkx(g.to_networkx()) == g


def test_certified_graph_checks_generators():
    rotation = group_from_generators([perm_from_cycles(5, [[0, 1, 2, 3, 4]])])
    certified = CertifiedGraph(cycle_graph(5), natural_action(rotation), "C5")
    assert certified.group.order() == 5

    breaking = group_from_generators([perm_from_cycles(5, [[0, 2]])])
    with pytest.raises(VerificationError):
        CertifiedGraph(cycle_graph(5), natural_action(breaking), "C5")
    with pytest.raises(DomainError):
        CertifiedGraph(cycle_graph(6), natural_action(rotation), "C6")


def test_graph6_known_strings():
    k4 = SimpleGraph.from_networkx(nx.complete_graph(4))
    assert to_graph6(k4) == "C~"
    assert to_graph6(SimpleGraph.from_edges(1, [])) == "@"
    assert from_graph6("C~") == k4
    assert format_graph(k4) == "C~\n"


def test_graph6_rejects_garbage():
    with pytest.raises(DomainError):
        from_graph6("")
    with pytest.raises(DomainError):
        from_graph6("C")


def test_edgelist_format():
    g = cycle_graph(3)
    text = to_edgelist(g)
    assert text.splitlines() == ["# n=3", "0 1", "0 2", "1 2"]
    assert from_edgelist(text) == g
    assert from_edgelist("0 1\n1 2\n").n == 3
    with pytest.raises(DomainError):
        from_edgelist("0 1 2\n")
    with pytest.raises(DomainError):
        format_graph(g, "dot")


def test_load_graph_picks_the_format(tmp_path):
    petersen = SimpleGraph.from_networkx(nx.petersen_graph())
    g6 = tmp_path / "petersen.g6"
    g6.write_text(format_graph(petersen, "graph6"), encoding="ascii")
    edges = tmp_path / "petersen.txt"
    edges.write_text(format_graph(petersen, "edgelist"), encoding="ascii")
    assert load_graph(g6) == petersen
    assert load_graph(edges) == petersen


def test_packaged_groups():
    assert load_packaged_group("m12").order() == 95040
    assert load_packaged_group("a5").order() == 60
    with pytest.raises(DomainError):
        load_packaged_group("monster")


def test_group_file_validation():
    with pytest.raises(DomainError):
        parse_group_file('{"degree": 0, "generators": ["(1,2)"]}')
    with pytest.raises(DomainError):
        parse_group_file('{"degree": 3, "generators": []}')
    parsed = parse_group_file('{"degree": 3, "generators": [" (1,2,3) "], "order": 3}')
    assert parsed.generators == ["(1,2,3)"]
    assert parsed.to_group().order() == 3


def test_group_file_round_trip(tmp_path):
    S4 = group_from_generators([perm_from_cycles(4, [[0, 1, 2, 3]]), perm_from_cycles(4, [[0, 1]])])
    path = tmp_path / "s4.json"
    dump_group(S4, path, name="S4")
    loaded = load_group(path)
    assert loaded.order() == 24
    assert loaded.name == "S4"


def test_export_graph(tmp_path):
    target = tmp_path / "triangle.txt"
    export_graph(cycle_graph(3), "edgelist", target)
    assert load_graph(target) == cycle_graph(3)
