"""Tests for the certified graph families and the family grammar."""

import os
import sys

import networkx as nx
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.utils.actions import is_regular_subgroup, natural_action
from bidihedral_verify.utils.errors import CapacityError, DomainError, PreconditionError
from bidihedral_verify.utils.graph_analysis import are_isomorphic, automorphism_group, is_arc_transitive
from bidihedral_verify.utils.graph_families import (
    FAMILIES,
    affine_polar_graph,
    build_family,
    certified_complete,
    certified_complete_bipartite,
    certified_complete_bipartite_minus_matching,
    certified_cycle,
    certified_hamming,
    coset_graph,
    cycle_graph,
    f020a,
    g2q,
    g20,
    g20_census,
    gdq,
    half_singer_dihedral,
    hamming_graph,
    isomorphism_classes,
    orbital_graphs,
    parse_family,
    resolve_family,
    point_hyperplane_dihedral,
    point_hyperplane_graph,
)
from bidihedral_verify.utils.graphs import SimpleGraph
from bidihedral_verify.utils.perm_group import group_from_generators, trivial_group
from bidihedral_verify.utils.permutation import perm_from_cycles


def symmetric3():
    return group_from_generators([perm_from_cycles(3, [[0, 1, 2]]), perm_from_cycles(3, [[0, 1]])])


def test_elementary_families_are_arc_transitive():
    for certified in (
        certified_complete(5),
        certified_complete_bipartite(3),
        certified_complete_bipartite_minus_matching(4),
        certified_cycle(7),
        certified_hamming(2, 3),
    ):
        assert is_arc_transitive(certified.graph, certified.action), certified.provenance


def test_elementary_family_shapes():
    assert certified_complete(5).group.order() == 120
    assert certified_complete_bipartite(3).facts == {"vertices": 6, "edges": 9, "valency": 3}
    cube = certified_complete_bipartite_minus_matching(4).graph
    assert are_isomorphic(cube, SimpleGraph.from_networkx(nx.hypercube_graph(3))) is not None
    assert certified_cycle(7).group.order() == 14
    rook = certified_hamming(2, 3)
    assert rook.facts["valency"] == 4
    assert rook.group.order() == 72


def test_short_cycles_rejected():
    with pytest.raises(DomainError):
        cycle_graph(2)


def test_coset_graph_of_s3_is_a_triangle():
    S3 = symmetric3()
    K = group_from_generators([perm_from_cycles(3, [[1, 2]])])
    certified = coset_graph(S3, K, perm_from_cycles(3, [[0, 1]]))
    facts = certified.facts
    assert facts["vertices"] == facts["order_formula"] == 3
    assert facts["valency"] == facts["valency_formula"] == 2
    assert facts["generates"]
    assert facts["connected"]


def test_coset_graph_preconditions():
    S3 = symmetric3()
    K = group_from_generators([perm_from_cycles(3, [[1, 2]])])
    with pytest.raises(PreconditionError):
        coset_graph(S3, K, perm_from_cycles(3, [[1, 2]]))
    rotations = group_from_generators([perm_from_cycles(3, [[0, 1, 2]])])
    with pytest.raises(PreconditionError):
        coset_graph(S3, rotations, perm_from_cycles(3, [[0, 1]]))
    with pytest.raises(PreconditionError):
        coset_graph(rotations, trivial_group(3), perm_from_cycles(3, [[0, 1, 2]]))


def test_orbital_graphs_of_two_transitive_group():
    S4 = group_from_generators([perm_from_cycles(4, [[0, 1, 2, 3]]), perm_from_cycles(4, [[0, 1]])])
    (only,) = orbital_graphs(natural_action(S4))
    assert only.facts["rank"] == 2
    assert only.facts["self_paired"]
    assert only.facts["valency"] == 3
    assert only.facts["arc_transitive"]


def test_paired_orbitals_are_not_arc_transitive():
    C5 = group_from_generators([perm_from_cycles(5, [[0, 1, 2, 3, 4]])])
    graphs = orbital_graphs(natural_action(C5))
    assert len(graphs) == 2
    for certified in graphs:
        assert not certified.facts["self_paired"]
        assert "paired_suborbit" in certified.facts
        assert not certified.facts["arc_transitive"]


def test_dihedral_orbitals_give_two_pentagons():
    D10 = group_from_generators([perm_from_cycles(5, [[0, 1, 2, 3, 4]]), perm_from_cycles(5, [[1, 4], [2, 3]])])
    graphs = orbital_graphs(natural_action(D10))
    assert [c.facts["suborbit_size"] for c in graphs] == [2, 2]
    assert all(c.facts["arc_transitive"] and c.facts["connected"] for c in graphs)
    assert len(isomorphism_classes(graphs)) == 1


def test_orbital_graphs_need_transitivity():
    G = group_from_generators([perm_from_cycles(4, [[0, 1]])])
    with pytest.raises(PreconditionError):
        orbital_graphs(natural_action(G))


def test_orbital_domain_limit(small_limits):
    S12 = group_from_generators([perm_from_cycles(12, [list(range(12))]), perm_from_cycles(12, [[0, 1]])])
    with pytest.raises(CapacityError):
        orbital_graphs(natural_action(S12))


def test_f020a_is_the_dodecahedron():
    certified = f020a()
    assert certified.facts["vertices"] == 20
    assert certified.facts["valency"] == 3
    assert certified.facts["isomorphic_orbitals"] == 2
    assert is_arc_transitive(certified.graph, certified.action)
    dodecahedron = SimpleGraph.from_networkx(nx.dodecahedral_graph())
    assert are_isomorphic(certified.graph, dodecahedron) is not None


def test_g20_census_labels():
    census = g20_census()
    assert sorted(census) == [1, 2, 3]
    graphs = [census[i].graph for i in (1, 2, 3)]
    assert all(g.n == 20 for g in graphs)
    for a in range(3):
        for b in range(a + 1, 3):
            assert are_isomorphic(graphs[a], graphs[b]) is None
    assert g20(3) is census[3]
    with pytest.raises(DomainError):
        g20(4)


@pytest.mark.parametrize(("eps", "valency", "order"), [("+", 9, 1152), ("-", 5, 1920)])
def test_affine_polar_graphs(eps, valency, order):
    certified = affine_polar_graph(2, 2, eps)
    assert certified.facts["vertices"] == 16
    assert certified.facts["valency"] == certified.facts["expected_valency"] == valency
    assert certified.facts["group_order"] == order
    assert is_arc_transitive(certified.graph, certified.action)


def test_vo_plus_complement_is_hamming():
    plus = affine_polar_graph(2, 2, "plus")
    hamming = certified_hamming(2, 4).graph
    assert are_isomorphic(plus.graph.complement(), hamming) is not None


def test_vo_bad_sign():
    with pytest.raises(DomainError):
        affine_polar_graph(2, 2, "0")


def test_heawood_as_point_hyperplane_graph():
    certified = point_hyperplane_graph(3, 2)
    assert certified.facts["vertices"] == 14
    assert certified.facts["valency"] == certified.facts["expected_valency"] == 3
    assert certified.group.order() == 336
    heawood = SimpleGraph.from_networkx(nx.heawood_graph())
    assert are_isomorphic(certified.graph, heawood) is not None

    complement = point_hyperplane_graph(3, 2, complement=True)
    assert complement.facts["valency"] == complement.facts["expected_valency"] == 4
    with pytest.raises(PreconditionError):
        point_hyperplane_graph(2, 3)


def test_point_hyperplane_dihedral_is_regular():
    certified = point_hyperplane_graph(3, 2)
    D = point_hyperplane_dihedral(3, 2)
    assert D.order() == 14
    assert is_regular_subgroup(certified.action, D)
    assert all(certified.graph.preserved_by(g.images) for g in D.generators)


def test_g2q_for_q5():
    certified = g2q(5)
    assert certified.facts["vertices"] == 12
    assert certified.facts["valency"] == certified.facts["expected_valency"] == 5
    assert certified.facts["connected"]
    assert certified.facts["overgroup_order"] == 120
    assert is_arc_transitive(certified.graph, certified.action)
    assert automorphism_group(certified.graph).order() % 120 == 0


def test_g2q_needs_q_five_mod_eight():
    with pytest.raises(PreconditionError):
        g2q(3)
    with pytest.raises(PreconditionError):
        half_singer_dihedral(7)


def test_half_singer_dihedral():
    D = half_singer_dihedral(5)
    assert D.order() == 6
    assert len(D.orbits()) == 2


@pytest.mark.parametrize(("i", "valency"), [(1, 8), (2, 9), (3, 9)])
def test_gdq_valencies(i, valency):
    certified = gdq(3, 3, i)
    assert certified.facts["part_sizes"] == [26, 26]
    assert certified.facts["delta_valency"] == certified.facts["omega_valency"] == valency
    assert certified.facts["expected_valency"] == valency


def test_gdq_preconditions():
    with pytest.raises(PreconditionError):
        gdq(4, 3, 1)
    with pytest.raises(PreconditionError):
        gdq(3, 4, 1)
    with pytest.raises(DomainError):
        gdq(3, 3, 4)


def test_parse_family():
    assert parse_family("vo:m=2,q=2,eps=-") == ("vo", {"m": "2", "q": "2", "eps": "-"})
    assert parse_family("f020a") == ("f020a", {})
    assert parse_family("bpg: d=3, q=2, complement=true") == ("bpg", {"d": "3", "q": "2", "complement": "true"})
    with pytest.raises(DomainError):
        parse_family("cycle:n")


def test_resolve_family_validates_parameters():
    spec, params = resolve_family("vo:m=2,q=2,eps=minus")
    assert spec is FAMILIES["vo"]
    assert params.model_dump() == {"m": 2, "q": 2, "eps": "-"}
    _, params = resolve_family("bpg:d=3,q=2,complement=yes")
    assert params.complement is True
    _, params = resolve_family("cycle", {"n": 9})
    assert params.n == 9


@pytest.mark.parametrize(
    "text",
    ["cycle:n=five", "vo:m=2,q=2,eps=0", "bpg:d=3,q=2,complement=maybe", "f020a:n=3"],
)
def test_resolve_family_rejects_bad_values(text):
    with pytest.raises(DomainError):
        resolve_family(text)


def test_build_family():
    assert build_family("cycle:n=5").facts["vertices"] == 5
    assert build_family("cycle", {"n": 6}).facts["vertices"] == 6
    assert build_family("bpg:d=3,q=2,complement=true").facts["valency"] == 4
    assert "gdq" in FAMILIES


def test_build_family_errors():
    with pytest.raises(DomainError):
        build_family("petersen")
    with pytest.raises(DomainError):
        build_family("hamming:k=2")
    with pytest.raises(DomainError):
        build_family("cycle:n=5,colour=2")


def test_hamming_graph_matches_networkx():
    graph = hamming_graph(3, 2)
    assert graph.n == 8
    assert graph.valency() == 3
    assert are_isomorphic(graph, SimpleGraph.from_networkx(nx.hypercube_graph(3))) is not None
    assert hamming_graph(2, 3).has_edge(0, 1)
    assert not hamming_graph(2, 3).has_edge(0, 4)
