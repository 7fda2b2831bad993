"""Tests for named witness actions and the manifest check operations."""

import os
import sys
from unittest.mock import patch

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.services.witnesses import (
    OPERATIONS,
    action_facts,
    affine_polar_pair,
    biregular_witness,
    block_lemma,
    cover_divisibility,
    coset_formula,
    dihedral_lemma,
    family_facts,
    gdq_report,
    group_order,
    mdq_sweep,
    named_action,
    orbit_stabilizer_sample,
    orbital_census,
    point_hyperplane_report,
    psl2_dihedral_conjugacy,
    run_operation,
    singer_conjugacy,
)
from bidihedral_verify.utils.errors import CapacityError, DomainError
from bidihedral_verify.utils.perm_group import are_conjugate_subgroups


def test_named_actions():
    assert named_action("agl1_8").group.order() == 56
    assert named_action("agammal1_8").group.order() == 168
    assert named_action("a5").domain_size == 5
    with pytest.raises(DomainError):
        named_action("m24")


@pytest.mark.parametrize(
    ("name", "order", "degree"),
    [
        ("m12", 95040, 12),
        ("agl3_2", 1344, 8),
        ("affine_sp4_2", 11520, 16),
        ("gammal1_5_2", 48, 24),
        ("gammal1_3_4", 320, 80),
    ],
)
def test_group_orders(name, order, degree):
    assert group_order(name) == {"order": order, "degree": degree}


def test_action_facts_of_m12():
    facts = action_facts("m12")
    assert facts["classes"] == 15
    assert facts["point_stabilizer_order"] == 7920
    assert facts["primitive"] and facts["quasiprimitive"]
    assert facts["rank"] == 2


def test_action_facts_of_a5_cosets():
    facts = action_facts("a5_z3_cosets")
    assert facts["degree"] == 20
    assert facts["transitive"]
    assert not facts["primitive"]
    assert facts["quasiprimitive"]


def test_family_facts():
    facts = family_facts("cycle:n=6", analyse=["aut_order", "arc_transitive", "group_order"])
    assert facts["vertices"] == 6
    assert facts["bipartite"]
    assert facts["part_sizes"] == [3, 3]
    assert facts["aut_order"] == facts["group_order"] == 12
    assert facts["arc_transitive"]
    assert "aut_order" not in family_facts("cycle", n=5)


def test_f020a_census():
    facts = orbital_census("a5_z3_cosets")
    assert facts["connected_arc_transitive"] == 2
    assert facts["classes"] == 1
    assert facts["valencies"] == [3]
    assert facts["aut_orders"] == [120]


@pytest.mark.slow
def test_g20_census_and_s3_matches():
    facts = orbital_census("s5_z6_cosets")
    assert facts["classes"] == 3
    assert facts["valencies"] == [6, 6, 6]
    assert facts["aut_orders"] == [240, 240, 122880]
    assert orbital_census("s5_s3_cosets", match_g20=True)["g20_matches"] == [2, 3]


def test_affine_polar_pair():
    facts = affine_polar_pair()
    assert facts["plus_valency"] == facts["plus_formula"] == 9
    assert facts["minus_valency"] == facts["minus_formula"] == 5
    assert facts["hamming_match"] == "complement"
    assert facts["table_valency_discrepancy"]
    assert facts["plus_aut_order"] == 1152
    assert facts["minus_aut_order"] == 1920


def test_point_hyperplane_report():
    facts = point_hyperplane_report(3, 2)
    assert facts["vertices"] == 14
    assert facts["bipartite_sides"] == [7, 7]
    assert facts["complement_valency"] == 4
    assert facts["dihedral_order"] == 14
    assert facts["dihedral_regular"] and facts["complement_dihedral_regular"]
    assert facts["aut_order"] == 336


def test_gdq_report():
    facts = gdq_report(3, 3)
    assert facts["part_sizes"] == [26, 26]
    assert (facts["valency_1"], facts["valency_2"], facts["valency_3"]) == (8, 9, 9)
    assert facts["psl_transitive_delta"] and facts["psl_transitive_omega"]
    assert facts["stabilizer_orbits"] == [8, 9, 9]


def test_mdq_sweep_aggregates():
    assert mdq_sweep(4, 3, 4)["frobenius_exponents"] == [2]
    empty = mdq_sweep(3, [2, 3], [1, 2, 4])
    assert empty == {"solutions": 0, "nonempty": False, "frobenius_exponents": []}


@pytest.mark.parametrize(("d", "q", "count", "order"), [(3, 2, 8, 7), (2, 3, 3, 8)])
def test_singer_conjugacy(d, q, count, order):
    facts = singer_conjugacy(d, q)
    assert facts == {"singer_subgroups": count, "all_conjugate": True, "companion_order": order}


def test_singer_conjugacy_uses_subgroup_conjugacy():
    with patch(
        "bidihedral_verify.services.witnesses.are_conjugate_subgroups", wraps=are_conjugate_subgroups
    ) as conjugacy:
        assert singer_conjugacy(2, 3)["all_conjugate"]
    assert conjugacy.call_count == 2


@pytest.mark.parametrize(
    ("action", "degree", "orders"),
    [
        ("agl1_8", 8, [4]),
        ("agl3_2", 8, [4]),
        pytest.param("m12", 12, [6], marks=pytest.mark.slow),
    ],
)
def test_biregular_witnesses(action, degree, orders):
    facts = biregular_witness(action)
    assert facts["degree"] == degree
    assert facts["dihedral_orders"] == orders
    assert facts["all_biregular"]
    assert facts["quasiprimitive"]


def test_dihedral_lemma_small():
    facts = dihedral_lemma(max_n=10, exhaustive_t=[2], random_tuples=20, seed=1)
    assert facts["violations"] == 0
    assert facts["checked"] > 20


def test_block_lemma_on_a5():
    facts = block_lemma(["a5_z3_cosets"])
    assert facts["instances"] > 0
    assert facts["mixed"] == 0


@pytest.mark.slow
def test_cover_divisibility():
    facts = cover_divisibility()
    assert facts["non_divisible"] == 0
    assert facts["covers"] >= 3


def test_orbit_stabilizer_sample():
    facts = orbit_stabilizer_sample(samples=30, seed=2, actions=["m12", "agl3_2"])
    assert facts == {"samples": 30, "violations": 0}


@pytest.mark.slow
def test_coset_formula():
    facts = coset_formula(conjugate_samples=1)
    assert facts["violations"] == 0
    assert facts["non_isomorphic_conjugates"] == 0


def test_pgl2_dihedral_conjugacy_q5():
    assert psl2_dihedral_conjugacy(5) == {"subgroups": 10, "all_conjugate": True}


def test_run_operation_dispatch():
    assert run_operation("group_order", {"group": "gammal1_5_2"})["order"] == 48
    assert set(OPERATIONS) >= {"family", "mdq_sweep", "biregular_witness"}
    with pytest.raises(DomainError):
        run_operation("factor_integers", {})


def test_operations_respect_limits(small_limits):
    named_action.cache_clear()
    with pytest.raises(CapacityError):
        group_order("gammal1_2_12")
