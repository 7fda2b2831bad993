"""Tests for dihedral groups and the equal-order intersection property."""

import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.utils.dihedral import (
    check_intersection_property,
    dihedral_group,
    dihedral_subgroups,
    equal_order_tuples,
    intersection_contains_normal,
    normal_subgroups,
)
from bidihedral_verify.utils.errors import DomainError


def test_dihedral_group_is_regular():
    D10 = dihedral_group(5)
    assert D10.order() == 10
    assert D10.degree == 10
    assert D10.is_transitive()


def test_dihedral_group_rejects_zero():
    with pytest.raises(DomainError):
        dihedral_group(0)


def test_subgroup_count_of_d8():
    """D8 has 10 subgroups: 1, five of order 2, three of order 4, itself."""
    subgroups = dihedral_subgroups(4)
    assert len(subgroups) == 10
    assert sorted(len(h) for h in subgroups) == [1, 2, 2, 2, 2, 2, 4, 4, 4, 8]


def test_normal_subgroups_of_d10():
    """D10: trivial, the rotations, the whole group."""
    assert sorted(len(h) for h in normal_subgroups(5)) == [1, 5, 10]


def test_reflection_pair_intersection():
    """Two distinct reflections of order 2 meet trivially, so no normal subgroup survives."""
    reflections = [h for h in dihedral_subgroups(6) if len(h) == 2 and any(s for _, s in h)]
    assert not intersection_contains_normal(6, reflections[:2])


def test_rotation_subgroup_contains_itself():
    rotations = next(h for h in dihedral_subgroups(6) if len(h) == 6 and all(s == 0 for _, s in h))
    assert intersection_contains_normal(6, [rotations, rotations])


def test_equal_order_tuples_skip_small_subgroups():
    for combo in equal_order_tuples(6, 2):
        assert len({len(h) for h in combo}) == 1
        assert len(combo[0]) >= 3


def test_intersection_property_holds_up_to_twenty():
    checked, violations = check_intersection_property(max_n=20, exhaustive_t=(2, 3), random_tuples=100, seed=0)
    assert checked > 100
    assert violations == 0


def test_intersection_property_is_deterministic():
    first = check_intersection_property(max_n=8, exhaustive_t=(2,), random_tuples=20, seed=7)
    second = check_intersection_property(max_n=8, exhaustive_t=(2,), random_tuples=20, seed=7)
    assert first == second
