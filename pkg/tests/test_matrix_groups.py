"""Tests for matrices over GF(q) and the linear group actions built on them."""

import itertools
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.utils.errors import CapacityError, DomainError
from bidihedral_verify.utils.finite_field import make_field
from bidihedral_verify.utils.matrix_groups import (
    MatrixGF,
    OrbitPoints,
    SemilinearElement,
    VectorSpace,
    affine_group,
    find_symmetric_conjugator,
    form_isometries,
    frobenius,
    general_linear_generators,
    greedy_generators,
    inverse_transpose,
    matrix_group_as_permutations,
    nullspace,
    order_gl,
    order_sl,
    polar_quadratic_form,
    singer_cycle,
    special_linear_generators,
    symplectic_form,
)
from bidihedral_verify.utils.perm_group import group_from_generators
from bidihedral_verify.utils.permutation import perm_from_cycles


def test_group_order_formulas():
    assert order_gl(3, 2) == 168
    assert order_gl(2, 3) == 48
    assert order_sl(2, 3) == 24
    assert order_sl(3, 3) == 5616


def test_matrix_inverse_and_determinant():
    f = make_field(3)
    M = MatrixGF.from_ints(f, [[1, 1], [0, 2]])
    assert M.det() == f.from_int(2)
    assert (M * M.inverse()).is_identity()
    singular = MatrixGF.from_ints(f, [[1, 2], [2, 1]])
    assert singular.det() == 0
    with pytest.raises(DomainError):
        singular.inverse()


def test_matrix_powers():
    f = make_field(2)
    M = MatrixGF.from_ints(f, [[1, 1], [0, 1]])
    assert (M**2).is_identity()
    assert M.order() == 2
    assert (M**-1) == M


def test_scalar_matrices():
    f = make_field(5)
    assert MatrixGF.scalar(f, 3, 2).is_scalar()
    assert not MatrixGF.from_ints(f, [[1, 1], [0, 1]]).is_scalar()


def test_nullspace_of_rank_one_system():
    f = make_field(2)
    basis = nullspace(f, [[1, 1, 0]], 3)
    assert len(basis) == 2
    for vector in basis:
        assert f.add(vector[0], vector[1]) == 0


def test_general_linear_group_on_nonzero_vectors():
    f = make_field(2)
    action = matrix_group_as_permutations(general_linear_generators(f, 3), f, 3)
    assert action.domain_size == 7
    assert action.group.order() == 168
    assert action.group.is_transitive()


def test_projective_image_drops_scalars():
    f = make_field(3)
    gens = general_linear_generators(f, 2)
    assert matrix_group_as_permutations(gens, f, 2).group.order() == 48
    projective = matrix_group_as_permutations(gens, f, 2, action="projective-points")
    assert projective.domain_size == 4
    assert projective.group.order() == 24


def test_special_linear_group_order():
    f = make_field(3)
    action = matrix_group_as_permutations(special_linear_generators(f, 2), f, 2)
    assert action.group.order() == 24


def test_orbit_point_counts():
    f = make_field(5)
    space = VectorSpace(f, 2)
    assert len(OrbitPoints(space, 1)) == 6
    assert len(OrbitPoints(space, 2)) == 12
    assert len(OrbitPoints(space, 4)) == 24
    with pytest.raises(DomainError):
        OrbitPoints(space, 3)


def test_p_orbits_need_exponent():
    f = make_field(5)
    with pytest.raises(DomainError):
        matrix_group_as_permutations(general_linear_generators(f, 2), f, 2, action="p-orbits")
    with pytest.raises(DomainError):
        matrix_group_as_permutations(general_linear_generators(f, 2), f, 2, action="lines")


def test_orbit_points_identify_scalar_multiples():
    f = make_field(2, 2)
    points = OrbitPoints(VectorSpace(f, 2), 1)
    assert len(points) == 5
    v = (1, f.generator)
    scaled = tuple(f.mul(f.generator, x) for x in v)
    assert points.point(v) == points.point(scaled)


def test_vector_space_capacity(small_limits):
    with pytest.raises(CapacityError):
        VectorSpace(make_field(2), 7)


def test_affine_group_order():
    f = make_field(2)
    action = affine_group(f, 3, general_linear_generators(f, 3))
    assert action.domain_size == 8
    assert action.group.order() == 8 * 168
    assert action.labels[0] == (0, 0, 0)


def test_singer_cycles():
    assert singer_cycle(3, 2).order() == 7
    assert singer_cycle(2, 3).order() == 8
    assert singer_cycle(2, 4).has_order(15)
    with pytest.raises(DomainError):
        singer_cycle(1, 3)


def test_symmetric_conjugator():
    x = singer_cycle(3, 2)
    S = find_symmetric_conjugator(x)
    assert S.is_symmetric()
    assert S.inverse() * x * S == x.transpose()


def test_semilinear_composition_acts_on_the_right():
    f = make_field(2, 2)
    g = f.generator
    a = SemilinearElement(MatrixGF(f, ((1, g), (0, 1))), 1)
    b = SemilinearElement(MatrixGF(f, ((g, 0), (1, 1))), 0)
    for v in itertools.product(range(4), repeat=2):
        assert (a * b).apply(v) == b.apply(a.apply(v))


def test_frobenius_has_order_e():
    f = make_field(2, 2)
    M = MatrixGF(f, ((f.generator, 1), (0, 1)))
    assert frobenius(M, 2) == M
    assert frobenius(M) != M
    with pytest.raises(DomainError):
        frobenius((1, 2))


def test_polar_forms_count_singular_vectors():
    f = make_field(2)
    plus = polar_quadratic_form(f, 2, "+")
    minus = polar_quadratic_form(f, 2, "-")
    vectors = [v for v in itertools.product(range(2), repeat=4) if any(v)]
    assert sum(1 for v in vectors if plus(v) == 0) == 9
    assert sum(1 for v in vectors if minus(v) == 0) == 5
    with pytest.raises(DomainError):
        polar_quadratic_form(f, 2, "0")


def test_orthogonal_and_symplectic_isometries():
    f = make_field(2)
    assert len(form_isometries(f, 4, quadratic=polar_quadratic_form(f, 2, "+"))) == 72
    assert len(form_isometries(f, 4, quadratic=polar_quadratic_form(f, 2, "-"))) == 120
    assert len(form_isometries(f, 4, bilinear=symplectic_form(f, 2))) == 720


def test_form_isometries_argument_checks(small_limits):
    f = make_field(2)
    with pytest.raises(DomainError):
        form_isometries(f, 2)
    with pytest.raises(CapacityError):
        form_isometries(f, 4, bilinear=symplectic_form(f, 2))


def test_greedy_generators_keep_the_group():
    S4 = group_from_generators([perm_from_cycles(4, [[0, 1, 2, 3]]), perm_from_cycles(4, [[0, 1]])])
    kept = greedy_generators(S4.elements())
    assert len(kept) <= 4
    assert group_from_generators(kept).order() == 24


def test_inverse_transpose():
    f = make_field(3, 1)
    M = MatrixGF.from_ints(f, [[1, 1], [0, 1]])
    assert inverse_transpose(M) == MatrixGF.from_ints(f, [[1, 0], [2, 1]])
    assert (M * inverse_transpose(M).transpose()).is_identity()
