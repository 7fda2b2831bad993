"""Matrices over GF(q), linear and semilinear groups, and their permutation actions.

Matrices act on row vectors from the right. Every matrix group is handed to
the permutation engine as a group of permutations of vectors, projective
points or orbits of a scalar subgroup P.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint

from bidihedral_verify.utils.actions import GroupAction
from bidihedral_verify.utils.config import enforce_limit
from bidihedral_verify.utils.errors import (
    DomainError,
    NotFoundError,
    VerificationError,
)
from bidihedral_verify.utils.finite_field import FiniteField, field_of_order
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.perm_group import PermutationGroup
from bidihedral_verify.utils.permutation import Permutation

Vector = Tuple[int, ...]


def _row_reduce(field: FiniteField, rows: List[List[int]]) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form and pivot columns."""
    matrix = [list(r) for r in rows]
    pivots: List[int] = []
    if not matrix:
        return matrix, pivots
    ncols = len(matrix[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        scale = field.inv(matrix[rank][col])
        matrix[rank] = [field.mul(scale, v) for v in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [
                    field.sub(v, field.mul(factor, w)) for v, w in zip(matrix[r], matrix[rank])
                ]
        pivots.append(col)
        rank += 1
        if rank == len(matrix):
            break
    return matrix, pivots


def nullspace(field: FiniteField, rows: List[List[int]], ncols: int) -> List[List[int]]:
    """Basis of {v : A v^T = 0}, one vector per free column, in column order."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = _row_reduce(field, rows)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vector = [0] * ncols
        vector[free] = 1
        for r, col in enumerate(pivots):
            vector[col] = field.neg(reduced[r][free])
        basis.append(vector)
    return basis


@dataclass(frozen=True)
class MatrixGF:
    """A square matrix over a finite field with canonical-order entries."""

    field: FiniteField
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise DomainError("matrices must be square and nonempty")
        if any(not 0 <= v < self.field.q for r in rows for v in r):
            raise DomainError(f"entry outside {self.field}")

    @classmethod
    def identity(cls, field: FiniteField, d: int) -> "MatrixGF":
        return cls.scalar(field, d, 1)

    @classmethod
    def scalar(cls, field: FiniteField, d: int, value: int) -> "MatrixGF":
        return cls(field, tuple(tuple(value if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def from_ints(cls, field: FiniteField, rows: Sequence[Sequence[int]]) -> "MatrixGF":
        """Build from integers read in the prime subfield (negative values allowed)."""
        return cls(field, tuple(tuple(field.from_int(v) for v in r) for r in rows))

    @property
    def d(self) -> int:
        return len(self.rows)

    def __mul__(self, other: "MatrixGF") -> "MatrixGF":
        if not isinstance(other, MatrixGF):
            return NotImplemented
        if other.field != self.field or other.d != self.d:
            raise DomainError("matrix shapes or fields differ")
        f = self.field
        cols = list(zip(*other.rows))
        result = []
        for row in self.rows:
            out = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                out.append(acc)
            result.append(tuple(out))
        return MatrixGF(f, tuple(result))

    def __pow__(self, exponent: int) -> "MatrixGF":
        base = self if exponent >= 0 else self.inverse()
        k = abs(exponent)
        result = MatrixGF.identity(self.field, self.d)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.field, tuple(zip(*self.rows)))

    def det(self) -> int:
        f = self.field
        matrix = [list(r) for r in self.rows]
        det = 1
        for col in range(self.d):
            pivot = next((r for r in range(col, self.d) if matrix[r][col] != 0), None)
            if pivot is None:
                return 0
            if pivot != col:
                matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
                det = f.neg(det)
            det = f.mul(det, matrix[col][col])
            inv = f.inv(matrix[col][col])
            for r in range(col + 1, self.d):
                if matrix[r][col]:
                    factor = f.mul(matrix[r][col], inv)
                    matrix[r] = [f.sub(v, f.mul(factor, w)) for v, w in zip(matrix[r], matrix[col])]
        return det

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "MatrixGF":
        d = self.d
        augmented = [list(r) + [1 if i == j else 0 for j in range(d)] for i, r in enumerate(self.rows)]
        reduced, pivots = _row_reduce(self.field, augmented)
        if pivots[:d] != list(range(d)) or len(pivots) < d:
            raise DomainError("matrix is singular")
        return MatrixGF(self.field, tuple(tuple(r[d:]) for r in reduced[:d]))

    def is_identity(self) -> bool:
        return self == MatrixGF.identity(self.field, self.d)

    def is_scalar(self) -> bool:
        value = self.rows[0][0]
        return value != 0 and self == MatrixGF.scalar(self.field, self.d, value)

    def is_symmetric(self) -> bool:
        return self.rows == self.transpose().rows

    def apply(self, vector: Sequence[int]) -> Vector:
        """Row vector times matrix."""
        f = self.field
        out = []
        for col in zip(*self.rows):
            acc = 0
            for a, b in zip(vector, col):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return tuple(out)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def has_order(self, n: int) -> bool:
        if not (self**n).is_identity():
            return False
        return all(not (self ** (n // r)).is_identity() for r in factorint(n))

    def order(self, limit: Optional[int] = None) -> int:
        bound = limit if limit is not None else order_gl(self.d, self.field.q)
        power = self
        for k in range(1, bound + 1):
            if power.is_identity():
                return k
            power = power * self
        raise VerificationError("matrix order exceeds the search bound")


def frobenius(obj: Union[MatrixGF, Sequence[int]], k: int = 1, field: Optional[FiniteField] = None):
    """Entrywise a -> a^(p^k) on a matrix or (with ``field``) a vector."""
    if isinstance(obj, MatrixGF):
        f = obj.field
        return MatrixGF(f, tuple(tuple(f.frobenius(v, k) for v in r) for r in obj.rows))
    if field is None:
        raise DomainError("vectors need their field")
    return tuple(field.frobenius(v, k) for v in obj)


def inverse_transpose(M: MatrixGF) -> MatrixGF:
    return M.inverse().transpose()


@dataclass(frozen=True)
class SemilinearElement:
    """v -> (v^(phi^k)) M, an element of GammaL_d(q)."""

    matrix: MatrixGF
    frobenius_power: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "frobenius_power", self.frobenius_power % self.matrix.field.e)

    def __mul__(self, other: "SemilinearElement") -> "SemilinearElement":
        twisted = frobenius(self.matrix, other.frobenius_power)
        return SemilinearElement(twisted * other.matrix, self.frobenius_power + other.frobenius_power)

    def apply(self, vector: Sequence[int]) -> Vector:
        return self.matrix.apply(frobenius(vector, self.frobenius_power, self.matrix.field))

    def dual(self) -> "SemilinearElement":
        """The induced map on dual vectors under the pairing B(u, w) = u . w."""
        return SemilinearElement(inverse_transpose(self.matrix), self.frobenius_power)


GroupElement = Union[MatrixGF, SemilinearElement]


def _as_semilinear(g: GroupElement) -> SemilinearElement:
    return g if isinstance(g, SemilinearElement) else SemilinearElement(g, 0)


def order_gl(d: int, q: int) -> int:
    return prod(q**d - q**i for i in range(d))


def order_sl(d: int, q: int) -> int:
    return order_gl(d, q) // (q - 1)


def _transvection(field: FiniteField, d: int, i: int, j: int, value: int) -> MatrixGF:
    rows = [[1 if r == c else 0 for c in range(d)] for r in range(d)]
    rows[i][j] = value
    return MatrixGF(field, tuple(tuple(r) for r in rows))


def special_linear_generators(field: FiniteField, d: int) -> List[MatrixGF]:
    """Transvections I + b E_ij over an additive basis b; they generate SL_d(q)."""
    gens = [
        _transvection(field, d, i, j, b)
        for i in range(d)
        for j in range(d)
        if i != j
        for b in field.additive_basis()
    ]
    return gens or [MatrixGF.identity(field, d)]


def general_linear_generators(field: FiniteField, d: int) -> List[MatrixGF]:
    diagonal = [[0] * d for _ in range(d)]
    for i in range(d):
        diagonal[i][i] = field.generator if i == 0 else 1
    gens = [g for g in special_linear_generators(field, d) if not g.is_identity()]
    return gens + [MatrixGF(field, tuple(tuple(r) for r in diagonal))]


def companion_matrix(field: FiniteField, coefficients: Sequence[int]) -> MatrixGF:
    """Multiplication by x on GF(q)[x]/(f) in the basis 1, x, ..., x^(d-1).

    ``coefficients`` are c_0..c_(d-1) of the monic polynomial f.
    """
    d = len(coefficients)
    rows = []
    for i in range(d - 1):
        row = [0] * d
        row[i + 1] = 1
        rows.append(tuple(row))
    rows.append(tuple(field.neg(c) for c in coefficients))
    return MatrixGF(field, tuple(rows))


@lru_cache(maxsize=None)
def singer_cycle(d: int, q: int) -> MatrixGF:
    """Companion matrix of the least primitive degree-d polynomial over GF(q)."""
    if d < 2:
        raise DomainError("Singer cycles need d >= 2")
    field = field_of_order(q)
    target = q**d - 1
    for tail in itertools.product(range(q), repeat=d - 1):
        for c0 in range(1, q):
            candidate = companion_matrix(field, (c0,) + tail)
            if candidate.has_order(target):
                log_debug(f"Singer cycle of GL_{d}({q}) from coefficients {(c0,) + tail}")
                return candidate
    raise NotFoundError(f"no Singer cycle found in GL_{d}({q})")


def find_symmetric_conjugator(x: MatrixGF) -> MatrixGF:
    """Symmetric invertible S with S^-1 x S = x^T.

    Solves x S = S x^T over symmetric S, then walks the solution space in
    lexicographic coefficient order and returns the first invertible solution.
    """
    field = x.field
    d = x.d
    if not x.is_invertible():
        raise DomainError("x must be invertible")
    unknowns = [(i, j) for i in range(d) for j in range(i, d)]
    column = {pair: index for index, pair in enumerate(unknowns)}

    def var(i: int, j: int) -> int:
        return column[(min(i, j), max(i, j))]

    equations = []
    for r in range(d):
        for c in range(d):
            row = [0] * len(unknowns)
            for t in range(d):
                # (x S)[r][c] - (S x^T)[r][c]
                row[var(t, c)] = field.add(row[var(t, c)], x.rows[r][t])
                row[var(r, t)] = field.sub(row[var(r, t)], x.rows[c][t])
            equations.append(row)
    basis = nullspace(field, equations, len(unknowns))
    if not basis:
        raise NotFoundError("x is not conjugate to its transpose by a symmetric matrix")
    enforce_limit("enumeration_cap", field.q ** len(basis), "symmetric solution space")
    for coefficients in itertools.product(range(field.q), repeat=len(basis)):
        if not any(coefficients):
            continue
        values = [0] * len(unknowns)
        for coef, vector in zip(coefficients, basis):
            if coef:
                values = [field.add(v, field.mul(coef, w)) for v, w in zip(values, vector)]
        S = MatrixGF(field, tuple(tuple(values[var(i, j)] for j in range(d)) for i in range(d)))
        if S.is_invertible():
            if S.inverse() * x * S != x.transpose():
                raise VerificationError("symmetric conjugator failed its own check")
            return S
    raise NotFoundError("no invertible symmetric solution")


class VectorSpace:
    """GF(q)^d with vectors numbered in lexicographic coordinate order."""

    def __init__(self, field: FiniteField, d: int) -> None:
        size = field.q**d
        enforce_limit("field_size", size, "vector count")
        self.field = field
        self.d = d
        self.size = size
        self.weights = field.q ** np.arange(d - 1, -1, -1, dtype=np.int64)
        codes = np.arange(size, dtype=np.int64)
        self.vectors = (codes[:, None] // self.weights[None, :]) % field.q

    def encode(self, vectors: np.ndarray) -> np.ndarray:
        return vectors @ self.weights

    def vector(self, code: int) -> Vector:
        return tuple(int(v) for v in self.vectors[code])

    def code(self, vector: Sequence[int]) -> int:
        return int(np.dot(np.asarray(vector, dtype=np.int64), self.weights))

    def transform(self, g: GroupElement, vectors: Optional[np.ndarray] = None) -> np.ndarray:
        """Images (as arrays of coordinates) of ``vectors`` under g."""
        element = _as_semilinear(g)
        f = self.field
        source = self.vectors if vectors is None else vectors
        if element.frobenius_power:
            source = f.frobenius_arrays(source, element.frobenius_power)
        matrix = element.matrix.rows
        columns = []
        for j in range(self.d):
            acc = np.zeros(len(source), dtype=np.int64)
            for i in range(self.d):
                if matrix[i][j]:
                    acc = f.add_arrays(acc, f.mul_arrays(source[:, i], matrix[i][j]))
            columns.append(acc)
        return np.stack(columns, axis=1)

    def translate(self, offset: Sequence[int]) -> np.ndarray:
        return self.field.add_arrays(self.vectors, np.asarray(offset, dtype=np.int64)[None, :])

    def scale(self, vectors: np.ndarray, scalars: np.ndarray) -> np.ndarray:
        return self.field.mul_arrays(vectors, scalars[:, None])


class OrbitPoints:
    """Orbits of the scalar group P = <g^k> on nonzero vectors.

    k = q-1 gives the nonzero vectors, k = 1 the projective points. The
    representative of an orbit scales the first nonzero coordinate into
    {g^0, ..., g^(k-1)}; points are numbered by representative code.
    """

    def __init__(self, space: VectorSpace, exponent: int) -> None:
        field = space.field
        n = field.multiplicative_order
        if exponent < 1 or n % exponent:
            raise DomainError(f"P-orbit exponent {exponent} does not divide q - 1 = {n}")
        self.space = space
        self.exponent = exponent
        nonzero = space.vectors[1:]
        canonical = self._canonical(nonzero)
        codes = space.encode(canonical)
        reps = np.unique(codes)
        self.point_of_code = np.full(space.size, -1, dtype=np.int64)
        lookup = np.full(space.size, -1, dtype=np.int64)
        lookup[reps] = np.arange(len(reps))
        self.point_of_code[1:] = lookup[codes]
        self.rep_codes = reps
        self.labels: List[Vector] = [space.vector(int(c)) for c in reps]

    def _canonical(self, vectors: np.ndarray) -> np.ndarray:
        field = self.space.field
        n = field.multiplicative_order
        first = np.argmax(vectors != 0, axis=1)
        lead = vectors[np.arange(len(vectors)), first]
        lead_log = lead - 1
        shift = lead_log - lead_log % self.exponent
        scalars = 1 + (-shift) % n
        return self.space.scale(vectors, scalars)

    def __len__(self) -> int:
        return len(self.rep_codes)

    def point(self, vector: Sequence[int]) -> int:
        return int(self.point_of_code[self.space.code(vector)])

    def permutation(self, g: GroupElement) -> Permutation:
        reps = self.space.vectors[self.rep_codes]
        images = self.space.encode(self.space.transform(g, reps))
        return Permutation(tuple(int(v) for v in self.point_of_code[images]))


ACTION_EXPONENTS = ("nonzero-vectors", "projective-points", "p-orbits")


def _orbit_points(field: FiniteField, d: int, action: str, p_exponent: Optional[int]) -> OrbitPoints:
    space = VectorSpace(field, d)
    if action == "nonzero-vectors":
        exponent = field.multiplicative_order
    elif action == "projective-points":
        exponent = 1
    elif action == "p-orbits":
        if p_exponent is None:
            raise DomainError("p-orbits needs the exponent k of P = <g^k>")
        exponent = p_exponent
    else:
        raise DomainError(f"unknown action {action!r}; use one of {ACTION_EXPONENTS}")
    return OrbitPoints(space, exponent)


def matrix_group_as_permutations(
    gens: Sequence[GroupElement],
    field: FiniteField,
    d: int,
    action: str = "nonzero-vectors",
    p_exponent: Optional[int] = None,
    known_order: Optional[int] = None,
    name: Optional[str] = None,
) -> GroupAction:
    """Permutation image of a (semi)linear group on vectors, points or P-orbits."""
    points = _orbit_points(field, d, action, p_exponent)
    perms = [points.permutation(g) for g in gens]
    group = PermutationGroup(perms, known_order=known_order, name=name)
    return GroupAction(group, labels=points.labels, description=action)


def dual_permutation(points: OrbitPoints, g: GroupElement) -> Permutation:
    """Action of g on dual vectors (hyperplanes), labelled like ``points``."""
    return points.permutation(_as_semilinear(g).dual())


def affine_group(
    field: FiniteField,
    d: int,
    linear_gens: Sequence[GroupElement],
    known_order: Optional[int] = None,
    name: Optional[str] = None,
) -> GroupAction:
    """Translations extended by ``linear_gens`` on all q^d vectors (point = code)."""
    space = VectorSpace(field, d)
    gens = []
    for j in range(d):
        for b in field.additive_basis():
            offset = [0] * d
            offset[j] = b
            gens.append(Permutation(tuple(int(v) for v in space.encode(space.translate(offset)))))
    for g in linear_gens:
        gens.append(Permutation(tuple(int(v) for v in space.encode(space.transform(g)))))
    labels = [space.vector(c) for c in range(space.size)]
    return GroupAction(PermutationGroup(gens, known_order=known_order, name=name), labels=labels, description="vectors")


QuadraticForm = Callable[[Sequence[int]], int]
BilinearForm = Callable[[Sequence[int], Sequence[int]], int]


def polar_quadratic_form(field: FiniteField, m: int, eps: str) -> QuadraticForm:
    """Sum of hyperbolic planes x_(2i) x_(2i+1); for eps '-' the last plane is
    replaced by x^2 + xy + c y^2 with c the least element making it anisotropic."""
    if eps not in ("+", "-"):
        raise DomainError("eps must be '+' or '-'")
    f = field
    anisotropic = None
    if eps == "-":
        for c in f.elements():
            if all(
                f.add(f.add(f.mul(x, x), f.mul(x, y)), f.mul(c, f.mul(y, y))) != 0
                for x in f.elements()
                for y in f.elements()
                if x or y
            ):
                anisotropic = c
                break
        assert anisotropic is not None

    def form(v: Sequence[int]) -> int:
        total = 0
        for i in range(m):
            x, y = v[2 * i], v[2 * i + 1]
            if eps == "-" and i == m - 1:
                term = f.add(f.add(f.mul(x, x), f.mul(x, y)), f.mul(anisotropic, f.mul(y, y)))
            else:
                term = f.mul(x, y)
            total = f.add(total, term)
        return total

    return form


def symplectic_form(field: FiniteField, m: int) -> BilinearForm:
    """Alternating form sum u_(2i) w_(2i+1) - u_(2i+1) w_(2i)."""
    f = field

    def form(u: Sequence[int], w: Sequence[int]) -> int:
        total = 0
        for i in range(m):
            total = f.add(total, f.sub(f.mul(u[2 * i], w[2 * i + 1]), f.mul(u[2 * i + 1], w[2 * i])))
        return total

    return form


def form_isometries(
    field: FiniteField,
    d: int,
    quadratic: Optional[QuadraticForm] = None,
    bilinear: Optional[BilinearForm] = None,
) -> List[MatrixGF]:
    """All matrices preserving a quadratic form, or a bilinear form if no Q is given.

    Rows are chosen one basis image at a time; a choice survives only if it
    keeps Q(e_i) and the polar values B(e_i, e_j) for earlier rows.
    """
    if (quadratic is None) == (bilinear is None):
        raise DomainError("pass exactly one of quadratic or bilinear")
    candidates = field.q ** (d * d)
    enforce_limit("isometry_sweep", candidates, "isometry sweep")
    f = field
    vectors = [v for v in itertools.product(range(f.q), repeat=d) if any(v)]

    def add(u: Sequence[int], w: Sequence[int]) -> Vector:
        return tuple(f.add(a, b) for a, b in zip(u, w))

    if quadratic is not None:
        q_value = {v: quadratic(v) for v in vectors}

        def polar(u: Vector, w: Vector) -> int:
            return f.sub(f.sub(quadratic(add(u, w)), q_value[u]), q_value[w])

    else:
        q_value = {}
        polar = bilinear  # type: ignore[assignment]

    basis = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    gram = [[polar(basis[i], basis[j]) for j in range(d)] for i in range(d)]
    results: List[MatrixGF] = []

    def extend(rows: List[Vector]) -> None:
        i = len(rows)
        if i == d:
            M = MatrixGF(f, tuple(rows))
            if M.is_invertible():
                results.append(M)
            return
        for w in vectors:
            if quadratic is not None and q_value[w] != q_value[basis[i]]:
                continue
            if quadratic is None and polar(w, w) != gram[i][i]:
                continue
            if all(polar(rows[j], w) == gram[j][i] for j in range(i)):
                extend(rows + [w])

    extend([])
    return results


def greedy_generators(perms: Sequence[Permutation]) -> List[Permutation]:
    """A subsequence generating the same group: keep each element not yet generated."""
    kept: List[Permutation] = []
    group: Optional[PermutationGroup] = None
    for g in perms:
        if g.is_identity():
            continue
        if group is None or not group.contains(g):
            kept.append(g)
            group = PermutationGroup(kept)
    return kept
