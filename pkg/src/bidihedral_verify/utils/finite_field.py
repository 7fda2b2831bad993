"""Finite fields GF(p^e) and the semilinear group GammaL_1.

Field elements are plain ints in canonical order: 0 is zero and ``k >= 1`` is
g^(k-1) for the fixed primitive element g, so ``range(q)`` lists the field as
(0, 1, g, g^2, ...). Multiplication is addition of logarithms; addition goes
through a Zech logarithm table built with numpy.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime, primitive_root

from bidihedral_verify.utils.config import enforce_limit
from bidihedral_verify.utils.errors import DomainError
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.parallel import run_parallel
from bidihedral_verify.utils.perm_group import PermutationGroup
from bidihedral_verify.utils.permutation import Permutation


def split_prime_power(q: int) -> Tuple[int, int]:
    """Return (p, e) with q = p^e, or raise DomainError."""
    if q < 2:
        raise DomainError(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise DomainError(f"{q} is not a prime power")
    ((p, e),) = factors.items()
    return int(p), int(e)


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> List[int]:
    """Multiply coefficient lists (low degree first) modulo a monic polynomial."""
    e = len(modulus) - 1
    product = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                product[i + j] += x * y
    for k in range(len(product) - 1, e - 1, -1):
        coef = product[k] % p
        if coef:
            for i in range(e):
                product[k - e + i] -= coef * modulus[i]
        product[k] = 0
    return [c % p for c in product[:e]]


def _poly_powmod(exponent: int, modulus: Sequence[int], p: int) -> List[int]:
    e = len(modulus) - 1
    result = [1] + [0] * (e - 1)
    base = [0, 1] + [0] * (e - 2)
    while exponent:
        if exponent & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        exponent >>= 1
    return result


def _is_primitive(modulus: Sequence[int], p: int, group_order: int, primes: Sequence[int]) -> bool:
    one = [1] + [0] * (len(modulus) - 2)
    if _poly_powmod(group_order, modulus, p) != one:
        return False
    return all(_poly_powmod(group_order // r, modulus, p) != one for r in primes)


def _least_primitive_modulus(p: int, e: int) -> Tuple[int, ...]:
    """Least monic primitive polynomial of degree e, ordered by sum c_i p^i."""
    group_order = p**e - 1
    primes = sorted(factorint(group_order))
    for code in range(1, p**e):
        coeffs = [(code // p**i) % p for i in range(e)]
        if coeffs[0] == 0:
            continue
        modulus = coeffs + [1]
        if _is_primitive(modulus, p, group_order, primes):
            return tuple(modulus)
    raise DomainError(f"no primitive polynomial of degree {e} over GF({p})")


class FiniteField:
    """GF(p^e) with log/Zech tables; elements are canonical-order ints."""

    def __init__(self, p: int, e: int) -> None:
        self.p = p
        self.e = e
        self.q = p**e
        self.multiplicative_order = self.q - 1
        n = self.multiplicative_order

        if e == 1:
            g = int(primitive_root(p)) if p > 2 else 1
            self.modulus: Tuple[int, ...] = ((-g) % p, 1)
            codes = [1] * n
            for k in range(1, n):
                codes[k] = codes[k - 1] * g % p
        else:
            self.modulus = _least_primitive_modulus(p, e)
            codes = [0] * n
            vector = [1] + [0] * (e - 1)
            for k in range(n):
                codes[k] = sum(c * p**i for i, c in enumerate(vector))
                top = vector[-1]
                vector = [0] + vector[:-1]
                if top:
                    vector = [(v - top * m) % p for v, m in zip(vector, self.modulus)]

        self._exp_code = np.array(codes, dtype=np.int64)
        index_of_code = np.zeros(self.q, dtype=np.int64)
        index_of_code[self._exp_code] = np.arange(1, n + 1)
        self._index_of_code = index_of_code
        low = self._exp_code % p
        plus_one = self._exp_code - low + (low + 1) % p
        # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
        self._zech = index_of_code[plus_one] - 1
        self._half = n // 2 if p != 2 else 0
        log_debug(f"GF({self.q}) built with modulus {self.modulus}")

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    zero = 0
    one = 1

    @property
    def generator(self) -> int:
        return 1 + (1 % self.multiplicative_order)

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise DomainError(f"{a} is not an element of {self}")

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        n = self.multiplicative_order
        i, j = a - 1, b - 1
        z = int(self._zech[(j - i) % n])
        return 0 if z < 0 else 1 + (i + z) % n

    def neg(self, a: int) -> int:
        if a == 0 or self._half == 0:
            return a
        return 1 + (a - 1 + self._half) % self.multiplicative_order

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return 1 + (a + b - 2) % self.multiplicative_order

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero has no inverse")
        return 1 + (1 - a) % self.multiplicative_order

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise DomainError("zero has no inverse")
            return 1 if k == 0 else 0
        return 1 + ((a - 1) * k) % self.multiplicative_order

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        return self.pow(a, self.p ** (k % self.e))

    def log(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero has no logarithm")
        return a - 1

    def exp(self, k: int) -> int:
        return 1 + k % self.multiplicative_order

    def is_square(self, a: int) -> bool:
        return a == 0 or self.p == 2 or (a - 1) % 2 == 0

    def element_order(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero has no multiplicative order")
        n = self.multiplicative_order
        return n // gcd(a - 1, n)

    def from_int(self, value: int) -> int:
        """Image of an integer in the prime subfield."""
        return int(self._index_of_code[value % self.p])

    def from_coefficients(self, coefficients: Sequence[int]) -> int:
        """Element with the given polynomial-basis coordinates (low degree first)."""
        if len(coefficients) != self.e:
            raise DomainError(f"expected {self.e} coefficients")
        code = sum((c % self.p) * self.p**i for i, c in enumerate(coefficients))
        return int(self._index_of_code[code])

    def coefficients(self, a: int) -> List[int]:
        code = 0 if a == 0 else int(self._exp_code[a - 1])
        return [(code // self.p**i) % self.p for i in range(self.e)]

    def additive_basis(self) -> List[int]:
        """1, g, ..., g^(e-1): a basis of the field over its prime subfield."""
        return [self.exp(i) for i in range(self.e)]

    # numpy versions of the scalar operations, used by the vector-space actions

    def mul_arrays(self, a: np.ndarray, b) -> np.ndarray:
        n = self.multiplicative_order
        b = np.asarray(b)
        return np.where((a == 0) | (b == 0), 0, 1 + (a + b - 2) % n)

    def add_arrays(self, a: np.ndarray, b) -> np.ndarray:
        n = self.multiplicative_order
        b = np.broadcast_to(np.asarray(b), np.shape(a))
        z = self._zech[(b - a) % n]
        summed = np.where(z < 0, 0, 1 + (a - 1 + z) % n)
        return np.where(a == 0, b, np.where(b == 0, a, summed))

    def neg_arrays(self, a: np.ndarray) -> np.ndarray:
        if self._half == 0:
            return a
        return np.where(a == 0, 0, 1 + (a - 1 + self._half) % self.multiplicative_order)

    def inv_arrays(self, a: np.ndarray) -> np.ndarray:
        return np.where(a == 0, 0, 1 + (1 - a) % self.multiplicative_order)

    def frobenius_arrays(self, a: np.ndarray, k: int) -> np.ndarray:
        power = self.p ** (k % self.e)
        return np.where(a == 0, 0, 1 + ((a - 1) * power) % self.multiplicative_order)


@lru_cache(maxsize=None)
def _build_field(p: int, e: int) -> FiniteField:
    return FiniteField(p, e)


def make_field(p: int, e: int = 1) -> FiniteField:
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if e < 1:
        raise DomainError("field degree must be positive")
    enforce_limit("field_size", p**e, "field size")
    return _build_field(p, e)


def field_of_order(q: int) -> FiniteField:
    return make_field(*split_prime_power(q))


def gamma_l1(p: int, n: int) -> PermutationGroup:
    """GammaL_1(p^n) on the p^n - 1 nonzero field elements.

    Point j is g^j; x is multiplication by g (j -> j + 1) and y is the
    Frobenius map (j -> p*j), so x^y = x^p.
    """
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    enforce_limit("field_size", p**n, "field size")
    size = p**n - 1
    x = Permutation._trusted(tuple((j + 1) % size for j in range(size)))
    y = Permutation._trusted(tuple((p * j) % size for j in range(size)))
    return PermutationGroup([x, y], known_order=size * n, name=f"GammaL1({p}^{n})")


AffineMap = Tuple[int, int]


def _compose(first: AffineMap, second: AffineMap, modulus: int) -> AffineMap:
    """Apply ``first`` then ``second`` to exponents j -> a*j + b."""
    a1, b1 = first
    a2, b2 = second
    return (a2 * a1) % modulus, (a2 * b1 + b2) % modulus


def _mdq_slice(k: int, p: int, degree: int, m: int, scalar_step: int) -> List[Tuple[int, int]]:
    modulus = p**degree - 1
    scale = pow(p, k, modulus) if modulus > 1 else 0
    scale_inverse = pow(p, degree - k, modulus) if modulus > 1 else 0
    power = (1, m % modulus)
    solutions = []
    for i in range(modulus):
        g = (scale, (i * scale) % modulus)
        g_inverse = (scale_inverse, (-i) % modulus)
        # x^m (x^m)^g = x^m g^-1 x^m g
        word = _compose(_compose(_compose(power, g_inverse, modulus), power, modulus), g, modulus)
        if word[0] == 1 % modulus and word[1] % scalar_step == 0:
            solutions.append((i, k))
    return solutions


def verify_mdq(d: int, q: int, m: int, jobs: int = 1) -> List[Tuple[int, int]]:
    """Every g = x^i y^k in GammaL_1(p^(de)) with x^m (x^m)^g in Z.

    Z is generated by x^((q^d-1)/(q-1)). Elements act on exponents of the
    primitive element: x^i y^k is j -> (j + i) p^k. The k-slices may run on
    ``jobs`` worker threads; solutions are returned sorted.
    """
    if d < 2:
        raise DomainError("d must be at least 2")
    if m not in (1, 2, 4):
        raise DomainError("m must be 1, 2 or 4")
    p, e = split_prime_power(q)
    degree = d * e
    enforce_limit("field_size", p**degree, "field size")
    scalar_step = (q**d - 1) // (q - 1)
    slices = run_parallel(
        lambda k: _mdq_slice(k, p, degree, m, scalar_step),
        list(range(degree)),
        max_workers=jobs,
        label="mdq slice",
    )
    return sorted(solution for chunk in slices for solution in chunk)
