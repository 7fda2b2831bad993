"""Permutations of {0, ..., n-1}.

Products act on the right: ``(p * q)(i) == q(p(i))``, so ``p * q`` means
"apply p, then q". Conjugation follows the same convention,
``p.conjugate(g) == g**-1 * p * g``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple

from bidihedral_verify.utils.errors import DomainError, MalformedCyclesError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """An immutable bijection stored as its image tuple."""

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        n = len(images)
        if n == 0:
            raise DomainError("permutation degree must be positive")
        if sorted(images) != list(range(n)):
            raise DomainError(f"images {images!r} are not a bijection on 0..{n - 1}")

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> "Permutation":
        """Build without validation; callers guarantee a bijection."""
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", images)
        return perm

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree <= 0:
            raise DomainError("permutation degree must be positive")
        return cls._trusted(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise DomainError(
                f"cannot compose permutations of degree {self.degree} and {other.degree}"
            )
        right = other.images
        return Permutation._trusted(tuple([right[i] for i in self.images]))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def __pow__(self, exponent: int) -> "Permutation":
        base = self if exponent >= 0 else self.inverse()
        k = abs(exponent)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return ``g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def is_involution(self) -> bool:
        images = self.images
        return not self.is_identity() and all(images[images[i]] == i for i in range(len(images)))

    def support(self) -> List[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def smallest_moved_point(self) -> Optional[int]:
        for i, j in enumerate(self.images):
            if i != j:
                return i
        return None

    def cycles(self, include_fixed: bool = False) -> List[List[int]]:
        """Disjoint cycles, each starting at its least point, ordered by that point."""
        seen = [False] * self.degree
        result: List[List[int]] = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen[point] = True
                point = self.images[point]
            if len(cycle) > 1 or include_fixed:
                result.append(cycle)
        return result

    def cycle_type(self) -> Tuple[int, ...]:
        """Cycle lengths with fixed points counted as 1s, largest first."""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def order(self) -> int:
        return lcm(*self.cycle_type())

    def to_cycle_string(self, one_based: bool = True) -> str:
        offset = 1 if one_based else 0
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join(
            "(" + ",".join(str(p + offset) for p in cycle) + ")" for cycle in cycles
        )

    def __str__(self) -> str:
        return self.to_cycle_string()


def perm_from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    """Build the permutation with the given disjoint cycles on ``degree`` points."""
    if degree <= 0:
        raise DomainError("permutation degree must be positive")
    images = list(range(degree))
    used = set()
    for cycle in cycles:
        cycle = list(cycle)
        for point in cycle:
            if not isinstance(point, int) or point < 0 or point >= degree:
                raise DomainError(f"point {point!r} outside 0..{degree - 1}")
            if point in used:
                raise MalformedCyclesError(f"point {point} repeated in cycle list")
            used.add(point)
        for i, point in enumerate(cycle):
            images[point] = cycle[(i + 1) % len(cycle)]
    return Permutation._trusted(tuple(images))


def parse_cycles(text: str, degree: int, one_based: bool = True) -> Permutation:
    """Parse cycle notation such as ``"(1,2,3)(4,5)"``; ``"()"`` is the identity."""
    stripped = re.sub(r"\s+", "", text)
    if _CYCLE_RE.sub("", stripped):
        raise DomainError(f"cannot parse cycle notation {text!r}")
    offset = 1 if one_based else 0
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            continue
        try:
            cycles.append([int(token) - offset for token in body.split(",")])
        except ValueError as exc:
            raise DomainError(f"cannot parse cycle {body!r}") from exc
    return perm_from_cycles(degree, cycles)


def cycle_type(p: Permutation) -> Tuple[int, ...]:
    return p.cycle_type()
