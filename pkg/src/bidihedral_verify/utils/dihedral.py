"""Dihedral groups D_2n and their subgroup lattices.

Elements are pairs ``(i, s)`` standing for a^i b^s with a of order n, b an
involution and b a b = a^-1.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

from bidihedral_verify.utils.errors import DomainError
from bidihedral_verify.utils.perm_group import PermutationGroup
from bidihedral_verify.utils.permutation import Permutation

Element = Tuple[int, int]
Subgroup = FrozenSet[Element]


def _multiply(n: int, x: Element, y: Element) -> Element:
    i, s = x
    j, t = y
    return ((i + (-j if s else j)) % n, s ^ t)


def _elements(n: int) -> List[Element]:
    return [(i, s) for s in (0, 1) for i in range(n)]


def dihedral_group(n: int) -> PermutationGroup:
    """D_2n in its right regular action on 2n points; a^i b^s is point i + s*n."""
    if n < 1:
        raise DomainError("dihedral groups need n >= 1")
    elements = _elements(n)
    position = {x: index for index, x in enumerate(elements)}
    gens = [
        Permutation._trusted(tuple(position[_multiply(n, x, g)] for x in elements))
        for g in ((1 % n, 0), (0, 1))
    ]
    return PermutationGroup(gens, known_order=2 * n, name=f"D{2 * n}")


def _closure(n: int, generators: Sequence[Element]) -> Subgroup:
    members = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = _multiply(n, x, g)
            if y not in members:
                members.add(y)
                frontier.append(y)
    return frozenset(members)


@lru_cache(maxsize=None)
def dihedral_subgroups(n: int) -> Tuple[Subgroup, ...]:
    """Every subgroup of D_2n, as element sets, ordered by size then content."""
    elements = _elements(n)
    found = {_closure(n, [x]) for x in elements}
    found.update(_closure(n, [x, y]) for x, y in itertools.combinations(elements, 2))
    return tuple(sorted(found, key=lambda h: (len(h), sorted(h))))


@lru_cache(maxsize=None)
def normal_subgroups(n: int) -> Tuple[Subgroup, ...]:
    elements = _elements(n)
    inverse = {x: next(y for y in elements if _multiply(n, x, y) == (0, 0)) for x in elements}

    def is_normal(h: Subgroup) -> bool:
        return all(_multiply(n, _multiply(n, inverse[g], x), g) in h for g in elements for x in h)

    return tuple(h for h in dihedral_subgroups(n) if is_normal(h))


def intersection_contains_normal(n: int, subgroups: Sequence[Subgroup]) -> bool:
    """True iff the intersection contains a nontrivial normal subgroup of D_2n."""
    common = frozenset.intersection(*subgroups)
    return any(len(N) > 1 and N <= common for N in normal_subgroups(n))


def equal_order_tuples(n: int, t: int) -> List[Tuple[Subgroup, ...]]:
    """All t-element combinations (with repetition) of equal-order subgroups of order >= 3."""
    by_order = {}
    for h in dihedral_subgroups(n):
        if len(h) >= 3:
            by_order.setdefault(len(h), []).append(h)
    result: List[Tuple[Subgroup, ...]] = []
    for group in by_order.values():
        result.extend(itertools.combinations_with_replacement(group, t))
    return result


def check_intersection_property(
    max_n: int = 20,
    exhaustive_t: Sequence[int] = (2, 3),
    random_tuples: int = 100,
    max_random_t: int = 6,
    seed: int = 0,
) -> Tuple[int, int]:
    """Test equal-order intersections in D_2n for n <= max_n.

    Returns (tuples checked, violations).
    """
    checked = 0
    violations = 0
    for n in range(2, max_n + 1):
        for t in exhaustive_t:
            for combo in equal_order_tuples(n, t):
                checked += 1
                if not intersection_contains_normal(n, combo):
                    violations += 1
    rng = random.Random(seed)
    for _ in range(random_tuples):
        n = rng.randint(2, max_n)
        pools = [
            [h for h in dihedral_subgroups(n) if len(h) == size]
            for size in sorted({len(h) for h in dihedral_subgroups(n) if len(h) >= 3})
        ]
        pool = rng.choice(pools)
        t = rng.randint(2, max_random_t)
        combo = [rng.choice(pool) for _ in range(t)]
        checked += 1
        if not intersection_contains_normal(n, combo):
            violations += 1
    return checked, violations
