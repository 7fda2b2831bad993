"""Permutation groups backed by stabilizer chains.

Chains are built by deterministic Schreier-Sims with the smallest moved point
as each new base point. When the caller already knows the group order, a
seeded product-replacement variant sifts random elements until the chain's
order reaches it, then runs the Schreier-generator test on every level. A
chain that fails the test is rebuilt deterministically, so an understated
order is reported instead of trusted.
"""

from __future__ import annotations

import random
import threading
from collections import deque
from math import prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from bidihedral_verify.utils.config import enforce_limit, get_limit
from bidihedral_verify.utils.errors import (
    DomainError,
    PreconditionError,
    VerificationError,
)
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.permutation import Permutation

RANDOM_CHAIN_SEED = 20240917
_RANDOM_SIFT_ATTEMPTS = 1000
_TRANSVERSAL_CACHE_ENTRIES = 4_000_000


class _ChainLevel:
    """One level of a stabilizer chain: base point, generators, Schreier vector."""

    __slots__ = ("point", "degree", "generators", "orbit", "_parent", "_cache", "_cache_all")

    def __init__(self, point: int, degree: int) -> None:
        self.point = point
        self.degree = degree
        self.generators: List[Permutation] = []
        self.orbit: List[int] = [point]
        self._parent: Dict[int, Optional[Tuple[int, int]]] = {point: None}
        self._cache: Dict[int, Permutation] = {point: Permutation.identity(degree)}
        self._cache_all = True

    def set_generators(self, generators: Iterable[Permutation]) -> None:
        self.generators = list(generators)
        self._rebuild()

    def add_generator(self, g: Permutation) -> None:
        self.generators.append(g)
        self._rebuild()

    def _rebuild(self) -> None:
        parent: Dict[int, Optional[Tuple[int, int]]] = {self.point: None}
        orbit = [self.point]
        for beta in orbit:
            for index, s in enumerate(self.generators):
                gamma = s.images[beta]
                if gamma not in parent:
                    parent[gamma] = (beta, index)
                    orbit.append(gamma)
        self.orbit = orbit
        self._parent = parent
        self._cache = {self.point: Permutation.identity(self.degree)}
        self._cache_all = len(orbit) * self.degree <= _TRANSVERSAL_CACHE_ENTRIES

    def __contains__(self, beta: int) -> bool:
        return beta in self._parent

    def transversal(self, beta: int) -> Permutation:
        """Return u with ``u(point) == beta``."""
        cached = self._cache.get(beta)
        if cached is not None:
            return cached
        path: List[Tuple[int, int]] = []
        node = beta
        while node not in self._cache:
            link = self._parent[node]
            assert link is not None
            path.append((node, link[1]))
            node = link[0]
        u = self._cache[node]
        for node, index in reversed(path):
            u = u * self.generators[index]
            if self._cache_all:
                self._cache[node] = u
        self._cache[beta] = u
        return u


def _sift(levels: Sequence[_ChainLevel], g: Permutation, start: int = 0) -> Tuple[Permutation, int]:
    for depth in range(start, len(levels)):
        level = levels[depth]
        beta = g.images[level.point]
        if beta not in level:
            return g, depth
        if beta != level.point:
            g = g * level.transversal(beta).inverse()
    return g, len(levels)


def _fixes_all(g: Permutation, levels: Sequence[_ChainLevel]) -> bool:
    return all(g.images[level.point] == level.point for level in levels)


def _schreier_sims(degree: int, generators: Sequence[Permutation]) -> List[_ChainLevel]:
    gens = [g for g in generators if not g.is_identity()]
    levels: List[_ChainLevel] = []
    for g in gens:
        if _fixes_all(g, levels):
            point = g.smallest_moved_point()
            assert point is not None
            levels.append(_ChainLevel(point, degree))
    for i, level in enumerate(levels):
        level.set_generators(g for g in gens if _fixes_all(g, levels[:i]))

    i = len(levels) - 1
    while i >= 0:
        found = _first_schreier_residue(levels, i)
        if found is None:
            i -= 1
            continue
        residue, depth = found
        if depth == len(levels):
            point = residue.smallest_moved_point()
            assert point is not None
            levels.append(_ChainLevel(point, degree))
        for lower in range(i + 1, depth + 1):
            levels[lower].add_generator(residue)
        i = depth
    return levels


def _first_schreier_residue(
    levels: List[_ChainLevel], i: int
) -> Optional[Tuple[Permutation, int]]:
    level = levels[i]
    for beta in list(level.orbit):
        u = level.transversal(beta)
        for s in list(level.generators):
            h = u * s * level.transversal(s.images[beta]).inverse()
            if h.is_identity():
                continue
            residue, depth = _sift(levels, h, i + 1)
            if not residue.is_identity():
                return residue, depth
    return None


class _ProductReplacement:
    """Seeded product-replacement generator of pseudo-random group elements."""

    def __init__(self, generators: Sequence[Permutation], rng: random.Random, slots: int = 10) -> None:
        self._rng = rng
        self._state = [generators[i % len(generators)] for i in range(max(slots, len(generators)))]
        self._accumulator = Permutation.identity(generators[0].degree)
        for _ in range(50):
            self.next()

    def next(self) -> Permutation:
        i, j = self._rng.sample(range(len(self._state)), 2)
        other = self._state[j] if self._rng.random() < 0.5 else self._state[j].inverse()
        self._state[i] = self._state[i] * other
        self._accumulator = self._accumulator * self._state[i]
        return self._accumulator


def _sift_and_extend(levels: List[_ChainLevel], degree: int, g: Permutation) -> None:
    residue, depth = _sift(levels, g)
    if residue.is_identity():
        return
    if depth == len(levels):
        point = residue.smallest_moved_point()
        assert point is not None
        levels.append(_ChainLevel(point, degree))
    for lower in range(depth + 1):
        levels[lower].add_generator(residue)


def _randomized_schreier_sims(
    degree: int, generators: Sequence[Permutation], target: int
) -> Optional[List[_ChainLevel]]:
    levels: List[_ChainLevel] = []
    gens = [g for g in generators if not g.is_identity()]
    if not gens:
        return levels if target == 1 else None
    for g in gens:
        _sift_and_extend(levels, degree, g)
    replacer = _ProductReplacement(gens, random.Random(RANDOM_CHAIN_SEED))
    for _ in range(_RANDOM_SIFT_ATTEMPTS):
        current = _chain_order(levels)
        if current >= target:
            break
        _sift_and_extend(levels, degree, replacer.next())
    current = _chain_order(levels)
    if current > target:
        raise VerificationError(f"group has at least {current} elements, more than the stated {target}")
    if current < target or not _is_complete(levels):
        return None
    return levels


def _is_complete(levels: List[_ChainLevel]) -> bool:
    """Every Schreier generator of every level sifts to the identity below it."""
    return all(_first_schreier_residue(levels, i) is None for i in range(len(levels)))


def _chain_order(levels: Sequence[_ChainLevel]) -> int:
    return prod(len(level.orbit) for level in levels)


class StabilizerChain:
    """Base, strong generators and transversals of a permutation group."""

    def __init__(self, degree: int, levels: List[_ChainLevel]) -> None:
        self.degree = degree
        self._levels = levels

    @property
    def base(self) -> List[int]:
        return [level.point for level in self._levels]

    @property
    def transversal_sizes(self) -> List[int]:
        return [len(level.orbit) for level in self._levels]

    @property
    def levels(self) -> Sequence[_ChainLevel]:
        return tuple(self._levels)

    def order(self) -> int:
        return _chain_order(self._levels)

    def sift(self, g: Permutation) -> Tuple[Permutation, int]:
        return _sift(self._levels, g)

    def contains(self, g: Permutation) -> bool:
        residue, _ = _sift(self._levels, g)
        return residue.is_identity()

    def strong_generators(self) -> List[Permutation]:
        seen = set()
        result = []
        for level in self._levels:
            for g in level.generators:
                if g not in seen:
                    seen.add(g)
                    result.append(g)
        return result

    def random_element(self, rng: random.Random) -> Permutation:
        g = Permutation.identity(self.degree)
        for level in reversed(self._levels):
            g = g * level.transversal(rng.choice(level.orbit))
        return g

    def elements(self) -> List[Permutation]:
        """All elements; the identity comes first."""
        current = [Permutation.identity(self.degree)]
        for level in reversed(self._levels):
            coset_reps = [level.transversal(beta) for beta in level.orbit]
            current = [h * u for h in current for u in coset_reps]
        return current


class PermutationGroup:
    """A finitely generated group of permutations of {0, ..., degree-1}."""

    def __init__(
        self,
        generators: Sequence[Permutation],
        known_order: Optional[int] = None,
        name: Optional[str] = None,
    ) -> None:
        gens = tuple(generators)
        if not gens:
            raise DomainError("a group needs at least one generator (pass the identity for the trivial group)")
        degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DomainError(f"generator of degree {g.degree} in a group of degree {degree}")
        self._generators = gens
        self._degree = degree
        self._known_order = known_order
        self._chain: Optional[StabilizerChain] = None
        self._lock = threading.Lock()
        self._transversals: Dict[int, Dict[int, Permutation]] = {}
        self.name = name

    def __repr__(self) -> str:
        label = self.name or "PermutationGroup"
        return f"<{label} degree={self._degree} generators={len(self._generators)}>"

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> Tuple[Permutation, ...]:
        return self._generators

    def identity(self) -> Permutation:
        return Permutation.identity(self._degree)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = self._build_chain()
        return self._chain

    def _build_chain(self) -> StabilizerChain:
        levels = None
        if self._known_order is not None:
            levels = _randomized_schreier_sims(self._degree, self._generators, self._known_order)
        if levels is None:
            levels = _schreier_sims(self._degree, self._generators)
            if self._known_order is not None and _chain_order(levels) != self._known_order:
                raise VerificationError(
                    f"group order {_chain_order(levels)} differs from the stated {self._known_order}"
                )
        chain = StabilizerChain(self._degree, levels)
        log_debug(
            f"stabilizer chain: degree {self._degree}, order {chain.order()}, base length {len(levels)}"
        )
        return chain

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self._generators)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self._degree:
            raise DomainError(f"element of degree {g.degree} tested against a group of degree {self._degree}")
        return self.chain.contains(g)

    __contains__ = contains

    def elements(self, cap: Optional[int] = None) -> List[Permutation]:
        enforce_limit("enumeration_cap", self.order(), "group order", cap)
        return self.chain.elements()

    def random_element(self, rng: random.Random) -> Permutation:
        return self.chain.random_element(rng)

    def transversal(self, point: int) -> Dict[int, Permutation]:
        """Map each point of the orbit of ``point`` to an element carrying ``point`` there."""
        self._check_point(point)
        cached = self._transversals.get(point)
        if cached is not None:
            return cached
        result = {point: self.identity()}
        queue = deque([point])
        while queue:
            beta = queue.popleft()
            u = result[beta]
            for s in self._generators:
                gamma = s.images[beta]
                if gamma not in result:
                    result[gamma] = u * s
                    queue.append(gamma)
        self._transversals[point] = result
        return result

    def orbit(self, point: int) -> List[int]:
        self._check_point(point)
        seen = {point}
        queue = deque([point])
        while queue:
            beta = queue.popleft()
            for s in self._generators:
                gamma = s.images[beta]
                if gamma not in seen:
                    seen.add(gamma)
                    queue.append(gamma)
        return sorted(seen)

    def orbits(self) -> List[List[int]]:
        remaining = set(range(self._degree))
        result = []
        for point in range(self._degree):
            if point in remaining:
                orbit = self.orbit(point)
                remaining.difference_update(orbit)
                result.append(orbit)
        return result

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self._degree

    def stabilizer(self, point: int) -> "PermutationGroup":
        """Point stabilizer from Schreier generators, with its order fixed by orbit-stabilizer."""
        self._check_point(point)
        if all(g.images[point] == point for g in self._generators):
            return self
        chain = self.chain
        orbit_size = len(self.orbit(point))
        target = self.order() // orbit_size
        if chain.base and chain.base[0] == point:
            gens = list(chain.levels[1].generators) if len(chain.levels) > 1 else []
        else:
            transversal = self.transversal(point)
            seen = set()
            gens = []
            for beta, u in transversal.items():
                for s in self._generators:
                    h = u * s * transversal[s.images[beta]].inverse()
                    if not h.is_identity() and h not in seen:
                        seen.add(h)
                        gens.append(h)
        return PermutationGroup(gens or [self.identity()], known_order=target)

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return self._degree == other.degree and all(other.contains(g) for g in self._generators)

    def is_normal_in(self, other: "PermutationGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        return all(self.contains(g.conjugate(s)) for g in self._generators for s in other.generators)

    def subgroup_generated(self, elements: Sequence[Permutation]) -> "PermutationGroup":
        for g in elements:
            if not self.contains(g):
                raise PreconditionError(f"{g} is not an element of the group")
        return PermutationGroup(list(elements) or [self.identity()])

    def _check_point(self, point: int) -> None:
        if not 0 <= point < self._degree:
            raise DomainError(f"point {point} outside 0..{self._degree - 1}")


def group_from_generators(
    gens: Sequence[Permutation], known_order: Optional[int] = None, name: Optional[str] = None
) -> PermutationGroup:
    return PermutationGroup(gens, known_order=known_order, name=name)


def trivial_group(degree: int) -> PermutationGroup:
    return PermutationGroup([Permutation.identity(degree)], known_order=1)


def order(G: PermutationGroup) -> int:
    return G.order()


def contains(G: PermutationGroup, g: Permutation) -> bool:
    return G.contains(g)


def normal_closure(G: PermutationGroup, g: Permutation) -> PermutationGroup:
    """Smallest normal subgroup of G containing g."""
    if not G.contains(g):
        raise PreconditionError(f"{g} is not an element of the group")
    if g.is_identity():
        return trivial_group(G.degree)
    gens = [g]
    closure = PermutationGroup(gens)
    pending = deque(gens)
    while pending:
        h = pending.popleft()
        for s in G.generators:
            conjugate = h.conjugate(s)
            if not closure.contains(conjugate):
                gens.append(conjugate)
                closure = PermutationGroup(gens)
                pending.append(conjugate)
    return closure


def conjugacy_classes(G: PermutationGroup, cap: Optional[int] = None) -> List[Tuple[Permutation, int]]:
    """(representative, class size) pairs, identity first."""
    elements = G.elements(cap)
    identity = G.identity()
    inverses = [(s.inverse(), s) for s in G.generators]
    seen = {identity}
    classes = [(identity, 1)]
    for x in elements:
        if x in seen:
            continue
        members = [x]
        seen.add(x)
        for y in members:
            for s_inv, s in inverses:
                z = s_inv * y * s
                if z not in seen:
                    seen.add(z)
                    members.append(z)
        classes.append((x, len(members)))
    return classes


def conjugacy_class_reps(G: PermutationGroup, cap: Optional[int] = None) -> List[Permutation]:
    return [rep for rep, _ in conjugacy_classes(G, cap)]


def _element_key(H: PermutationGroup) -> frozenset:
    return frozenset(h.images for h in H.elements())


def are_conjugate_subgroups(
    G: PermutationGroup,
    A: PermutationGroup,
    B: PermutationGroup,
    cap: Optional[int] = None,
    sweep_limit: Optional[int] = None,
) -> Optional[Permutation]:
    """Return g in G with A^g = B, or None.

    Small groups are swept element by element. Larger ones walk the orbit of A
    under conjugation by the generators of G; the Schreier tree of that orbit
    is a transversal of the normalizer of A.
    """
    for H in (A, B):
        if not H.is_subgroup_of(G):
            raise PreconditionError("subgroup is not contained in the ambient group")
    size = G.order()
    limit = enforce_limit("enumeration_cap", size, "group order", cap)
    if A.order() != B.order():
        return None
    if A.is_subgroup_of(B):
        return G.identity()
    sweep = sweep_limit if sweep_limit is not None else get_limit("conjugacy_sweep_limit")
    if size <= sweep:
        for g in G.elements(limit):
            if all(B.contains(a.conjugate(g)) for a in A.generators):
                return g
        return None
    return _conjugator_by_orbit(G, A, B)


def _conjugator_by_orbit(G: PermutationGroup, A: PermutationGroup, B: PermutationGroup) -> Optional[Permutation]:
    target = _element_key(B)
    start = [a for a in A.elements()]
    key = frozenset(a.images for a in start)
    conjugators = {key: G.identity()}
    queue = deque([(start, key)])
    while queue:
        members, key = queue.popleft()
        for s in G.generators:
            s_inv = s.inverse()
            image = [s_inv * m * s for m in members]
            image_key = frozenset(m.images for m in image)
            if image_key in conjugators:
                continue
            conjugators[image_key] = conjugators[key] * s
            if image_key == target:
                return conjugators[image_key]
            queue.append((image, image_key))
    return None


def subgroup_conjugation_orbit(G: PermutationGroup, H: PermutationGroup) -> set:
    """Element-set keys of all G-conjugates of H."""
    start = H.elements()
    first = frozenset(h.images for h in start)
    seen = {first}
    queue = deque([start])
    while queue:
        members = queue.popleft()
        for s in G.generators:
            s_inv = s.inverse()
            image = [s_inv * m * s for m in members]
            key = frozenset(m.images for m in image)
            if key not in seen:
                seen.add(key)
                queue.append(image)
    return seen
