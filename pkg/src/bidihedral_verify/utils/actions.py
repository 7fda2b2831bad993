"""Group actions: orbits, stabilizers, regularity grades and block systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from bidihedral_verify.utils.config import enforce_limit
from bidihedral_verify.utils.errors import DomainError, PreconditionError
from bidihedral_verify.utils.perm_group import (
    PermutationGroup,
    conjugacy_class_reps,
    normal_closure,
)
from bidihedral_verify.utils.permutation import Permutation


@dataclass
class GroupAction:
    """A permutation group acting on {0, ..., domain_size-1}.

    ``labels`` records where each point came from (a coset representative, a
    block, a vector orbit); ``kernel_order`` is the order of the kernel of the
    action it was induced from, 1 for a faithful action.
    """

    group: PermutationGroup
    labels: Optional[Sequence[Any]] = None
    description: str = "natural"
    kernel_order: int = 1

    def __post_init__(self) -> None:
        if self.labels is not None and len(self.labels) != self.group.degree:
            raise DomainError(
                f"{len(self.labels)} labels for an action on {self.group.degree} points"
            )

    @property
    def domain_size(self) -> int:
        return self.group.degree

    @property
    def faithful(self) -> bool:
        return self.kernel_order == 1

    def label_map(self) -> Dict[int, Any]:
        if self.labels is None:
            return {i: i for i in range(self.domain_size)}
        return dict(enumerate(self.labels))


@dataclass(frozen=True)
class BlockSystem:
    """An invariant partition into equal-sized blocks."""

    blocks: Tuple[Tuple[int, ...], ...]
    _owner: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        if not blocks or any(not b for b in blocks):
            raise DomainError("block systems need nonempty blocks")
        if len({len(b) for b in blocks}) != 1:
            raise DomainError("blocks must all have the same size")
        owner: Dict[int, int] = {}
        for index, block in enumerate(blocks):
            for point in block:
                if point in owner:
                    raise DomainError(f"point {point} lies in two blocks")
                owner[point] = index
        if sorted(owner) != list(range(len(owner))):
            raise DomainError("blocks must cover 0..n-1")
        object.__setattr__(self, "_owner", owner)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def domain_size(self) -> int:
        return len(self._owner)

    def block_of(self, point: int) -> int:
        return self._owner[point]

    def is_trivial(self) -> bool:
        return self.block_size == 1 or len(self.blocks) == 1

    def is_invariant_under(self, group: PermutationGroup) -> bool:
        for g in group.generators:
            for block in self.blocks:
                target = self._owner[g.images[block[0]]]
                if any(self._owner[g.images[p]] != target for p in block):
                    return False
        return True


def natural_action(group: PermutationGroup) -> GroupAction:
    return GroupAction(group)


def orbits(action: GroupAction) -> List[List[int]]:
    return action.group.orbits()


def is_transitive(action: GroupAction) -> bool:
    return action.group.is_transitive()


def _require_transitive(action: GroupAction) -> None:
    if not action.group.is_transitive():
        raise PreconditionError("the action is not transitive")


def point_stabilizer(action: GroupAction, alpha: int) -> PermutationGroup:
    group = action.group
    stab = group.stabilizer(alpha)
    if len(group.orbit(alpha)) * stab.order() != group.order():
        raise PreconditionError(f"orbit-stabilizer fails at point {alpha}")
    return stab


def orbit_of_pairs(action: GroupAction, pair: Tuple[int, int]) -> List[Tuple[int, int]]:
    """The orbit of an ordered pair, sorted."""
    seen = {pair}
    pending = [pair]
    for a, b in pending:
        for g in action.group.generators:
            image = (g.images[a], g.images[b])
            if image not in seen:
                seen.add(image)
                pending.append(image)
    return sorted(seen)


def is_semiregular(action: GroupAction, H: PermutationGroup) -> bool:
    if H.degree != action.domain_size:
        raise DomainError("subgroup acts on a different domain")
    size = H.order()
    return all(len(orbit) == size for orbit in H.orbits())


def is_regular_subgroup(action: GroupAction, H: PermutationGroup) -> bool:
    return is_semiregular(action, H) and len(H.orbits()) == 1


def is_biregular(action: GroupAction, H: PermutationGroup) -> bool:
    return is_semiregular(action, H) and len(H.orbits()) == 2


def _block_system_from_pair(group: PermutationGroup, a: int, b: int) -> List[int]:
    """Finest invariant partition joining a and b, as a root array (union-find)."""
    n = group.degree
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = [(a, b)]
    parent[find(b)] = find(a)
    while pending:
        x, y = pending.pop()
        for g in group.generators:
            u, v = find(g.images[x]), find(g.images[y])
            if u != v:
                parent[max(u, v)] = min(u, v)
                pending.append((g.images[x], g.images[y]))
    return [find(x) for x in range(n)]


def _partition(roots: List[int]) -> BlockSystem:
    classes: Dict[int, List[int]] = {}
    for point, root in enumerate(roots):
        classes.setdefault(root, []).append(point)
    return BlockSystem(tuple(tuple(c) for c in classes.values()))


def _sort_systems(systems: List[BlockSystem]) -> List[BlockSystem]:
    return sorted(systems, key=lambda s: (s.block_size, s.blocks[0]))


def minimal_blocks(action: GroupAction) -> List[BlockSystem]:
    """All minimal nontrivial block systems; empty iff the action is primitive."""
    _require_transitive(action)
    group = action.group
    found: Dict[Tuple[int, ...], BlockSystem] = {}
    for beta in range(1, action.domain_size):
        system = _partition(_block_system_from_pair(group, 0, beta))
        if len(system.blocks) > 1:
            found.setdefault(system.blocks[system.block_of(0)], system)
    first_blocks = {key: set(key) for key in found}
    minimal = [
        system
        for key, system in found.items()
        if not any(other < first_blocks[key] for other in first_blocks.values())
    ]
    return _sort_systems(minimal)


def is_primitive(action: GroupAction) -> bool:
    return not minimal_blocks(action)


def _normal_closures(action: GroupAction, cap: Optional[int]) -> List[PermutationGroup]:
    group = action.group
    limit = enforce_limit("enumeration_cap", group.order(), "group order", cap)
    reps = conjugacy_class_reps(group, limit)
    return [normal_closure(group, g) for g in reps[1:]]


def is_quasiprimitive(action: GroupAction, cap: Optional[int] = None) -> bool:
    _require_transitive(action)
    return all(N.is_transitive() for N in _normal_closures(action, cap))


def is_biquasiprimitive(action: GroupAction, cap: Optional[int] = None) -> bool:
    _require_transitive(action)
    orbit_counts = [len(N.orbits()) for N in _normal_closures(action, cap)]
    return all(count <= 2 for count in orbit_counts) and 2 in orbit_counts


def induced_block_action(action: GroupAction, blocks: BlockSystem) -> GroupAction:
    """Action on block indices; ``kernel_order`` reports the kernel size."""
    group = action.group
    if blocks.domain_size != action.domain_size:
        raise DomainError("block system covers a different domain")
    if not blocks.is_invariant_under(group):
        raise PreconditionError("partition is not invariant under the group")
    gens = [
        Permutation._trusted(
            tuple(blocks.block_of(g.images[block[0]]) for block in blocks.blocks)
        )
        for g in group.generators
    ]
    induced = PermutationGroup(gens)
    return GroupAction(
        induced,
        labels=list(blocks.blocks),
        description="blocks",
        kernel_order=group.order() // induced.order(),
    )


def maximal_block_system(action: GroupAction) -> Optional[BlockSystem]:
    """A maximal nontrivial block system, or None for a primitive action."""
    _require_transitive(action)
    current = action
    composed: Optional[List[Tuple[int, ...]]] = None
    while True:
        systems = minimal_blocks(current)
        if not systems:
            break
        chosen = systems[0]
        if composed is None:
            composed = list(chosen.blocks)
        else:
            composed = [
                tuple(sorted(p for index in block for p in composed[index]))
                for block in chosen.blocks
            ]
        current = induced_block_action(current, chosen)
    return BlockSystem(tuple(composed)) if composed is not None else None


def block_dichotomy(blocks: BlockSystem, orbit0: Sequence[int], orbit1: Sequence[int]) -> str:
    """"inside" if every block lies in one orbit, "across" if every block meets both."""
    side0, side1 = set(orbit0), set(orbit1)
    inside = all(set(b) <= side0 or set(b) <= side1 for b in blocks.blocks)
    across = all(side0.intersection(b) and side1.intersection(b) for b in blocks.blocks)
    if inside:
        return "inside"
    if across:
        return "across"
    return "mixed"


def coset_key(k_elements: Sequence[Permutation], x: Permutation) -> Tuple[int, ...]:
    """Canonical key of the right coset Kx: its least image tuple."""
    return min((k * x).images for k in k_elements)


def coset_action(G: PermutationGroup, K: PermutationGroup, cap: Optional[int] = None) -> GroupAction:
    """Right-multiplication action of G on the right cosets of K.

    Each coset is keyed by its least image tuple; cosets are numbered in key
    order and ``labels`` holds one representative per coset.
    """
    if not K.is_subgroup_of(G):
        raise PreconditionError("K is not a subgroup of G")
    k_elements = K.elements(cap)
    index = G.order() // K.order()
    enforce_limit("orbital_domain", index, "coset count")

    def key(x: Permutation) -> Tuple[int, ...]:
        return coset_key(k_elements, x)

    identity = G.identity()
    reps: Dict[Tuple[int, ...], Permutation] = {key(identity): identity}
    pending = [identity]
    for x in pending:
        for s in G.generators:
            y = x * s
            k = key(y)
            if k not in reps:
                reps[k] = y
                pending.append(y)
    ordered = sorted(reps)
    position = {k: i for i, k in enumerate(ordered)}
    labels = [reps[k] for k in ordered]
    gens = [
        Permutation._trusted(tuple(position[key(x * s)] for x in labels))
        for s in G.generators
    ]
    image = PermutationGroup(gens)
    return GroupAction(
        image,
        labels=labels,
        description="cosets",
        kernel_order=G.order() // image.order(),
    )
