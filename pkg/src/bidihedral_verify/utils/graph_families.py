"""Graph families with the groups that certify their symmetry.

Every builder returns a CertifiedGraph whose action is checked to preserve
the edges. ``build_family`` parses the ``name:key=value,...`` grammar used
by the command line and the manifests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from bidihedral_verify.utils.actions import GroupAction, coset_action, coset_key, point_stabilizer
from bidihedral_verify.utils.config import enforce_limit
from bidihedral_verify.utils.errors import (
    CapacityError,
    DomainError,
    PreconditionError,
    VerificationError,
)
from bidihedral_verify.utils.finite_field import FiniteField, field_of_order
from bidihedral_verify.utils.graph_analysis import are_isomorphic, is_arc_transitive, is_connected
from bidihedral_verify.utils.graph_io import load_packaged_group
from bidihedral_verify.utils.graphs import CertifiedGraph, SimpleGraph
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.matrix_groups import (
    MatrixGF,
    OrbitPoints,
    SemilinearElement,
    VectorSpace,
    affine_group,
    dual_permutation,
    find_symmetric_conjugator,
    form_isometries,
    general_linear_generators,
    greedy_generators,
    order_gl,
    polar_quadratic_form,
    singer_cycle,
    special_linear_generators,
)
from bidihedral_verify.utils.perm_group import PermutationGroup
from bidihedral_verify.utils.permutation import Permutation


def _symmetric_generators(points: Sequence[int], degree: int) -> List[Permutation]:
    """An n-cycle and a transposition on ``points``; the identity when |points| < 2."""
    images = list(range(degree))
    if len(points) < 2:
        return [Permutation.identity(degree)]
    for i, p in enumerate(points):
        images[p] = points[(i + 1) % len(points)]
    swap = list(range(degree))
    swap[points[0]], swap[points[1]] = points[1], points[0]
    return [Permutation(tuple(images)), Permutation(tuple(swap))]


def _graph_facts(graph: SimpleGraph) -> Dict[str, Any]:
    return {"vertices": graph.n, "edges": graph.edge_count(), "valency": graph.valency()}


# -- elementary families ---------------------------------------------------


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, itertools.combinations(range(n), 2))


def complete_bipartite(n: int, m: Optional[int] = None) -> SimpleGraph:
    """K_{n,m} with parts 0..n-1 and n..n+m-1."""
    m = n if m is None else m
    return SimpleGraph.from_edges(n + m, ((i, n + j) for i in range(n) for j in range(m)))


def complete_bipartite_minus_matching(n: int) -> SimpleGraph:
    """K_{n,n} without the matching {i, i + n}."""
    return SimpleGraph.from_edges(2 * n, ((i, n + j) for i in range(n) for j in range(n) if i != j))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise DomainError("cycles need at least 3 vertices")
    return SimpleGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def hamming_graph(k: int, m: int) -> SimpleGraph:
    """H(k, m): k-tuples over m symbols, adjacent at Hamming distance 1.

    Tuples are numbered lexicographically, first coordinate most significant.
    """
    size = m**k
    enforce_limit("field_size", size, "Hamming graph vertices")
    words = list(itertools.product(range(m), repeat=k))
    index = {w: i for i, w in enumerate(words)}
    edges = []
    for i, w in enumerate(words):
        for position in range(k):
            for symbol in range(w[position] + 1, m):
                other = w[:position] + (symbol,) + w[position + 1 :]
                edges.append((i, index[other]))
    return SimpleGraph.from_edges(size, edges)


def certified_complete(n: int) -> CertifiedGraph:
    graph = complete_graph(n)
    group = PermutationGroup(_symmetric_generators(list(range(n)), n), known_order=factorial(n))
    return CertifiedGraph(graph, GroupAction(group), f"complete:n={n}", _graph_facts(graph))


def _part_swap(n: int) -> Permutation:
    return Permutation(tuple(list(range(n, 2 * n)) + list(range(n))))


def certified_complete_bipartite(n: int) -> CertifiedGraph:
    graph = complete_bipartite(n)
    gens = _symmetric_generators(list(range(n)), 2 * n) + [_part_swap(n)]
    return CertifiedGraph(
        graph, GroupAction(PermutationGroup(gens)), f"complete_bipartite:n={n}", _graph_facts(graph)
    )


def certified_complete_bipartite_minus_matching(n: int) -> CertifiedGraph:
    graph = complete_bipartite_minus_matching(n)
    gens = []
    for g in _symmetric_generators(list(range(n)), n):
        gens.append(Permutation(g.images + tuple(n + p for p in g.images)))
    gens.append(_part_swap(n))
    return CertifiedGraph(
        graph,
        GroupAction(PermutationGroup(gens)),
        f"complete_bipartite_minus_matching:n={n}",
        _graph_facts(graph),
    )


def certified_cycle(n: int) -> CertifiedGraph:
    graph = cycle_graph(n)
    rotation = Permutation(tuple((i + 1) % n for i in range(n)))
    reflection = Permutation(tuple((-i) % n for i in range(n)))
    group = PermutationGroup([rotation, reflection], known_order=2 * n, name=f"D{2 * n}")
    return CertifiedGraph(graph, GroupAction(group), f"cycle:n={n}", _graph_facts(graph))


def certified_hamming(k: int, m: int) -> CertifiedGraph:
    graph = hamming_graph(k, m)
    words = list(itertools.product(range(m), repeat=k))
    index = {w: i for i, w in enumerate(words)}

    def lift(word_map: Callable[[Tuple[int, ...]], Tuple[int, ...]]) -> Permutation:
        return Permutation(tuple(index[word_map(w)] for w in words))

    gens = []
    for g in _symmetric_generators(list(range(m)), m):
        gens.append(lift(lambda w, g=g: (g.images[w[0]],) + w[1:]))
    for g in _symmetric_generators(list(range(k)), k):
        gens.append(lift(lambda w, g=g: tuple(w[g.inverse().images[i]] for i in range(k))))
    group = PermutationGroup(gens, known_order=factorial(m) ** k * factorial(k))
    return CertifiedGraph(graph, GroupAction(group), f"hamming:k={k},m={m}", _graph_facts(graph))


# -- coset and orbital graphs ----------------------------------------------


def coset_graph(
    G: PermutationGroup, K: PermutationGroup, g: Permutation, cap: Optional[int] = None
) -> CertifiedGraph:
    """Cos(G, K, KgK): right cosets of K, Kx adjacent to Ky iff y x^-1 in KgK."""
    if not G.contains(g):
        raise PreconditionError("g is not an element of G")
    if K.contains(g):
        raise PreconditionError("g lies in K")
    action = coset_action(G, K, cap)
    if not action.faithful:
        raise PreconditionError("K is not core-free in G")
    k_elements = K.elements(cap)
    position = {coset_key(k_elements, rep): i for i, rep in enumerate(action.labels)}
    double_coset = {position[coset_key(k_elements, g * k)] for k in k_elements}
    if position[coset_key(k_elements, g.inverse())] not in double_coset:
        raise PreconditionError("g^-1 is not in KgK; the orbital is not self-paired")

    edges = set()
    for i, x in enumerate(action.labels):
        for k in k_elements:
            j = position[coset_key(k_elements, g * k * x)]
            edges.add((min(i, j), max(i, j)))
    graph = SimpleGraph.from_edges(len(action.labels), edges)

    g_inv = g.inverse()
    k_set = {k.images for k in k_elements}
    meet = len(k_set & {(g_inv * k * g).images for k in k_elements})
    generated = PermutationGroup(list(K.generators) + [g]).order()
    facts = _graph_facts(graph)
    facts.update(
        {
            "order_formula": G.order() // K.order(),
            "valency_formula": K.order() // meet,
            "generates": generated == G.order(),
            "connected": is_connected(graph),
        }
    )
    return CertifiedGraph(graph, action, "coset", facts)


def orbital_graphs(action: GroupAction) -> List[CertifiedGraph]:
    """One graph per self-paired nontrivial orbital, then one per paired couple.

    Paired couples give the symmetrised graph; their ``arc_transitive`` fact
    is computed like all others and comes out false.
    """
    G = action.group
    if not G.is_transitive():
        raise PreconditionError("orbital graphs need a transitive action")
    n = action.domain_size
    enforce_limit("orbital_domain", n, "orbital domain")
    stab = point_stabilizer(action, 0)
    suborbits = [o for o in stab.orbits() if o != [0]]
    owner = {p: index for index, orbit in enumerate(suborbits) for p in orbit}
    transversal = G.transversal(0)
    rank = len(suborbits) + 1

    results = []
    done = set()
    for index, suborbit in enumerate(suborbits):
        if index in done:
            continue
        beta = suborbit[0]
        paired = owner[transversal[beta].inverse().images[0]]
        done.update((index, paired))
        edges = {
            (min(v, u.images[delta]), max(v, u.images[delta]))
            for v, u in transversal.items()
            for delta in suborbit
        }
        graph = SimpleGraph.from_edges(n, edges)
        facts = _graph_facts(graph)
        facts.update(
            {
                "suborbit": list(suborbit),
                "suborbit_size": len(suborbit),
                "self_paired": paired == index,
                "rank": rank,
                "connected": is_connected(graph),
                "arc_transitive": is_arc_transitive(graph, action),
            }
        )
        if paired != index:
            facts["paired_suborbit"] = list(suborbits[paired])
        results.append(CertifiedGraph(graph, action, f"orbital:{beta}", facts))
    log_debug(f"{len(results)} orbital graphs of rank-{rank} action on {n} points")
    return results


def connected_arc_transitive(graphs: Sequence[CertifiedGraph]) -> List[CertifiedGraph]:
    return [c for c in graphs if c.facts["connected"] and c.facts["arc_transitive"]]


def isomorphism_classes(graphs: Sequence[CertifiedGraph]) -> List[List[CertifiedGraph]]:
    classes: List[List[CertifiedGraph]] = []
    for candidate in graphs:
        for group in classes:
            if are_isomorphic(group[0].graph, candidate.graph) is not None:
                group.append(candidate)
                break
        else:
            classes.append([candidate])
    return classes


def f020a() -> CertifiedGraph:
    """The connected arc-transitive orbital graph of A5 on the cosets of Z3.

    Two suborbits of size 3 give such graphs; they are swapped by an odd
    permutation normalizing Z3, so there is one graph up to isomorphism.
    """
    action = coset_action(load_packaged_group("a5"), load_packaged_group("a5_z3"))
    classes = isomorphism_classes(connected_arc_transitive(orbital_graphs(action)))
    if len(classes) != 1:
        raise VerificationError(
            f"expected one class of connected arc-transitive orbital graphs, found {len(classes)}"
        )
    representative = classes[0][0]
    facts = dict(representative.facts)
    facts["isomorphic_orbitals"] = len(classes[0])
    return CertifiedGraph(representative.graph, action, "f020a", facts)


def _has_twins(graph: SimpleGraph) -> bool:
    neighbourhoods = [graph.neighbors(v) for v in range(graph.n)]
    return len(set(neighbourhoods)) < graph.n


@lru_cache(maxsize=None)
def g20_census() -> Dict[int, CertifiedGraph]:
    """Label the three S5/Z6 classes.

    (3) is the class with twin vertices, (2) the class also produced by the
    S5/S3 action, (1) the remaining one.
    """
    s5 = load_packaged_group("s5")
    action = coset_action(s5, load_packaged_group("s5_z6"))
    classes = isomorphism_classes(connected_arc_transitive(orbital_graphs(action)))
    if len(classes) != 3:
        raise VerificationError(f"expected three S5/Z6 classes, found {len(classes)}")
    s3_graphs = [
        c
        for c in orbital_graphs(coset_action(s5, load_packaged_group("s5_s3")))
        if c.facts["connected"] and c.graph.valency() == 6
    ]
    reps = [group[0] for group in classes]
    twins = [c for c in reps if _has_twins(c.graph)]
    if len(twins) != 1:
        raise VerificationError(f"expected one S5/Z6 class with twin vertices, found {len(twins)}")
    shared = [
        c
        for c in reps
        if c is not twins[0] and any(are_isomorphic(c.graph, s.graph) is not None for s in s3_graphs)
    ]
    if len(shared) != 1:
        raise VerificationError("S5/Z6 classes do not split into twin, shared and remaining graphs")
    rest = [c for c in reps if c is not twins[0] and c is not shared[0]]
    census = {}
    for label, chosen in ((1, rest[0]), (2, shared[0]), (3, twins[0])):
        facts = dict(chosen.facts)
        facts["class_size"] = len(next(group for group in classes if group[0] is chosen))
        census[label] = CertifiedGraph(chosen.graph, action, f"g20:i={label}", facts)
    return census


def g20(i: int) -> CertifiedGraph:
    if i not in (1, 2, 3):
        raise DomainError("g20 is indexed by i in {1, 2, 3}")
    return g20_census()[i]


# -- affine polar graphs ---------------------------------------------------


def _normalize_eps(eps: Any) -> str:
    mapping = {"+": "+", "plus": "+", "1": "+", "-": "-", "minus": "-", "-1": "-"}
    key = str(eps).strip().lower()
    if key not in mapping:
        raise DomainError(f"eps must be + or -, got {eps!r}")
    return mapping[key]


def affine_polar_graph(m: int, q: int, eps: str) -> CertifiedGraph:
    """VO^eps_2m(q): vectors, v ~ w iff Q(v - w) = 0.

    The certifying group is translations extended by the isometries of Q
    when the isometry sweep fits the configured cap, else by the scalars.
    """
    eps = _normalize_eps(eps)
    field = field_of_order(q)
    d = 2 * m
    space = VectorSpace(field, d)
    form = polar_quadratic_form(field, m, eps)
    singular = [c for c in range(1, space.size) if form(space.vector(c)) == 0]
    arcs = space.size * len(singular)
    enforce_limit("enumeration_cap", arcs, "affine polar arcs")
    edges = set()
    for z in singular:
        images = space.encode(space.translate(space.vector(z)))
        edges.update((v, int(w)) for v, w in enumerate(images) if v < w)
    graph = SimpleGraph.from_edges(space.size, edges)

    try:
        isometries: Optional[List[MatrixGF]] = form_isometries(field, d, quadratic=form)
    except CapacityError:
        isometries = None
    if isometries is not None:
        by_perm = {Permutation(tuple(int(c) for c in space.encode(space.transform(M)))): M for M in isometries}
        linear = [by_perm[p] for p in greedy_generators(list(by_perm))]
        known = space.size * len(isometries)
    else:
        linear = [MatrixGF.scalar(field, d, field.generator)]
        known = None
    action = affine_group(field, d, linear, known_order=known, name=f"VO{eps}{d}({q}) group")

    sign = 1 if eps == "+" else -1
    facts = _graph_facts(graph)
    facts.update(
        {
            "expected_valency": (q**m - sign) * (q ** (m - 1) + sign),
            "isometry_count": len(isometries) if isometries is not None else None,
            "group_order": action.group.order() if known is not None else None,
        }
    )
    return CertifiedGraph(graph, action, f"vo:m={m},q={q},eps={eps}", facts)


# -- point-hyperplane graphs -----------------------------------------------


@lru_cache(maxsize=None)
def _projective_points(d: int, q: int, exponent: int) -> Tuple[FiniteField, OrbitPoints]:
    field = field_of_order(q)
    return field, OrbitPoints(VectorSpace(field, d), exponent)


def _dot_products(field: FiniteField, vector: np.ndarray, reps: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(reps), dtype=np.int64)
    for j, value in enumerate(vector):
        if value:
            acc = field.add_arrays(acc, field.mul_arrays(reps[:, j], int(value)))
    return acc


def _two_sided(first: Permutation, second: Permutation) -> Permutation:
    """Act by ``first`` on 0..N-1 and by ``second`` on N..2N-1."""
    n = first.degree
    return Permutation(first.images + tuple(n + p for p in second.images))


def _duality_swap(n: int) -> Permutation:
    return _part_swap(n)


def _bipartite_linear_generators(
    field: FiniteField, points: OrbitPoints, linear: Sequence[MatrixGF]
) -> List[Permutation]:
    """Generators acting on dual vectors (first part) and vectors (second part)."""
    elements: List[Any] = list(linear)
    if field.e > 1:
        elements.append(SemilinearElement(MatrixGF.identity(field, points.space.d), 1))
    return [_two_sided(dual_permutation(points, g), points.permutation(g)) for g in elements]


def point_hyperplane_graph(d: int, q: int, complement: bool = False) -> CertifiedGraph:
    """B(PG(d-1, q)) or its bipartite complement.

    Points come first, hyperplanes (labelled by dual vectors) after them;
    a point and a hyperplane are incident when their product vanishes.
    """
    if d < 3:
        raise PreconditionError("point-hyperplane graphs need d >= 3")
    count = (q**d - 1) // (q - 1)
    enforce_limit("point_hyperplane_vertices", 2 * count, "point-hyperplane vertices")
    field, points = _projective_points(d, q, 1)
    reps = points.space.vectors[points.rep_codes]
    edges = []
    for a in range(count):
        incident = _dot_products(field, reps[a], reps) == 0
        edges.extend((a, count + int(b)) for b in np.flatnonzero(incident != complement))
    graph = SimpleGraph.from_edges(2 * count, edges)

    gens = []
    elements: List[Any] = list(general_linear_generators(field, d))
    if field.e > 1:
        elements.append(SemilinearElement(MatrixGF.identity(field, d), 1))
    for g in elements:
        gens.append(_two_sided(points.permutation(g), dual_permutation(points, g)))
    gens.append(_duality_swap(count))
    known = 2 * field.e * order_gl(d, q) // (q - 1)
    group = PermutationGroup(gens, known_order=known, name=f"PGammaL{d}({q}).2")
    labels = [("point", v) for v in points.labels] + [("hyperplane", v) for v in points.labels]
    action = GroupAction(group, labels=labels, description="points+hyperplanes")

    on_line = (q ** (d - 1) - 1) // (q - 1)
    facts = _graph_facts(graph)
    facts.update({"points": count, "expected_valency": count - on_line if complement else on_line})
    kind = "true" if complement else "false"
    return CertifiedGraph(graph, action, f"bpg:d={d},q={q},complement={kind}", facts)


def point_hyperplane_dihedral(d: int, q: int) -> PermutationGroup:
    """Regular dihedral group <x, y> on points and hyperplanes.

    x is a Singer cycle acting on both sides; y sends the point <v> to the
    hyperplane <vS> and the hyperplane <w> to the point <wS^-1>, where S is
    symmetric with S^-1 x S = x^T, so that y inverts x.
    """
    field, points = _projective_points(d, q, 1)
    count = len(points)
    x = singer_cycle(d, q)
    S = find_symmetric_conjugator(x)
    S_inv = S.inverse()
    x_bar = _two_sided(points.permutation(x), dual_permutation(points, x))
    images = [0] * (2 * count)
    for a, v in enumerate(points.labels):
        images[a] = count + points.point(S.apply(v))
        images[count + a] = points.point(S_inv.apply(v))
    y = Permutation(tuple(images))
    return PermutationGroup([x_bar, y], known_order=2 * count, name=f"D{2 * count}")


# -- the graphs on P-orbits of vectors ---------------------------------------


@lru_cache(maxsize=None)
def _psl2_on_omega(q: int) -> Tuple[FiniteField, OrbitPoints, PermutationGroup]:
    field, points = _projective_points(2, q, 2)
    gens = [points.permutation(g) for g in special_linear_generators(field, 2)]
    group = PermutationGroup(gens, known_order=q * (q * q - 1) // 2, name=f"PSL2({q})")
    return field, points, group


def _require_g2q(q: int) -> None:
    if q % 8 != 5:
        raise PreconditionError(f"g2q needs q ≡ 5 (mod 8), got q = {q}")


def half_singer_dihedral(q: int) -> PermutationGroup:
    """D_(q+1) in PSL2(q) on Omega: a half-Singer element and an involution inverting it."""
    _require_g2q(q)
    _, points, psl = _psl2_on_omega(q)
    s = points.permutation(singer_cycle(2, q) ** (q - 1))
    s_inv = s.inverse()
    for t in psl.elements():
        if t.is_involution() and t * s * t == s_inv:
            return PermutationGroup([s, t], known_order=q + 1, name=f"D{q + 1}")
    raise VerificationError(f"no involution of PSL2({q}) inverts the half-Singer element")


def g2q(q: int) -> CertifiedGraph:
    """Cos(G, K, KgK) for G = PSL2(q) on Omega, relabelled onto Omega.

    Omega is the set of orbits of the squares on nonzero vectors, K the
    stabilizer of the orbit of (1, 0) and g the symplectic swap.
    """
    _require_g2q(q)
    field, points, psl = _psl2_on_omega(q)
    alpha = points.point((1, 0))
    K = psl.stabilizer(alpha)
    swap = points.permutation(MatrixGF.from_ints(field, [[0, 1], [-1, 0]]))
    coset = coset_graph(psl, K, swap)
    mapping = [rep.images[alpha] for rep in coset.action.labels]
    graph = coset.graph.relabel(mapping)
    action = GroupAction(psl, labels=points.labels, description="p-orbits")

    over_gens = list(psl.generators)
    over_gens.append(points.permutation(MatrixGF.scalar(field, 2, field.generator)))
    if field.e > 1:
        over_gens.append(points.permutation(SemilinearElement(MatrixGF.identity(field, 2), 1)))
    overgroup = PermutationGroup(over_gens, known_order=field.e * q * (q * q - 1), name=f"2xPSigmaL2({q})")
    for g in over_gens:
        if not graph.preserved_by(g.images):
            raise VerificationError(f"overgroup generator {g} does not preserve g2q({q})")

    facts = _graph_facts(graph)
    facts.update(
        {
            "expected_valency": q,
            "valency_formula": coset.facts["valency_formula"],
            "connected": is_connected(graph),
            "overgroup_order": overgroup.order(),
        }
    )
    extras = {"overgroup": GroupAction(overgroup, labels=points.labels, description="p-orbits")}
    return CertifiedGraph(graph, action, f"g2q:q={q}", facts, extras)


@dataclass
class GdqGroups:
    """Linear groups acting on Delta then Omega, without the duality swap."""

    linear: PermutationGroup
    special: PermutationGroup
    parts: int


def _require_gdq(d: int, q: int) -> None:
    if d < 3 or d % 2 == 0:
        raise PreconditionError(f"gdq needs odd d >= 3, got d = {d}")
    if q % 2 == 0:
        raise PreconditionError(f"gdq needs odd q, got q = {q}")


@lru_cache(maxsize=None)
def gdq_groups(d: int, q: int) -> GdqGroups:
    _require_gdq(d, q)
    field, points = _projective_points(d, q, 2)
    count = len(points)
    linear = PermutationGroup(
        _bipartite_linear_generators(field, points, general_linear_generators(field, d)),
        name=f"GammaL{d}({q})",
    )
    special = PermutationGroup(
        [
            _two_sided(dual_permutation(points, g), points.permutation(g))
            for g in special_linear_generators(field, d)
        ],
        name=f"PSL{d}({q})",
    )
    return GdqGroups(linear, special, count)


def gdq(d: int, q: int, i: int) -> CertifiedGraph:
    """Bipartite graph on Delta (dual P-orbits) then Omega (P-orbits), P the squares.

    delta ~ omega when delta.omega is zero (i=1), a nonzero square (i=2)
    or a non-square (i=3).
    """
    _require_gdq(d, q)
    if i not in (1, 2, 3):
        raise DomainError("gdq is indexed by i in {1, 2, 3}")
    count = 2 * (q**d - 1) // (q - 1)
    enforce_limit("point_hyperplane_vertices", 2 * count, "gdq vertices")
    field, points = _projective_points(d, q, 2)
    reps = points.space.vectors[points.rep_codes]
    edges = []
    for a in range(count):
        products = _dot_products(field, reps[a], reps)
        if i == 1:
            mask = products == 0
        else:
            square = (products - 1) % 2 == 0
            mask = (products != 0) & (square if i == 2 else ~square)
        edges.extend((a, count + int(b)) for b in np.flatnonzero(mask))
    graph = SimpleGraph.from_edges(2 * count, edges)

    gens = list(gdq_groups(d, q).linear.generators) + [_duality_swap(count)]
    known = 4 * field.e * order_gl(d, q) // (q - 1)
    group = PermutationGroup(gens, known_order=known, name=f"GammaL{d}({q}).2")
    labels = [("dual", v) for v in points.labels] + [("vector", v) for v in points.labels]
    action = GroupAction(group, labels=labels, description="dual+vectors")

    facts = _graph_facts(graph)
    facts.update(
        {
            "part_sizes": [count, count],
            "delta_valency": graph.degree(0),
            "omega_valency": graph.degree(count),
            "expected_valency": 2 * (q ** (d - 1) - 1) // (q - 1) if i == 1 else q ** (d - 1),
        }
    )
    return CertifiedGraph(graph, action, f"gdq:d={d},q={q},i={i}", facts)


# -- family grammar ----------------------------------------------------------


class _FamilyParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class _NoParams(_FamilyParams):
    pass


class _SizeParams(_FamilyParams):
    n: int


class _HammingParams(_FamilyParams):
    k: int
    m: int


class _AffinePolarParams(_FamilyParams):
    m: int
    q: int
    eps: str

    @field_validator("eps", mode="before")
    @classmethod
    def _sign(cls, value: Any) -> str:
        return _normalize_eps(value)


class _PointHyperplaneParams(_FamilyParams):
    d: int
    q: int
    complement: bool = False


class _FieldParams(_FamilyParams):
    q: int


class _GdqParams(_FamilyParams):
    d: int
    q: int
    i: int


class _IndexParams(_FamilyParams):
    i: int


@dataclass(frozen=True)
class FamilySpec:
    builder: Callable[..., CertifiedGraph]
    params: Type[_FamilyParams]


FAMILIES: Dict[str, FamilySpec] = {
    "complete": FamilySpec(certified_complete, _SizeParams),
    "complete_bipartite": FamilySpec(certified_complete_bipartite, _SizeParams),
    "complete_bipartite_minus_matching": FamilySpec(certified_complete_bipartite_minus_matching, _SizeParams),
    "cycle": FamilySpec(certified_cycle, _SizeParams),
    "hamming": FamilySpec(certified_hamming, _HammingParams),
    "vo": FamilySpec(affine_polar_graph, _AffinePolarParams),
    "bpg": FamilySpec(point_hyperplane_graph, _PointHyperplaneParams),
    "g2q": FamilySpec(g2q, _FieldParams),
    "gdq": FamilySpec(gdq, _GdqParams),
    "g20": FamilySpec(g20, _IndexParams),
    "f020a": FamilySpec(f020a, _NoParams),
}


def parse_family(text: str) -> Tuple[str, Dict[str, str]]:
    """Split ``name:key=value,...`` into the family name and its raw parameter strings."""
    name, _, body = text.strip().partition(":")
    params: Dict[str, str] = {}
    for item in filter(None, (part.strip() for part in body.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"parameter {item!r} is missing '='")
        params[key.strip()] = value.strip()
    return name.strip(), params


def resolve_family(text: str, params: Optional[Dict[str, Any]] = None) -> Tuple[FamilySpec, _FamilyParams]:
    """Look up a family and validate its parameters without building anything."""
    name, raw = parse_family(text)
    parsed: Dict[str, Any] = dict(raw)
    if params:
        parsed.update(params)
    spec = FAMILIES.get(name)
    if spec is None:
        raise DomainError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    try:
        validated = spec.params.model_validate(parsed)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc']) or 'parameters'}: {err['msg']}" for err in e.errors()
        )
        raise DomainError(f"family {name!r}: {problems}") from e
    return spec, validated


def build_family(text: str, params: Optional[Dict[str, Any]] = None) -> CertifiedGraph:
    """Build a family from its grammar string, or from a name plus ``params``."""
    spec, validated = resolve_family(text, params)
    return spec.builder(**validated.model_dump())
