"""Named group actions and the check operations manifests can call.

Each operation takes keyword arguments from a manifest entry and returns a
dictionary of facts; the verifier compares the keys named in ``expect``.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Union

from bidihedral_verify.utils.actions import (
    GroupAction,
    block_dichotomy,
    coset_action,
    is_biquasiprimitive,
    is_biregular,
    is_primitive,
    is_quasiprimitive,
    is_regular_subgroup,
    maximal_block_system,
    minimal_blocks,
    natural_action,
)
from bidihedral_verify.utils.dihedral import check_intersection_property
from bidihedral_verify.utils.errors import DomainError, VerificationError
from bidihedral_verify.utils.finite_field import field_of_order, gamma_l1, verify_mdq
from bidihedral_verify.utils.graph_analysis import (
    are_isomorphic,
    automorphism_group,
    find_biregular_dihedral,
    is_arc_transitive,
    is_bipartite,
    is_connected,
    normal_quotient,
)
from bidihedral_verify.utils.graph_families import (
    affine_polar_graph,
    build_family,
    certified_complete_bipartite,
    certified_cycle,
    connected_arc_transitive,
    coset_graph,
    g20_census,
    g2q,
    gdq,
    gdq_groups,
    half_singer_dihedral,
    hamming_graph,
    isomorphism_classes,
    orbital_graphs,
    point_hyperplane_dihedral,
    point_hyperplane_graph,
)
from bidihedral_verify.utils.graph_io import load_packaged_group
from bidihedral_verify.utils.graphs import CertifiedGraph, SimpleGraph
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.matrix_groups import (
    MatrixGF,
    SemilinearElement,
    VectorSpace,
    affine_group,
    form_isometries,
    general_linear_generators,
    greedy_generators,
    matrix_group_as_permutations,
    order_gl,
    singer_cycle,
    symplectic_form,
)
from bidihedral_verify.utils.perm_group import (
    PermutationGroup,
    are_conjugate_subgroups,
    conjugacy_class_reps,
    subgroup_conjugation_orbit,
)
from bidihedral_verify.utils.permutation import Permutation, perm_from_cycles

Facts = Dict[str, Any]


# -- named actions -------------------------------------------------------------


def _agl1_8(semilinear: bool) -> GroupAction:
    field = field_of_order(8)
    linear: List[Any] = [MatrixGF.scalar(field, 1, field.generator)]
    if semilinear:
        linear.append(SemilinearElement(MatrixGF.identity(field, 1), 1))
    name = "AGammaL1(8)" if semilinear else "AGL1(8)"
    return affine_group(field, 1, linear, known_order=168 if semilinear else 56, name=name)


def _agl3_2() -> GroupAction:
    field = field_of_order(2)
    return affine_group(field, 3, general_linear_generators(field, 3), known_order=8 * order_gl(3, 2), name="AGL3(2)")


def _affine_sp4_2() -> GroupAction:
    field = field_of_order(2)
    space = VectorSpace(field, 4)
    isometries = form_isometries(field, 4, bilinear=symplectic_form(field, 2))
    by_perm = {Permutation(tuple(int(c) for c in space.encode(space.transform(M)))): M for M in isometries}
    linear = [by_perm[p] for p in greedy_generators(list(by_perm))]
    return affine_group(field, 4, linear, known_order=16 * len(isometries), name="2^4:Sp4(2)")


def _coset_witness(group: str, stabilizer: str) -> GroupAction:
    return coset_action(load_packaged_group(group), load_packaged_group(stabilizer))


def _psl2_omega(q: int) -> GroupAction:
    return g2q(q).action


ACTIONS: Dict[str, Callable[[], GroupAction]] = {
    "agl1_8": lambda: _agl1_8(False),
    "agammal1_8": lambda: _agl1_8(True),
    "agl3_2": _agl3_2,
    "affine_o4plus_2": lambda: affine_polar_graph(2, 2, "+").action,
    "affine_o4minus_2": lambda: affine_polar_graph(2, 2, "-").action,
    "affine_sp4_2": _affine_sp4_2,
    "m12": lambda: natural_action(load_packaged_group("m12")),
    "a5_z3_cosets": lambda: _coset_witness("a5", "a5_z3"),
    "s5_z6_cosets": lambda: _coset_witness("s5", "s5_z6"),
    "s5_s3_cosets": lambda: _coset_witness("s5", "s5_s3"),
    "psl2_5_omega": lambda: _psl2_omega(5),
    "psl2_13_omega": lambda: _psl2_omega(13),
    "gammal1_3_4": lambda: natural_action(gamma_l1(3, 4)),
    "gammal1_2_12": lambda: natural_action(gamma_l1(2, 12)),
    "gammal1_5_2": lambda: natural_action(gamma_l1(5, 2)),
}


@lru_cache(maxsize=None)
def named_action(name: str) -> GroupAction:
    """A named witness action, or the natural action of a packaged group."""
    builder = ACTIONS.get(name)
    if builder is not None:
        return builder()
    try:
        return natural_action(load_packaged_group(name))
    except DomainError:
        raise DomainError(f"unknown action {name!r}; known: {', '.join(sorted(ACTIONS))}") from None


def _names(value: Union[str, Sequence[str]]) -> List[str]:
    return [value] if isinstance(value, str) else list(value)


# -- check operations ------------------------------------------------------------


def family_facts(family: str, analyse: Iterable[str] = (), **params: Any) -> Facts:
    """Construction facts of a family, with optional extra analyses."""
    built = build_family(family, params)
    graph = built.graph
    facts: Facts = {k: v for k, v in built.facts.items() if _plain(v)}
    facts["connected"] = is_connected(graph)
    sides = is_bipartite(graph)
    facts["bipartite"] = sides is not None
    if sides is not None:
        facts["part_sizes"] = sorted((len(sides[0]), len(sides[1])))
    wanted = set(analyse)
    if "aut_order" in wanted:
        facts["aut_order"] = automorphism_group(graph).order()
    if "arc_transitive" in wanted:
        facts["arc_transitive"] = is_arc_transitive(graph, built.action)
    if "group_order" in wanted:
        facts["group_order"] = built.group.order()
    return facts


def _plain(value: Any) -> bool:
    if isinstance(value, (bool, int, float, str)) or value is None:
        return True
    if isinstance(value, (list, tuple)):
        return all(_plain(v) for v in value)
    return False


def group_order(group: str) -> Facts:
    action = named_action(group)
    return {"order": action.group.order(), "degree": action.domain_size}


def action_facts(action: str) -> Facts:
    act = named_action(action)
    G = act.group
    transitive = G.is_transitive()
    facts: Facts = {
        "degree": act.domain_size,
        "order": G.order(),
        "transitive": transitive,
        "classes": len(conjugacy_class_reps(G)),
        "point_stabilizer_order": G.stabilizer(0).order(),
    }
    if transitive:
        facts["primitive"] = is_primitive(act)
        facts["quasiprimitive"] = is_quasiprimitive(act)
        facts["biquasiprimitive"] = is_biquasiprimitive(act)
        facts["rank"] = len(G.stabilizer(0).orbits())
    return facts


def _aut_order(graph: SimpleGraph) -> int:
    return automorphism_group(graph).order()


def orbital_census(action: str, match_g20: bool = False) -> Facts:
    """Orbital graphs of a named action, their isomorphism classes and Aut orders."""
    act = named_action(action)
    graphs = orbital_graphs(act)
    good = connected_arc_transitive(graphs)
    classes = isomorphism_classes(good)
    facts: Facts = {
        "rank": graphs[0].facts["rank"] if graphs else 1,
        "graphs": len(graphs),
        "connected_arc_transitive": len(good),
        "classes": len(classes),
        "valencies": sorted(c[0].graph.valency() for c in classes),
        "aut_orders": sorted(_aut_order(c[0].graph) for c in classes),
    }
    if match_g20:
        census = g20_census()
        matched = set()
        for candidate in graphs:
            if not candidate.facts["connected"] or candidate.graph.valency() != 6:
                continue
            for label, member in census.items():
                if are_isomorphic(candidate.graph, member.graph) is not None:
                    matched.add(label)
        facts["g20_matches"] = sorted(matched)
    return facts


def affine_polar_pair(m: int = 2, q: int = 2, table_valency: int = 6) -> Facts:
    """VO+ and VO- side by side, recording which of VO+ and its complement is H(2, q^m)."""
    plus = affine_polar_graph(m, q, "+")
    minus = affine_polar_graph(m, q, "-")
    hamming = hamming_graph(2, q**m)
    direct = are_isomorphic(plus.graph, hamming) is not None
    complement = are_isomorphic(plus.graph.complement(), hamming) is not None
    match = {(True, False): "graph", (False, True): "complement", (True, True): "both"}.get(
        (direct, complement), "neither"
    )
    return {
        "plus_vertices": plus.graph.n,
        "plus_valency": plus.graph.valency(),
        "plus_formula": plus.facts["expected_valency"],
        "minus_vertices": minus.graph.n,
        "minus_valency": minus.graph.valency(),
        "minus_formula": minus.facts["expected_valency"],
        "hamming_match": match,
        "table_valency_discrepancy": plus.graph.valency() != table_valency,
        "plus_aut_order": _aut_order(plus.graph),
        "minus_aut_order": _aut_order(minus.graph),
        "plus_arc_transitive": is_arc_transitive(plus.graph, plus.action),
        "minus_arc_transitive": is_arc_transitive(minus.graph, minus.action),
    }


def _regular_on(graph: SimpleGraph, H: PermutationGroup) -> bool:
    preserved = all(graph.preserved_by(h.images) for h in H.generators)
    return preserved and is_regular_subgroup(natural_action(H), H)


def point_hyperplane_report(d: int = 3, q: int = 2, aut: bool = True) -> Facts:
    incidence = point_hyperplane_graph(d, q, False)
    complement = point_hyperplane_graph(d, q, True)
    dihedral = point_hyperplane_dihedral(d, q)
    sides = is_bipartite(incidence.graph)
    facts: Facts = {
        "vertices": incidence.graph.n,
        "valency": incidence.graph.valency(),
        "connected": is_connected(incidence.graph),
        "bipartite_sides": sorted(len(s) for s in sides) if sides else None,
        "complement_valency": complement.graph.valency(),
        "dihedral_order": dihedral.order(),
        "dihedral_regular": _regular_on(incidence.graph, dihedral),
        "complement_dihedral_regular": _regular_on(complement.graph, dihedral),
        "arc_transitive": is_arc_transitive(incidence.graph, incidence.action),
    }
    if aut:
        facts["aut_order"] = _aut_order(incidence.graph)
    return facts


def g2q_report(q: int, aut: bool = True) -> Facts:
    built = g2q(q)
    graph = built.graph
    overgroup = built.extras["overgroup"].group
    H = half_singer_dihedral(q)
    orbitals = connected_arc_transitive(orbital_graphs(built.action))
    classes = isomorphism_classes(orbitals)
    facts: Facts = {
        "vertices": graph.n,
        "valency": graph.valency(),
        "connected": is_connected(graph),
        "psl_arc_transitive": is_arc_transitive(graph, built.action),
        "overgroup_order": overgroup.order(),
        "dihedral_order": H.order(),
        "dihedral_biregular": is_biregular(built.action, H)
        and all(graph.preserved_by(h.images) for h in H.generators),
        "orbital_classes": len(classes),
        "orbital_matches_graph": bool(classes) and are_isomorphic(classes[0][0].graph, graph) is not None,
    }
    if aut:
        aut_group = automorphism_group(graph)
        facts["aut_order"] = aut_group.order()
        facts["aut_contains_overgroup"] = overgroup.is_subgroup_of(aut_group)
    return facts


def gdq_report(d: int = 3, q: int = 3) -> Facts:
    graphs = {i: gdq(d, q, i) for i in (1, 2, 3)}
    groups = gdq_groups(d, q)
    count = groups.parts
    delta, omega = set(range(count)), set(range(count, 2 * count))

    def omega_orbit_sizes(group: PermutationGroup) -> List[int]:
        stab = group.stabilizer(0)
        return sorted(len(o) for o in stab.orbits() if o[0] in omega)

    special = groups.special
    return {
        "part_sizes": graphs[1].facts["part_sizes"],
        "valency_1": graphs[1].facts["delta_valency"],
        "valency_2": graphs[2].facts["delta_valency"],
        "valency_3": graphs[3].facts["delta_valency"],
        "iso_2_3": are_isomorphic(graphs[2].graph, graphs[3].graph) is not None,
        "psl_transitive_delta": set(special.orbit(0)) == delta,
        "psl_transitive_omega": set(special.orbit(count)) == omega,
        "stabilizer_orbits": omega_orbit_sizes(groups.linear),
        "psl_stabilizer_orbits": omega_orbit_sizes(special),
    }


def mdq_sweep(d: int, q: Union[int, Sequence[int]], m: Union[int, Sequence[int]], jobs: int = 1) -> Facts:
    qs = [q] if isinstance(q, int) else list(q)
    ms = [m] if isinstance(m, int) else list(m)
    solutions = []
    for field_order in qs:
        for multiplier in ms:
            solutions.extend(verify_mdq(d, field_order, multiplier, jobs=jobs))
    return {
        "solutions": len(solutions),
        "nonempty": bool(solutions),
        "frobenius_exponents": sorted({k for _, k in solutions}),
    }


def singer_conjugacy(d: int, q: int) -> Facts:
    """Cyclic subgroups of order q^d - 1 in GL_d(q) and whether they form one class."""
    field = field_of_order(q)
    action = matrix_group_as_permutations(
        general_linear_generators(field, d), field, d, known_order=order_gl(d, q), name=f"GL{d}({q})"
    )
    G = action.group
    target = q**d - 1
    subgroups: Dict[frozenset, PermutationGroup] = {}
    for x in G.elements():
        if x.order() == target:
            H = PermutationGroup([x])
            subgroups.setdefault(frozenset(h.images for h in H.elements()), H)
    found = list(subgroups.values())
    companion_order = singer_cycle(d, q).order() if d >= 2 else None
    return {
        "singer_subgroups": len(found),
        "all_conjugate": all(are_conjugate_subgroups(G, found[0], H) is not None for H in found[1:]),
        "companion_order": companion_order,
    }


def biregular_witness(action: str, quasiprimitive: bool = True) -> Facts:
    act = named_action(action)
    found = find_biregular_dihedral(None, act)
    facts: Facts = {
        "degree": act.domain_size,
        "found": len(found),
        "dihedral_orders": sorted({H.order() for H in found}),
        "all_biregular": all(is_biregular(act, H) for H in found),
    }
    if quasiprimitive:
        facts["quasiprimitive"] = is_quasiprimitive(act)
    return facts


def dihedral_lemma(
    max_n: int = 20, exhaustive_t: Sequence[int] = (2, 3), random_tuples: int = 100, seed: int = 0
) -> Facts:
    checked, violations = check_intersection_property(
        max_n=max_n, exhaustive_t=tuple(exhaustive_t), random_tuples=random_tuples, seed=seed
    )
    return {"checked": checked, "violations": violations}


def block_lemma(actions: Sequence[str] = ("a5_z3_cosets", "s5_z6_cosets", "psl2_5_omega", "psl2_13_omega")) -> Facts:
    """Block systems of each action against each bi-regular dihedral subgroup."""
    instances = 0
    outcomes = {"inside": 0, "across": 0, "mixed": 0}
    for name in _names(actions):
        act = named_action(name)
        systems = list(minimal_blocks(act))
        widest = maximal_block_system(act)
        if widest is not None and widest not in systems:
            systems.append(widest)
        for H in find_biregular_dihedral(None, act):
            orbit0, orbit1 = H.orbits()
            for system in systems:
                instances += 1
                outcomes[block_dichotomy(system, orbit0, orbit1)] += 1
    return {"instances": instances, **outcomes}


def _quotient_cases() -> List[tuple]:
    cycle = certified_cycle(6)
    rotation = cycle.group.generators[0]
    k22 = certified_complete_bipartite(2)
    cases = [
        (cycle, PermutationGroup([rotation**3])),
        (cycle, PermutationGroup([rotation**2])),
        (k22, PermutationGroup([perm_from_cycles(4, [[0, 1], [2, 3]])])),
    ]
    for q in (5, 13):
        built = g2q(q)
        over = built.extras["overgroup"]
        central = over.group.generators[len(built.group.generators)]
        cases.append((CertifiedGraph(built.graph, over, built.provenance), PermutationGroup([central])))
    return cases


def cover_divisibility() -> Facts:
    """r divides the valency for every normal quotient that is a cover."""
    covers = 0
    failures = 0
    rs = []
    cases = _quotient_cases()
    for certified, N in cases:
        result = normal_quotient(certified.graph, certified.action, N)
        if not result.is_cover:
            continue
        covers += 1
        rs.append(result.r)
        valency = certified.graph.valency()
        if valency is None or valency % int(result.r):
            failures += 1
    return {"instances": len(cases), "covers": covers, "non_divisible": failures, "r_values": rs}


def orbit_stabilizer_sample(
    samples: int = 200, seed: int = 0, actions: Sequence[str] = ("m12", "agl3_2", "s5_z6_cosets", "psl2_13_omega")
) -> Facts:
    rng = random.Random(seed)
    pool = [named_action(name).group for name in _names(actions)]
    violations = 0
    for _ in range(samples):
        G = rng.choice(pool)
        point = rng.randrange(G.degree)
        if len(G.orbit(point)) * G.stabilizer(point).order() != G.order():
            violations += 1
    return {"samples": samples, "violations": violations}


def _coset_cases() -> List[tuple]:
    s4 = PermutationGroup([perm_from_cycles(4, [[0, 1, 2, 3]]), perm_from_cycles(4, [[0, 1]])])
    s3 = s4.stabilizer(3)
    cases = [(s4, s3, perm_from_cycles(4, [[0, 3]]))]
    a5 = load_packaged_group("a5")
    z3 = load_packaged_group("a5_z3")
    z3_elements = z3.elements()
    covered: set = {k.images for k in z3_elements}
    for g in a5.elements():
        if g.images in covered:
            continue
        double = {(k1 * g * k2).images for k1 in z3_elements for k2 in z3_elements}
        covered |= double
        if g.inverse().images in double:
            cases.append((a5, z3, g))
    return cases


def coset_formula(conjugate_samples: int = 3, seed: int = 0) -> Facts:
    """Order and valency formulas on coset graphs, and invariance under inner automorphisms."""
    rng = random.Random(seed)
    graphs = 0
    violations = 0
    non_isomorphic = 0
    for G, K, g in _coset_cases():
        built = coset_graph(G, K, g)
        graphs += 1
        if built.graph.n != built.facts["order_formula"] or built.graph.valency() != built.facts["valency_formula"]:
            violations += 1
        for _ in range(conjugate_samples):
            sigma = G.random_element(rng)
            K_sigma = PermutationGroup([k.conjugate(sigma) for k in K.generators])
            image = coset_graph(G, K_sigma, g.conjugate(sigma))
            if are_isomorphic(built.graph, image.graph) is None:
                non_isomorphic += 1
    for q in (5, 13):
        built = g2q(q)
        graphs += 1
        if built.graph.valency() != built.facts["valency_formula"]:
            violations += 1
    return {"graphs": graphs, "violations": violations, "non_isomorphic_conjugates": non_isomorphic}


def psl2_dihedral_conjugacy(q: int) -> Facts:
    """Dihedral subgroups of order 2(q+1) in PGL2(q) on the projective line."""
    field = field_of_order(q)
    action = matrix_group_as_permutations(
        general_linear_generators(field, 2),
        field,
        2,
        action="projective-points",
        known_order=q * (q * q - 1),
        name=f"PGL2({q})",
    )
    G = action.group
    elements = G.elements()
    involutions = [b for b in elements if b.is_involution()]
    subgroups: Dict[frozenset, PermutationGroup] = {}
    cyclic_seen: set = set()
    for a in elements:
        if a.order() != q + 1:
            continue
        cyclic = frozenset((a**i).images for i in range(q + 1))
        if cyclic in cyclic_seen:
            continue
        cyclic_seen.add(cyclic)
        a_inv = a.inverse()
        for b in involutions:
            if b * a * b == a_inv:
                H = PermutationGroup([a, b])
                if H.order() == 2 * (q + 1):
                    subgroups.setdefault(frozenset(h.images for h in H.elements()), H)
    keys = list(subgroups)
    if not keys:
        raise VerificationError(f"no dihedral subgroup of order {2 * (q + 1)} in PGL2({q})")
    orbit = subgroup_conjugation_orbit(G, subgroups[keys[0]])
    log_debug(f"PGL2({q}): {len(keys)} dihedral subgroups of order {2 * (q + 1)}")
    return {"subgroups": len(keys), "all_conjugate": all(k in orbit for k in keys)}


OPERATIONS: Dict[str, Callable[..., Facts]] = {
    "family": family_facts,
    "group_order": group_order,
    "action_facts": action_facts,
    "orbital_census": orbital_census,
    "affine_polar_pair": affine_polar_pair,
    "point_hyperplane_report": point_hyperplane_report,
    "g2q_report": g2q_report,
    "gdq_report": gdq_report,
    "mdq_sweep": mdq_sweep,
    "singer_conjugacy": singer_conjugacy,
    "biregular_witness": biregular_witness,
    "dihedral_lemma": dihedral_lemma,
    "block_lemma": block_lemma,
    "cover_divisibility": cover_divisibility,
    "orbit_stabilizer_sample": orbit_stabilizer_sample,
    "coset_formula": coset_formula,
    "psl2_dihedral_conjugacy": psl2_dihedral_conjugacy,
}


def run_operation(name: str, arguments: Optional[Dict[str, Any]] = None) -> Facts:
    operation = OPERATIONS.get(name)
    if operation is None:
        raise DomainError(f"unknown operation {name!r}; known: {', '.join(sorted(OPERATIONS))}")
    return operation(**(arguments or {}))
