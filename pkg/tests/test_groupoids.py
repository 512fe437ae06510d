import random

import pytest

from sheafnet.arch_site import FinitePoset
from sheafnet.errors import GroupoidError
from sheafnet.groupoids import (
    GroupoidFunctor,
    StackOverPoset,
    check_adjunction_and_section,
    check_fibrant_injective,
    connected_components,
    constant_functor,
    discrete_groupoid,
    disjoint_union,
    group_action_orbits,
    group_as_groupoid,
    identity_functor,
    is_fibration,
    is_multifibration,
    lambda_transport,
    pair_groupoid,
    powerset,
    product_groupoid,
    tau_transport,
)
from sheafnet.presheaf import Presheaf


def cyclic_perm(points):
    return {points[i]: points[(i + 1) % len(points)] for i in range(len(points))}


def reachability_components_oracle(g):
    comps = []
    seen = set()
    for o in g.objects:
        if o in seen:
            continue
        comp = {o}
        frontier = [o]
        while frontier:
            x = frontier.pop()
            for m in g.morphisms:
                for a, b in ((g.src[m], g.dst[m]), (g.dst[m], g.src[m])):
                    if a == x and b not in comp:
                        comp.add(b)
                        frontier.append(b)
        seen |= comp
        comps.append(tuple(sorted(comp, key=str)))
    return tuple(sorted(comps, key=lambda c: str(c[0])))


# -- components ------------------------------------------------------------

def test_discrete_groupoid_components():
    g = discrete_groupoid(["a", "b", "c"])
    assert len(connected_components(g)) == 3


def test_one_object_group_single_component():
    g = group_as_groupoid({"r": cyclic_perm([0, 1, 2])})
    assert len(connected_components(g)) == 1
    assert len(g.morphisms) == 3  # C3


def test_components_match_reachability_oracle():
    rng = random.Random(5)
    for _ in range(10):
        pieces = [pair_groupoid([f"{k}_{i}" for i in range(rng.randint(1, 3))])
                  for k in range(rng.randint(1, 3))]
        g = pieces[0]
        for piece in pieces[1:]:
            g = disjoint_union(g, piece, tags=(f"t{id(piece) % 97}", f"u{id(piece) % 89}"))
        assert connected_components(g) == reachability_components_oracle(g)


# -- transports --------------------------------------------------------------

def two_over_one_functor():
    src = discrete_groupoid(["x", "y"])
    dst = discrete_groupoid(["z"])
    return GroupoidFunctor.of(src, dst, {"x": "z", "y": "z"},
                              {("id", "x"): ("id", "z"), ("id", "y"): ("id", "z")})


def test_lambda_identity_and_collapse():
    g = discrete_groupoid(["a", "b"])
    ident = identity_functor(g)
    comps = connected_components(g)
    for p in powerset(comps):
        assert lambda_transport(ident, p) == p
        assert tau_transport(ident, p) == p
    f = two_over_one_functor()
    cx, cy = connected_components(f.source)
    assert lambda_transport(f, {cx}) == lambda_transport(f, {cy})


def test_tau_preimage_and_empty():
    f = two_over_one_functor()
    cz = connected_components(f.target)[0]
    assert tau_transport(f, {cz}) == frozenset(connected_components(f.source))
    assert tau_transport(f, frozenset()) == frozenset()


def test_adjunction_exhaustive_and_section():
    f = two_over_one_functor()
    report = check_adjunction_and_section(f)
    assert report.adjunction_ok and report.unit_ok
    assert report.surjective_on_components and report.section_ok


def test_non_surjective_functor_breaks_section_with_witness():
    src = discrete_groupoid(["x"])
    dst = discrete_groupoid(["u", "v"])
    f = GroupoidFunctor.of(src, dst, {"x": "u"}, {("id", "x"): ("id", "u")})
    report = check_adjunction_and_section(f)
    assert report.adjunction_ok and report.unit_ok
    assert not report.surjective_on_components
    assert not report.section_ok
    assert any(kind == "section" for kind, *_ in report.failures)


def test_lambda_tau_preserve_boolean_operations():
    f = two_over_one_functor()
    src_comps = connected_components(f.source)
    dst_comps = connected_components(f.target)
    for p in powerset(src_comps):
        for q in powerset(src_comps):
            assert lambda_transport(f, p | q) == lambda_transport(f, p) | lambda_transport(f, q)
    full = frozenset(dst_comps)
    for p in powerset(dst_comps):
        for q in powerset(dst_comps):
            assert tau_transport(f, p & q) == tau_transport(f, p) & tau_transport(f, q)
            assert tau_transport(f, p | q) == tau_transport(f, p) | tau_transport(f, q)
        assert tau_transport(f, full - p) == \
            frozenset(src_comps) - tau_transport(f, p)


def test_lambda_meet_preservation_fails_for_collapsing_functors():
    """Direct images preserve joins but not meets: collapsing two components
    onto one is the witness, so only the join law is asserted above."""
    f = two_over_one_functor()
    cx, cy = connected_components(f.source)
    lhs = lambda_transport(f, frozenset({cx}) & frozenset({cy}))
    rhs = lambda_transport(f, {cx}) & lambda_transport(f, {cy})
    assert lhs == frozenset() and rhs != frozenset()


def test_lambda_meet_preserved_for_component_injective_functors():
    src = discrete_groupoid(["x", "y"])
    dst = discrete_groupoid(["u", "v", "w"])
    f = GroupoidFunctor.of(src, dst, {"x": "u", "y": "w"},
                           {("id", "x"): ("id", "u"), ("id", "y"): ("id", "w")})
    comps = connected_components(src)
    for p in powerset(comps):
        for q in powerset(comps):
            assert lambda_transport(f, p & q) == \
                lambda_transport(f, p) & lambda_transport(f, q)


# -- fibrations ---------------------------------------------------------------

def test_identity_is_fibration():
    g = group_as_groupoid({"r": cyclic_perm([0, 1, 2])})
    assert is_fibration(identity_functor(g))


def test_proper_subgroup_inclusion_is_not_fibration():
    big = group_as_groupoid({"r": cyclic_perm([0, 1, 2, 3])})        # C4
    sub = group_as_groupoid({"r": cyclic_perm([0, 2]) | {1: 3, 3: 1}})  # squares: C2
    # embed C2 = {e, (02)(13)} into C4's morphisms
    square = {v: cyclic_perm([0, 1, 2, 3])[cyclic_perm([0, 1, 2, 3])[v]] for v in range(4)}
    name_of = {}
    from sheafnet.groupoids import close_permutation_group

    big_elems = {k: dict(p) for k, p in close_permutation_group(
        {"r": cyclic_perm([0, 1, 2, 3])}).items()}
    sub_elems = {k: dict(p) for k, p in close_permutation_group(
        {"r": {0: 2, 2: 0, 1: 3, 3: 1}}).items()}
    for sk, sp in sub_elems.items():
        name_of[sk] = next(bk for bk, bp in big_elems.items() if bp == sp)
    f = GroupoidFunctor.of(sub, big, {"*": "*"}, name_of)
    assert not is_fibration(f)


def test_product_projection_is_fibration_and_multifibration():
    g1 = group_as_groupoid({"r": cyclic_perm([0, 1])})
    g2 = group_as_groupoid({"r": cyclic_perm(["a", "b", "c"])})
    prod = product_groupoid(g1, g2)
    proj1 = GroupoidFunctor.of(prod, g1, {o: o[0] for o in prod.objects},
                               {m: m[0] for m in prod.morphisms})
    proj2 = GroupoidFunctor.of(prod, g2, {o: o[1] for o in prod.objects},
                               {m: m[1] for m in prod.morphisms})
    assert is_fibration(proj1) and is_fibration(proj2)
    assert is_multifibration([proj1, proj2])


def test_composition_of_fibrations_is_fibration():
    g1 = group_as_groupoid({"r": cyclic_perm([0, 1])})
    g2 = group_as_groupoid({"r": cyclic_perm(["a", "b"])})
    g3 = group_as_groupoid({"r": cyclic_perm(["p", "q", "s"])})
    inner = product_groupoid(g2, g3)
    outer = product_groupoid(g1, inner)
    proj_inner = GroupoidFunctor.of(outer, inner, {o: o[1] for o in outer.objects},
                                    {m: m[1] for m in outer.morphisms})
    proj_g2 = GroupoidFunctor.of(inner, g2, {o: o[0] for o in inner.objects},
                                 {m: m[0] for m in inner.morphisms})
    assert is_fibration(proj_inner) and is_fibration(proj_g2)
    composed = GroupoidFunctor.of(
        outer, g2,
        {o: proj_g2.object_map[proj_inner.object_map[o]] for o in outer.objects},
        {m: proj_g2.morphism_map[proj_inner.morphism_map[m]] for m in outer.morphisms})
    assert is_fibration(composed)


# -- fibrancy of diagrams --------------------------------------------------------

def set_diagram(poset, carriers, maps):
    return Presheaf(poset, carriers, maps)


def test_shadok_two_chain_fibrant_iff_surjective():
    poset = FinitePoset.chain(1)
    good = set_diagram(poset, {0: ("a", "b"), 1: ("u", "v")},
                       {(0, 1): {"u": "a", "v": "b"}})
    assert check_fibrant_injective(good).fibrant
    bad = set_diagram(poset, {0: ("a", "b"), 1: ("u", "v")},
                      {(0, 1): {"u": "a", "v": "a"}})
    report = check_fibrant_injective(bad)
    assert not report.fibrant
    assert not report.verdicts[1]["ok"]


def test_confluence_needs_joint_surjectivity():
    poset = FinitePoset(["one", "two", "top"], [("one", "top"), ("two", "top")])
    carriers = {"one": ("u",), "two": ("v", "w"), "top": ("a", "b")}
    pairing_bad = set_diagram(poset, carriers, {
        ("one", "top"): {"a": "u", "b": "u"},
        ("two", "top"): {"a": "v", "b": "v"},   # misses ("u","w")
    })
    report = check_fibrant_injective(pairing_bad)
    assert not report.fibrant and report.verdicts["top"]["confluence"]
    pairing_good = set_diagram(poset, carriers, {
        ("one", "top"): {"a": "u", "b": "u"},
        ("two", "top"): {"a": "v", "b": "w"},
    })
    assert check_fibrant_injective(pairing_good).fibrant


def test_divergence_needs_separate_surjectivity():
    poset = FinitePoset(["bot", "one", "two"], [("bot", "one"), ("bot", "two")])
    carriers = {"bot": ("x", "y"), "one": ("a", "b"), "two": ("c", "d")}
    both = set_diagram(poset, carriers, {
        ("bot", "one"): {"a": "x", "b": "y"},
        ("bot", "two"): {"c": "y", "d": "x"},
    })
    assert check_fibrant_injective(both).fibrant
    one_bad = set_diagram(poset, carriers, {
        ("bot", "one"): {"a": "x", "b": "x"},
        ("bot", "two"): {"c": "y", "d": "x"},
    })
    report = check_fibrant_injective(one_bad)
    assert not report.fibrant
    assert not report.verdicts["one"]["ok"] and report.verdicts["two"]["ok"]


def test_stack_fibrancy_groupoid_case():
    poset = FinitePoset.chain(1)
    g1 = group_as_groupoid({"r": cyclic_perm([0, 1])})
    fibers = {0: g1, 1: g1}
    good = StackOverPoset(poset, fibers, {(0, 1): identity_functor(g1)})
    assert check_fibrant_injective(good).fibrant
    disc = discrete_groupoid(["*"])
    # collapse C2 onto the trivial groupoid: morphisms cannot lift
    to_triv = GroupoidFunctor.of(g1, disc, {"*": "*"},
                                 {m: ("id", "*") for m in g1.morphisms})
    up = StackOverPoset(poset, {0: disc, 1: g1},
                        {(0, 1): to_triv})
    assert check_fibrant_injective(up).fibrant  # surjective on lifts: all collapse fine
    down = StackOverPoset(poset, {0: g1, 1: disc},
                          {(0, 1): constant_functor(disc, g1, "*")})
    assert not check_fibrant_injective(down).fibrant  # nontrivial loop has no lift


# -- orbits ---------------------------------------------------------------------

def test_trivial_group_singleton_orbits():
    report = group_action_orbits({"e": {0: 0, 1: 1}}, [0, 1])
    assert report.group_order == 1
    assert report.sizes() == (1, 1)


def test_c2_swap_orbit():
    report = group_action_orbits({"s": {0: 1, 1: 0}}, [0, 1])
    assert report.group_order == 2
    assert report.sizes() == (2,)
    assert report.orbits[0][1] == 1  # trivial stabilizer


def test_orbit_sizes_sum_and_orbit_stabilizer_identity():
    rng = random.Random(13)
    points = list(range(6))
    for _ in range(10):
        gens = {}
        for k in range(rng.randint(1, 2)):
            p = points[:]
            rng.shuffle(p)
            gens[f"g{k}"] = dict(zip(points, p))
        report = group_action_orbits(gens, points)
        assert sum(report.sizes()) == len(points)
        for orbit, stab in report.orbits:
            assert len(orbit) * stab == report.group_order


def test_generator_must_be_bijection():
    with pytest.raises(GroupoidError):
        group_action_orbits({"bad": {0: 0, 1: 0}}, [0, 1])
