import json
import random
from itertools import chain, combinations

import pytest

from sheafnet.arch_site import (
    SiteGraph,
    basis,
    build_poset,
    check_classical_directed,
    classify_vertices,
    fork_surgery,
    loop_rank,
    lower_open_sets,
    parse_architecture,
    site_report,
)
from sheafnet.data import fixture_graph
from sheafnet.errors import ArchitectureError, PosetError


def powerset(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


def downward_closed_oracle(poset):
    """Brute force: every subset, filtered on the defining property."""
    out = []
    for sub in powerset(poset.elements):
        s = set(sub)
        if all(y in s for x in s for y in poset.elements if poset.leq(y, x)):
            out.append(frozenset(s))
    return sorted(out, key=lambda s: (len(s), sorted(map(str, s))))


def random_dag(rng, n):
    names = [f"n{i}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.35:
                edges.append((names[i], names[j]))
    used = {v for e in edges for v in e}
    vertices = [v for v in names if v in used] or names[:1]
    return SiteGraph.build(vertices, edges)


# -- parsing ---------------------------------------------------------------

def test_parse_smallest_chain():
    g = parse_architecture('{"nodes":["x","h","y"],"edges":[["x","h"],["h","y"]]}')
    assert g.vertices == ("x", "h", "y")
    assert g.roles == {"x": "input", "h": "ordinary", "y": "output"}


def test_parse_rejects_self_loop():
    with pytest.raises(ArchitectureError):
        parse_architecture('{"nodes":["y"],"edges":[["y","y"]]}')


def test_parse_rejects_duplicate_id_and_unknown_vertex():
    with pytest.raises(ArchitectureError):
        parse_architecture('{"nodes":["a","a"],"edges":[]}')
    with pytest.raises(ArchitectureError):
        parse_architecture('{"nodes":["a"],"edges":[["a","b"]]}')
    with pytest.raises(ArchitectureError):
        parse_architecture("not json at all {")


def test_parse_role_objects_and_role_contradiction():
    doc = {"nodes": [{"id": "a", "role": "input"}, "b"], "edges": [["a", "b"]]}
    g = parse_architecture(json.dumps(doc))
    assert g.roles["a"] == "input"
    bad = {"nodes": [{"id": "a", "role": "output"}, "b"], "edges": [["a", "b"]]}
    with pytest.raises(ArchitectureError):
        parse_architecture(json.dumps(bad))


def test_parse_lstm_fixture_is_fork_ready():
    g = fixture_graph("lstm")
    assert len(g.vertices) == 20
    assert set(g.inputs()) == {"x_t", "h_tm1", "c_tm1"}
    assert set(g.outputs()) == {"c_t", "y_t"}


# -- classical check --------------------------------------------------------

def test_check_chain_ok():
    g = SiteGraph.build(["0", "1", "2"], [("0", "1"), ("1", "2")])
    assert check_classical_directed(g).ok


def test_check_oriented_cycle_reported():
    report = check_classical_directed(["0", "1"], [("0", "1"), ("1", "0")])
    assert not report.ok
    assert report.cycles


def test_check_unfolded_rnn_ok():
    # two time steps of a recurrent net, unfolded in space-time
    nodes = ["x1", "x2", "h0", "h1", "h2", "y1", "y2"]
    edges = [("x1", "h1"), ("h0", "h1"), ("x2", "h2"), ("h1", "h2"),
             ("h1", "y1"), ("h2", "y2")]
    assert check_classical_directed(nodes, edges).ok


# -- fork surgery ------------------------------------------------------------

def test_surgery_leaves_chain_unchanged():
    g = fixture_graph("chain")
    fg = fork_surgery(g)
    assert fg.arrows == g.edges
    assert fg.tangs() == ()


def test_surgery_diamond_hand_trace():
    g = fixture_graph("diamond")
    fg = fork_surgery(g)
    assert set(fg.tangs()) == {"b^"}
    assert set(fg.tips_of("b^")) == {"a1", "a2"}
    assert ("a1", "b*") in fg.arrows and ("a2", "b*") in fg.arrows
    assert ("b*", "b^") in fg.arrows and ("b^", "b") in fg.arrows


def test_surgery_idempotent_in_effect():
    for name in ("diamond", "lstm", "gru"):
        fg = fork_surgery(fixture_graph(name))
        again = fork_surgery(fg)
        assert set(again.arrows) == set(fg.arrows)
        assert set(again.vertices) == set(fg.vertices)


def test_surgery_duplicates_input_feeding_join():
    # x and h both feed the joins ht and yt directly (the recurrent crux)
    g = SiteGraph.build(["x", "h", "ht", "yt"],
                        [("x", "ht"), ("h", "ht"), ("x", "yt"), ("h", "yt")])
    fg = fork_surgery(g)
    assert ("x", "x'") in fg.arrows and ("h", "h'") in fg.arrows
    for tang in fg.tangs():
        assert set(fg.tips_of(tang)) == {"x'", "h'"}
    assert len(fg.tangs()) == 2


def test_surgery_gru_has_six_tangs():
    fg = fork_surgery(fixture_graph("gru"))
    assert len(fg.tangs()) == 6


def test_surgery_lstm_has_five_tangs():
    fg = fork_surgery(fixture_graph("lstm"))
    assert len(fg.tangs()) == 5


# -- poset -------------------------------------------------------------------

def test_poset_diamond_relations():
    poset = build_poset(fork_surgery(fixture_graph("diamond")))
    assert set(poset.elements) == {"x0", "a1", "a2", "b", "b^"}
    for x, y in [("b", "b^"), ("a1", "b^"), ("a2", "b^"), ("a1", "x0"), ("a2", "x0")]:
        assert poset.leq(x, y)
    assert not poset.leq("b", "x0")
    assert set(poset.minimal()) == {"b", "a1", "a2"}
    assert set(poset.maximal()) == {"x0", "b^"}


def test_poset_chain_total_order():
    poset = build_poset(fork_surgery(fixture_graph("chain")))
    assert poset.leq("y", "h") and poset.leq("h", "x") and poset.leq("y", "x")
    assert poset.minimal() == ("y",) and poset.maximal() == ("x",)


def test_poset_lstm_minimal_elements_are_outputs_and_nine_tips():
    poset = build_poset(fork_surgery(fixture_graph("lstm")))
    cls = classify_vertices(poset)
    minimal = set(poset.minimal())
    tips = {v for v, tag in cls.primary.items() if tag == "tip"}
    outputs = {v for v, tag in cls.primary.items() if tag == "output"}
    assert len(tips) == 9
    assert tips == {"xp", "hp", "cp", "f", "i", "o", "g", "vf", "vi"}
    assert minimal == outputs | tips
    assert outputs == {"c_t", "y_t"}


def test_poset_antisymmetry_violation_detected():
    with pytest.raises(PosetError):
        # constructed directly: a <= b and b <= a
        from sheafnet.arch_site import FinitePoset

        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])


# -- classification -----------------------------------------------------------

def test_classify_chain():
    poset = build_poset(fork_surgery(fixture_graph("chain")))
    cls = classify_vertices(poset)
    assert cls.primary == {"x": "input", "h": "ordinary", "y": "output"}


def test_classify_diamond():
    poset = build_poset(fork_surgery(fixture_graph("diamond")))
    cls = classify_vertices(poset)
    assert cls.primary["b^"] == "tang"
    assert cls.primary["a1"] == "tip" and cls.primary["a2"] == "tip"
    assert cls.primary["b"] == "output"
    assert cls.primary["x0"] == "input"
    assert cls.ok


def test_classify_fuzz_no_contradictions():
    rng = random.Random(7)
    for _ in range(100):
        g = random_dag(rng, rng.randint(2, 12))
        poset = build_poset(fork_surgery(g))
        cls = classify_vertices(poset)
        assert cls.ok


# -- Alexandrov opens ---------------------------------------------------------

def test_opens_two_chain():
    from sheafnet.arch_site import FinitePoset

    poset = FinitePoset.chain(1)
    opens = lower_open_sets(poset)
    assert sorted(opens, key=len) == [frozenset(), frozenset({0}), frozenset({0, 1})]


def test_opens_antichain_is_powerset():
    from sheafnet.arch_site import FinitePoset

    poset = FinitePoset(["a", "b"], [])
    assert len(lower_open_sets(poset)) == 4


def test_opens_diamond_matches_bruteforce():
    poset = build_poset(fork_surgery(fixture_graph("diamond")))
    opens = sorted(lower_open_sets(poset), key=lambda s: (len(s), sorted(s)))
    assert opens == downward_closed_oracle(poset)
    assert len(opens) == 12


def test_opens_closed_under_union_intersection_and_basis_identity():
    rng = random.Random(3)
    for _ in range(10):
        g = random_dag(rng, rng.randint(2, 7))
        poset = build_poset(fork_surgery(g))
        opens = lower_open_sets(poset)
        family = set(opens)
        for u in opens:
            for v in opens:
                assert frozenset(u | v) in family
                assert frozenset(u & v) in family
        for x in poset.elements:
            for y in poset.elements:
                meet = basis(poset, x) & basis(poset, y)
                union = frozenset().union(
                    *(basis(poset, z) for z in meet)) if meet else frozenset()
                assert meet == union


def test_opens_bound_exceeded():
    from sheafnet.arch_site import FinitePoset
    from sheafnet.errors import BoundExceeded

    poset = FinitePoset(range(25), [])
    with pytest.raises(BoundExceeded):
        lower_open_sets(poset, bound=20)


# -- loop rank ----------------------------------------------------------------

def test_loop_rank_tree_is_zero():
    g = SiteGraph.build(["r", "l1", "l2"], [("r", "l1"), ("r", "l2")])
    assert loop_rank(g) == 0


def test_loop_rank_lstm_is_three():
    assert loop_rank(fixture_graph("lstm")) == 3


def test_loop_rank_gru_is_five():
    assert loop_rank(fixture_graph("gru")) == 5


def test_site_report_shape():
    report = site_report(fixture_graph("diamond"))
    assert set(report) >= {"poset", "classification", "loop_rank"}
    assert report["loop_rank"] == 1
