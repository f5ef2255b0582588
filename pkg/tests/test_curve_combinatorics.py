import json

import networkx as nx
import numpy as np
import pytest

from solgeo.curve_combinatorics import (
    INSIDE,
    OUTSIDE,
    Component,
    CurveTree,
    Node,
    component_index,
    covering_index_check,
    curve_from_dict,
    euler_vertex_bound,
    exhaustive_filter,
    freedom_budget,
    is_string_like,
    load_curve,
    random_forest,
    small_curves,
)
from solgeo.errors import ValidationError


def rigid_curve(k=2):
    """x on an inside cylinder with two type-A nodes to outside caps."""
    extra = 2 * (k - 2)
    comps = [
        Component("I", INSIDE, contains_x=True),
        Component("O1", OUTSIDE, mu=2 + extra, constraints=extra),
        Component("O2", OUTSIDE, mu=2),
    ]
    nodes = [Node("I", "O1", "A"), Node("I", "O2", "A")]
    return CurveTree(comps, nodes, k=k, mu_total=4 + extra)


# --- string-like ---------------------------------------------------------------


def test_path_is_string_like():
    comps = [Component("a", OUTSIDE, mu=2), Component("b", INSIDE, contains_x=True), Component("c", OUTSIDE, mu=2)]
    c = CurveTree(comps, [Node("a", "b", "A"), Node("b", "c", "B")])
    assert is_string_like(c)


def test_three_nodes_not_string_like():
    comps = [Component("hub", INSIDE, contains_x=True)] + [Component(f"o{i}", OUTSIDE) for i in range(3)]
    comps[1].mu = 4
    c = CurveTree(comps, [Node("hub", f"o{i}", "B") for i in range(3)])
    assert not is_string_like(c)


def test_single_component_with_punctures():
    comp = Component("s", INSIDE, contains_x=True, punctures=[("A", None)] * 5)
    assert is_string_like(CurveTree([comp], []))


# --- component index -------------------------------------------------------------


def test_component_index_examples():
    assert component_index(INSIDE, ["A", "A"]) == 4
    assert component_index(INSIDE, ["B", "B"]) == 0
    assert component_index(OUTSIDE, ["A"], mu=2) == 1


def test_component_index_type_B_override():
    assert component_index(OUTSIDE, [("B", 1), ("B", None)], mu=4) == 3


def test_component_index_errors():
    with pytest.raises(ValidationError, match="inconsistent labels"):
        component_index(INSIDE, ["A"], mu=2)
    with pytest.raises(ValidationError, match="inconsistent labels"):
        component_index(OUTSIDE, ["C"])
    with pytest.raises(ValidationError):
        component_index("elsewhere", [])


# --- freedom budget ----------------------------------------------------------


def test_rigid_example():
    rep = freedom_budget(rigid_curve())
    assert rep.indices == {"I": 4, "O1": 1, "O2": 1}
    assert rep.total_index == rep.required == rep.freedom_budget == 6
    assert rep.balanced and rep.rigid and rep.status == "rigid"


def test_k3_still_balanced():
    r2, r3 = freedom_budget(rigid_curve(2)), freedom_budget(rigid_curve(3))
    assert r3.total_index == r2.total_index + 2 and r3.required == r2.required + 2
    assert r3.balanced and r3.rigid


def test_extra_type_A_on_one_side():
    c = rigid_curve()
    c.components["I"].punctures.append(("A", None))
    rep = freedom_budget(c)
    assert not rep.balanced and rep.status == "underdetermined"
    assert not rep.identity_holds


def test_overdetermined():
    comps = [Component("I", INSIDE, contains_x=True), Component("O", OUTSIDE, mu=4)]
    rep = freedom_budget(CurveTree(comps, [Node("I", "O", "B")]))
    # balanced in total, but x's component has index 0 against 4 constraints
    assert rep.balanced and not rep.feasible and rep.status == "balanced"
    comps = [Component("I", INSIDE, contains_x=True), Component("O", OUTSIDE, mu=2)]
    rep = freedom_budget(CurveTree(comps, [Node("I", "O", "B")], mu_total=2))
    assert rep.status == "overdetermined"


def test_budget_identity_on_all_small_curves():
    n = 0
    for c in small_curves(4):
        rep = freedom_budget(c)
        assert rep.identity_holds
        assert rep.total_index == sum(rep.indices.values())
        n += 1
    assert n > 100


def test_report_dict():
    d = freedom_budget(rigid_curve()).as_dict()
    assert d["status"] == "rigid" and d["type_A_nodes"] == 2


# --- validation --------------------------------------------------------------


def test_cycle_rejected():
    comps = [Component("a", INSIDE, contains_x=True), Component("b", OUTSIDE), Component("c", OUTSIDE)]
    with pytest.raises(ValidationError, match="malformed graph"):
        CurveTree(comps, [Node("a", "b", "A"), Node("a", "c", "A"), Node("b", "c", "A")])


def test_disconnected_rejected():
    with pytest.raises(ValidationError, match="not a tree"):
        CurveTree([Component("a", INSIDE), Component("b", OUTSIDE)], [])


def test_same_region_node_rejected():
    with pytest.raises(ValidationError, match="same region"):
        CurveTree([Component("a", INSIDE, contains_x=True), Component("b", INSIDE)], [Node("a", "b", "A")])


def test_x_outside_rejected():
    with pytest.raises(ValidationError, match="x must lie on an inside component"):
        CurveTree([Component("a", OUTSIDE, contains_x=True)], [])


def test_constraint_total_checked():
    with pytest.raises(ValidationError, match="2\\(k-2\\)"):
        CurveTree([Component("a", INSIDE, contains_x=True)], [], k=3)


def test_unknown_component():
    with pytest.raises(ValidationError, match="unknown component"):
        CurveTree([Component("a", INSIDE)], [Node("a", "zz", "A")])


# --- covering check -----------------------------------------------------------


def test_covering_check():
    ok = covering_index_check(["A", "A"], ["A"], mu_Dprime=2, d=2)
    assert ok["index"] == 2 and ok["bound"] == 2 and ok["holds"]
    bad = covering_index_check(["A", "A", "A"], ["A"], mu_Dprime=2, d=2)
    assert not bad["holds"]
    for n_a in range(5):
        for d in (1, 2, 3):
            r = covering_index_check(["A"] * n_a, ["A"], 4, d)
            assert r["holds"] == (n_a <= d)
    with pytest.raises(ValidationError):
        covering_index_check([], [], 0, 0)


# --- Euler bookkeeping -----------------------------------------------------------


def test_euler_path():
    rep = euler_vertex_bound(nx.path_graph(3), 2)
    assert rep.euler_holds and rep.bound_holds and rep.lhs == 0


def test_euler_star():
    rep = euler_vertex_bound(nx.star_graph(3), 3)
    assert (rep.lhs, rep.middle, rep.rhs) == (0.5, 1.5, 1.5)
    assert rep.bound_holds and rep.trees == 1


def test_euler_random(rng):
    for _ in range(500):
        F = random_forest(rng)
        leaves = sum(d == 1 for _, d in F.degree())
        rep = euler_vertex_bound(F, leaves)
        assert rep.euler_holds and rep.bound_holds
        assert rep.vertices - rep.edges == rep.trees


def test_euler_errors():
    with pytest.raises(ValidationError, match="exceeds"):
        euler_vertex_bound(nx.star_graph(4), 3)
    with pytest.raises(ValidationError, match="not a forest"):
        euler_vertex_bound(nx.cycle_graph(4), 10)
    G = nx.path_graph(2)
    G.add_node(99)
    with pytest.raises(ValidationError, match="isolated"):
        euler_vertex_bound(G, 5)


def test_random_forest_leaf_limit():
    rng = np.random.default_rng(7)
    for _ in range(100):
        F = random_forest(rng, max_leaves=6)
        assert nx.is_forest(F) and sum(d == 1 for _, d in F.degree()) <= 6


# --- exhaustive filter ------------------------------------------------------


def test_exhaustive_filter_small():
    res = exhaustive_filter(max_components=4)
    assert res.admissible > 0 and res.holds and res.counterexamples == []


# --- JSON loading ---------------------------------------------------------------


TREE = {
    "k": 2,
    "vertices": [
        {"id": "I", "region": INSIDE},
        {"id": "O1", "region": OUTSIDE, "mu": 2},
        {"id": "O2", "region": OUTSIDE, "mu": 2},
    ],
    "edges": [
        {"kind": "node", "u": "I", "v": "O1", "type": "A"},
        {"kind": "node", "u": "I", "v": "O2", "type": "A"},
        {"kind": "marked", "vertex": "I", "label": "x"},
    ],
}


def test_curve_from_dict():
    rep = freedom_budget(curve_from_dict(TREE))
    assert rep.status == "rigid"


def test_load_curve(tmp_path):
    p = tmp_path / "tree.json"
    p.write_text(json.dumps(TREE))
    assert is_string_like(load_curve(p))
    p.write_text('{"vertices": [}')
    with pytest.raises(ValidationError, match="line 1"):
        load_curve(p)


def test_bad_edges():
    bad = json.loads(json.dumps(TREE))
    bad["edges"].append({"kind": "wire", "vertex": "I"})
    with pytest.raises(ValidationError, match="unknown edge kind"):
        curve_from_dict(bad)
    bad = json.loads(json.dumps(TREE))
    bad["edges"].append({"kind": "puncture", "vertex": "I", "type": "Q"})
    with pytest.raises(ValidationError, match="inconsistent labels"):
        curve_from_dict(bad)
