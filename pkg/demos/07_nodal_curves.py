"""
Index bookkeeping for broken curves
===================================

A nodal curve split along the boundary of U0 is a tree of components. The
budget check compares the total index with the constraints it must meet;
the Euler identity controls how many branch points a forest can have.
"""

import networkx as nx
import numpy as np

from solgeo.curve_combinatorics import (
    INSIDE,
    OUTSIDE,
    Component,
    CurveTree,
    Node,
    euler_vertex_bound,
    exhaustive_filter,
    freedom_budget,
    random_forest,
)

comps = [
    Component("I", INSIDE, contains_x=True),
    Component("O1", OUTSIDE, mu=2),
    Component("O2", OUTSIDE, mu=2),
]
curve = CurveTree(comps, [Node("I", "O1", "A"), Node("I", "O2", "A")])
print(freedom_budget(curve).as_dict())

print(euler_vertex_bound(nx.star_graph(3), 3).as_dict())
rng = np.random.default_rng(0)
print(all(euler_vertex_bound(F, 10).bound_holds for F in (random_forest(rng) for _ in range(1000))))

res = exhaustive_filter(max_components=5)
print(f"{res.examined} curves, {res.admissible} admissible, conclusion holds for {res.conclusion_holds}")
