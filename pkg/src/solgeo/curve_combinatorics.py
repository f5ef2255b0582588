"""Bookkeeping for punctured nodal genus-0 curves split by a Weinstein neighbourhood U0.

A curve is a tree: vertices are irreducible components, each inside or
outside U0; valence-2 edges are nodes (every node lies on the boundary of U0,
so it joins an inside and an outside component) labelled by the type of the
limiting geodesic; valence-1 edges are extra punctures or marked points.

Per component the real index is

    inside:   2 #A
    outside: -#A + mu(D) - sum over type-B punctures of mu_CZ

where #A counts type-A punctures (nodes included). Each type-A node adds
2 - 1 = 1 to the total, so the total index is mu(C) + #{type-A nodes}
whenever mu(C) is the sum of the outside mu(D) corrections.

Constraints are charged to components as follows: 4 to the component
through the point x, one per type-A node to its outside end (matching the
asymptotic geodesic within its one-parameter family), and the 2(k - 2)
conditions of the point of the moduli space to the components carrying the
marked constraint edges.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import networkx as nx
import numpy as np

from .errors import ValidationError

INSIDE = "inside_U0"
OUTSIDE = "outside_U0"
REGIONS = (INSIDE, OUTSIDE)
PUNCTURE_TYPES = ("A", "B")
# mu_CZ of a type-A puncture seen from each side; type B is 0 in the untwisted frame
MU_CZ_A = {INSIDE: 1, OUTSIDE: 2}
MU_CZ_B = 0
X_CONSTRAINTS = 4


@dataclass
class Component:
    id: str
    region: str
    degree: int = 1
    mu: int = 0
    contains_x: bool = False
    constraints: int = 0  # weight of marked constraint edges
    punctures: list = field(default_factory=list)  # (type, mu_cz or None), valence-1 only

    def __post_init__(self):
        if self.region not in REGIONS:
            raise ValidationError(f"region must be one of {REGIONS}")
        if not (isinstance(self.degree, int) and self.degree >= 1):
            raise ValidationError("covering degree must be a positive integer")
        if self.constraints < 0:
            raise ValidationError("constraint weight must be nonnegative")


@dataclass(frozen=True)
class Node:
    u: str
    v: str
    type: str
    mu_cz: Optional[int] = None  # type-B override (twisted frames)

    def __post_init__(self):
        if self.type not in PUNCTURE_TYPES:
            raise ValidationError("node type must be 'A' or 'B'")


class CurveTree:
    def __init__(self, components: Iterable[Component], nodes: Iterable[Node], k: int = 2, mu_total: int = 4):
        self.components = {c.id: c for c in components}
        self.nodes = list(nodes)
        self.k = int(k)
        self.mu_total = int(mu_total)
        if self.k < 2:
            raise ValidationError("k must be at least 2")
        self._validate()

    def _validate(self):
        G = self.graph()
        if G.number_of_nodes() == 0:
            raise ValidationError("malformed graph: no components")
        if G.number_of_edges() != len(self.nodes):
            raise ValidationError("malformed graph: repeated node or self-loop")
        if not nx.is_tree(G):
            raise ValidationError("malformed graph: not a tree")
        for n in self.nodes:
            if self.components[n.u].region == self.components[n.v].region:
                raise ValidationError("inconsistent labels: a node joins two components of the same region")
        for c in self.components.values():
            if c.contains_x and c.region != INSIDE:
                raise ValidationError("inconsistent labels: x must lie on an inside component")
        if sum(c.contains_x for c in self.components.values()) > 1:
            raise ValidationError("inconsistent labels: x marked twice")
        weight = sum(c.constraints for c in self.components.values())
        if weight != 2 * (self.k - 2):
            raise ValidationError(f"marked constraints must total 2(k-2) = {2 * (self.k - 2)}")

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(self.components)
        for n in self.nodes:
            if n.u not in self.components or n.v not in self.components:
                raise ValidationError("malformed graph: node references an unknown component")
            G.add_edge(n.u, n.v)
        return G

    def node_count(self, c_id: str) -> int:
        return sum(c_id in (n.u, n.v) for n in self.nodes)

    def punctures_of(self, c_id: str) -> list:
        """All punctures of a component: its nodes, then its valence-1 punctures."""
        out = [(n.type, n.mu_cz) for n in self.nodes if c_id in (n.u, n.v)]
        return out + list(self.components[c_id].punctures)

    def type_A_nodes(self) -> int:
        return sum(n.type == "A" for n in self.nodes)


# --- predicates and indices -------------------------------------------------


def is_string_like(c: CurveTree) -> bool:
    """Every component has at most two nodes (punctures do not count)."""
    return all(c.node_count(v) <= 2 for v in c.components)


def component_index(region: str, punctures: list, mu: int = 0) -> int:
    """Real index of a component from its region, punctures and mu(D)."""
    if region not in REGIONS:
        raise ValidationError(f"region must be one of {REGIONS}")
    n_a = 0
    b_sum = 0
    for p in punctures:
        kind, override = (p, None) if isinstance(p, str) else p
        if kind == "A":
            n_a += 1
        elif kind == "B":
            b_sum += MU_CZ_B if override is None else int(override)
        else:
            raise ValidationError("inconsistent labels: puncture type must be 'A' or 'B'")
    if region == INSIDE:
        if mu != 0:
            raise ValidationError("inconsistent labels: mu(D) = 0 inside U0")
        return MU_CZ_A[INSIDE] * n_a + n_a
    return -n_a + mu - b_sum


def component_constraints(c: CurveTree, c_id: str) -> int:
    comp = c.components[c_id]
    x = X_CONSTRAINTS if comp.contains_x else 0
    nodes_a = sum(n.type == "A" for n in c.nodes if c_id in (n.u, n.v)) if comp.region == OUTSIDE else 0
    return x + nodes_a + comp.constraints


@dataclass(frozen=True)
class IndexReport:
    indices: dict
    constraints: dict
    total_index: int
    freedom_budget: int  # mu(C) + #type-A nodes
    required: int  # #type-A nodes + 4 + 2(k - 2)
    type_A_nodes: int

    @property
    def identity_holds(self) -> bool:
        return self.total_index == self.freedom_budget

    @property
    def balanced(self) -> bool:
        return self.total_index == self.required

    @property
    def feasible(self) -> bool:
        return all(self.indices[v] >= self.constraints[v] for v in self.indices)

    @property
    def rigid(self) -> bool:
        return all(self.indices[v] == self.constraints[v] for v in self.indices)

    @property
    def status(self) -> str:
        if self.total_index < self.required:
            return "overdetermined"
        if self.total_index > self.required:
            return "underdetermined"
        return "rigid" if self.rigid else "balanced"

    def as_dict(self) -> dict:
        return {
            "indices": self.indices,
            "constraints": self.constraints,
            "total_index": self.total_index,
            "freedom_budget": self.freedom_budget,
            "required": self.required,
            "type_A_nodes": self.type_A_nodes,
            "identity_holds": self.identity_holds,
            "balanced": self.balanced,
            "feasible": self.feasible,
            "status": self.status,
        }


def freedom_budget(c: CurveTree) -> IndexReport:
    indices = {}
    for v, comp in c.components.items():
        indices[v] = component_index(comp.region, c.punctures_of(v), comp.mu)
    constraints = {v: component_constraints(c, v) for v in c.components}
    n_a = c.type_A_nodes()
    return IndexReport(
        indices=indices,
        constraints=constraints,
        total_index=sum(indices.values()),
        freedom_budget=c.mu_total + n_a,
        required=n_a + X_CONSTRAINTS + 2 * (c.k - 2),
        type_A_nodes=n_a,
    )


def covering_index_check(punctures_D: list, punctures_Dprime: list, mu_Dprime: int, d: int) -> dict:
    """Index of an outside component D covering D' with degree d, against d ind(D').

    ind(D) = -#A(D) + d (mu(D') - sum_B mu_CZ(D')); the bound ind(D) >= d ind(D')
    holds exactly when #A(D) <= d #A(D').
    """
    if not (isinstance(d, int) and d >= 1):
        raise ValidationError("covering degree must be a positive integer")
    ind_p = component_index(OUTSIDE, punctures_Dprime, mu_Dprime)
    n_a_p = sum(1 for p in punctures_Dprime if (p if isinstance(p, str) else p[0]) == "A")
    n_a = sum(1 for p in punctures_D if (p if isinstance(p, str) else p[0]) == "A")
    ind = -n_a + d * (ind_p + n_a_p)
    return {"index": ind, "bound": d * ind_p, "holds": ind >= d * ind_p}


# --- Euler bookkeeping on forests -----------------------------------------


@dataclass(frozen=True)
class EulerReport:
    vertices: int  # #S
    edges: int  # #A
    trees: int  # t
    leaves: int
    lhs: float  # 1/2 #{v >= 3}
    middle: float  # t + 1/2 sum_{v >= 3} (v - 2)
    rhs: float  # N0 / 2
    euler_holds: bool
    bound_holds: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def euler_vertex_bound(forest: nx.Graph, N0: int) -> EulerReport:
    """Check #S - #A = t and 1/2 #{v>=3} < t + 1/2 sum_{v>=3}(v - 2) <= N0 / 2.

    Punctures on the boundary of U0 are the leaf vertices of ``forest``,
    so valences count them. A forest has no isolated vertices here (no
    component of the curve is closed inside U0).
    """
    if not nx.is_forest(forest):
        raise ValidationError("malformed graph: not a forest")
    if not (isinstance(N0, int) and N0 >= 1):
        raise ValidationError("N0 must be a positive integer")
    deg = dict(forest.degree())
    if any(v == 0 for v in deg.values()):
        raise ValidationError("malformed graph: isolated vertex")
    leaves = sum(v == 1 for v in deg.values())
    if leaves > N0:
        raise ValidationError("leaf count exceeds N0")
    S = forest.number_of_nodes()
    A = forest.number_of_edges()
    t = nx.number_connected_components(forest)
    # t = sum(1 - v/2); doubled to stay in integers
    euler = S - A == t and 2 * S - sum(deg.values()) == 2 * t
    high = [v for v in deg.values() if v >= 3]
    lhs2 = len(high)
    mid2 = 2 * t + sum(v - 2 for v in high)
    return EulerReport(
        vertices=S,
        edges=A,
        trees=t,
        leaves=leaves,
        lhs=lhs2 / 2,
        middle=mid2 / 2,
        rhs=N0 / 2,
        euler_holds=euler,
        bound_holds=lhs2 < mid2 <= N0,
    )


def random_forest(rng: np.random.Generator, max_leaves: int = 10, max_trees: int = 3) -> nx.Graph:
    """A random forest with no isolated vertex and at most ``max_leaves`` leaves."""
    while True:
        G = nx.Graph()
        for _ in range(int(rng.integers(1, max_trees + 1))):
            n = int(rng.integers(2, 13))
            T = nx.random_labeled_tree(n, seed=int(rng.integers(2**31))) if n > 2 else nx.path_graph(2)
            G = nx.disjoint_union(G, T)
        if sum(d == 1 for _, d in G.degree()) <= max_leaves:
            return G


# --- loading -----------------------------------------------------------


def curve_from_dict(data: dict) -> CurveTree:
    comps = {}
    for v in data.get("vertices", []):
        comps[str(v["id"])] = Component(
            id=str(v["id"]),
            region=v["region"],
            degree=int(v.get("degree", 1)),
            mu=int(v.get("mu", 0)),
        )
    nodes = []
    for e in data.get("edges", []):
        kind = e.get("kind")
        if kind == "node":
            nodes.append(Node(str(e["u"]), str(e["v"]), e["type"], e.get("mu_cz")))
            continue
        target = comps.get(str(e.get("vertex")))
        if target is None:
            raise ValidationError("malformed graph: edge references an unknown component")
        if kind == "puncture":
            if e.get("type") not in PUNCTURE_TYPES:
                raise ValidationError("inconsistent labels: puncture type must be 'A' or 'B'")
            target.punctures.append((e["type"], e.get("mu_cz")))
        elif kind == "marked":
            if e.get("label") == "x":
                if target.contains_x:
                    raise ValidationError("inconsistent labels: x marked twice")
                target.contains_x = True
            else:
                target.constraints += int(e.get("weight", 2))
        else:
            raise ValidationError(f"unknown edge kind {kind!r}")
    return CurveTree(comps.values(), nodes, k=int(data.get("k", 2)), mu_total=int(data.get("mu_total", 4)))


def load_curve(path) -> CurveTree:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return curve_from_dict(data)


# --- exhaustive filter ----------------------------------------------------


def _compositions(total: int, parts: int, step: int = 1) -> Iterator[tuple]:
    """Ordered tuples of ``parts`` nonnegative multiples of ``step`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(0, total + 1, step):
        for rest in _compositions(total - first, parts - 1, step):
            yield (first,) + rest


def small_curves(max_components: int = 6, ks: Iterable[int] = (2, 3)) -> Iterator[CurveTree]:
    """Every labelled curve with at most ``max_components`` components.

    Ranges over tree shapes, the two region colourings, node types, the
    inside component through x, even outside mu(D) summing to mu(C) =
    4 + 2(k - 2), and the placement of the 2(k - 2) marked constraints.
    """
    for n in range(1, max_components + 1):
        shapes = [nx.empty_graph(1)] if n == 1 else list(nx.nonisomorphic_trees(n))
        for T in shapes:
            colour = nx.bipartite.color(T)
            edges = list(T.edges())
            for flip in (0, 1):
                region = {v: INSIDE if colour[v] ^ flip == 0 else OUTSIDE for v in T}
                inside = [v for v in T if region[v] == INSIDE]
                outside = [v for v in T if region[v] == OUTSIDE]
                for types in itertools.product(PUNCTURE_TYPES, repeat=len(edges)):
                    for x in inside:
                        for k in ks:
                            mu_c = 4 + 2 * (k - 2)
                            for mus in _compositions(mu_c, len(outside), 2):
                                for marks in _compositions(2 * (k - 2), len(outside), 2):
                                    comps = []
                                    for v in T:
                                        j = outside.index(v) if region[v] == OUTSIDE else None
                                        comps.append(
                                            Component(
                                                id=str(v),
                                                region=region[v],
                                                mu=mus[j] if j is not None else 0,
                                                contains_x=v == x,
                                                constraints=marks[j] if j is not None else 0,
                                            )
                                        )
                                    nodes = [Node(str(a), str(b), t) for (a, b), t in zip(edges, types)]
                                    yield CurveTree(comps, nodes, k=k, mu_total=mu_c)


@dataclass(frozen=True)
class FilterResult:
    examined: int
    admissible: int  # string-like, balanced and feasible
    conclusion_holds: int  # admissible curves with the expected type-A pattern
    counterexamples: list

    @property
    def holds(self) -> bool:
        return self.admissible > 0 and self.conclusion_holds == self.admissible


def type_A_pattern(c: CurveTree) -> list:
    """(component, #type-A punctures) for inside components with any."""
    out = []
    for v, comp in c.components.items():
        if comp.region == INSIDE:
            n_a = sum(1 for p in c.punctures_of(v) if p[0] == "A")
            if n_a:
                out.append((v, n_a))
    return out


def exhaustive_filter(max_components: int = 6, ks: Iterable[int] = (2, 3)) -> FilterResult:
    """Among string-like, budget-balanced, feasible curves, count those where
    exactly one inside component has type-A punctures, has exactly two, and
    contains x."""
    examined = admissible = good = 0
    bad = []
    for c in small_curves(max_components, ks):
        examined += 1
        if not is_string_like(c):
            continue
        rep = freedom_budget(c)
        if not (rep.balanced and rep.feasible):
            continue
        admissible += 1
        pattern = type_A_pattern(c)
        if len(pattern) == 1 and pattern[0][1] == 2 and c.components[pattern[0][0]].contains_x:
            good += 1
        elif len(bad) < 10:
            bad.append(c)
    return FilterResult(examined, admissible, good, bad)
