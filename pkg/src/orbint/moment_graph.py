"""Formal Poincare polynomials of moment graphs and their minimization.

A moment graph records the torus fixed points of a fiber and the
one-dimensional orbit closures connecting them.  A total order on the
vertices orients every edge from its greater endpoint to its smaller one;
the formal Betti number b_{2i} counts vertices of out-degree i, and the
formal Poincare polynomial is P(t) = sum b_{2i} t^{2i}.  Minimizing P over
all total orders uses the order on polynomials where p < r when the leading
coefficient of r - p is positive.

Graphs are user input (JSON {"vertices": [...], "edges": [[u, v], ...]});
no construction from a group element is attempted.
"""

import json
from itertools import permutations

from .errors import BudgetExceeded
from .qpoly import TPoly

__all__ = [
    "MomentGraph",
    "OrientedOrder",
    "formal_poincare",
    "min_formal_poincare",
    "minimizing_order",
    "poly_less",
]

DEFAULT_EXHAUSTIVE_CAP = 10
DEFAULT_BUDGET = 10_000_000


class MomentGraph:
    """A finite simple graph: fixed points and orbit-closure edges."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(sorted(set(vertices)))
        index = set(self.vertices)
        seen = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in index or v not in index:
                raise ValueError(f"edge {(u, v)!r} mentions an unknown vertex")
            seen.add((u, v) if u <= v else (v, u))
        self.edges = tuple(sorted(seen))
        self._adjacency = {v: set() for v in self.vertices}
        for u, v in self.edges:
            self._adjacency[u].add(v)
            self._adjacency[v].add(u)

    def neighbors(self, v):
        return frozenset(self._adjacency[v])

    def __repr__(self):
        return f"MomentGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def to_json(self):
        return json.dumps(
            {
                "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["vertices"], data["edges"])


class OrientedOrder:
    """A total order on vertices, listed from least to greatest.

    Every edge points from its greater endpoint to its smaller one, so the
    induced orientation is acyclic by construction.
    """

    def __init__(self, sequence):
        self.sequence = tuple(sequence)
        if len(set(self.sequence)) != len(self.sequence):
            raise ValueError("order repeats a vertex")
        self._rank = {v: i for i, v in enumerate(self.sequence)}

    def rank(self, v):
        return self._rank[v]

    def __repr__(self):
        return f"OrientedOrder({self.sequence!r})"

    def __eq__(self, other):
        return isinstance(other, OrientedOrder) and self.sequence == other.sequence

    def __hash__(self):
        return hash(self.sequence)


def formal_poincare(g, o):
    """P^o(t) = sum over vertices of t^(2 * out-degree)."""
    if set(o.sequence) != set(g.vertices):
        raise ValueError("order is not a total order on the graph's vertices")
    coeffs = {}
    for v in g.vertices:
        out = sum(1 for w in g.neighbors(v) if o.rank(w) < o.rank(v))
        coeffs[2 * out] = coeffs.get(2 * out, 0) + 1
    return TPoly(coeffs)


def poly_less(p1, p2):
    """Strict order: the leading coefficient of p2 - p1 is positive."""
    diff = p2 - p1
    if diff.is_zero():
        return False
    return diff.coeff(diff.degree()) > 0


def _hist_key(hist, top):
    """Coefficients from the highest degree down; tuples compare like polys."""
    return tuple(hist.get(i, 0) for i in range(top, -1, -1))


def _exhaustive(g):
    verts = g.vertices
    top = len(verts) - 1
    adj = {v: g.neighbors(v) for v in verts}
    best_key = None
    best_seq = None
    for perm in permutations(verts):
        placed = set()
        hist = {}
        for v in perm:
            out = len(adj[v] & placed)
            hist[out] = hist.get(out, 0) + 1
            placed.add(v)
        key = _hist_key(hist, top)
        if best_key is None or key < best_key:
            best_key = key
            best_seq = perm
    return best_key, best_seq


def _branch_bound(g, budget):
    verts = g.vertices
    n = len(verts)
    top = n - 1
    adj = {v: g.neighbors(v) for v in verts}
    state = {"nodes": 0, "best_key": None, "best_seq": None}

    def bound_key(hist, placed, remaining):
        # every unplaced vertex already owes an arrow to each placed neighbor
        opt = dict(hist)
        for v in remaining:
            out = len(adj[v] & placed)
            opt[out] = opt.get(out, 0) + 1
        return _hist_key(opt, top)

    def walk(seq, placed, hist, remaining):
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise BudgetExceeded(
                f"order search expanded more than {budget} nodes"
            )
        if not remaining:
            key = _hist_key(hist, top)
            if state["best_key"] is None or key < state["best_key"]:
                state["best_key"] = key
                state["best_seq"] = tuple(seq)
            return
        if state["best_key"] is not None:
            if bound_key(hist, placed, remaining) >= state["best_key"]:
                return
        for v in remaining:
            out = len(adj[v] & placed)
            hist[out] = hist.get(out, 0) + 1
            seq.append(v)
            placed.add(v)
            walk(seq, placed, hist, [w for w in remaining if w != v])
            placed.discard(v)
            seq.pop()
            hist[out] -= 1

    walk([], set(), {}, list(verts))
    return state["best_key"], state["best_seq"]


def _search(g, method, exhaustive_cap, budget):
    if not g.vertices:
        return TPoly({}), OrientedOrder(())
    if method is None:
        method = "exhaustive" if len(g.vertices) <= exhaustive_cap else "branch-bound"
    if method == "exhaustive":
        key, seq = _exhaustive(g)
    elif method == "branch-bound":
        key, seq = _branch_bound(g, budget)
    else:
        raise ValueError(f"unknown search method {method!r}")
    top = len(g.vertices) - 1
    coeffs = {2 * (top - i): c for i, c in enumerate(key) if c}
    return TPoly(coeffs), OrientedOrder(seq)


def min_formal_poincare(
    g, method=None, exhaustive_cap=DEFAULT_EXHAUSTIVE_CAP, budget=DEFAULT_BUDGET
):
    """The minimum of formal_poincare over all total orders.

    Small graphs are enumerated outright; above ``exhaustive_cap`` vertices a
    depth-first branch-and-bound prunes any prefix whose optimistic
    completion cannot beat the incumbent, raising BudgetExceeded beyond
    ``budget`` node expansions.  Both searches scan candidates in sorted
    vertex order, so ties resolve to the same witnessing order.
    """
    poly, _ = _search(g, method, exhaustive_cap, budget)
    return poly


def minimizing_order(
    g, method=None, exhaustive_cap=DEFAULT_EXHAUSTIVE_CAP, budget=DEFAULT_BUDGET
):
    """The lexicographically-least order achieving min_formal_poincare."""
    _, order = _search(g, method, exhaustive_cap, budget)
    return order
