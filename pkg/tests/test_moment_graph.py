"""Moment graphs: formal Betti numbers, order minimization, invariants.

Frozen values are tagged with how they were obtained:
  [DERIVED]  brute force over all orders
  [TRIVIAL]  immediate from the definition
"""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbint.errors import BudgetExceeded
from orbint.moment_graph import (
    MomentGraph,
    OrientedOrder,
    formal_poincare,
    min_formal_poincare,
    minimizing_order,
    poly_less,
)
from orbint.qpoly import TPoly


def path(k):
    return MomentGraph(range(k), [(i, i + 1) for i in range(k - 1)])


def complete(k):
    return MomentGraph(range(k), itertools.combinations(range(k), 2))


class TestFormalPoincare:
    def test_single_vertex(self):
        g = MomentGraph(["v"], [])
        assert formal_poincare(g, OrientedOrder(["v"])) == TPoly({0: 1})  # [TRIVIAL]

    def test_one_edge_either_order(self):
        g = MomentGraph(["a", "b"], [("a", "b")])
        want = TPoly({0: 1, 2: 1})  # [DERIVED] out-degrees are always {0, 1}
        assert formal_poincare(g, OrientedOrder(["a", "b"])) == want
        assert formal_poincare(g, OrientedOrder(["b", "a"])) == want

    def test_triangle_any_order(self):
        g = complete(3)
        want = TPoly({0: 1, 2: 1, 4: 1})  # [DERIVED] always {0, 1, 2}
        for perm in itertools.permutations(g.vertices):
            assert formal_poincare(g, OrientedOrder(perm)) == want

    def test_rejects_partial_order(self):
        g = complete(3)
        with pytest.raises(ValueError):
            formal_poincare(g, OrientedOrder([0, 1]))

    def test_constant_term_positive(self):
        # the minimum vertex always has out-degree zero
        g = path(5)
        for perm in itertools.permutations(g.vertices):
            assert formal_poincare(g, OrientedOrder(perm)).coeff(0) >= 1


class TestPolyLess:
    def test_examples(self):
        assert poly_less(TPoly({0: 1, 2: 1}), TPoly({0: 2, 4: 1}))  # [TRIVIAL]
        assert not poly_less(TPoly({2: 3}), TPoly({2: 3}))  # [TRIVIAL]
        assert poly_less(TPoly({2: 3}), TPoly({2: 1, 4: 1}))  # [DERIVED]

    def test_strict_and_antisymmetric(self):
        a = TPoly({0: 1, 2: 2})
        b = TPoly({0: 2, 2: 1, 4: 1})
        assert poly_less(a, b)
        assert not poly_less(b, a)
        assert not poly_less(a, a)

    @given(
        st.dictionaries(
            st.integers(min_value=0, max_value=4),
            st.integers(min_value=-5, max_value=5),
            max_size=4,
        ),
        st.dictionaries(
            st.integers(min_value=0, max_value=4),
            st.integers(min_value=-5, max_value=5),
            max_size=4,
        ),
    )
    def test_trichotomy(self, c1, c2):
        p1, p2 = TPoly(c1), TPoly(c2)
        assert (p1 == p2) + poly_less(p1, p2) + poly_less(p2, p1) == 1


class TestMinimization:
    def test_path_three(self):
        got = min_formal_poincare(path(3))
        assert got == TPoly({0: 1, 2: 2})  # [DERIVED] brute force over 6 orders

    def test_path_three_witness(self):
        # ends-first orders all achieve the minimum; 0 < 1 < 2 is least
        assert minimizing_order(path(3)) == OrientedOrder((0, 1, 2))

    @pytest.mark.parametrize("k", range(2, 6))
    def test_complete_graph(self, k):
        got = min_formal_poincare(complete(k))
        assert got == TPoly({2 * i: 1 for i in range(k)})  # [DERIVED]

    @pytest.mark.parametrize("k", [1, 3, 6])
    def test_edgeless(self, k):
        g = MomentGraph(range(k), [])
        assert min_formal_poincare(g) == TPoly({0: k})  # [TRIVIAL]

    def test_methods_agree_on_corpus(self):
        rng = random.Random(7)
        for trial in range(40):
            k = rng.randint(1, 7)
            edges = [
                e for e in itertools.combinations(range(k), 2) if rng.random() < 0.5
            ]
            g = MomentGraph(range(k), edges)
            a = min_formal_poincare(g, method="exhaustive")
            b = min_formal_poincare(g, method="branch-bound")
            assert a == b, f"trial {trial}: {g.to_json()}"
            assert minimizing_order(g, method="exhaustive") == minimizing_order(
                g, method="branch-bound"
            )

    def test_vertex_count_is_value_at_one(self):
        g = path(6)
        assert min_formal_poincare(g).evaluate(1) == len(g.vertices)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            min_formal_poincare(complete(8), method="branch-bound", budget=10)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            min_formal_poincare(path(2), method="greedy")


@st.composite
def graph_and_order(draw):
    k = draw(st.integers(min_value=1, max_value=8))
    pool = list(itertools.combinations(range(k), 2))
    edges = [e for e in pool if draw(st.booleans())]
    seq = draw(st.permutations(range(k)))
    return MomentGraph(range(k), edges), OrientedOrder(seq)


class TestHandshake:
    @settings(max_examples=300, deadline=None)
    @given(graph_and_order())
    def test_betti_sums(self, pair):
        g, o = pair
        p = formal_poincare(g, o)
        coeffs = p.coefficients
        assert sum(coeffs.values()) == len(g.vertices)
        assert sum((e // 2) * c for e, c in coeffs.items()) == len(g.edges)


class TestGraphIO:
    def test_round_trip(self):
        g = MomentGraph(["w", "u", "v"], [("u", "v"), ("v", "w")])
        back = MomentGraph.from_json(g.to_json())
        assert back.vertices == g.vertices
        assert back.edges == g.edges

    def test_canonical_form(self):
        g = MomentGraph([2, 1, 3], [(3, 1), (1, 3), (2, 3)])
        assert g.vertices == (1, 2, 3)
        assert g.edges == ((1, 3), (2, 3))

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            MomentGraph([1, 2], [(1, 1)])

    def test_rejects_unknown_vertex(self):
        with pytest.raises(ValueError):
            MomentGraph([1, 2], [(1, 3)])

    def test_order_rejects_repeat(self):
        with pytest.raises(ValueError):
            OrientedOrder([1, 1, 2])
