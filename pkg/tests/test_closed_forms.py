"""Closed-form evaluators: frozen values, cross identities, Hessenberg sums.

Frozen polynomials are tagged with how they were obtained:
  [PAPER]    transcribed display evaluated at the worked example
  [DERIVED]  computed by an independent route (GKM cell sums, identity
             chasing) and then frozen
  [TRIVIAL]  immediate from the definition
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbint.closed_forms import (
    FormulaId,
    dominant_shell_count,
    eval_formula,
    gl3_split_poincare_tpoly,
    hessenberg_cell_dimension,
    hessenberg_sum,
    mixed_n_gamma,
    moy_prasad_datum,
)
from orbint.errors import BranchMismatch
from orbint.qpoly import QPoly, qsum

F = FormulaId


def P(text):
    return QPoly.parse(text)


class TestGl2Values:
    def test_split_f(self):
        # [PAPER] n = 2 worked example
        assert eval_formula(F.GL2_SPLIT_F, n=2) == P("q^2 + q + 1")

    @pytest.mark.parametrize(
        "n,expected",
        [
            (0, "0"),  # [TRIVIAL] empty sums
            (1, "q - 1"),  # [PAPER]
            (2, "2*q^2 - q - 1"),
            (3, "3*q^3 - q^2 - q - 1"),
        ],
    )
    def test_split_j(self, n, expected):
        assert eval_formula(F.GL2_SPLIT_J, n=n) == P(expected)

    def test_split_q(self):
        # [PAPER] truncated count sigma_n + 2a q^n at n = 1, a = 2
        assert eval_formula(F.GL2_SPLIT_Q, n=1, a=2) == P("5*q + 1")

    def test_split_i(self):
        assert eval_formula(F.GL2_SPLIT_I, n=2) == P("q^2")  # [TRIVIAL]

    def test_aniso(self):
        assert eval_formula(F.GL2_ANISO, n=3) == qsum(0, 3)  # [PAPER]


class TestGl3SplitValues:
    @pytest.mark.parametrize(
        "n1,n2,expected,total",
        [
            (1, 1, "q^3 + 4*q^2 + q + 1", 7),  # [PAPER]
            (1, 2, "q^4 + 4*q^3 + 3*q^2 + q + 1", 10),  # [PAPER]
            (2, 2, "q^6 + 4*q^5 + 8*q^4 + 2*q^3 + 2*q^2 + q + 1", 19),  # [PAPER]
        ],
    )
    def test_poincare(self, n1, n2, expected, total):
        got = eval_formula(F.GL3_SPLIT_POINCARE, n1=n1, n2=n2)
        assert got == P(expected)
        assert got.evaluate(1) == total

    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2), (2, 3)])
    def test_poincare_tpoly_shape(self, n1, n2):
        p = gl3_split_poincare_tpoly(n1, n2)
        assert all(e % 2 == 0 for e in p.coefficients)
        assert p.degree() == 2 * (2 * n1 + n2)
        assert p.substitute_q() == eval_formula(F.GL3_SPLIT_POINCARE, n1=n1, n2=n2)

    def test_j(self):
        # [PAPER] worked example n1 = n2 = 1
        assert eval_formula(F.GL3_SPLIT_J, n1=1, n2=1) == P("3*q^3 - 5*q^2 + q + 1")

    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2), (2, 3)])
    def test_j_degree_and_leading(self, n1, n2):
        j = eval_formula(F.GL3_SPLIT_J, n1=n1, n2=n2)
        assert j.degree() == 2 * n1 + n2
        assert j.coeff(2 * n1 + n2) == n1 * n1 + 2 * n1 * n2

    def test_i(self):
        assert eval_formula(F.GL3_SPLIT_I, n1=1, n2=2) == P("q^4")  # [TRIVIAL]


# a-grid wide enough to pin quasi-polynomials of degree 2 on every parity class
SPLIT_GRID = [
    (n1, n2, a1, a2)
    for (n1, n2) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
    for a1 in range(3 * n2 + 2, 3 * n2 + 8)
    for a2 in range(3 * n2 + 2, 3 * n2 + 8)
]


class TestSplitPipelineIdentity:
    @pytest.mark.parametrize("n1,n2,a1,a2", SPLIT_GRID)
    def test_ak_equals_main_plus_tail(self, n1, n2, a1, a2):
        lhs = eval_formula(F.GL3_SPLIT_Q_AK, n1=n1, n2=n2, a1=a1, a2=a2)
        main = eval_formula(F.GL3_SPLIT_MAIN, n1=n1, n2=n2, a1=a1, a2=a2)
        tail = eval_formula(F.GL3_SPLIT_TAIL, n1=n1, n2=n2, a1=a1, a2=a2)
        assert lhs == main + tail

    def test_ak_constant_term_is_purity_value(self):
        # a = 0 formally: the truncation-free part reduces to the Poincare
        # polynomial, so Q_AK - (a-dependent terms) recovers P at t^2 = q.
        got = eval_formula(F.GL3_SPLIT_Q_AK, n1=1, n2=1, a1=0, a2=0)
        assert got == eval_formula(F.GL3_SPLIT_POINCARE, n1=1, n2=1)


class TestGl3MixedValues:
    def test_delta(self):
        # [PAPER] m = n = 1 worked example
        assert eval_formula(F.GL3_MIXED_DELTA, m=1, n=1) == P("2*q^3 + 5*q^2 + q + 1")

    def test_f(self):
        # [PAPER] m = n = 1; the theorem display gives 1 + q + 3q^2 + q^3
        assert eval_formula(F.GL3_MIXED_F, m=1, n=1) == P("q^3 + 3*q^2 + q + 1")

    @pytest.mark.parametrize(
        "m,n,expected",
        [
            (1, 1, "2*q^3 - q - 1"),  # [PAPER]
            (2, 1, "3*q^4 + q^3 - 2*q^2 - q - 1"),  # [DERIVED] via J identity below
        ],
    )
    def test_j(self, m, n, expected):
        assert eval_formula(F.GL3_MIXED_J, m=m, n=n) == P(expected)

    @pytest.mark.parametrize(
        "m,n,expected",
        [(1, 1, "q^3 + q^2"), (2, 1, "q^4 + q^3"), (1, 2, "q^4 + q^3 + q^2")],
    )
    def test_i(self, m, n, expected):
        assert eval_formula(F.GL3_MIXED_I, m=m, n=n) == P(expected)

    def test_n_gamma(self):
        assert mixed_n_gamma(1, 1) == 2
        assert mixed_n_gamma(2, 1) == 3
        assert mixed_n_gamma(3, 1) == 3


MIXED_GRID = [(m, n) for m in range(1, 5) for n in range(1, 5)]


class TestMixedIdentities:
    @pytest.mark.parametrize("m,n", MIXED_GRID)
    def test_delta_minus_complement_is_f(self, m, n):
        # Unstable complement of the truncated count: q^{n_gamma} sum_j sigma_j.
        delta = eval_formula(F.GL3_MIXED_DELTA, m=m, n=n)
        comp = QPoly.q(mixed_n_gamma(m, n)) * sum(
            (qsum(0, j) for j in range(0, n + 1)), QPoly.zero()
        )
        assert delta - comp == eval_formula(F.GL3_MIXED_F, m=m, n=n)

    @pytest.mark.parametrize("m,n", MIXED_GRID)
    def test_j_from_f(self, m, n):
        # J = (n_gamma + 1) q^{n_gamma} |F^M| - |F| with |F^M| = sigma_n.
        ng = mixed_n_gamma(m, n)
        expected = QPoly.q(ng, ng + 1) * qsum(0, n) - eval_formula(
            F.GL3_MIXED_F, m=m, n=n
        )
        assert eval_formula(F.GL3_MIXED_J, m=m, n=n) == expected


class TestGl3AnisoValues:
    @pytest.mark.parametrize(
        "n1,expected",
        [
            (0, "1"),  # [PAPER] spherical fiber is a point
            (1, "q^3 + 2*q^2 + q + 1"),  # [PAPER]
            (2, "q^6 + 2*q^5 + 3*q^4 + 2*q^3 + 2*q^2 + q + 1"),  # [DERIVED] GKM sum
        ],
    )
    def test_case1(self, n1, expected):
        assert eval_formula(F.GL3_ANISO_J_CASE1, n1=n1) == P(expected)

    @pytest.mark.parametrize(
        "n2,expected",
        [
            (0, "q + 1"),  # [DERIVED] GKM sum over the two admissible cells
            (1, "q^4 + 2*q^3 + 2*q^2 + q + 1"),  # [PAPER]
        ],
    )
    def test_case2(self, n2, expected):
        assert eval_formula(F.GL3_ANISO_J_CASE2, n2=n2) == P(expected)

    def test_case1_accepts_matching_n2(self):
        a = eval_formula(F.GL3_ANISO_J_CASE1, n1=1, n2=3)
        b = eval_formula(F.GL3_ANISO_J_CASE1, n1=1, n2=1)
        assert a == b == eval_formula(F.GL3_ANISO_J_CASE1, n1=1)

    def test_branch_mismatch(self):
        with pytest.raises(BranchMismatch):
            eval_formula(F.GL3_ANISO_J_CASE1, n1=2, n2=1)
        with pytest.raises(BranchMismatch):
            eval_formula(F.GL3_ANISO_J_CASE2, n2=2, n1=1)
        with pytest.raises(BranchMismatch):
            eval_formula(F.GL3_ANISO_J_CASE2, n2=2, n1=2)


class TestParamValidation:
    def test_unknown_formula(self):
        with pytest.raises(ValueError):
            eval_formula("gl2_split_j", n=1)

    @pytest.mark.parametrize("n1,n2", [(0, 1), (2, 1), (-1, 3)])
    def test_split_minimal_form(self, n1, n2):
        with pytest.raises(ValueError):
            eval_formula(F.GL3_SPLIT_POINCARE, n1=n1, n2=n2)

    @pytest.mark.parametrize("m,n", [(0, 1), (1, 0)])
    def test_mixed_range(self, m, n):
        with pytest.raises(ValueError):
            eval_formula(F.GL3_MIXED_J, m=m, n=n)

    def test_negative_n(self):
        with pytest.raises(ValueError):
            eval_formula(F.GL2_SPLIT_J, n=-1)


class TestWeightVanishesAtOne:
    """The xi-weighted integrals are signed counts and cancel at q = 1."""

    @given(st.integers(min_value=0, max_value=12))
    def test_gl2(self, n):
        assert eval_formula(F.GL2_SPLIT_J, n=n).evaluate(1) == 0

    @given(
        st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=6)
    )
    def test_gl3_split(self, n1, d):
        assert eval_formula(F.GL3_SPLIT_J, n1=n1, n2=n1 + d).evaluate(1) == 0

    @given(
        st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8)
    )
    def test_gl3_mixed(self, m, n):
        assert eval_formula(F.GL3_MIXED_J, m=m, n=n).evaluate(1) == 0


class TestHessenbergCells:
    def test_moy_prasad_data(self):
        x, t = moy_prasad_datum("gl2", 1)
        assert x == (1, 0.5) and t == 1.5
        x, t = moy_prasad_datum("gl3_case1", 2)
        assert float(t) == pytest.approx(2 + 1 / 3)
        x, t = moy_prasad_datum("gl3_case2", 2)
        assert float(t) == pytest.approx(2 + 2 / 3)
        with pytest.raises(ValueError):
            moy_prasad_datum("gl4", 1)

    def test_gl2_dimensions(self):
        x, t = moy_prasad_datum("gl2", 1)
        # a = 0 is the base point, a = (-1, 1) the other admissible cell
        assert hessenberg_cell_dimension("gl2", x, t, (0, 0)) == 0
        assert hessenberg_cell_dimension("gl2", x, t, (1, -1)) == 1

    def test_case1_sector_labels(self):
        # [PAPER] bulk cell 2(a1 - a3) and sector cell 2(a2 - a3) - 1
        x, t = moy_prasad_datum("gl3_case1", 3)
        assert hessenberg_cell_dimension("gl3_case1", x, t, (-1, 0, 1)) == 4
        assert hessenberg_cell_dimension("gl3_case1", x, t, (0, -1, 1)) == 3

    def test_case1_boundary_label(self):
        # [PAPER] domain-boundary cell a1 - a3 + n1 at n1 = 1, a = (1, 0, -1)
        x, t = moy_prasad_datum("gl3_case1", 1)
        assert hessenberg_cell_dimension("gl3_case1", x, t, (-1, 0, 1)) == 3

    def test_rank_mismatch(self):
        x, t = moy_prasad_datum("gl2", 1)
        with pytest.raises(ValueError):
            hessenberg_cell_dimension("gl2", (1, 0, 0), t, (0, 0, 0))
        with pytest.raises(ValueError):
            hessenberg_cell_dimension("so5", x, t, (0, 0))


class TestHessenbergSums:
    @pytest.mark.parametrize("n", range(0, 4))
    def test_gl2_gives_sigma(self, n):
        assert hessenberg_sum("gl2", n) == qsum(0, n)

    @pytest.mark.parametrize("n", range(0, 4))
    def test_case1_matches_formula(self, n):
        assert hessenberg_sum("gl3_case1", n) == eval_formula(
            F.GL3_ANISO_J_CASE1, n1=n
        )

    @pytest.mark.parametrize("n", range(0, 4))
    def test_case2_matches_formula(self, n):
        assert hessenberg_sum("gl3_case2", n) == eval_formula(
            F.GL3_ANISO_J_CASE2, n2=n
        )

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            hessenberg_sum("gl2", -1)


class TestShellCount:
    @pytest.mark.parametrize("n", range(0, 16))
    def test_against_enumeration(self, n):
        brute = sum(
            1
            for a1 in range(0, n + 1)
            for a2 in range(-n, n + 1)
            if a1 >= a2 >= -a1 - a2 and 2 * a1 + a2 == n
        )
        assert dominant_shell_count(n) == brute

    def test_negative_is_empty(self):
        assert dominant_shell_count(-1) == 0
