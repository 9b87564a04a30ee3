"""Counting pipelines: frozen values, pipeline identity, extraction, reports.

Frozen polynomials are tagged with how they were obtained:
  [PAPER]    transcribed display evaluated at the worked example
  [DERIVED]  computed by an independent route (closed forms, the
             brute-force oracle) and then frozen
  [TRIVIAL]  immediate from the definition
"""

import json

import pytest

from orbint.closed_forms import FormulaId, eval_formula
from orbint.counting_engine import (
    ArthurResult,
    CountRequest,
    FundamentalDomainTable,
    ak_constant_part,
    ak_count,
    ak_quasi_polynomial,
    ak_recursion_chain,
    arthur_J,
    default_j_table,
    fundamental_table,
    half_val_g_over_m,
    hn_main_body_count,
    m0_covolume_squared,
    orbital_integral,
    solve_weighted_integral,
    tail_count,
    weighted_integral_report,
)
from orbint.errors import (
    InconsistentPipelines,
    NotRegular,
    NotSufficientlyRegular,
    OutOfValidityRegion,
    UnsupportedGroup,
)
from orbint.polytopes import RegularElementSpec
from orbint.qpoly import QPoly, qsum
from orbint.root_data import LeviSpec, levis_above

F = FormulaId


def P(text):
    return QPoly.parse(text)


def split3(n1, n2):
    return RegularElementSpec("GL3", "split", n1=n1, n2=n2)


def mixed3(m, n):
    return RegularElementSpec("GL3", "mixed", m=m, n=n)


class TestGl2Pipeline:
    def test_ak_frozen(self):
        # [PAPER] Q(a) = sigma_n + 2a q^n at n = 1, a = 2
        spec = RegularElementSpec("GL2", "split", n=1)
        got = ak_count(CountRequest(spec, 0, (2,)), fundamental_table(spec))
        assert got == P("5*q + 1")

    @pytest.mark.parametrize("n", range(0, 4))
    @pytest.mark.parametrize("a", range(3, 7))
    def test_ak_matches_closed_form(self, n, a):
        spec = RegularElementSpec("GL2", "split", n=n)
        if 2 * a < n + 2:
            return
        got = ak_count(CountRequest(spec, 0, (a,)), fundamental_table(spec))
        assert got == eval_formula(F.GL2_SPLIT_Q, n=n, a=a)

    @pytest.mark.parametrize("n,a", [(1, 3), (1, 4), (2, 4), (2, 5)])
    def test_main_rest_display(self, n, a):
        # [PAPER] main body = J + (2a - (n+1)) q^n; the J term is withheld
        spec = RegularElementSpec("GL2", "split", n=n)
        got = hn_main_body_count(CountRequest(spec, 0, (a,)), default_j_table(spec))
        assert got == QPoly.q(n) * (2 * a - n - 1)

    @pytest.mark.parametrize("n", range(0, 4))
    def test_tail_is_two_domains(self, n):
        # [PAPER] tail = 2 sigma_n whatever the truncation
        spec = RegularElementSpec("GL2", "split", n=n)
        a = (n + 2,)
        got = tail_count(CountRequest(spec, 0, a), fundamental_table(spec))
        assert got == 2 * qsum(0, n)

    @pytest.mark.parametrize(
        "n,expected",
        [
            (0, "0"),  # [TRIVIAL]
            (1, "q - 1"),  # [PAPER]
            (2, "2*q^2 - q - 1"),  # [PAPER]
            (3, "3*q^3 - q^2 - q - 1"),  # [PAPER]
        ],
    )
    def test_solve(self, n, expected):
        spec = RegularElementSpec("GL2", "split", n=n)
        assert solve_weighted_integral(spec) == P(expected)

    @pytest.mark.parametrize("n", range(0, 5))
    def test_orbital(self, n):
        spec = RegularElementSpec("GL2", "split", n=n)
        assert orbital_integral(spec) == QPoly.q(n)  # [PAPER]


# regular window: 2a1 - a2 and 2a2 - a1 both at least n2 + 1
def split_grid(n2, width=4):
    b = n2 + 1
    return [
        (a1, a2)
        for a1 in range(b, b + width)
        for a2 in range(b, b + width)
        if 2 * a1 - a2 >= b and 2 * a2 - a1 >= b
    ]


class TestGl3SplitPipeline:
    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2)])
    def test_ak_matches_closed_form_both_parities(self, n1, n2):
        spec = split3(n1, n2)
        table = fundamental_table(spec)
        for a in split_grid(n2):
            got = ak_count(CountRequest(spec, 0, a), table)
            want = eval_formula(F.GL3_SPLIT_Q_AK, n1=n1, n2=n2, a1=a[0], a2=a[1])
            assert got == want, f"a={a}"

    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2)])
    def test_pipeline_identity(self, n1, n2):
        spec = split3(n1, n2)
        table = fundamental_table(spec)
        j_table = default_j_table(spec)
        j = solve_weighted_integral(spec)
        for a in split_grid(n2):
            req = CountRequest(spec, 0, a)
            lhs = ak_count(req, table)
            rhs = j + hn_main_body_count(req, j_table) + tail_count(req, table)
            assert lhs == rhs, f"a={a}"

    def test_ak_far_from_walls(self):
        # [DERIVED] the quasi-polynomial display evaluated deep in the window
        spec = split3(1, 1)
        got = ak_count(CountRequest(spec, 0, (10, 10)), fundamental_table(spec))
        assert got == eval_formula(F.GL3_SPLIT_Q_AK, n1=1, n2=1, a1=10, a2=10)

    def test_solve_frozen(self):
        # [DERIVED] theorem substitution at (1,1); oracle-checked at q = 2
        assert solve_weighted_integral(split3(1, 1)) == P("3*q^3 - 5*q^2 + q + 1")

    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3)])
    def test_solve_matches_closed_form(self, n1, n2):
        got = solve_weighted_integral(split3(n1, n2))
        assert got == eval_formula(F.GL3_SPLIT_J, n1=n1, n2=n2)
        assert got.degree() == 2 * n1 + n2

    def test_a_independence(self):
        # extraction grids of different parities give the same polynomial
        spec = split3(1, 2)
        grid_one = ((4, 4), (6, 6), (5, 6), (6, 5))
        grid_two = ((3, 3), (5, 5), (4, 5), (5, 4))
        assert solve_weighted_integral(
            spec, a_grid=grid_one
        ) == solve_weighted_integral(spec, a_grid=grid_two)

    @pytest.mark.parametrize("n1,n2,a", [(1, 1, (3, 3)), (1, 2, (4, 4)), (2, 2, (5, 4))])
    def test_proper_levi_term(self, n1, n2, a):
        # [PAPER] the Levi {1}{2,3} term is q^{2n1} (a1+a2-2n1-1) J_{GL2}(n2)
        spec = split3(n1, n2)
        levi = LeviSpec([(1,), (2, 3)])
        j2 = eval_formula(F.GL2_SPLIT_J, n=n2)
        j_table = {
            m: (j2 if m == levi else QPoly.zero())
            for m in levis_above(spec.m0())
            if m.k > 1
        }
        got = hn_main_body_count(CountRequest(spec, 0, a), j_table)
        assert got == QPoly.q(2 * n1) * j2 * (a[0] + a[1] - 2 * n1 - 1)

    @pytest.mark.parametrize("n1,n2,a", [(1, 1, (3, 3)), (1, 2, (4, 5)), (2, 2, (5, 5))])
    def test_tail_display(self, n1, n2, a):
        # [PAPER] tail = (a1+a2)(2 q^{2n1} sigma_{n2-1} + 4 q^{n1+n2} sigma_{n1-1}
        #                          + 3 q^{2n1+n2})
        spec = split3(n1, n2)
        got = tail_count(CountRequest(spec, 0, a), fundamental_table(spec))
        want = (a[0] + a[1]) * (
            2 * QPoly.q(2 * n1) * qsum(0, n2 - 1)
            + 4 * QPoly.q(n1 + n2) * qsum(0, n1 - 1)
            + 3 * QPoly.q(2 * n1 + n2)
        )
        assert got == want

    def test_borel_sign_pattern(self):
        # [TRIVIAL] rank exponents: six Borel strips subtract, six maximal add
        g_rank = LeviSpec.full(3).semisimple_rank()
        assert (-1) ** (g_rank - 0 - 1) == -1
        assert (-1) ** (g_rank - 1 - 1) == 1

    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2)])
    def test_orbital(self, n1, n2):
        assert orbital_integral(split3(n1, n2)) == QPoly.q(2 * n1 + n2)  # [PAPER]


class TestQuasiPolynomial:
    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2)])
    def test_branches_collapse(self, n1, n2):
        # the parity branches agree, so the count is honestly polynomial in a
        qp = ak_quasi_polynomial(split3(n1, n2))
        assert qp.branch_polynomials_coincide()

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_gl2_branches_collapse(self, n):
        qp = ak_quasi_polynomial(RegularElementSpec("GL2", "split", n=n))
        assert qp.branch_polynomials_coincide()

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_mixed_branches_collapse(self, m, n):
        qp = ak_quasi_polynomial(mixed3(m, n))
        assert qp.branch_polynomials_coincide()

    def test_evaluate_agrees_with_count(self):
        spec = split3(1, 2)
        qp = ak_quasi_polynomial(spec)
        table = fundamental_table(spec)
        for a in [(12, 13), (15, 15), (13, 16)]:
            assert qp.evaluate(a) == ak_count(CountRequest(spec, 0, a), table)

    def test_evaluate_rejects_irregular(self):
        qp = ak_quasi_polynomial(split3(1, 1))
        with pytest.raises(OutOfValidityRegion):
            qp.evaluate((1, 8))

    @pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 2)])
    def test_constant_part_is_poincare(self, n1, n2):
        # purity: the a-free part of the count is the Poincare series at t^2=q
        got = ak_constant_part(split3(n1, n2))
        assert got == eval_formula(F.GL3_SPLIT_POINCARE, n1=n1, n2=n2)


class TestRecursionChain:
    def setup_method(self):
        self.spec = split3(1, 2)
        self.table = fundamental_table(self.spec)
        self.base = eval_formula(F.GL3_SPLIT_POINCARE, n1=1, n2=2)

    def test_zero_steps_is_fundamental_domain(self):
        for levi in levis_above(self.spec.m0()):
            if levi.k != 2:
                continue
            got = ak_recursion_chain(self.spec, 0, levi, (0,), self.table)
            assert got == self.base  # [TRIVIAL]

    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_step_across_singleton_last(self, k):
        # [PAPER] boundary count across the {3}-facet:
        # increment q^{2n1} sigma_{n2-1} + q^{n1+n2} sigma_{n1-1} + q^{2n1+n2}
        n1, n2 = 1, 2
        inc = (
            QPoly.q(2 * n1) * qsum(0, n2 - 1)
            + QPoly.q(n1 + n2) * qsum(0, n1 - 1)
            + QPoly.q(2 * n1 + n2)
        )
        got = ak_recursion_chain(self.spec, 0, LeviSpec([(1, 2), (3,)]), (k,), self.table)
        assert got == self.base + k * inc

    @pytest.mark.parametrize("k", [1, 3])
    def test_step_across_singleton_first(self, k):
        # [PAPER] boundary count across the {1}-facet:
        # increment 2 q^{n1+n2} sigma_{n1-1} + q^{2n1+n2}
        n1, n2 = 1, 2
        inc = 2 * QPoly.q(n1 + n2) * qsum(0, n1 - 1) + QPoly.q(2 * n1 + n2)
        got = ak_recursion_chain(self.spec, 0, LeviSpec([(1,), (2, 3)]), (k,), self.table)
        assert got == self.base + k * inc

    def test_interleaved_levi_shares_the_first_increment(self):
        # {1,3}{2} crosses the same pair of other Levis as {1,2}{3}
        a = ak_recursion_chain(self.spec, 0, LeviSpec([(1, 3), (2,)]), (2,), self.table)
        b = ak_recursion_chain(self.spec, 0, LeviSpec([(1, 2), (3,)]), (2,), self.table)
        assert a == b

    def test_powers_by_root_key(self):
        levi = LeviSpec([(1, 2), (3,)])
        got_seq = ak_recursion_chain(self.spec, 0, levi, (3,), self.table)
        got_map = ak_recursion_chain(
            self.spec, 0, levi, {(1, -1, 0): 3}, self.table
        )
        assert got_seq == got_map

    def test_rejects_foreign_root(self):
        with pytest.raises(ValueError):
            ak_recursion_chain(
                self.spec, 0, LeviSpec([(1, 2), (3,)]), {(0, 1, -1): 1}, self.table
            )

    def test_rejects_negative_steps(self):
        with pytest.raises(NotSufficientlyRegular):
            ak_recursion_chain(
                self.spec, 0, LeviSpec([(1, 2), (3,)]), (-1,), self.table
            )

    def test_unsupported_outside_gl3_split(self):
        spec = mixed3(1, 1)
        with pytest.raises(UnsupportedGroup):
            ak_recursion_chain(
                spec, 2, spec.m0(), (1,), fundamental_table(spec)
            )


class TestMixedPipeline:
    @pytest.mark.parametrize(
        "m,n,expected",
        [
            (1, 1, "2*q^3 - q - 1"),  # [DERIVED] oracle-checked at q = 2
            (1, 2, "2*q^4 - q - 1"),  # [DERIVED]
            (2, 1, "3*q^4 + q^3 - 2*q^2 - q - 1"),  # [DERIVED]
        ],
    )
    def test_solve_frozen(self, m, n, expected):
        assert solve_weighted_integral(mixed3(m, n)) == P(expected)

    @pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)])
    def test_solve_matches_closed_form(self, m, n):
        got = solve_weighted_integral(mixed3(m, n))
        assert got == eval_formula(F.GL3_MIXED_J, m=m, n=n)

    @pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1)])
    def test_orbital_matches_closed_form(self, m, n):
        assert orbital_integral(mixed3(m, n)) == eval_formula(F.GL3_MIXED_I, m=m, n=n)

    def test_tail_is_two_domains(self):
        # the two strips against the minimal parabolic each hold one domain
        spec = mixed3(1, 1)
        fdom = eval_formula(F.GL3_MIXED_F, m=1, n=1)
        got = tail_count(CountRequest(spec, 2, (3,)), fundamental_table(spec))
        assert got == 2 * fdom


class TestAnisotropic:
    @pytest.mark.parametrize("n", range(0, 4))
    def test_gl2(self, n):
        spec = RegularElementSpec("GL2", "anisotropic", n=n)
        want = eval_formula(F.GL2_ANISO, n=n)
        assert solve_weighted_integral(spec) == want
        assert orbital_integral(spec) == want

    @pytest.mark.parametrize("n1,n2", [(0, 0), (1, 1), (1, 2), (2, 1)])
    def test_gl3(self, n1, n2):
        spec = RegularElementSpec("GL3", "anisotropic", n1=n1, n2=n2)
        if n1 <= n2:
            want = eval_formula(F.GL3_ANISO_J_CASE1, n1=n1, n2=n2)
        else:
            want = eval_formula(F.GL3_ANISO_J_CASE2, n1=n1, n2=n2)
        # with no truncation directions the weighted and plain counts agree
        assert solve_weighted_integral(spec) == want
        assert orbital_integral(spec) == want


class TestArthur:
    def test_volume_squares(self):
        assert m0_covolume_squared(split3(1, 1)) == 1
        assert m0_covolume_squared(mixed3(1, 1)) == 2
        assert m0_covolume_squared(RegularElementSpec("GL2", "anisotropic", n=1)) == 2
        assert (
            m0_covolume_squared(RegularElementSpec("GL3", "anisotropic", n1=1, n2=1))
            == 3
        )

    def test_gl2_trivial_valuation(self):
        res = arthur_J(RegularElementSpec("GL2", "split", n=0))
        assert res.weighted == QPoly.zero()  # [TRIVIAL]
        assert res.vol_squared == 1

    def test_result_reporting(self):
        res = arthur_J(split3(1, 1))
        assert isinstance(res, ArthurResult)
        assert res.weighted == P("3*q^3 - 5*q^2 + q + 1")
        assert res.volume == 1.0
        assert str(res) == "sqrt(1) * (3*q^3 - 5*q^2 + q + 1)"

    def test_mixed_large_m_branch(self):
        # [PAPER] m > n branch has leading term (2n+1) q^{3n+1}
        res = arthur_J(mixed3(2, 1))
        assert res.weighted.degree() == 4
        assert res.weighted.coeff(4) == 3


class TestHalfValuation:
    @pytest.mark.parametrize(
        "blocks,want",
        [
            ([(1,), (2,), (3,)], 4),
            ([(1,), (2, 3)], 2),
            ([(1, 2), (3,)], 3),
            ([(1, 3), (2,)], 3),
        ],
    )
    def test_split_levels(self, blocks, want):
        spec = split3(1, 2)
        assert half_val_g_over_m(spec, LeviSpec(blocks)) == want

    def test_mixed_is_n_gamma(self):
        assert half_val_g_over_m(mixed3(2, 1), mixed3(2, 1).m0()) == 3

    def test_full_levi_is_zero(self):
        assert half_val_g_over_m(split3(1, 2), LeviSpec.full(3)) == 0


class TestReport:
    def test_json_round_trip(self):
        rep = weighted_integral_report(split3(1, 1))
        data = json.loads(rep.to_json())
        assert data["group"] == "GL3"
        assert data["case"] == "split"
        assert QPoly.parse(data["j"]) == P("3*q^3 - 5*q^2 + q + 1")
        assert set(data["pieces"][str([2, 2])]) == {"ak", "main_rest", "tail"}
        assert data["table_entries"]

    def test_deterministic(self):
        a = weighted_integral_report(mixed3(1, 1)).to_json()
        b = weighted_integral_report(mixed3(1, 1)).to_json()
        assert a == b

    def test_anisotropic_has_no_grid(self):
        rep = weighted_integral_report(RegularElementSpec("GL2", "anisotropic", n=1))
        assert rep.a_grid == ()
        assert rep.pieces == {}
        assert rep.j == qsum(0, 1)


class TestValidation:
    def test_request_arity(self):
        with pytest.raises(ValueError):
            CountRequest(split3(1, 1), 0, (2,))
        with pytest.raises(ValueError):
            CountRequest(RegularElementSpec("GL2", "split", n=1), 0, (2, 2))

    def test_negative_truncation(self):
        spec = RegularElementSpec("GL2", "split", n=1)
        with pytest.raises(NotRegular):
            ak_count(CountRequest(spec, 0, (-1,)), fundamental_table(spec))

    @pytest.mark.parametrize("a", [(2, 4), (4, 2), (1, 1)])
    def test_window_violations(self, a):
        spec = split3(1, 2)
        req = CountRequest(spec, 0, a)
        with pytest.raises(NotSufficientlyRegular):
            hn_main_body_count(req, default_j_table(spec))
        with pytest.raises(NotSufficientlyRegular):
            tail_count(req, fundamental_table(spec))

    def test_missing_table_entry(self):
        table = FundamentalDomainTable({})
        with pytest.raises(KeyError, match="fundamental-domain entry"):
            table.value(LeviSpec.full(3), (0,))

    def test_corrupt_table_fails_cancellation(self):
        # poison one cone-stratum entry: the a-dependence can no longer cancel
        spec = split3(1, 1)
        entries = fundamental_table(spec).entries()
        levi = LeviSpec([(1,), (2, 3)])
        entries[(levi, (0, 0))] = entries[(levi, (0, 0))] + 1
        with pytest.raises(InconsistentPipelines):
            solve_weighted_integral(spec, table=FundamentalDomainTable(entries))
