"""Literal evaluators for the displayed closed-form counts and integrals.

Every identifier in `FormulaId` names exactly one displayed formula: a
fundamental-domain count, a truncated count, a weighted orbital integral
J^xi, or an ordinary orbital integral I^G, for the gl2 and gl3 cases.
The evaluators transcribe the displays term by term, keeping the floor
and ceiling bookkeeping as printed and using the convention that a sum
whose lower index exceeds its upper index is empty.  Nothing is derived
or simplified here; these are golden references for the counting engine
and the enumeration oracle.

The anisotropic cases also get their Hessenberg-paving machinery: the
cell-dimension count over affine roots, and the direct sum of q^dim over
the admissible cells, which must reproduce the corresponding closed form.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction

from .errors import BranchMismatch
from .qpoly import QPoly, TPoly, qsum


class FormulaId(Enum):
    GL2_SPLIT_J = "gl2_split_j"
    GL2_SPLIT_Q = "gl2_split_q"
    GL2_SPLIT_F = "gl2_split_f"
    GL2_SPLIT_I = "gl2_split_i"
    GL2_ANISO = "gl2_aniso"
    GL3_SPLIT_POINCARE = "gl3_split_poincare"
    GL3_SPLIT_Q_AK = "gl3_split_q_ak"
    GL3_SPLIT_MAIN = "gl3_split_main"
    GL3_SPLIT_TAIL = "gl3_split_tail"
    GL3_SPLIT_J = "gl3_split_j"
    GL3_SPLIT_I = "gl3_split_i"
    GL3_MIXED_DELTA = "gl3_mixed_delta"
    GL3_MIXED_F = "gl3_mixed_f"
    GL3_MIXED_J = "gl3_mixed_j"
    GL3_MIXED_I = "gl3_mixed_i"
    GL3_ANISO_J_CASE1 = "gl3_aniso_j_case1"
    GL3_ANISO_J_CASE2 = "gl3_aniso_j_case2"


def _ceil_div(a, b):
    return -((-a) // b)


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# gl2


def _gl2_split_j(n):
    _require(n >= 0, "n must be nonnegative")
    return QPoly.q(n, n) - qsum(0, n - 1)


def _gl2_split_q(n, a):
    _require(n >= 0 and a >= 0, "n, a must be nonnegative")
    return qsum(0, n) + QPoly.q(n, 2 * a)


def _gl2_split_f(n):
    _require(n >= 0, "n must be nonnegative")
    return qsum(0, n)


def _gl2_split_i(n):
    _require(n >= 0, "n must be nonnegative")
    return QPoly.q(n)


def _gl2_aniso(n):
    _require(n >= 0, "n must be nonnegative")
    return qsum(0, n)


# ---------------------------------------------------------------------------
# gl3 split


def _check_split(n1, n2):
    _require(1 <= n1 <= n2, "split gl3 minimal form needs 1 <= n1 <= n2")


def gl3_split_poincare_tpoly(n1, n2):
    """Poincare polynomial of the split fundamental domain, in t."""
    _check_split(n1, n2)
    p = TPoly()
    for i in range(1, n1 + 1):
        p += TPoly({4 * i - 2: i, 4 * i - 4: i})
    for i in range(2 * n1, n1 + n2):
        p += TPoly({2 * i: 2 * n1 + 1})
    for i in range(n1 + n2, 2 * n1 + n2):
        p += TPoly({2 * i: 4 * (2 * n1 + n2 - i)})
    p += TPoly({4 * n1 + 2 * n2: 1})
    return p


def _gl3_split_poincare(n1, n2):
    return gl3_split_poincare_tpoly(n1, n2).substitute_q()


def _gl3_split_j(n1, n2):
    _check_split(n1, n2)
    out = QPoly()
    for i in range(1, n1 + 1):
        out += QPoly({2 * i - 1: i, 2 * i - 2: i})
    for i in range(n1 + n2, 2 * n1 + n2):
        out += QPoly.q(i, 4 * n1 + 2 * n2 - 4 * i - 3)
    out += QPoly.q(2 * n1 + n2, n1 * n1 + 2 * n1 * n2)
    return out


def _gl3_split_i(n1, n2):
    _check_split(n1, n2)
    return QPoly.q(2 * n1 + n2)


def _hexagon_closed_form(n1, n2, a1, a2):
    e0 = 3 * a2 - 2 - 2 * n1 - n2
    c1 = 2 * a2 - a1 - n1 - 1
    c2 = 2 * a2 - a1 - n2 - 1
    return e0 * (e0 + 1) // 2 - c1 * (c1 + 1) - c2 * (c2 + 1) // 2


def _gl3_split_main(n1, n2, a1, a2):
    _check_split(n1, n2)
    out = _gl3_split_j(n1, n2)
    out += QPoly.q(2 * n1 + n2, _hexagon_closed_form(n1, n2, a1, a2))
    out += (
        QPoly.q(2 * n1, a1 + a2 - 2 * n1 - 1)
        * (QPoly.q(n2, n2) - qsum(0, n2 - 1))
    )
    out += (
        QPoly.q(n1 + n2, 2 * (a1 + a2 - n1 - n2 - 1))
        * (QPoly.q(n1, n1) - qsum(0, n1 - 1))
    )
    return out


def _gl3_split_tail(n1, n2, a1, a2):
    _check_split(n1, n2)
    body = (
        2 * QPoly.q(2 * n1) * qsum(0, n2 - 1)
        + 4 * QPoly.q(n1 + n2) * qsum(0, n1 - 1)
        + QPoly.q(2 * n1 + n2, 3)
    )
    return (a1 + a2) * body


def _chamber_count_relaxed(a):
    # Dominant cone below both thresholds, upper wall relaxed to 2(a-1).
    return 3 * (a // 2) ** 2 + (1 - (-1) ** a) * (3 * a - 1) // 4


def _chamber_count_far(a1, a2):
    # Dominant-cone points past the second threshold a2.
    half = (2 * a1 - a2 - 1) // 2
    return half * (half + 1) + (1 + (-1) ** (2 * a1 - a2)) * (2 * a1 - a2) // 4


def _gl3_split_q_ak(n1, n2, a1, a2):
    _check_split(n1, n2)
    out = _gl3_split_poincare(n1, n2)
    borel = _chamber_count_relaxed(a1) - _chamber_count_far(a1, a2)
    out += QPoly.q(2 * n1 + n2, 6 * borel)
    class0 = QPoly.q(2 * n1) * qsum(0, n2) + 2 * QPoly.q(n1 + n2) * qsum(0, n1)
    class1 = QPoly.q(2 * n1) * qsum(0, n2 - 1) + 2 * QPoly.q(n1 + n2) * qsum(0, n1 - 1)
    for a in (a1, a2):
        out += (a // 2) * class0 + ((a + 1) // 2) * class1
    return out


# ---------------------------------------------------------------------------
# gl3 mixed


def _staircase(hi):
    # Sum of (floor(j/2) + 1) q^j for 0 <= j <= hi.
    return QPoly({j: j // 2 + 1 for j in range(0, hi + 1)})


def _check_mixed(m, n):
    _require(m >= 1 and n >= 1, "mixed gl3 needs m >= 1 and n >= 1")


def mixed_n_gamma(m, n):
    return min(2 * m, 2 * n + 1)


def _gl3_mixed_delta(m, n):
    _check_mixed(m, n)
    if m <= n:
        out = _staircase(2 * m - 1)
        out += QPoly.q(2 * m, 2 * m + n + 1)
        for j in range(2 * m + 1, m + n + 1):
            out += QPoly.q(j, 4 * m + n + 1 - j)
        for j in range(m + n + 1, 2 * m + n + 1):
            out += QPoly.q(j, 3 * (2 * m + n - j) + 1)
        return out + QPoly.q(2 * m) * qsum(0, n)
    out = _staircase(2 * n)
    for j in range(2 * n + 1, 3 * n + 2):
        out += QPoly.q(j, 3 * (3 * n - j + 1) + 1)
    return out + QPoly.q(2 * n + 1) * qsum(0, n)


def _gl3_mixed_f(m, n):
    _check_mixed(m, n)
    if m <= n:
        out = _staircase(2 * m - 1)
        out += QPoly.q(2 * m, 2 * m + 1) * qsum(0, m + n - 2 * m)
        for j in range(m + n + 1, 2 * m + n):
            out += QPoly.q(j, 2 * (2 * m + n - j) + 1)
        return out + QPoly.q(2 * m + n)
    out = _staircase(2 * n)
    for j in range(2 * n + 1, 3 * n + 1):
        out += QPoly.q(j, 2 * (3 * n + 1 - j) + 1)
    return out + QPoly.q(3 * n + 1)


def _gl3_mixed_j(m, n):
    _check_mixed(m, n)
    if m <= n:
        out = QPoly.q(2 * m + n, 2 * m)
        for j in range(m + n + 1, 2 * m + n):
            out += QPoly.q(j, 2 * (j - m - n))
        return out - _staircase(2 * m - 1)
    out = QPoly.q(3 * n + 1, 2 * n + 1)
    for j in range(2 * n + 1, 3 * n + 1):
        out += QPoly.q(j, 2 * j - 4 * n - 1)
    return out - _staircase(2 * n)


def _gl3_mixed_i(m, n):
    _check_mixed(m, n)
    return QPoly.q(mixed_n_gamma(m, n)) * qsum(0, n)


# ---------------------------------------------------------------------------
# gl3 anisotropic


def _gl3_aniso_case1(n1, n2=None):
    _require(n1 >= 0, "n1 must be nonnegative")
    if n2 is not None and n2 < n1:
        raise BranchMismatch("first anisotropic branch needs n1 <= n2")
    out = QPoly.one()
    shell = QPoly({2: 1, 1: 1, 0: 1})
    for i in range(1, n1 // 3 + 1):
        out += QPoly.q(2 * (3 * i - 1), 2) * shell
    fan = QPoly({3: 1, 2: 2, 1: 2, 0: 1})
    for i in range(1, n1 + 1):
        c = i - 2 * (i // 3) - 1
        if c:
            out += QPoly.q(2 * i - 3, c) * fan
    for i in range(n1 + 1, 2 * n1 + 1):
        c = 2 * n1 - i - 2 * _ceil_div(2 * n1 - i, 3) + 1
        if c:
            out += QPoly.q(i + n1 - 1, c) * QPoly({1: 1, 0: 2})
    c = _ceil_div(2 * n1 - 1, 3) - (n1 - 2) // 3 - 1
    if c:
        out += QPoly.q(2 * n1 - 1, c)
    for i in range(_ceil_div(2 * n1 - 1, 3), n1):
        out += QPoly.q(3 * i + 1, 2)
    return out


def _gl3_aniso_case2(n2, n1=None):
    _require(n2 >= 0, "n2 must be nonnegative")
    if n1 is not None and n1 <= n2:
        raise BranchMismatch("second anisotropic branch needs n2 < n1")
    out = QPoly.one()
    shell = QPoly({2: 1, 1: 1, 0: 1})
    for i in range(1, n2 // 3 + 1):
        out += QPoly.q(2 * (3 * i - 1), 2) * shell
    fan = QPoly({3: 1, 2: 2, 1: 2, 0: 1})
    for i in range(1, n2 + 1):
        c = i - 2 * (i // 3) - 1
        if c:
            out += QPoly.q(2 * i - 3, c) * fan
    c = n2 - 2 * _ceil_div(n2 - 1, 3)
    if c:
        out += QPoly.q(2 * n2 - 1, c) * QPoly({2: 2, 0: 1})
    for i in range(n2 + 2, 2 * n2 + 1):
        c = 2 * n2 - i - 2 * _ceil_div(2 * n2 - i, 3) + 1
        if c:
            out += QPoly.q(i + n2 - 1, c) * QPoly({1: 2, 0: 1})
    for i in range(0, (n2 - 2) // 3 + 1):
        out += QPoly.q(3 * (n2 - i) - 2, 2) * QPoly({1: 1, 0: 1})
    c = _ceil_div(2 * n2 - 1, 3) - (n2 - 2) // 3 - 1
    if c:
        out += QPoly.q(2 * n2, 2 * c)
    return out + QPoly.q(3 * n2 + 1)


_EVALUATORS = {
    FormulaId.GL2_SPLIT_J: _gl2_split_j,
    FormulaId.GL2_SPLIT_Q: _gl2_split_q,
    FormulaId.GL2_SPLIT_F: _gl2_split_f,
    FormulaId.GL2_SPLIT_I: _gl2_split_i,
    FormulaId.GL2_ANISO: _gl2_aniso,
    FormulaId.GL3_SPLIT_POINCARE: _gl3_split_poincare,
    FormulaId.GL3_SPLIT_Q_AK: _gl3_split_q_ak,
    FormulaId.GL3_SPLIT_MAIN: _gl3_split_main,
    FormulaId.GL3_SPLIT_TAIL: _gl3_split_tail,
    FormulaId.GL3_SPLIT_J: _gl3_split_j,
    FormulaId.GL3_SPLIT_I: _gl3_split_i,
    FormulaId.GL3_MIXED_DELTA: _gl3_mixed_delta,
    FormulaId.GL3_MIXED_F: _gl3_mixed_f,
    FormulaId.GL3_MIXED_J: _gl3_mixed_j,
    FormulaId.GL3_MIXED_I: _gl3_mixed_i,
    FormulaId.GL3_ANISO_J_CASE1: _gl3_aniso_case1,
    FormulaId.GL3_ANISO_J_CASE2: _gl3_aniso_case2,
}


def eval_formula(formula, **params):
    """Evaluate one closed-form display at the given integer parameters."""
    try:
        fn = _EVALUATORS[formula]
    except KeyError:
        raise ValueError(f"unknown formula {formula!r}") from None
    return fn(**params)


# ---------------------------------------------------------------------------
# Hessenberg pavings for the anisotropic cases

_CASES = {
    "gl2": 2,
    "gl3_case1": 3,
    "gl3_case2": 3,
}


def moy_prasad_datum(case, n):
    """The barycenter point x and depth t of the equivalued pairing."""
    if case == "gl2":
        return (Fraction(1), Fraction(1, 2)), n + Fraction(1, 2)
    x = (Fraction(1), Fraction(2, 3), Fraction(1, 3))
    if case == "gl3_case1":
        return x, n + Fraction(1, 3)
    if case == "gl3_case2":
        return x, n + Fraction(2, 3)
    raise ValueError(f"unknown case {case!r}")


def hessenberg_cell_dimension(case, x, t, y_a):
    """Dimension of the cell over the fixed point epsilon^a, with y_a = -a.

    Counts affine roots (m, alpha) with 0 <= m + alpha(x) < t and
    m + alpha(y_a) < 0.
    """
    if case not in _CASES:
        raise ValueError(f"unknown case {case!r}")
    k = _CASES[case]
    if len(x) != k or len(y_a) != k:
        raise ValueError(f"case {case!r} lives in rank {k}")
    count = 0
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            ax = x[i] - x[j]
            ay = y_a[i] - y_a[j]
            lo = math.ceil(-ax)
            hi = math.ceil(t - ax) - 1
            for m in range(lo, hi + 1):
                if m + ay < 0:
                    count += 1
    return count


def _admissible_cells(case, n):
    if case == "gl2":
        # Nonempty iff -(n+1) <= a1 - a2 <= n on the degree-zero slice.
        lo = _ceil_div(-(n + 1), 2)
        hi = n // 2
        return [(a1, -a1) for a1 in range(lo, hi + 1)]
    cells = []
    bound = 2 * (n + 1)
    for a1 in range(-bound, bound + 1):
        for a2 in range(-bound, bound + 1):
            a3 = -a1 - a2
            if case == "gl3_case1":
                ok = a1 - a2 <= n and a2 - a3 <= n and a3 - a1 <= n + 1
            else:
                ok = a1 - a3 <= n and a2 - a1 <= n + 1 and a3 - a2 <= n + 1
            if ok:
                cells.append((a1, a2, a3))
    return cells


def hessenberg_sum(case, n):
    """Sum of q^dim over the admissible cells of the degree-zero fiber."""
    _require(n >= 0, "n must be nonnegative")
    x, t = moy_prasad_datum(case, n)
    total = QPoly.zero()
    for a in _admissible_cells(case, n):
        y = tuple(-v for v in a)
        total += QPoly.q(hessenberg_cell_dimension(case, x, t, y))
    return total


def dominant_shell_count(n):
    """Dominant trace-zero cells with a1 - a3 = n: those a1 with n <= 3*a1 <= 2n."""
    if n < 0:
        return 0
    k, r = divmod(n, 3)
    return k if r == 1 else k + 1
