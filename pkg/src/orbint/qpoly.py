"""Exact Laurent polynomials in q, polynomials in t, and quasi-polynomials.

Every count produced by this package is an integer Laurent polynomial in the
residue field size q.  Counts of truncated fibers additionally depend on the
truncation parameters (a_1, ..., a_d); that dependence is quasi-polynomial
with period 2, captured by :class:`TruncationQuasiPoly`.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import NegativeExponent, OutOfValidityRegion

_TERM_RE = re.compile(
    r"^\s*(?P<coeff>\d+)?\s*(?:(?P<star>\*)\s*)?(?:(?P<var>[qt])(?:\^(?P<exp>-?\d+))?)?\s*$"
)


class QPoly:
    """Laurent polynomial in q with integer coefficients.

    >>> p = QPoly({3: 3, 2: -5, 1: 1, 0: 1})
    >>> str(p)
    '3*q^3 - 5*q^2 + q + 1'
    >>> p.evaluate(2)
    7
    """

    __slots__ = ("_c",)
    _var = "q"

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = int(v)
                if v:
                    c[int(e)] = v
        self._c = c

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def const(cls, n):
        return cls({0: n})

    @classmethod
    def q(cls, exp=1, coeff=1):
        return cls({exp: coeff})

    @property
    def coefficients(self):
        return dict(self._c)

    def coeff(self, exp):
        return self._c.get(exp, 0)

    def is_zero(self):
        return not self._c

    def degree(self):
        """Largest exponent with nonzero coefficient (None for the zero polynomial)."""
        return max(self._c) if self._c else None

    def min_exponent(self):
        return min(self._c) if self._c else None

    def _coerce(self, other):
        if isinstance(other, QPoly):
            return other
        if isinstance(other, int):
            return QPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return type(self)(c)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return type(self)(c)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers of polynomials are not defined")
        out = type(self).one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash((type(self)._var, tuple(sorted(self._c.items()))))

    def evaluate(self, q0):
        """Exact integer value at q = q0 (q0 >= 2).

        >>> QPoly({1: 1, 0: 1}).evaluate(2)
        3
        """
        total = 0
        for e, v in self._c.items():
            if e >= 0:
                total += v * q0 ** e
            else:
                num, den = v, q0 ** (-e)
                if num % den:
                    raise NegativeExponent(
                        f"term {v}*{self._var}^{e} does not divide at {self._var}={q0}"
                    )
                total += num // den
        return total

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            parts.append((v, self._term_text(abs(v), e)))
        out = []
        for i, (v, text) in enumerate(parts):
            if i == 0:
                out.append(("-" if v < 0 else "") + text)
            else:
                out.append((" - " if v < 0 else " + ") + text)
        return "".join(out)

    @classmethod
    def _term_text(cls, coeff_abs, e):
        if e == 0:
            return str(coeff_abs)
        var = cls._var if e == 1 else f"{cls._var}^{e}"
        return var if coeff_abs == 1 else f"{coeff_abs}*{var}"

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    @classmethod
    def parse(cls, text):
        """Inverse of str() on the canonical rendering.

        >>> QPoly.parse("3*q^3 - 5*q^2 + q + 1") == QPoly({3: 3, 2: -5, 1: 1, 0: 1})
        True
        """
        text = text.strip()
        if text == "0":
            return cls.zero()
        c = {}
        pos = 0
        sign = 1
        if text.startswith("-"):
            sign = -1
            pos = 1
        while pos <= len(text):
            nxt_plus = text.find(" + ", pos)
            nxt_minus = text.find(" - ", pos)
            cands = [i for i in (nxt_plus, nxt_minus) if i >= 0]
            end = min(cands) if cands else len(text)
            m = _TERM_RE.match(text[pos:end])
            if not m or (m.group("coeff") is None and m.group("var") is None):
                raise ValueError(f"cannot parse term {text[pos:end]!r}")
            if m.group("var") is not None and m.group("var") != cls._var:
                raise ValueError(f"wrong variable in {text[pos:end]!r}")
            coeff = int(m.group("coeff")) if m.group("coeff") else 1
            if m.group("var") is None:
                exp = 0
            elif m.group("exp") is None:
                exp = 1
            else:
                exp = int(m.group("exp"))
            c[exp] = c.get(exp, 0) + sign * coeff
            if end == len(text):
                break
            sign = 1 if text[end:end + 3] == " + " else -1
            pos = end + 3
        return cls(c)


class TPoly(QPoly):
    """Polynomial in t (Poincare polynomials; t^2 corresponds to q).

    >>> str(TPoly({2: 1, 0: 1}))
    't^2 + 1'
    >>> str(TPoly({2: 1, 0: 1}).substitute_q())
    'q + 1'
    """

    __slots__ = ()
    _var = "t"

    def substitute_q(self):
        """Ring map t^2 -> q; requires every exponent to be even."""
        c = {}
        for e, v in self._c.items():
            if e % 2:
                raise ValueError(f"odd exponent t^{e} has no polynomial image in q")
            c[e // 2] = v
        return QPoly(c)


def qsum(lo, hi):
    """Sum of q^i for lo <= i <= hi; the empty sum when hi < lo.

    >>> str(qsum(0, 2))
    'q^2 + q + 1'
    >>> qsum(0, -1).is_zero()
    True
    """
    return QPoly({i: 1 for i in range(lo, hi + 1)})


def _monomials(d, degree):
    if d == 0:
        return [()]
    out = []
    for e0 in range(degree + 1):
        for rest in _monomials(d - 1, degree - e0):
            out.append((e0,) + rest)
    return sorted(out)


def _solve_exact(rows, rhs_cols):
    """Solve a square Fraction system for several right-hand sides at once."""
    n = len(rows)
    aug = [list(map(Fraction, rows[i])) + [dict(rhs_cols[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular sample matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        for r in range(n):
            if r == col:
                continue
            factor = aug[r][col] / pval
            if factor == 0:
                continue
            for c in range(col, n):
                aug[r][c] -= factor * aug[col][c]
            rdict = aug[r][n]
            for e, v in aug[col][n].items():
                rdict[e] = rdict.get(e, 0) - factor * v
    out = []
    for r in range(n):
        pval = aug[r][r]
        out.append({e: v / pval for e, v in aug[r][n].items() if v})
    return out


class TruncationQuasiPoly:
    """Quasi-polynomial in (a_1, ..., a_d) with QPoly values, period 2.

    Stored per residue class of the parameter vector mod 2; each branch is a
    polynomial in the a-variables whose coefficients are rational multiples
    of powers of q.  Evaluation at an integer point always yields an integer
    polynomial in q.
    """

    def __init__(self, d, branches, modulus=2, validity=()):
        self.d = d
        self.modulus = modulus
        self.branches = branches
        self.validity = tuple(validity)

    def _check_validity(self, a):
        for c0, coeffs in self.validity:
            if c0 + sum(Fraction(c) * ai for c, ai in zip(coeffs, a)) <= 0:
                raise OutOfValidityRegion(
                    f"point {a} violates {c0} + {coeffs}.a > 0"
                )

    def evaluate(self, a):
        a = tuple(int(x) for x in a)
        if len(a) != self.d:
            raise ValueError(f"expected {self.d} parameters, got {len(a)}")
        self._check_validity(a)
        res = tuple(x % self.modulus for x in a)
        branch = self.branches.get(res)
        if branch is None:
            raise OutOfValidityRegion(f"no branch for residue class {res}")
        acc = {}
        for exps, qcoeffs in branch.items():
            mono = 1
            for ai, e in zip(a, exps):
                mono *= ai ** e
            for qe, frac in qcoeffs.items():
                acc[qe] = acc.get(qe, Fraction(0)) + frac * mono
        out = {}
        for qe, val in acc.items():
            if val.denominator != 1:
                raise OutOfValidityRegion(
                    f"non-integer coefficient {val} at q^{qe} for a={a}"
                )
            out[qe] = int(val)
        return QPoly(out)

    @classmethod
    def fit(cls, d, samples, degree=2, modulus=2, validity=()):
        """Interpolate from exact samples {a-vector: QPoly}.

        Each residue class needs enough points in generic position; extra
        points are used as consistency checks.  Raises ValueError when the
        data is not polynomial of the given degree on some class.
        """
        monos = _monomials(d, degree)
        by_class = {}
        for a, poly in samples.items():
            a = tuple(int(x) for x in a)
            by_class.setdefault(tuple(x % modulus for x in a), []).append((a, poly))
        branches = {}
        for res, pts in sorted(by_class.items()):
            if len(pts) < len(monos):
                raise ValueError(
                    f"residue class {res}: {len(pts)} samples < {len(monos)} monomials"
                )
            pts.sort()
            rows = []
            rhs = []
            chosen = []
            for a, poly in pts:
                row = []
                for exps in monos:
                    v = 1
                    for ai, e in zip(a, exps):
                        v *= ai ** e
                    row.append(v)
                if len(chosen) < len(monos) and _independent(rows, row):
                    rows.append(row)
                    rhs.append(poly.coefficients)
                    chosen.append((a, poly))
            if len(rows) < len(monos):
                raise ValueError(f"residue class {res}: samples not in generic position")
            sols = _solve_exact(rows, rhs)
            branch = {}
            for exps, qcoeffs in zip(monos, sols):
                if qcoeffs:
                    branch[exps] = qcoeffs
            branches[res] = branch
            fitted = cls(d, {res: branch}, modulus, ())
            for a, poly in pts:
                if fitted.evaluate(a) != poly:
                    raise ValueError(
                        f"degree-{degree} fit fails at a={a} on class {res}"
                    )
        return cls(d, branches, modulus, validity)

    def branch_polynomials_coincide(self):
        """True when all residue classes share one polynomial (genuine polynomiality)."""
        vals = list(self.branches.values())
        return all(v == vals[0] for v in vals[1:])


def _independent(rows, row):
    """Check that `row` is not in the Fraction-span of `rows` (small systems)."""
    mat = [list(map(Fraction, r)) for r in rows] + [list(map(Fraction, row))]
    m, n = len(mat), len(mat[0])
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(m):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col] / mat[rank][col]
                for c in range(col, n):
                    mat[r][c] -= f * mat[rank][c]
        rank += 1
    return rank == len(rows) + 1


def evaluate(p, q0):
    """Exact integer value of a QPoly at q = q0."""
    return p.evaluate(q0)


def qp_evaluate(f, a):
    """Evaluate a TruncationQuasiPoly at an integer parameter vector."""
    return f.evaluate(a)
