"""Laurent-series arithmetic over small finite fields with precision windows.

A series is known on a half-open exponent window [lo, lo+len(coeffs)); below
the window it is zero, above it it is zero when `exact` and unknown
otherwise.  Every valuation query answers exactly or raises
PrecisionExhausted; nothing is ever guessed.  Field arithmetic is provided
for q in {2, 3, 4, 5} (GF(4) by table, the primes modularly).
"""

from __future__ import annotations

import math

from ..errors import PrecisionExhausted

_GF4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)
_GF4_INV = (None, 1, 3, 2)


class SmallField:
    """GF(q) with dense operation tables, q in {2, 3, 4, 5}."""

    __slots__ = ("q", "char", "add_table", "sub_table", "mul_table", "inv_table")

    def __init__(self, q):
        if q not in (2, 3, 4, 5):
            raise ValueError("field arithmetic is provided for q in {2, 3, 4, 5}")
        self.q = q
        if q == 4:
            self.char = 2
            self.add_table = tuple(tuple(a ^ b for b in range(4)) for a in range(4))
            self.sub_table = self.add_table
            self.mul_table = _GF4_MUL
            self.inv_table = _GF4_INV
        else:
            self.char = q
            self.add_table = tuple(
                tuple((a + b) % q for b in range(q)) for a in range(q)
            )
            self.sub_table = tuple(
                tuple((a - b) % q for b in range(q)) for a in range(q)
            )
            self.mul_table = tuple(
                tuple((a * b) % q for b in range(q)) for a in range(q)
            )
            self.inv_table = (None,) + tuple(pow(a, q - 2, q) for a in range(1, q))

    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.sub_table[a][b]

    def neg(self, a):
        return self.sub_table[0][a]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.inv_table[a]

    def units(self):
        return range(1, self.q)

    def __repr__(self):
        return f"SmallField({self.q})"


_FIELDS = {}


def small_field(q):
    if q not in _FIELDS:
        _FIELDS[q] = SmallField(q)
    return _FIELDS[q]


class TruncatedSeries:
    """One Laurent series with an explicit knowledge window."""

    __slots__ = ("field", "lo", "coeffs", "exact")

    def __init__(self, field, lo, coeffs, exact):
        coeffs = tuple(coeffs)
        if exact:
            head = 0
            tail = len(coeffs)
            while head < tail and coeffs[head] == 0:
                head += 1
            while tail > head and coeffs[tail - 1] == 0:
                tail -= 1
            lo += head
            coeffs = coeffs[head:tail]
            if not coeffs:
                lo = 0
        self.field = field
        self.lo = lo
        self.coeffs = coeffs
        self.exact = exact

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact_poly(cls, field, lo, coeffs):
        return cls(field, lo, coeffs, True)

    @classmethod
    def zero(cls, field):
        return cls(field, 0, (), True)

    @classmethod
    def monomial(cls, field, v, c=1):
        return cls(field, v, (c,), True)

    @classmethod
    def inexact(cls, field, lo, coeffs):
        return cls(field, lo, coeffs, False)

    # -- window bookkeeping -------------------------------------------------

    @property
    def known_end(self):
        """First exponent whose coefficient is unknown (inf when exact)."""
        return math.inf if self.exact else self.lo + len(self.coeffs)

    def coeff(self, e):
        if e < self.lo:
            return 0
        if e >= self.lo + len(self.coeffs):
            if self.exact:
                return 0
            raise PrecisionExhausted(
                f"coefficient of eps^{e} beyond window end {self.known_end}"
            )
        return self.coeffs[e - self.lo]

    def valuation(self):
        """Exact valuation; math.inf for the true zero series."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lo + i
        if self.exact:
            return math.inf
        raise PrecisionExhausted(
            f"series is zero on its whole window [{self.lo}, {self.known_end})"
        )

    def val_at_least(self, k):
        """Whether valuation >= k, decided exactly."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lo + i >= k
        if self.exact or self.known_end >= k:
            return True
        raise PrecisionExhausted(
            f"cannot certify valuation >= {k} with window ending at {self.known_end}"
        )

    def is_zero(self):
        """True zero test; exact series only have one."""
        if any(self.coeffs):
            return False
        if self.exact:
            return True
        raise PrecisionExhausted("zero on window but inexact")

    def truncated(self, end):
        """Forget everything at exponent >= end."""
        if end >= self.known_end:
            return self
        keep = max(0, end - self.lo)
        return TruncatedSeries(self.field, self.lo, self.coeffs[:keep], False)

    # -- arithmetic ----------------------------------------------------------

    def _require_field(self, other):
        if self.field is not other.field:
            raise ValueError("mixed base fields")

    def shift(self, k):
        return TruncatedSeries(self.field, self.lo + k, self.coeffs, self.exact)

    def __neg__(self):
        neg = self.field.neg
        return TruncatedSeries(
            self.field, self.lo, tuple(neg(c) for c in self.coeffs), self.exact
        )

    def __add__(self, other):
        self._require_field(other)
        end = min(self.known_end, other.known_end)
        exact = self.exact and other.exact
        if exact:
            end = max(
                self.lo + len(self.coeffs), other.lo + len(other.coeffs)
            )
        if not self.coeffs:
            lo = other.lo
        elif not other.coeffs:
            lo = self.lo
        else:
            lo = min(self.lo, other.lo)
        if end == -math.inf or end <= lo:
            return TruncatedSeries(self.field, lo, (), exact)
        n = int(end - lo) if end != math.inf else max(
            self.lo + len(self.coeffs), other.lo + len(other.coeffs)
        ) - lo
        add = self.field.add
        out = [0] * n
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                e = src.lo + i
                if lo <= e < lo + n:
                    out[e - lo] = add(out[e - lo], c)
        return TruncatedSeries(self.field, lo, out, exact)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._require_field(other)
        f = self.field
        if not any(self.coeffs) and self.exact:
            return TruncatedSeries.zero(f)
        if not any(other.coeffs) and other.exact:
            return TruncatedSeries.zero(f)
        lo = self.lo + other.lo
        if self.exact and other.exact:
            n = len(self.coeffs) + len(other.coeffs) - 1
            exact = True
        else:
            end = min(self.lo + other.known_end, other.lo + self.known_end)
            n = max(0, int(end - lo))
            exact = False
        mul, add = f.mul, f.add
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b and i + j < n:
                    out[i + j] = add(out[i + j], mul(a, b))
        return TruncatedSeries(f, lo, out, exact)

    def scaled(self, c):
        mul = self.field.mul
        return TruncatedSeries(
            self.field, self.lo, tuple(mul(c, x) for x in self.coeffs), self.exact
        )

    def inverse(self, prec):
        """Multiplicative inverse known on `prec` coefficients."""
        v = self.valuation()
        if v is math.inf:
            raise ZeroDivisionError("inverse of the zero series")
        f = self.field
        known = min(self.known_end - v, prec)
        if known < prec:
            raise PrecisionExhausted(
                f"need {prec} coefficients of a unit known to {known}"
            )
        a = [self.coeff(v + i) for i in range(prec)]
        lead = f.inv(a[0])
        out = [lead] + [0] * (prec - 1)
        for k in range(1, prec):
            acc = 0
            for i in range(1, k + 1):
                acc = f.add(acc, f.mul(a[i], out[k - i]))
            out[k] = f.neg(f.mul(lead, acc))
        return TruncatedSeries(f, -v, out, False)

    def divide(self, other, prec):
        """self / other with quotient known on `prec` coefficients."""
        return (self * other.inverse(prec)).truncated(
            self.lo - other.valuation() + prec
        )

    def split_at(self, e):
        """Parts below and from exponent e: self = low + high, val(high) >= e."""
        cut = e - self.lo
        if cut <= 0:
            low = TruncatedSeries(self.field, 0, (), True)
            return low, self
        low = TruncatedSeries(self.field, self.lo, self.coeffs[:cut], True)
        high = TruncatedSeries(self.field, e, self.coeffs[cut:], self.exact)
        return low, high

    def window_coeffs(self, lo, hi):
        """Coefficients on [lo, hi) as a list; raises beyond the window."""
        return [self.coeff(e) for e in range(lo, hi)]

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._require_field(other)
        if self.exact and other.exact:
            return self.lo == other.lo and self.coeffs == other.coeffs
        lo = min(self.lo, other.lo)
        end = min(self.known_end, other.known_end)
        if end == math.inf:
            end = max(self.lo + len(self.coeffs), other.lo + len(other.coeffs))
        return all(self.coeff(e) == other.coeff(e) for e in range(lo, int(end)))

    def __hash__(self):
        if not self.exact:
            raise TypeError("only exact series are hashable")
        return hash((self.field.q, self.lo, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for i, c in enumerate(self.coeffs):
                if not c:
                    continue
                e = self.lo + i
                if e == 0:
                    parts.append(f"{c}")
                else:
                    prefix = "" if c == 1 else f"{c}*"
                    parts.append(f"{prefix}eps^{e}" if e != 1 else f"{prefix}eps")
            body = " + ".join(parts) if parts else "0"
        tail = "" if self.exact else f" + O(eps^{self.lo + len(self.coeffs)})"
        return f"<{body}{tail} over GF({self.field.q})>"
