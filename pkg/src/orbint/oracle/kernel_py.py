"""Reference enumeration kernel for stable Hermite entries.

Given one diagonal valuation vector, walk every admissible filling of the
above-pivot entries and keep those whose lattice is preserved by gamma.
The compiled twin in _kernel.pyx implements the identical routine; both
work on plain integer lists indexed by a shared exponent window so the
two stay line-for-line comparable.

Window convention: a series is a list of length w whose slot i holds the
coefficient of eps^(glo + i).  An entry in row r is a digit vector; digit
t sits at absolute exponent lo[r] + t, so a product c * entry lands at
slot(c) + lo[r] + t.  The caller picks glo low enough that no quotient in
the back-substitution reaches below the window, and w large enough that
truncation at the top cannot corrupt any checked slot.
"""

from itertools import product


def _shifted(a, k, w):
    """Series times eps^k inside the window (slots falling outside drop)."""
    out = [0] * w
    if k >= 0:
        for i in range(w - k):
            out[i + k] = a[i]
    else:
        for i in range(-k, w):
            out[i + k] = a[i]
    return out


def _support(a):
    return [i for i, c in enumerate(a) if c]


def _val_ge(a, limit):
    """All coefficients strictly below window slot `limit` vanish."""
    for i in range(limit):
        if a[i]:
            return False
    return True


def _sub_mul(acc, csup, c, digits, base, mul, sub, w):
    """acc -= c * entry, the entry given by digits from exponent base."""
    for t, digit in enumerate(digits):
        if not digit:
            continue
        off = base + t
        for i in csup:
            k = i + off
            if 0 <= k < w:
                acc[k] = sub[acc[k]][mul[c[i]][digit]]


def _add_mul(acc, csup, c, digits, base, mul, add, w):
    """acc += c * entry, the entry given by digits from exponent base."""
    for t, digit in enumerate(digits):
        if not digit:
            continue
        off = base + t
        for i in csup:
            k = i + off
            if 0 <= k < w:
                acc[k] = add[acc[k]][mul[c[i]][digit]]


def _digits(q, row, d, lo):
    return product(range(q), repeat=max(0, d[row] - lo[row]))


def stable_entries(q, add, sub, mul, n, glo, w, gamma, d, lo):
    """All gamma-stable entry fillings for the diagonal d.

    gamma is a row-major list of n*n window series; d and lo give the
    diagonal exponents and the per-row entry floor exponents.  Each
    returned candidate is a tuple of digit tuples for the above-diagonal
    entries, ordered (0,1) for n=2 and (0,1), (0,2), (1,2) for n=3, with
    digits running from exponent lo[row] upward.
    """
    if n == 2:
        return _stable_2(q, add, sub, mul, glo, w, gamma, d, lo)
    if n == 3:
        return _stable_3(q, add, sub, mul, glo, w, gamma, d, lo)
    raise ValueError("kernel supports n in {2, 3}")


def _stable_2(q, add, sub, mul, glo, w, gamma, d, lo):
    d0, d1 = d
    k0, k1 = d0 - glo, d1 - glo
    base0 = lo[0]
    g00, g01, g10, g11 = gamma
    g00_sup, g10_sup = _support(g00), _support(g10)

    # column 0 is the bare pivot eps^d0 e_0
    v00 = _shifted(g00, d0, w)
    v01 = _shifted(g10, d0, w)
    if not _val_ge(v01, k1):
        return []
    c0 = _shifted(v01, -d1, w)
    c0_sup = _support(c0)

    out = []
    for e01 in _digits(q, 0, d, lo):
        r0 = list(v00)
        _sub_mul(r0, c0_sup, c0, e01, base0, mul, sub, w)
        if not _val_ge(r0, k0):
            continue
        # column 1 = gamma * (e01 in row 0 + pivot eps^d1 in row 1)
        v10 = _shifted(g01, d1, w)
        v11 = _shifted(g11, d1, w)
        _add_mul(v10, g00_sup, g00, e01, base0, mul, add, w)
        _add_mul(v11, g10_sup, g10, e01, base0, mul, add, w)
        if not _val_ge(v11, k1):
            continue
        c1 = _shifted(v11, -d1, w)
        r1 = list(v10)
        _sub_mul(r1, _support(c1), c1, e01, base0, mul, sub, w)
        if not _val_ge(r1, k0):
            continue
        out.append((e01,))
    return out


def _stable_3(q, add, sub, mul, glo, w, gamma, d, lo):
    d0, d1, d2 = d
    k0, k1, k2 = d0 - glo, d1 - glo, d2 - glo
    base0, base1 = lo[0], lo[1]
    g = gamma  # row-major: g[3*r + c]
    gsup = [_support(col) for col in g]

    # column 0 = gamma * eps^d0 e_0; its first check needs no entries
    v00 = _shifted(g[0], d0, w)
    v01 = _shifted(g[3], d0, w)
    v02 = _shifted(g[6], d0, w)
    if not _val_ge(v02, k2):
        return []
    c02 = _shifted(v02, -d2, w)
    c02_sup = _support(c02)

    out = []
    for e12 in _digits(q, 1, d, lo):
        t01 = list(v01)
        _sub_mul(t01, c02_sup, c02, e12, base1, mul, sub, w)
        if not _val_ge(t01, k1):
            continue
        c01 = _shifted(t01, -d1, w)
        c01_sup = _support(c01)
        # parts of column 2 not depending on the row-0 entries
        u20 = _shifted(g[2], d2, w)
        u21 = _shifted(g[5], d2, w)
        u22 = _shifted(g[8], d2, w)
        _add_mul(u20, gsup[1], g[1], e12, base1, mul, add, w)
        _add_mul(u21, gsup[4], g[4], e12, base1, mul, add, w)
        _add_mul(u22, gsup[7], g[7], e12, base1, mul, add, w)
        for e01 in _digits(q, 0, d, lo):
            # column 1 = gamma * (e01 in row 0 + pivot eps^d1 in row 1)
            v10 = _shifted(g[1], d1, w)
            v11 = _shifted(g[4], d1, w)
            v12 = _shifted(g[7], d1, w)
            _add_mul(v10, gsup[0], g[0], e01, base0, mul, add, w)
            _add_mul(v11, gsup[3], g[3], e01, base0, mul, add, w)
            _add_mul(v12, gsup[6], g[6], e01, base0, mul, add, w)
            if not _val_ge(v12, k2):
                continue
            c12 = _shifted(v12, -d2, w)
            c12_sup = _support(c12)
            t11 = list(v11)
            _sub_mul(t11, c12_sup, c12, e12, base1, mul, sub, w)
            if not _val_ge(t11, k1):
                continue
            c11 = _shifted(t11, -d1, w)
            c11_sup = _support(c11)
            # column 0 and 1 residues before the row-0, column-2 entry
            p0 = list(v00)
            _sub_mul(p0, c01_sup, c01, e01, base0, mul, sub, w)
            p1 = list(v10)
            _sub_mul(p1, c11_sup, c11, e01, base0, mul, sub, w)
            for e02 in _digits(q, 0, d, lo):
                r0 = list(p0)
                _sub_mul(r0, c02_sup, c02, e02, base0, mul, sub, w)
                if not _val_ge(r0, k0):
                    continue
                r1 = list(p1)
                _sub_mul(r1, c12_sup, c12, e02, base0, mul, sub, w)
                if not _val_ge(r1, k0):
                    continue
                # column 2 = gamma * (e02 e_0 + e12 e_1 + pivot eps^d2 e_2)
                v20 = list(u20)
                v21 = list(u21)
                v22 = list(u22)
                _add_mul(v20, gsup[0], g[0], e02, base0, mul, add, w)
                _add_mul(v21, gsup[3], g[3], e02, base0, mul, add, w)
                _add_mul(v22, gsup[6], g[6], e02, base0, mul, add, w)
                if not _val_ge(v22, k2):
                    continue
                c22 = _shifted(v22, -d2, w)
                c22_sup = _support(c22)
                t21 = list(v21)
                _sub_mul(t21, c22_sup, c22, e12, base1, mul, sub, w)
                if not _val_ge(t21, k1):
                    continue
                c21 = _shifted(t21, -d1, w)
                r2 = list(v20)
                _sub_mul(r2, _support(c21), c21, e01, base0, mul, sub, w)
                _sub_mul(r2, c22_sup, c22, e02, base0, mul, sub, w)
                if not _val_ge(r2, k0):
                    continue
                out.append((e01, e02, e12))
    return out
