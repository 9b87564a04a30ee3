# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled enumeration kernel for stable Hermite entries.

Twin of kernel_py: same window convention, same candidate order, same
checks, on flat C integer buffers instead of Python lists.  Keep the two
in sync; tests assert their outputs agree element for element.
"""

import numpy as np


cdef void _shifted(int* out, int* a, int k, int w) noexcept nogil:
    cdef int i
    for i in range(w):
        out[i] = 0
    if k >= 0:
        for i in range(w - k):
            out[i + k] = a[i]
    else:
        for i in range(-k, w):
            out[i + k] = a[i]


cdef int _support(int* sup, int* a, int w) noexcept nogil:
    cdef int i, c = 0
    for i in range(w):
        if a[i]:
            sup[c] = i
            c += 1
    return c


cdef bint _val_ge(int* a, int limit) noexcept nogil:
    cdef int i
    for i in range(limit):
        if a[i]:
            return False
    return True


cdef void _sub_mul(int* acc, int* csup, int nsup, int* c, int* digits,
                   int m, int base, int* mul, int* sub, int q,
                   int w) noexcept nogil:
    cdef int t, j, i, k, digit
    for t in range(m):
        digit = digits[t]
        if not digit:
            continue
        for j in range(nsup):
            i = csup[j]
            k = i + base + t
            if 0 <= k < w:
                acc[k] = sub[acc[k] * q + mul[c[i] * q + digit]]


cdef void _add_mul(int* acc, int* csup, int nsup, int* c, int* digits,
                   int m, int base, int* mul, int* add, int q,
                   int w) noexcept nogil:
    cdef int t, j, i, k, digit
    for t in range(m):
        digit = digits[t]
        if not digit:
            continue
        for j in range(nsup):
            i = csup[j]
            k = i + base + t
            if 0 <= k < w:
                acc[k] = add[acc[k] * q + mul[c[i] * q + digit]]


cdef bint _next_digits(int* digits, int m, int q) noexcept nogil:
    # itertools.product order: the last digit varies fastest
    cdef int t = m - 1
    while t >= 0:
        digits[t] += 1
        if digits[t] < q:
            return True
        digits[t] = 0
        t -= 1
    return False


cdef void _copy(int* dst, int* src, int w) noexcept nogil:
    cdef int i
    for i in range(w):
        dst[i] = src[i]


def _flatten_table(table, int q):
    flat = np.empty(q * q, dtype=np.intc)
    cdef int a, b
    for a in range(q):
        for b in range(q):
            flat[a * q + b] = table[a][b]
    return flat


def stable_entries(int q, add, sub, mul, int n, int glo, int w, gamma,
                   d, lo):
    """All gamma-stable entry fillings for the diagonal d.

    Same contract as the pure twin: gamma is row-major window series, the
    result lists digit tuples for the above-diagonal entries in the order
    (0,1) for n=2 and (0,1), (0,2), (1,2) for n=3.
    """
    if n not in (2, 3):
        raise ValueError("kernel supports n in {2, 3}")

    add_np = _flatten_table(add, q)
    sub_np = _flatten_table(sub, q)
    mul_np = _flatten_table(mul, q)
    gamma_np = np.empty(n * n * w, dtype=np.intc)
    cdef int r, i
    for r in range(n * n):
        row = gamma[r]
        for i in range(w):
            gamma_np[r * w + i] = row[i]
    d_np = np.asarray(d, dtype=np.intc)
    lo_np = np.asarray(lo, dtype=np.intc)

    cdef int[::1] addv = add_np
    cdef int[::1] subv = sub_np
    cdef int[::1] mulv = mul_np
    cdef int[::1] gv = gamma_np
    cdef int[::1] dv = d_np
    cdef int[::1] lov = lo_np

    # one arena for every window buffer, support list and digit vector
    cdef int nbuf = 32
    cdef int nsupbuf = n * n + 8
    arena_np = np.zeros(nbuf * w + nsupbuf * w + 3 * w, dtype=np.intc)
    cdef int[::1] arena = arena_np

    if n == 2:
        return _stable_2(q, &addv[0], &subv[0], &mulv[0], glo, w, &gv[0],
                         &dv[0], &lov[0], &arena[0])
    return _stable_3(q, &addv[0], &subv[0], &mulv[0], glo, w, &gv[0],
                     &dv[0], &lov[0], &arena[0])


cdef list _stable_2(int q, int* add, int* sub, int* mul, int glo, int w,
                    int* g, int* d, int* lo, int* arena):
    cdef int d0 = d[0], d1 = d[1]
    cdef int k0 = d0 - glo, k1 = d1 - glo
    cdef int base0 = lo[0]
    cdef int m0 = d[0] - lo[0]
    if m0 < 0:
        m0 = 0

    cdef int* v00 = arena
    cdef int* v01 = arena + w
    cdef int* c0 = arena + 2 * w
    cdef int* r0 = arena + 3 * w
    cdef int* v10 = arena + 4 * w
    cdef int* v11 = arena + 5 * w
    cdef int* c1 = arena + 6 * w
    cdef int* r1 = arena + 7 * w
    cdef int* g00_sup = arena + 8 * w
    cdef int* g10_sup = arena + 9 * w
    cdef int* c0_sup = arena + 10 * w
    cdef int* c1_sup = arena + 11 * w
    cdef int* e01 = arena + 12 * w

    cdef int* g00 = g
    cdef int* g01 = g + w
    cdef int* g10 = g + 2 * w
    cdef int* g11 = g + 3 * w
    cdef int n00 = _support(g00_sup, g00, w)
    cdef int n10 = _support(g10_sup, g10, w)

    _shifted(v00, g00, d0, w)
    _shifted(v01, g10, d0, w)
    if not _val_ge(v01, k1):
        return []
    _shifted(c0, v01, -d1, w)
    cdef int nc0 = _support(c0_sup, c0, w)

    out = []
    cdef int t
    for t in range(m0):
        e01[t] = 0
    cdef int nc1
    cdef bint more = True
    while more:
        _copy(r0, v00, w)
        _sub_mul(r0, c0_sup, nc0, c0, e01, m0, base0, mul, sub, q, w)
        if _val_ge(r0, k0):
            _shifted(v10, g01, d1, w)
            _shifted(v11, g11, d1, w)
            _add_mul(v10, g00_sup, n00, g00, e01, m0, base0, mul, add, q, w)
            _add_mul(v11, g10_sup, n10, g10, e01, m0, base0, mul, add, q, w)
            if _val_ge(v11, k1):
                _shifted(c1, v11, -d1, w)
                nc1 = _support(c1_sup, c1, w)
                _copy(r1, v10, w)
                _sub_mul(r1, c1_sup, nc1, c1, e01, m0, base0, mul, sub, q, w)
                if _val_ge(r1, k0):
                    out.append((tuple(e01[t] for t in range(m0)),))
        more = _next_digits(e01, m0, q)
    return out


cdef list _stable_3(int q, int* add, int* sub, int* mul, int glo, int w,
                    int* g, int* d, int* lo, int* arena):
    cdef int d0 = d[0], d1 = d[1], d2 = d[2]
    cdef int k0 = d0 - glo, k1 = d1 - glo, k2 = d2 - glo
    cdef int base0 = lo[0], base1 = lo[1]
    cdef int m0 = d[0] - lo[0]
    cdef int m1 = d[1] - lo[1]
    if m0 < 0:
        m0 = 0
    if m1 < 0:
        m1 = 0

    cdef int* v00 = arena
    cdef int* v01 = arena + w
    cdef int* v02 = arena + 2 * w
    cdef int* c02 = arena + 3 * w
    cdef int* t01 = arena + 4 * w
    cdef int* c01 = arena + 5 * w
    cdef int* u20 = arena + 6 * w
    cdef int* u21 = arena + 7 * w
    cdef int* u22 = arena + 8 * w
    cdef int* v10 = arena + 9 * w
    cdef int* v11 = arena + 10 * w
    cdef int* v12 = arena + 11 * w
    cdef int* c12 = arena + 12 * w
    cdef int* t11 = arena + 13 * w
    cdef int* c11 = arena + 14 * w
    cdef int* p0 = arena + 15 * w
    cdef int* p1 = arena + 16 * w
    cdef int* r0 = arena + 17 * w
    cdef int* r1 = arena + 18 * w
    cdef int* v20 = arena + 19 * w
    cdef int* v21 = arena + 20 * w
    cdef int* v22 = arena + 21 * w
    cdef int* c22 = arena + 22 * w
    cdef int* t21 = arena + 23 * w
    cdef int* c21 = arena + 24 * w
    cdef int* r2 = arena + 25 * w

    cdef int* supbase = arena + 32 * w
    cdef int* gsup0 = supbase
    cdef int* gsup1 = supbase + w
    cdef int* gsup3 = supbase + 2 * w
    cdef int* gsup4 = supbase + 3 * w
    cdef int* gsup6 = supbase + 4 * w
    cdef int* gsup7 = supbase + 5 * w
    cdef int* c02_sup = supbase + 6 * w
    cdef int* c01_sup = supbase + 7 * w
    cdef int* c12_sup = supbase + 8 * w
    cdef int* c11_sup = supbase + 9 * w
    cdef int* c22_sup = supbase + 10 * w
    cdef int* c21_sup = supbase + 11 * w
    cdef int* e12 = supbase + 12 * w
    cdef int* e01 = supbase + 13 * w
    cdef int* e02 = supbase + 14 * w

    cdef int ng0 = _support(gsup0, g, w)
    cdef int ng1 = _support(gsup1, g + w, w)
    cdef int ng3 = _support(gsup3, g + 3 * w, w)
    cdef int ng4 = _support(gsup4, g + 4 * w, w)
    cdef int ng6 = _support(gsup6, g + 6 * w, w)
    cdef int ng7 = _support(gsup7, g + 7 * w, w)

    # column 0 = gamma * eps^d0 e_0; its first check needs no entries
    _shifted(v00, g, d0, w)
    _shifted(v01, g + 3 * w, d0, w)
    _shifted(v02, g + 6 * w, d0, w)
    if not _val_ge(v02, k2):
        return []
    _shifted(c02, v02, -d2, w)
    cdef int nc02 = _support(c02_sup, c02, w)

    out = []
    cdef int t
    cdef int nc01, nc12, nc11, nc22, nc21
    cdef bint more12, more01, more02
    for t in range(m1):
        e12[t] = 0
    more12 = True
    while more12:
        _copy(t01, v01, w)
        _sub_mul(t01, c02_sup, nc02, c02, e12, m1, base1, mul, sub, q, w)
        if not _val_ge(t01, k1):
            more12 = _next_digits(e12, m1, q)
            continue
        _shifted(c01, t01, -d1, w)
        nc01 = _support(c01_sup, c01, w)
        # parts of column 2 not depending on the row-0 entries
        _shifted(u20, g + 2 * w, d2, w)
        _shifted(u21, g + 5 * w, d2, w)
        _shifted(u22, g + 8 * w, d2, w)
        _add_mul(u20, gsup1, ng1, g + w, e12, m1, base1, mul, add, q, w)
        _add_mul(u21, gsup4, ng4, g + 4 * w, e12, m1, base1, mul, add, q, w)
        _add_mul(u22, gsup7, ng7, g + 7 * w, e12, m1, base1, mul, add, q, w)
        for t in range(m0):
            e01[t] = 0
        more01 = True
        while more01:
            # column 1 = gamma * (e01 in row 0 + pivot eps^d1 in row 1)
            _shifted(v10, g + w, d1, w)
            _shifted(v11, g + 4 * w, d1, w)
            _shifted(v12, g + 7 * w, d1, w)
            _add_mul(v10, gsup0, ng0, g, e01, m0, base0, mul, add, q, w)
            _add_mul(v11, gsup3, ng3, g + 3 * w, e01, m0, base0, mul, add, q, w)
            _add_mul(v12, gsup6, ng6, g + 6 * w, e01, m0, base0, mul, add, q, w)
            if not _val_ge(v12, k2):
                more01 = _next_digits(e01, m0, q)
                continue
            _shifted(c12, v12, -d2, w)
            nc12 = _support(c12_sup, c12, w)
            _copy(t11, v11, w)
            _sub_mul(t11, c12_sup, nc12, c12, e12, m1, base1, mul, sub, q, w)
            if not _val_ge(t11, k1):
                more01 = _next_digits(e01, m0, q)
                continue
            _shifted(c11, t11, -d1, w)
            nc11 = _support(c11_sup, c11, w)
            # column 0 and 1 residues before the row-0, column-2 entry
            _copy(p0, v00, w)
            _sub_mul(p0, c01_sup, nc01, c01, e01, m0, base0, mul, sub, q, w)
            _copy(p1, v10, w)
            _sub_mul(p1, c11_sup, nc11, c11, e01, m0, base0, mul, sub, q, w)
            for t in range(m0):
                e02[t] = 0
            more02 = True
            while more02:
                _copy(r0, p0, w)
                _sub_mul(r0, c02_sup, nc02, c02, e02, m0, base0, mul, sub,
                         q, w)
                if not _val_ge(r0, k0):
                    more02 = _next_digits(e02, m0, q)
                    continue
                _copy(r1, p1, w)
                _sub_mul(r1, c12_sup, nc12, c12, e02, m0, base0, mul, sub,
                         q, w)
                if not _val_ge(r1, k0):
                    more02 = _next_digits(e02, m0, q)
                    continue
                # column 2 = gamma * (e02 e_0 + e12 e_1 + pivot eps^d2 e_2)
                _copy(v20, u20, w)
                _copy(v21, u21, w)
                _copy(v22, u22, w)
                _add_mul(v20, gsup0, ng0, g, e02, m0, base0, mul, add, q, w)
                _add_mul(v21, gsup3, ng3, g + 3 * w, e02, m0, base0, mul,
                         add, q, w)
                _add_mul(v22, gsup6, ng6, g + 6 * w, e02, m0, base0, mul,
                         add, q, w)
                if not _val_ge(v22, k2):
                    more02 = _next_digits(e02, m0, q)
                    continue
                _shifted(c22, v22, -d2, w)
                nc22 = _support(c22_sup, c22, w)
                _copy(t21, v21, w)
                _sub_mul(t21, c22_sup, nc22, c22, e12, m1, base1, mul, sub,
                         q, w)
                if not _val_ge(t21, k1):
                    more02 = _next_digits(e02, m0, q)
                    continue
                _shifted(c21, t21, -d1, w)
                nc21 = _support(c21_sup, c21, w)
                _copy(r2, v20, w)
                _sub_mul(r2, c21_sup, nc21, c21, e01, m0, base0, mul, sub,
                         q, w)
                _sub_mul(r2, c22_sup, nc22, c22, e02, m0, base0, mul, sub,
                         q, w)
                if _val_ge(r2, k0):
                    out.append((
                        tuple(e01[t] for t in range(m0)),
                        tuple(e02[t] for t in range(m0)),
                        tuple(e12[t] for t in range(m1)),
                    ))
                more02 = _next_digits(e02, m0, q)
            more01 = _next_digits(e01, m0, q)
        more12 = _next_digits(e12, m1, q)
    return out
