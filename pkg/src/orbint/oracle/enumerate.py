"""Finite-field lattice enumeration for the orbital counting problems.

Lattices over F_q[[eps]] are carried in column Hermite form: an
upper-triangular basis whose j-th column has pivot eps^(d_j) in row j and
above-pivot entries reduced modulo the pivot of their row.  That form is
unique, so sets of lattices can be compared and counted exactly.

The hot loop (walking every admissible entry filling for one diagonal and
keeping the gamma-stable ones) lives in the kernel module selected at
package import; everything here prepares inputs for it and interprets the
survivors through retractions and moment polytopes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from ..errors import (
    BudgetExceeded,
    GenericityFailure,
    InconsistentPipelines,
    PrecisionExhausted,
    UnsupportedGroup,
)
from ..polytopes import hull_contains, sigma_gamma, xi_default
from ..root_data import LambdaElement, LeviSpec, parabolics
from . import kernel
from .series import TruncatedSeries, small_field

DEFAULT_BUDGET = 2_000_000_000


# ---------------------------------------------------------------------------
# the element


class GammaMatrix:
    """A concrete integral matrix realizing a RegularElementSpec over F_q."""

    __slots__ = ("spec", "field", "mat", "b0", "c0")

    def __init__(self, spec, field, mat, b0, c0):
        self.spec = spec
        self.field = field
        self.mat = tuple(tuple(row) for row in mat)
        self.b0 = b0
        self.c0 = c0

    @property
    def n(self):
        return len(self.mat)

    @property
    def maxdeg(self):
        out = 0
        for row in self.mat:
            for e in row:
                if e.coeffs:
                    out = max(out, e.lo + len(e.coeffs) - 1)
        return out

    def apply(self, column):
        """Matrix-vector product on a list of series."""
        out = []
        for r in range(self.n):
            acc = TruncatedSeries.zero(self.field)
            for c in range(self.n):
                acc = acc + self.mat[r][c] * column[c]
            out.append(acc)
        return out

    def window_rows(self, glo, w):
        """Row-major window lists for the kernel."""
        out = []
        for row in self.mat:
            for e in row:
                out.append(e.window_coeffs(glo, glo + w))
        return out

    def __repr__(self):
        return f"GammaMatrix({self.spec!r}, q={self.field.q})"


def _mono(field, v, c=1):
    return TruncatedSeries.monomial(field, v, c)


def _zero(field):
    return TruncatedSeries.zero(field)


def gamma_matrix(spec, q, b0=None, c0=None):
    """Build the standard matrix for the class, with unit hooks b0, c0.

    Units default to 1 wherever that choice keeps the element regular; when
    no unit choice can (split GL3 with n1 == n2 over F_2), raises
    GenericityFailure.
    """
    fld = small_field(q)
    for u in (b0, c0):
        if u is not None and not (1 <= u < q):
            raise ValueError(f"unit {u} not in GF({q})^*")
    b0 = 1 if b0 is None else b0
    z = _zero(fld)
    if spec.group == "GL2":
        if spec.case == "split":
            mat = [[_mono(fld, spec.n, b0), z], [z, z]]
        else:
            mat = [
                [z, _mono(fld, spec.n, b0)],
                [_mono(fld, spec.n + 1, b0), z],
            ]
        return GammaMatrix(spec, fld, mat, b0, c0)
    if spec.case == "split":
        n1, n2 = spec.n1, spec.n2
        if c0 is None:
            c0 = 1
            if n1 == n2 and fld.add(b0, c0) == 0:
                usable = [u for u in fld.units() if fld.add(b0, u) != 0]
                if not usable:
                    raise GenericityFailure(
                        f"no unit over GF({q}) separates the first two "
                        f"eigenvalues when n1 == n2 == {n1}"
                    )
                c0 = usable[0]
        elif n1 == n2 and fld.add(b0, c0) == 0:
            raise GenericityFailure(
                f"units b0={b0}, c0={c0} collapse val(a-c) below n1 == n2"
            )
        a = _mono(fld, n1, b0) + _mono(fld, n2, c0)
        b = _mono(fld, n2, c0)
        mat = [[a, z, z], [z, b, z], [z, z, z]]
        return GammaMatrix(spec, fld, mat, b0, c0)
    if spec.case == "mixed":
        c0 = 1 if c0 is None else c0
        m, n = spec.m, spec.n
        mat = [
            [_mono(fld, m, c0), z, z],
            [z, z, _mono(fld, n, b0)],
            [z, _mono(fld, n + 1, b0), z],
        ]
        return GammaMatrix(spec, fld, mat, b0, c0)
    # anisotropic GL3: a totally ramified cubic class
    c0 = 1 if c0 is None else c0
    n1, n2 = spec.n1, spec.n2
    mat = [
        [z, _mono(fld, n1, b0), _mono(fld, n2, c0)],
        [_mono(fld, n2 + 1, c0), z, _mono(fld, n1, b0)],
        [_mono(fld, n1 + 1, b0), _mono(fld, n2 + 1, c0), z],
    ]
    return GammaMatrix(spec, fld, mat, b0, c0)


# ---------------------------------------------------------------------------
# lattices


class OLattice:
    """A full-rank O-lattice in canonical column Hermite form.

    diag holds the pivot exponents; entries maps (row, col) with row < col
    to the exact residue series of that above-pivot entry, reduced modulo
    eps^(diag[row]).  Zero residues are omitted.
    """

    __slots__ = ("field", "diag", "entries")

    def __init__(self, field, diag, entries):
        self.field = field
        self.diag = tuple(int(d) for d in diag)
        reduced = {}
        for (i, j), e in entries.items():
            if not (0 <= i < j < len(self.diag)):
                raise ValueError(f"entry position {(i, j)} out of range")
            low, _ = e.split_at(self.diag[i])
            if low.coeffs:
                reduced[(i, j)] = low
        self.entries = reduced

    @property
    def n(self):
        return len(self.diag)

    def det_valuation(self):
        return sum(self.diag)

    def entry(self, i, j):
        return self.entries.get((i, j), _zero(self.field))

    def key(self):
        ent = tuple(
            (i, j, e.lo, e.coeffs) for (i, j), e in sorted(self.entries.items())
        )
        return (self.diag, ent)

    def __eq__(self, other):
        return isinstance(other, OLattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def basis_columns(self):
        cols = []
        for j in range(self.n):
            col = [self.entry(i, j) for i in range(j)]
            col.append(_mono(self.field, self.diag[j]))
            col.extend(_zero(self.field) for _ in range(j + 1, self.n))
            cols.append(col)
        return cols

    def min_entry_valuation(self):
        vals = [d for d in self.diag]
        for e in self.entries.values():
            vals.append(e.valuation())
        return min(vals)

    def __repr__(self):
        return f"OLattice(diag={self.diag}, entries={len(self.entries)})"


def lattice_contains(lattice, vector):
    """Membership of an exact vector, by back-substitution on the basis."""
    n = lattice.n
    v = list(vector)
    for k in reversed(range(n)):
        if not v[k].val_at_least(lattice.diag[k]):
            return False
        c = v[k].shift(-lattice.diag[k])
        for i in range(k):
            e = lattice.entry(i, k)
            if e.coeffs:
                v[i] = v[i] - c * e
    return True


def is_gamma_stable(lattice, gamma):
    """Whether gamma maps the lattice into itself."""
    return all(
        lattice_contains(lattice, gamma.apply(col))
        for col in lattice.basis_columns()
    )


def canonicalize(field, columns, prec=None):
    """Canonical Hermite form of the lattice spanned by exact columns."""
    n = len(columns)
    cols = [list(c) for c in columns]
    if prec is None:
        span = 0
        for col in cols:
            for e in col:
                if e.coeffs:
                    span = max(span, abs(e.lo), abs(e.lo + len(e.coeffs)))
        prec = 4 * span + 12
    diag = [0] * n
    order = []  # column index occupying each pivot row
    active = list(range(n))
    for r in reversed(range(n)):
        best = None
        for ci in active:
            v = _val_or_none(cols[ci][r])
            if v is not None and (best is None or v < best[0]):
                best = (v, ci)
        if best is None:
            raise PrecisionExhausted(f"no certified pivot in row {r}")
        v, ci = best
        diag[r] = v
        order.append((r, ci))
        active.remove(ci)
        pivot_inv = cols[ci][r].inverse(_avail_prec(cols[ci][r], v, prec))
        scaled = [(cols[ci][i] * pivot_inv).shift(v) for i in range(n)]
        scaled[r] = _mono(field, v)
        cols[ci] = scaled
        for cj in active:
            e = cols[cj][r]
            v_e = _val_or_none(e)
            if v_e is None:
                cols[cj][r] = _zero(field)
                continue
            c = e.shift(-v)
            for i in range(n):
                if i != r:
                    cols[cj][i] = cols[cj][i] - c * scaled[i]
            cols[cj][r] = _zero(field)
    by_row = {r: ci for r, ci in order}
    ordered = [cols[by_row[r]] for r in range(n)]
    entries = {}
    for j in range(n):
        for i in reversed(range(j)):
            e = ordered[j][i]
            v_e = _val_or_none(e)
            if v_e is None:
                continue
            _, high = e.split_at(diag[i])
            if any(high.coeffs):
                f = high.shift(-diag[i])
                for r in range(i + 1):
                    ordered[j][r] = ordered[j][r] - f * ordered[i][r]
    for j in range(n):
        for i in range(j):
            e = ordered[j][i]
            lo = min(e.lo, diag[i])
            coeffs = e.window_coeffs(lo, diag[i])
            entries[(i, j)] = TruncatedSeries.exact_poly(field, lo, coeffs)
    return OLattice(field, diag, entries)


def _val_or_none(series):
    """Valuation, or None when the series is zero as far as can be seen."""
    try:
        v = series.valuation()
    except PrecisionExhausted:
        return None
    return None if v is math.inf else v


def _avail_prec(series, v, prec):
    """Largest inversion precision the series window can support, capped."""
    if series.exact:
        return prec
    return min(prec, int(series.known_end) - v)


# ---------------------------------------------------------------------------
# generic box enumeration


def enumerate_lattices(n, q, box, nu0, budget=None):
    """Stream every lattice with eps^box O^n <= L <= eps^-box O^n and
    val(det) = nu0, in canonical form, smallest diagonals first."""
    if n < 1:
        raise ValueError("rank must be positive")
    fld = small_field(q)
    budget = DEFAULT_BUDGET if budget is None else budget
    d_list = sorted(
        d
        for d in product(range(-box, box + 1), repeat=n)
        if sum(d) == nu0
    )
    est = 0
    for d in d_list:
        digits = sum((n - 1 - i) * max(0, d[i] + box) for i in range(n))
        est += q**digits
    if est > budget:
        raise BudgetExceeded(f"estimated {est} candidates exceeds budget {budget}")
    scaled = [
        [_mono(fld, box) if i == k else _zero(fld) for i in range(n)]
        for k in range(n)
    ]
    for d in d_list:
        ranges = []
        pos = []
        for i in range(n):
            for j in range(i + 1, n):
                ranges.append(product(range(q), repeat=max(0, d[i] + box)))
                pos.append((i, j))
        for combo in product(*ranges):
            entries = {
                (i, j): TruncatedSeries.exact_poly(fld, -box, cs)
                for (i, j), cs in zip(pos, combo)
            }
            lat = OLattice(fld, d, entries)
            if all(lattice_contains(lat, v) for v in scaled):
                yield lat


# ---------------------------------------------------------------------------
# retractions and moment polytopes


def retraction_H(lattice, p, prec=None):
    """The Lambda_M-valued retraction of the lattice along the parabolic p.

    Computed from the flag filtration: order the coordinates by p's block
    order, read off the valuation of each graded piece by column reduction
    with pivot rows taken in reversed flag order, then sum per block.
    """
    n = lattice.n
    if p.levi.n != n:
        raise ValueError("parabolic rank does not match the lattice")
    field = lattice.field
    if prec is None:
        span = max(max(lattice.diag), 0) - min(
            min(lattice.diag), lattice.min_entry_valuation()
        )
        prec = 3 * span + 12
    flat = [i - 1 for b in p.blocks_in_order for i in b]
    cols = [list(c) for c in lattice.basis_columns()]
    u = {}
    active = list(range(n))
    for r in reversed(flat):
        best = None
        for ci in active:
            v = _val_or_none(cols[ci][r])
            if v is not None and (best is None or v < best[0]):
                best = (v, ci)
        if best is None:
            raise PrecisionExhausted(f"no certified pivot in row {r}")
        v, ci = best
        u[r] = v
        active.remove(ci)
        pivcol = cols[ci]
        pivot_inv = pivcol[r].inverse(_avail_prec(pivcol[r], v, prec))
        for cj in active:
            e = cols[cj][r]
            if _val_or_none(e) is None:
                cols[cj][r] = _zero(field)
                continue
            c = e * pivot_inv
            for i in range(n):
                cols[cj][i] = cols[cj][i] - c * pivcol[i]
            cols[cj][r] = _zero(field)
    sums = tuple(sum(u[i - 1] for i in b) for b in p.levi.blocks)
    return LambdaElement(p.levi, sums)


def moment_polytope(lattice, m0, prec=None):
    """All parabolic retractions of the lattice over the Levi m0."""
    return {p: retraction_H(lattice, p, prec=prec) for p in parabolics(m0)}


# ---------------------------------------------------------------------------
# kernel-driven counting


def _window_for(gm, d_list, lo_fn):
    maxd = max(max(d) for d in d_list)
    mind = min(min(d) for d in d_list)
    minlo = min(min(lo_fn(d)) for d in d_list)
    minlo = min(minlo, mind)
    glo = 3 * (minlo - maxd) - 2
    whi = 3 * maxd - 2 * minlo + gm.maxdeg + 4
    return glo, whi - glo + 1


def _estimate(q, n, d_list, lo_fn):
    est = 0
    for d in d_list:
        lo = lo_fn(d)
        digits = sum(
            (n - 1 - i) * max(0, d[i] - lo[i]) for i in range(n)
        )
        est += q**digits
    return est


def _survivors(gm, d_list, lo_fn, budget):
    """Stream gamma-stable lattices over the given diagonals."""
    if not d_list:
        return
    fld = gm.field
    n = gm.n
    q = fld.q
    budget = DEFAULT_BUDGET if budget is None else budget
    est = _estimate(q, n, d_list, lo_fn)
    if est > budget:
        raise BudgetExceeded(
            f"estimated {est} entry fillings exceeds budget {budget}"
        )
    glo, w = _window_for(gm, d_list, lo_fn)
    gwin = gm.window_rows(glo, w)
    add, sub, mul = fld.add_table, fld.sub_table, fld.mul_table
    for d in d_list:
        lo = lo_fn(d)
        for cand in kernel.stable_entries(
            q, add, sub, mul, n, glo, w, gwin, list(d), list(lo)
        ):
            entries = {}
            if n == 2:
                entries[(0, 1)] = TruncatedSeries.exact_poly(fld, lo[0], cand[0])
            else:
                entries[(0, 1)] = TruncatedSeries.exact_poly(fld, lo[0], cand[0])
                entries[(0, 2)] = TruncatedSeries.exact_poly(fld, lo[0], cand[1])
                entries[(1, 2)] = TruncatedSeries.exact_poly(fld, lo[1], cand[2])
            yield OLattice(fld, d, entries)


def _vertex_list(pi):
    """Vertex coordinates of a truncation datum (family or plain list)."""
    if hasattr(pi, "vertices"):
        return [tuple(Fraction(c) for c in v) for v in pi.vertices.values()]
    return [tuple(Fraction(c) for c in v) for v in pi]


def _hull_lattice_points(verts, nu0):
    n = len(verts[0])
    lows = [math.ceil(min(v[i] for v in verts)) for i in range(n)]
    highs = [math.floor(max(v[i] for v in verts)) for i in range(n)]
    out = []
    for pt in product(*[range(lo, hi + 1) for lo, hi in zip(lows, highs)]):
        if sum(pt) == nu0 and hull_contains(verts, pt):
            out.append(pt)
    return out


def _coordinate_spreads(verts):
    n = len(verts[0])
    return [
        max(v[i] for v in verts) - min(v[i] for v in verts) for i in range(n)
    ]


def _torus_moment_points(lattice, prec=None):
    m0 = LeviSpec.torus(lattice.n)
    return [
        h.realize() for h in moment_polytope(lattice, m0, prec=prec).values()
    ]


def _contains_mod_center(verts, x, slice_total):
    n = len(x)
    shift = Fraction(slice_total - sum(Fraction(c) for c in x), n)
    return hull_contains(verts, tuple(Fraction(c) + shift for c in x))


def count_truncated(spec, q, nu0, pi, budget=None, margin=1, partitioned=False,
                    b0=None, c0=None):
    """Stable lattices with val(det) = nu0 whose moment polytope sits in pi.

    pi is an OrthogonalFamily or a plain vertex list at the torus level;
    containment is checked on every Borel retraction.  With partitioned=True
    the result is a mapping diagonal -> count instead of the total.
    """
    if spec.case == "anisotropic" and spec.group == "GL3":
        raise UnsupportedGroup("no torus-level truncation for anisotropic GL3")
    gm = gamma_matrix(spec, q, b0=b0, c0=c0)
    verts = _vertex_list(pi)
    d_list = _hull_lattice_points(verts, nu0)
    if not d_list:
        return {} if partitioned else 0
    glob = [math.ceil(min(v[i] for v in verts)) for i in range(gm.n)]
    spreads = _coordinate_spreads(verts)

    def lo_fn(d):
        return [
            max(glob[i], d[i] - math.ceil(spreads[i]) - margin)
            for i in range(gm.n)
        ]

    per_d = {}
    for lat in _survivors(gm, d_list, lo_fn, budget):
        pts = _torus_moment_points(lat)
        if all(hull_contains(verts, pt) for pt in pts):
            per_d[lat.diag] = per_d.get(lat.diag, 0) + 1
    return per_d if partitioned else sum(per_d.values())


def _block_spread_bound(n):
    """Diagonal spread bound for lattices stable under the ramified
    quadratic block with entry valuations n, n+1."""
    return n + 1


def _xi_boxes(spec, nu, margin):
    """Diagonal candidates and row floors for the xi-stability fiber."""
    n = spec.gl_rank
    center = Fraction(nu, n)
    if spec.case == "split":
        fam = sigma_gamma(spec)
        verts = [tuple(Fraction(c) for c in v) for v in fam.vertices.values()]
        spreads = [math.ceil(s) for s in _coordinate_spreads(verts)]
        ranges = [
            range(
                math.floor(center - s) - margin,
                math.ceil(center + s) + margin + 1,
            )
            for s in spreads
        ]
        d_list = [d for d in product(*ranges) if sum(d) == nu]
        glob = [r.start for r in ranges]

        def lo_fn(d):
            return [max(glob[i], d[i] - spreads[i] - margin) for i in range(n)]

        return d_list, lo_fn
    if spec.case == "mixed":
        ng = min(2 * spec.m, 2 * spec.n + 1)
        bs = _block_spread_bound(spec.n)
        d0r = range(
            math.floor(center - ng) - margin, math.ceil(center + ng) + margin + 1
        )
        d_list = []
        for d0 in d0r:
            rest = nu - d0
            for d1 in range((rest - bs - margin) // 2, rest + bs + margin + 1):
                d2 = rest - d1
                if abs(d1 - d2) <= bs + margin:
                    d_list.append((d0, d1, d2))
        lo0 = min(d[0] for d in d_list) if d_list else 0

        def lo_fn(d):
            return [
                max(lo0, d[0] - ng - margin),
                d[2] - bs - margin,
                0,
            ]

        return d_list, lo_fn
    # anisotropic: the fiber is not cut down by xi at all
    return _aniso_boxes(spec, nu, margin)


def _aniso_boxes(spec, nu, margin):
    n = spec.gl_rank
    if spec.group == "GL2":
        box = spec.n + 2 + margin
    else:
        box = min(spec.n1, spec.n2) + 3 + margin
    d_list = [
        d for d in product(range(-box, box + 1), repeat=n) if sum(d) == nu
    ]

    def lo_fn(d):
        return [-box] * n

    return d_list, lo_fn


def count_xi_stable(spec, q, nu=0, xi=None, budget=None, margin=1,
                    b0=None, c0=None):
    """Stable lattices in the val(det) = nu fiber whose Levi-level moment
    polytope contains xi (mod center)."""
    gm = gamma_matrix(spec, q, b0=b0, c0=c0)
    m0 = spec.m0()
    if xi is None:
        xi = xi_default(m0)
    d_list, lo_fn = _xi_boxes(spec, nu, margin)
    if m0.k == 1:
        # anisotropic: xi lives in a zero-dimensional space; every lattice
        # in the fiber counts
        return sum(1 for _ in _survivors(gm, d_list, lo_fn, budget))
    count = 0
    for lat in _survivors(gm, d_list, lo_fn, budget):
        pts = [
            h.realize()
            for h in moment_polytope(lat, m0).values()
        ]
        if _contains_mod_center(pts, xi, nu):
            count += 1
    return count


def mixed_refinement_vertices(ng, n):
    """Vertices of the torus-level pentagon refining the mixed fundamental
    domain on the val(det) = n + 1 slice."""
    return [
        (0, n + 1, 0),
        (-ng, ng + n + 1, 0),
        (-ng, 0, ng + n + 1),
        (0, 0, n + 1),
        (n + 1, 0, 0),
    ]


def _canonical_nu(spec):
    if spec.case == "mixed":
        return spec.n + 1
    return 0


def count_fundamental_domain(spec, q, nu=None, budget=None, margin=1,
                             b0=None, c0=None):
    """Size of the fundamental-domain slice of stable lattices.

    Split cases count the lattices whose moment polytope sits inside
    sigma_gamma on the canonical determinant slice.  The mixed case is
    counted twice, through the Levi-level sigma_gamma condition and through
    the torus-level refinement pentagon, and the two sets must agree.
    Anisotropic cases count the whole fiber.
    """
    canonical = _canonical_nu(spec)
    if nu is None:
        nu = canonical
    gm = gamma_matrix(spec, q, b0=b0, c0=c0)
    if spec.case == "anisotropic":
        d_list, lo_fn = _aniso_boxes(spec, nu, margin)
        return sum(1 for _ in _survivors(gm, d_list, lo_fn, budget))
    if nu != canonical:
        raise ValueError(
            f"other determinant slices are translates; use nu={canonical}"
        )
    if spec.case == "split":
        return count_truncated(
            spec, q, nu, sigma_gamma(spec), budget=budget, margin=margin,
            b0=b0, c0=c0,
        )
    # mixed: Levi-level membership in the nu-slice translate of sigma_gamma
    ng = min(2 * spec.m, 2 * spec.n + 1)
    m0 = spec.m0()
    fam = sigma_gamma(spec)
    shift = LambdaElement(m0, (0, nu)).realize()
    sig_verts = [
        tuple(Fraction(a) + Fraction(b) for a, b in zip(v, shift))
        for v in fam.vertices.values()
    ]
    bs = _block_spread_bound(spec.n)
    d_list = []
    for d0 in range(-ng, 1):
        rest = nu - d0
        for d1 in range((rest - bs - margin) // 2, rest + bs + margin + 1):
            d2 = rest - d1
            if abs(d1 - d2) <= bs + margin:
                d_list.append((d0, d1, d2))

    def lo_fn(d):
        return [-ng, d[2] - bs - margin, 0]

    level_keys = set()
    survivors = []
    for lat in _survivors(gm, d_list, lo_fn, budget):
        pts = [h.realize() for h in moment_polytope(lat, m0).values()]
        if all(hull_contains(sig_verts, p) for p in pts):
            level_keys.add(lat.key())
            survivors.append(lat)
    # ... must agree with the torus-level refinement by the pentagon
    pent = [
        tuple(Fraction(c) for c in v)
        for v in mixed_refinement_vertices(ng, spec.n)
    ]
    pent_keys = set()
    for lat in survivors:
        pts = _torus_moment_points(lat)
        if all(hull_contains(pent, pt) for pt in pts):
            pent_keys.add(lat.key())
    if level_keys != pent_keys:
        raise InconsistentPipelines(
            f"mixed fundamental domain: sigma-level count {len(level_keys)} "
            f"!= pentagon refinement count {len(pent_keys)}"
        )
    return len(level_keys)
