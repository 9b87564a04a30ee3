"""Positive (G,M0)-orthogonal families and the truncation polytope toolbox.

Everything the counting pipelines consume lives here: the base polytope
Sigma_gamma, its dilations Pi, faces, the facet strips E_P(Pi), the shrunken
core Pi_0, the edge-stretching A-operators, and the region partition {R_Q}
driving the recursive reductions.  All geometry is exact (Fractions) and of
affine rank <= 2, so convex hulls are handled by a small 2D kernel instead
of a general polytope library.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .errors import (
    GenericityFailure,
    NotSufficientlyRegular,
    PositivityViolated,
    UnsupportedGroup,
)
from .root_data import (
    CoweightVector,
    LambdaElement,
    LeviSpec,
    ParabolicSpec,
    RootDatum,
    adjacent,
    beta,
    f_of,
    m_alpha,
    parabolics,
    project,
    relative_simple_coweights,
    wedge_roots,
    weyl_assign,
)


# ---------------------------------------------------------------------------
# exact low-rank hull geometry


def _solve_columns(cols, target):
    """Solve sum_i x_i * cols[i] = target exactly; None if inconsistent."""
    rows = len(target)
    m = [[Fraction(c[r]) for c in cols] + [Fraction(target[r])] for r in range(rows)]
    ncols = len(cols)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for row, c in enumerate(pivots):
        x[c] = m[row][ncols]
    return x


def _affine_basis(diffs):
    """A maximal linearly independent subset of the difference vectors."""
    basis = []
    for d in diffs:
        if all(c == 0 for c in d):
            continue
        if not basis or _solve_columns(basis, d) is None:
            basis.append(d)
    return basis


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points):
    """Convex hull, counter-clockwise, no duplicate endpoints."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if hull else pts


def hull_contains(points, x):
    """Exact membership of x in the convex hull of `points`.

    The affine dimension of the point set must be <= 2; higher ranks do not
    occur for GL2/GL3.
    """
    pts = list(points)
    if not pts:
        return False
    p0 = pts[0]
    diffs = [tuple(p[i] - p0[i] for i in range(len(p0))) for p in pts[1:]]
    y = tuple(x[i] - p0[i] for i in range(len(p0)))
    basis = _affine_basis(diffs)
    dim = len(basis)
    if dim == 0:
        return all(c == 0 for c in y)
    ycoord = _solve_columns(basis, y)
    if ycoord is None:
        return False
    coords = [tuple(Fraction(0) for _ in range(dim))]
    for d in diffs:
        c = _solve_columns(basis, d)
        coords.append(tuple(c))
    if dim == 1:
        ts = [c[0] for c in coords]
        return min(ts) <= ycoord[0] <= max(ts)
    if dim == 2:
        hull = _hull2d([(c[0], c[1]) for c in coords])
        pt = (ycoord[0], ycoord[1])
        if len(hull) == 1:
            return pt == hull[0]
        if len(hull) == 2:
            a, b = hull
            if _cross(a, b, pt) != 0:
                return False
            return min(a, b) <= pt <= max(a, b)
        return all(
            _cross(hull[i], hull[(i + 1) % len(hull)], pt) >= 0
            for i in range(len(hull))
        )
    raise UnsupportedGroup(f"hull of affine dimension {dim} > 2")


def _ones(n):
    return CoweightVector((1,) * n)


# ---------------------------------------------------------------------------
# regular element data


@dataclass(frozen=True)
class RegularElementSpec:
    """Conjugacy-class data of the integral regular semisimple element.

    group: "GL2" or "GL3".
    case:  "split" (diagonalizable over F; root valuations n, or n1 <= n2),
           "mixed" (GL3 only: one rational eigenvalue and a ramified
           quadratic pair; m controls the rational/quadratic gap and n the
           Eisenstein coefficient), or "anisotropic" (totally ramified;
           GL2 takes n, GL3 takes n1, n2).
    """

    group: str
    case: str
    n: int | None = None
    m: int | None = None
    n1: int | None = None
    n2: int | None = None

    def __post_init__(self):
        if self.group not in ("GL2", "GL3"):
            raise UnsupportedGroup(f"group {self.group!r}")
        cases = ("split", "anisotropic") if self.group == "GL2" else (
            "split", "mixed", "anisotropic")
        if self.case not in cases:
            raise ValueError(f"case {self.case!r} not valid for {self.group}")
        if self.group == "GL2":
            if self.n is None or self.n < 0:
                raise ValueError("GL2 requires n >= 0")
        elif self.case == "split":
            if self.n1 is None or self.n2 is None:
                raise ValueError("split GL3 requires n1, n2")
            if not (1 <= self.n1 <= self.n2):
                raise ValueError("split GL3 minimal form requires 1 <= n1 <= n2")
        elif self.case == "mixed":
            if self.m is None or self.n is None:
                raise ValueError("mixed GL3 requires m, n")
            if self.m < 1 or self.n < 1:
                raise ValueError("mixed GL3 requires m >= 1, n >= 1")
        else:
            if self.n1 is None or self.n2 is None:
                raise ValueError("anisotropic GL3 requires n1, n2")
            if self.n1 < 0 or self.n2 < 0:
                raise ValueError("anisotropic GL3 requires n1, n2 >= 0")

    @property
    def gl_rank(self):
        return 2 if self.group == "GL2" else 3

    def m0(self):
        """The minimal Levi containing the centralizer torus."""
        if self.case == "split":
            return LeviSpec.torus(self.gl_rank)
        if self.case == "mixed":
            return LeviSpec([(1,), (2, 3)])
        return LeviSpec.full(self.gl_rank)

    def root_valuation(self, i, j):
        """val(alpha_ij(gamma)) over the splitting field, split cases only."""
        if self.case != "split":
            raise ValueError("root_valuation applies to split elements")
        if self.group == "GL2":
            return self.n
        vals = {(1, 2): self.n1, (1, 3): self.n1, (2, 3): self.n2}
        return vals[(min(i, j), max(i, j))]


def n_gamma(spec, p1, p2):
    """The minimal edge length n(gamma, P1, P2) across an adjacent pair."""
    m0 = spec.m0()
    if p1.levi != m0 or not adjacent(p1, p2):
        raise ValueError("n_gamma requires an adjacent pair in P(M0)")
    if spec.case == "split":
        total = 0
        for alpha in wedge_roots(p1, p2):
            i = alpha.index(1) + 1
            j = alpha.index(-1) + 1
            total += spec.root_valuation(i, j) * m_alpha(m0, p1, p2, alpha)
        return total
    if spec.case == "mixed":
        return min(2 * spec.m, 2 * spec.n + 1)
    raise ValueError("anisotropic M0 = G has no adjacent pairs")


# ---------------------------------------------------------------------------
# orthogonal families


def parabolics_in(m0, ambient=None):
    """Parabolics of the ambient Levi with Levi factor m0.

    Encoded as global orders where each ambient block's m0-blocks occupy a
    fixed segment (ambient blocks in canonical order).  With ambient None or
    the full group this is all of P(M0).
    """
    if ambient is None or ambient.k == 1:
        return parabolics(m0)
    groups = []
    for amb_block in ambient.blocks:
        groups.append(
            [t for t, b in enumerate(m0.blocks) if set(b) <= set(amb_block)]
        )
    if sum(len(g) for g in groups) != m0.k:
        raise ValueError(f"{ambient!r} does not contain {m0!r}")
    out = []
    for choice in product(*(permutations(g) for g in groups)):
        out.append(ParabolicSpec(m0, tuple(i for seg in choice for i in seg)))
    return out


def _segments(p, ambient):
    """Split p.order into its per-ambient-block segments."""
    sizes = [
        sum(1 for b in p.levi.blocks if set(b) <= set(amb_block))
        for amb_block in ambient.blocks
    ]
    segs = []
    pos = 0
    for s in sizes:
        segs.append(p.order[pos:pos + s])
        pos += s
    return segs


class OrthogonalFamily:
    """A (G,M0)-orthogonal family: one vertex per parabolic in P(M0).

    Adjacent vertices differ by rational multiples of the beta coweights;
    `is_positive` reports whether every multiple is >= 0.  The optional
    ambient Levi supports faces, which are (L,M0)-families.
    """

    __slots__ = ("m0", "ambient", "vertices", "_edges")

    def __init__(self, m0, vertices, ambient=None):
        self.m0 = m0
        self.ambient = ambient if ambient is not None else LeviSpec.full(m0.n)
        keys = parabolics_in(m0, self.ambient)
        vertices = dict(vertices)
        if set(vertices) != set(keys):
            raise ValueError("vertex map must cover exactly P(M0) in the ambient")
        self.vertices = {p: vertices[p] for p in sorted(keys, key=lambda p: p.order)}
        self._edges = {}
        for p1, p2 in self._adjacent_pairs():
            d = self.vertices[p1] - self.vertices[p2]
            b = beta(p1, p2)
            coeff = next((db / bb for db, bb in zip(d, b) if bb != 0), None)
            if coeff is None or d != coeff * b:
                raise ValueError(
                    f"vertex difference across {p1!r},{p2!r} is not a multiple of beta"
                )
            self._edges[frozenset((p1, p2))] = coeff

    def _adjacent_pairs(self):
        keys = list(self.vertices)
        for i, p1 in enumerate(keys):
            for p2 in keys[i + 1:]:
                if adjacent(p1, p2):
                    yield p1, p2

    def __getitem__(self, p):
        return self.vertices[p]

    def __eq__(self, other):
        return (
            isinstance(other, OrthogonalFamily)
            and self.m0 == other.m0
            and self.ambient == other.ambient
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.m0, self.ambient, tuple(
            (p.order, v.coords) for p, v in self.vertices.items())))

    def __repr__(self):
        inner = ", ".join(f"{p.word()}: {tuple(v)}" for p, v in self.vertices.items())
        return f"OrthogonalFamily({inner})"

    @property
    def is_positive(self):
        return all(c >= 0 for c in self._edges.values())

    @property
    def is_integral(self):
        return all(
            all(Fraction(s).denominator == 1 for s in self.m0.block_sums(v))
            for v in self.vertices.values()
        )

    def validate_positive(self):
        if not self.is_positive:
            bad = {
                tuple(sorted(p.word() for p in pair)): coeff
                for pair, coeff in self._edges.items()
                if coeff < 0
            }
            raise PositivityViolated(f"negative edge coefficients: {bad}")
        return self

    def n_edge(self, p1, p2):
        """Coefficient n with lambda_{P1} - lambda_{P2} = n * beta(P1, P2)."""
        return self._edges[frozenset((p1, p2))]

    def trace(self):
        values = {v.total() for v in self.vertices.values()}
        if len(values) != 1:
            raise ValueError("vertices do not share a common trace")
        return values.pop()

    def translate(self, v):
        return OrthogonalFamily(
            self.m0, {p: w + v for p, w in self.vertices.items()}, self.ambient
        )

    def face(self, q):
        """The face for Q as an (L,M0)-orthogonal family, L the Levi of Q."""
        if self.ambient.k != 1:
            raise ValueError("faces are only taken of full-ambient families")
        levi = q.levi
        out = {}
        for r in parabolics_in(self.m0, levi):
            segs = _segments(r, levi)
            p_global = ParabolicSpec(
                self.m0, tuple(i for t in q.order for i in segs[t])
            )
            out[r] = project(levi, self.vertices[p_global])[1]
        return OrthogonalFamily(self.m0, out, ambient=levi)

    def face_pi_part(self, q):
        """The common pi_L component of the Q-face's source vertices."""
        parts = {
            project(q.levi, self.vertices[p])[0]
            for p in self.vertices
            if q.contains(p)
        }
        if len(parts) != 1:
            raise ValueError("face sources disagree on the pi_L part")
        return parts.pop()

    def face_vertices(self, q):
        """Vertices {lambda_P : P subset of Q} of the Q-face, unprojected."""
        return [v for p, v in self.vertices.items() if q.contains(p)]

    def contains_point(self, x, mod_center=False):
        if mod_center:
            shift = Fraction(self.trace() - x.total(), self.m0.n)
            x = x + shift * _ones(self.m0.n)
        return hull_contains(list(self.vertices.values()), x)

    def contains_family(self, other, mod_center=False):
        return all(
            self.contains_point(v, mod_center=mod_center)
            for v in other.vertices.values()
        )

    def lambda_points(self, nu0=None):
        """All Lambda_{M0} points in the hull, optionally in one nu_G class."""
        sums = [self.m0.block_sums(v) for v in self.vertices.values()]
        ranges = []
        for i in range(self.m0.k):
            lo = min(Fraction(s[i]) for s in sums)
            hi = max(Fraction(s[i]) for s in sums)
            ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
        pts = list(self.vertices.values())
        out = []
        for vals in product(*ranges):
            if nu0 is not None and sum(vals) != nu0:
                continue
            lam = LambdaElement(self.m0, vals)
            if hull_contains(pts, lam.realize()):
                out.append(lam)
        return out

    def to_json(self):
        def enc(fr):
            fr = Fraction(fr)
            return int(fr) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"

        data = {
            "m0": [list(b) for b in self.m0.blocks],
            "vertices": {
                p.word(): [enc(c) for c in v] for p, v in self.vertices.items()
            },
        }
        if self.ambient.k != 1:
            data["ambient"] = [list(b) for b in self.ambient.blocks]
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        m0 = LeviSpec([tuple(b) for b in data["m0"]])
        ambient = None
        if "ambient" in data:
            ambient = LeviSpec([tuple(b) for b in data["ambient"]])
        by_word = {
            word: CoweightVector([Fraction(c) for c in coords])
            for word, coords in data["vertices"].items()
        }
        vertices = {}
        for p in parabolics_in(m0, ambient):
            if p.word() not in by_word:
                raise ValueError(f"missing vertex for parabolic {p.word()}")
            vertices[p] = by_word[p.word()]
        return cls(m0, vertices, ambient=ambient)


# ---------------------------------------------------------------------------
# the base polytope and its constructions


def standard_parabolic(m0):
    return ParabolicSpec(m0, tuple(range(m0.k)))


def sigma_gamma(spec):
    """The fundamental-domain polytope, normalized by lambda_{P_0} = 0."""
    m0 = spec.m0()
    if spec.case == "anisotropic":
        g = standard_parabolic(m0)
        return OrthogonalFamily(m0, {g: CoweightVector.zero(m0.n)})
    if spec.group == "GL2":
        n = spec.n
        table = {"12": (0, 0), "21": (-n, n)}
    elif spec.case == "split":
        n1, n2 = spec.n1, spec.n2
        table = {
            "123": (0, 0, 0),
            "213": (-n1, n1, 0),
            "132": (0, -n2, n2),
            "312": (-n1, -n2, n1 + n2),
            "231": (-2 * n1, n1, n1),
            "321": (-2 * n1, n1 - n2, n1 + n2),
        }
    else:
        ng = n_gamma(spec, standard_parabolic(m0), standard_parabolic(m0).opposite())
        table = {
            "123": (0, 0, 0),
            "231": (-ng, Fraction(ng, 2), Fraction(ng, 2)),
        }
    vertices = {p: CoweightVector(table[p.word()]) for p in parabolics(m0)}
    return OrthogonalFamily(m0, vertices).validate_positive()


def delta_p0(m0):
    """pi_{M0}-images of the simple coroots crossing consecutive blocks."""
    return relative_simple_coweights(m0)


def dilate(sigma, a):
    """The truncation polytope Pi: each vertex translated by the Weyl-moved
    combination sum_j a_j pi_{M0}(alpha_j-vee)."""
    m0 = sigma.m0
    rel = delta_p0(m0)
    a = tuple(int(x) for x in a)
    if len(a) != len(rel):
        raise ValueError(f"expected {len(rel)} dilation parameters")
    if any(x < 0 for x in a):
        raise ValueError("dilation parameters must be nonnegative")
    v0 = CoweightVector.zero(m0.n)
    for coeff, w in zip(a, rel):
        v0 = v0 + coeff * w
    sums = m0.block_sums(v0)
    vertices = {p: v + weyl_assign(p, sums) for p, v in sigma.vertices.items()}
    return OrthogonalFamily(m0, vertices, ambient=sigma.ambient).validate_positive()


def _chamber_functional(p):
    """A coweight strictly dominant for p whose pairing separates the
    bounded integral points met here (base-101 slot weights)."""
    k = p.levi.k
    return weyl_assign(p, [Fraction(101 ** (k - t), 1) for t in range(k)])


def e_p_family(pi, sigma, p):
    """The facet strip E_P(Pi): hull of the integral Sigma-translates whose
    P-face lands inside Pi's P-face."""
    if p.levi.k == 1:
        raise ValueError("E_P is defined for proper parabolics only")
    m0 = pi.m0
    pi_face = pi.face_vertices(p)
    sigma_face = [v for key, v in sigma.vertices.items() if p.contains(key)]
    pi_sums = [m0.block_sums(v) for v in pi.vertices.values()]
    sg_sums = [m0.block_sums(v) for v in sigma.vertices.values()]
    ranges = []
    for i in range(m0.k):
        lo = min(Fraction(s[i]) for s in pi_sums) - max(Fraction(s[i]) for s in sg_sums)
        hi = max(Fraction(s[i]) for s in pi_sums) - min(Fraction(s[i]) for s in sg_sums)
        ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
    translates = []
    for vals in product(*ranges):
        lam = m0.spread(vals)
        if all(hull_contains(pi_face, v + lam) for v in sigma_face):
            translates.append(lam)
    if not translates:
        raise NotSufficientlyRegular(
            f"no admissible translate of Sigma against the {p.word()} facet"
        )
    vertices = {}
    for key in pi.vertices:
        f = _chamber_functional(key)
        best = max(translates, key=f.dot)
        vertices[key] = sigma.vertices[key] + best
    fam = OrthogonalFamily(m0, vertices, ambient=pi.ambient)
    fam.validate_positive()
    for lam in translates:
        for v in sigma.vertices.values():
            if not fam.contains_point(v + lam):
                raise PositivityViolated(
                    "facet translates do not assemble into an orthogonal family"
                )
    return fam


def parabolic_intersection(p, q):
    """The parabolic P cap Q when the two flags merge into a chain, else None."""

    def flag(r):
        prefixes = []
        acc = set()
        for b in r.blocks_in_order[:-1]:
            acc |= set(b)
            prefixes.append(frozenset(acc))
        return prefixes

    chain = set(flag(p)) | set(flag(q))
    for s in chain:
        for t in chain:
            if not (s <= t or t <= s):
                return None
    full = frozenset(range(1, p.levi.n + 1))
    ordered = sorted(chain, key=len) + [full]
    blocks = []
    prev = frozenset()
    for s in ordered:
        blocks.append(tuple(sorted(s - prev)))
        prev = s
    levi = LeviSpec(blocks)
    order = []
    prev = frozenset()
    for s in ordered:
        order.append(levi.blocks.index(tuple(sorted(s - prev))))
        prev = s
    return ParabolicSpec(levi, tuple(order))


def apply_A_operator(fam, levi, alpha, k):
    """Stretch by k the edges of type alpha internal to the Levi.

    alpha is an absolute simple root (integer vector) crossing two
    consecutive M0-blocks inside one block of `levi`.  Each application adds
    +1 to every edge whose block swap happens at alpha's slot inside that
    Levi block, and shifts the base vertex by pi_{M0} of the fundamental
    coweight.
    """
    m0 = fam.m0
    k = int(k)
    if k < 0:
        raise ValueError("operator power must be nonnegative")
    if k == 0:
        return fam
    rd = RootDatum(m0.n)
    j = None
    boundary = 0
    for t in range(m0.k - 1):
        boundary += len(m0.blocks[t])
        if tuple(alpha) == rd.root(boundary, boundary + 1):
            j = t
            break
    if j is None:
        raise ValueError(f"{alpha} is not a boundary root between consecutive blocks")
    amb_idx = next(
        (
            ci
            for ci, cb in enumerate(levi.blocks)
            if set(m0.blocks[j]) <= set(cb) and set(m0.blocks[j + 1]) <= set(cb)
        ),
        None,
    )
    if amb_idx is None:
        raise ValueError(f"{alpha} is not internal to {levi!r}")
    earlier = set()
    for c in range(amb_idx):
        earlier |= set(levi.blocks[c])
    internal = [
        t for t, b in enumerate(m0.blocks) if set(b) <= set(levi.blocks[amb_idx])
    ]
    prefix = sum(len(m0.blocks[t]) for t in range(j + 1))
    slot_values = [
        sum(1 for i in m0.blocks[t] if i <= prefix) for t in internal
    ]
    const_sums = [
        len(b) if set(b) <= earlier else 0 for b in m0.blocks
    ]
    vertices = {}
    for p, v in fam.vertices.items():
        order_internal = [b for b in p.order if b in internal]
        sums = list(const_sums)
        for pos, b in enumerate(order_internal):
            sums[b] = slot_values[pos]
        vertices[p] = v + k * m0.spread(sums)
    return OrthogonalFamily(m0, vertices, ambient=fam.ambient)


def pi0(pi, sigma):
    """The core family Pi_0 that the main-body count ranges over."""
    m0 = pi.m0
    total_rel = CoweightVector.zero(m0.n)
    for w in delta_p0(m0):
        total_rel = total_rel + w
    sums = m0.block_sums(total_rel)
    vertices = {}
    for p in pi.vertices:
        pm = p.opposite()
        vertices[p] = (
            pi.vertices[p]
            - (sigma.vertices[p] - sigma.vertices[pm])
            - weyl_assign(p, sums)
        )
    return OrthogonalFamily(m0, vertices, ambient=pi.ambient)


# ---------------------------------------------------------------------------
# generic vectors and regularity


def _generic_vector(m0, base):
    """A traceless base-power combination of relative fundamental coweights:
    strictly dominant, tiny, and off every small-integer wall."""
    n = m0.n
    coords = [Fraction(0)] * n
    sizes = [len(b) for b in m0.blocks]
    cum = 0
    for j in range(m0.k - 1):
        cum += sizes[j]
        u = Fraction(n - cum, n)
        v = Fraction(-cum, n)
        scale = Fraction(1, base ** (j + 1))
        for t, b in enumerate(m0.blocks):
            val = (u if t <= j else v) * scale
            for i in b:
                coords[i - 1] += val
    return CoweightVector(coords)


def varsigma_vector(m0):
    """The exact tiny perturbation used to build the region partition."""
    return _generic_vector(m0, 101)


def xi_default(m0):
    """The default generic stability parameter."""
    return _generic_vector(m0, 97)


def xi_is_generic(xi, m0, within):
    """Check xi avoids every lattice wall inside the working polytope."""
    rd = RootDatum(m0.n)
    crossing = [
        alpha
        for alpha in rd.roots
        if m0.block_index_of(alpha.index(1) + 1)
        != m0.block_index_of(alpha.index(-1) + 1)
    ]
    for lam in within.lambda_points():
        base = lam.realize()
        if any((xi - base).pairing(alpha) == 0 for alpha in crossing):
            return False
    return True


class RegularityReport:
    """Outcome of the sufficient-regularity test, with failure reasons."""

    def __init__(self, ok, reasons, inequalities=None):
        self.ok = ok
        self.reasons = tuple(reasons)
        self.inequalities = dict(inequalities or {})

    def __bool__(self):
        return self.ok

    def __repr__(self):
        status = "regular" if self.ok else "irregular"
        return f"RegularityReport({status}, reasons={list(self.reasons)})"


def _phi_n0_roots(m0):
    """Absolute roots in the nilradical of the standard parabolic P_0."""
    rd = RootDatum(m0.n)
    out = []
    for s in range(m0.k):
        for t in range(s + 1, m0.k):
            for i in m0.blocks[s]:
                for j in m0.blocks[t]:
                    out.append(rd.root(i, j))
    return out


def is_sufficiently_regular(pi, sigma, xi=None):
    """Check the three regularity conditions the main-body count needs.

    (1) the dilation direction pairs strictly positively with every root of
    the standard nilradical; (2) facet strips intersect exactly in the strip
    of the intersected parabolic (at the lattice-point level); (3) every
    face of Pi_0 contains the xi-anchored Sigma-face translates.
    """
    m0 = pi.m0
    if xi is None:
        xi = xi_default(m0)
    reasons = []
    inequalities = {}

    p_std = standard_parabolic(m0)
    v0 = pi.vertices[p_std] - sigma.vertices[p_std]
    for alpha in _phi_n0_roots(m0):
        if v0.pairing(alpha) <= 0:
            reasons.append(
                f"condition 1: dilation pairs {v0.pairing(alpha)} with {alpha}"
            )
            break
    if m0.k == 3:
        borels = {p.word(): p for p in parabolics(m0)}
        inequalities["2a1-a2"] = pi.n_edge(
            borels["123"], borels["213"]
        ) - sigma.n_edge(borels["123"], borels["213"])
        inequalities["2a2-a1"] = pi.n_edge(
            borels["123"], borels["132"]
        ) - sigma.n_edge(borels["123"], borels["132"])

    proper = [q for q in f_of(m0) if q.levi.k > 1]
    strips = {}
    for q in proper:
        try:
            strips[q] = e_p_family(pi, sigma, q)
        except NotSufficientlyRegular as exc:
            reasons.append(f"condition 2: {exc}")
    if len(strips) == len(proper):
        for i, q1 in enumerate(proper):
            for q2 in proper[i + 1:]:
                inter = parabolic_intersection(q1, q2)
                got = {
                    tuple(lam.values)
                    for lam in strips[q1].lambda_points()
                    if strips[q2].contains_point(lam.realize())
                }
                if inter is not None and inter.levi.k > 1:
                    want = {
                        tuple(lam.values) for lam in strips[inter].lambda_points()
                    }
                else:
                    want = set()
                if got != want:
                    reasons.append(
                        f"condition 2: strips {q1.word()} and {q2.word()} share "
                        f"{len(got)} lattice points, expected {len(want)}"
                    )

    if not reasons:
        core = pi0(pi, sigma)
        if not core.is_positive:
            reasons.append("condition 3: Pi_0 is not a positive family")
        else:
            for q in f_of(m0):
                levi = q.levi
                sigma_face = [project(levi, v)[1] for v in sigma.face_vertices(q)]
                core_face = [project(levi, v)[1] for v in core.face_vertices(q)]
                xi_l = project(levi, xi)[1]
                for anchor in sigma_face:
                    tau = xi_l - anchor
                    if not all(
                        hull_contains(core_face, s + tau) for s in sigma_face
                    ):
                        reasons.append(
                            f"condition 3: face {q.word()} misses a xi-anchored translate"
                        )
                        break
                else:
                    continue
                break

    return RegularityReport(not reasons, reasons, inequalities)


# ---------------------------------------------------------------------------
# the region partition


class RegionPartition:
    """The exact perturbed partition {R_Q} of the coweight space.

    D_0 translates Sigma's vertices by a tiny strictly-dominant generic
    vector per chamber, so every region test is a strict comparison and no
    lattice point can sit on a boundary.
    """

    def __init__(self, sigma, varsigma=None):
        self.sigma = sigma
        self.m0 = sigma.m0
        vs = varsigma if varsigma is not None else varsigma_vector(self.m0)
        sums = self.m0.block_sums(vs)
        self.d0 = OrthogonalFamily(
            self.m0,
            {p: v + weyl_assign(p, sums) for p, v in sigma.vertices.items()},
            ambient=sigma.ambient,
        ).validate_positive()

    def _in_region(self, q, pts):
        """Do all the (center-normalized) points lie in R_Q?"""
        if q.levi.k == 1:
            return all(self.d0.contains_point(x) for x in pts)
        levi = q.levi
        sub = [p for p in self.d0.vertices if q.contains(p)]
        face_proj = [project(levi, self.d0.vertices[p])[1] for p in sub]
        mu_q = project(levi, self.d0.vertices[sub[0]])[0]
        nil = q.nilradical_roots()
        for x in pts:
            pi_m, pi_up = project(levi, x)
            if not hull_contains(face_proj, pi_up):
                return False
            if any((pi_m - mu_q).pairing(alpha) < 0 for alpha in nil):
                return False
        return True

    def region_of(self, x):
        """The unique Q in F(M0) whose region contains x.

        x may be a coweight point, a Lambda element, or an orthogonal family
        (then the Q-face of the family must land in R_Q).  Comparisons are
        made modulo the center.
        """
        if isinstance(x, LambdaElement):
            points = lambda q: [self._center_shift(x.realize())]
        elif isinstance(x, CoweightVector):
            points = lambda q: [self._center_shift(x)]
        elif isinstance(x, OrthogonalFamily):
            points = lambda q: [self._center_shift(v) for v in x.face_vertices(q)]
        else:
            raise TypeError(f"cannot classify {x!r}")
        hits = [q for q in f_of(self.m0) if self._in_region(q, points(q))]
        if len(hits) != 1:
            raise GenericityFailure(
                f"{len(hits)} regions claim the point; perturbation insufficient"
            )
        return hits[0]

    def _center_shift(self, v):
        shift = Fraction(self.d0.trace() - v.total(), self.m0.n)
        return v + shift * _ones(self.m0.n)
