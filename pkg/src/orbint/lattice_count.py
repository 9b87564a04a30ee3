"""Exact lattice-point counting in low-dimensional rational polyhedra.

Regions live in the block-sum coordinates of a Levi lattice: a point of
Lambda_M for M with k blocks is recorded as the k-tuple of coordinate sums
over the blocks.  A region is cut out by finitely many affine half-spaces
with rational coefficients, optionally restricted to a fixed total (the
image in Lambda_G) and to a fixed class modulo the block sizes.

Counting is plain enumeration over an integer bounding box computed from
the vertices of the region, after eliminating one variable when the total
is pinned.  Only regions with at most two free variables are supported,
which covers every Levi of gl2 and gl3.  Unbounded nonempty regions raise
`Unbounded` instead of looping forever.

The module also carries the two closed-form counts used by the gl3 split
pipeline: the central hexagon count and the three strip counts attached
to the proper Levis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import OutOfValidityRegion, Unbounded
from .root_data import LeviSpec


@dataclass(frozen=True)
class HalfSpace:
    """The affine condition sum(coeffs * x) + const >= 0 (or > 0 if strict)."""

    coeffs: tuple
    const: Fraction
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "const", Fraction(self.const))

    def value(self, x):
        return sum(c * xi for c, xi in zip(self.coeffs, x)) + self.const

    def holds(self, x):
        v = self.value(x)
        return v > 0 if self.strict else v >= 0

    def holds_weakly(self, x):
        """Membership in the closure (strictness ignored)."""
        return self.value(x) >= 0


@dataclass(frozen=True)
class LatticeRegion:
    """A rational polyhedron in the block-sum coordinates of Lambda_M.

    `nu0`, when given, restricts to points of total `nu0`.  `mu`, when
    given, restricts coordinate i to the class mu[i] modulo the size of
    block i; this is the fibre over a class in the adjoint-quotient
    lattice of M.
    """

    m: LeviSpec
    halfspaces: tuple
    nu0: int | None = None
    mu: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "halfspaces", tuple(self.halfspaces))
        k = self.m.k
        for h in self.halfspaces:
            if len(h.coeffs) != k:
                raise ValueError(f"half-space arity {len(h.coeffs)} != {k} blocks")
        if self.mu is not None:
            if len(self.mu) != k:
                raise ValueError("class tuple must have one entry per block")
            sizes = self._block_sizes()
            object.__setattr__(
                self, "mu", tuple(int(r) % s for r, s in zip(self.mu, sizes))
            )

    def _block_sizes(self):
        return tuple(len(b) for b in self.m.blocks)

    def with_halfspaces(self, extra):
        """This region further cut by the given half-spaces."""
        return LatticeRegion(self.m, self.halfspaces + tuple(extra), self.nu0, self.mu)

    def translate(self, lam):
        """The region shifted by an integral vector of Lambda_M.

        `lam` is given in block-sum coordinates.  Totals and classes shift
        along, so lattice-point counts are preserved.
        """
        lam = tuple(int(v) for v in lam)
        if len(lam) != self.m.k:
            raise ValueError("translation vector must have one entry per block")
        moved = tuple(
            HalfSpace(h.coeffs, h.const - sum(c * l for c, l in zip(h.coeffs, lam)), h.strict)
            for h in self.halfspaces
        )
        nu0 = None if self.nu0 is None else self.nu0 + sum(lam)
        mu = None
        if self.mu is not None:
            mu = tuple((r + l) % s for r, l, s in zip(self.mu, lam, self._block_sizes()))
        return LatticeRegion(self.m, moved, nu0, mu)

    def _class_ok(self, x):
        if self.mu is None:
            return True
        return all(
            (xi - r) % s == 0
            for xi, r, s in zip(x, self.mu, self._block_sizes())
        )


def count_points(region):
    """Number of lattice points in the region, by exact enumeration.

    Raises `Unbounded` when the closure of the region is nonempty and
    unbounded, and `ValueError` when more than two free variables remain
    after the total has been eliminated.
    """
    k = region.m.k
    rows = [(h.coeffs, h.const, h.strict) for h in region.halfspaces]
    if region.nu0 is not None:
        d = k - 1
        rows = [
            (tuple(c[i] - c[d] for i in range(d)), b + c[d] * region.nu0, strict)
            for c, b, strict in rows
        ]
    else:
        d = k
    if d > 2:
        raise ValueError(f"{d} free variables; only regions of dimension <= 2 are countable")

    def rebuild(t):
        if region.nu0 is None:
            return t
        return t + (region.nu0 - sum(t),)

    if d == 0:
        if any(not _row_holds(b, strict, Fraction(0)) for _, b, strict in rows):
            return 0
        return 1 if region._class_ok(rebuild(())) else 0
    if d == 1:
        return _count_line(rows, rebuild, region)
    return _count_plane(rows, rebuild, region)


def _row_holds(const, strict, value):
    v = value + const
    return v > 0 if strict else v >= 0


def _count_line(rows, rebuild, region):
    lo = hi = None
    lo_strict = hi_strict = False
    for (a,), b, strict in rows:
        if a == 0:
            if not _row_holds(b, strict, Fraction(0)):
                return 0
            continue
        bound = Fraction(-b, a)
        if a > 0:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_strict = bound, strict
        else:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_strict = bound, strict
    if lo is None or hi is None:
        raise Unbounded("feasible half-line in the counting region")
    start = math.ceil(lo) + (1 if lo_strict and lo == math.ceil(lo) else 0)
    stop = math.floor(hi) - (1 if hi_strict and hi == math.floor(hi) else 0)
    total = 0
    for t in range(start, stop + 1):
        if region._class_ok(rebuild((t,))):
            total += 1
    return total


def _line_intersection(r1, r2):
    (a1, b1), c1, _ = r1
    (a2, b2), c2, _ = r2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    # Solve a1 x + b1 y = -c1, a2 x + b2 y = -c2.
    x = (-c1 * b2 + c2 * b1) / det
    y = (-a1 * c2 + a2 * c1) / det
    return (x, y)


def _count_plane(rows, rebuild, region):
    live = []
    for coeffs, b, strict in rows:
        if coeffs[0] == 0 and coeffs[1] == 0:
            if not _row_holds(b, strict, Fraction(0)):
                return 0
        else:
            live.append((coeffs, b, strict))

    def weakly_feasible(p):
        return all(a0 * p[0] + a1 * p[1] + b >= 0 for (a0, a1), b, _ in live)

    # The closure's nearest point to the origin is the origin itself, the
    # perpendicular foot on one boundary line, or a crossing of two lines.
    candidates = [(Fraction(0), Fraction(0))]
    for (a0, a1), b, _ in live:
        n2 = a0 * a0 + a1 * a1
        candidates.append((-b * a0 / n2, -b * a1 / n2))
    for r1, r2 in combinations(live, 2):
        p = _line_intersection(r1, r2)
        if p is not None:
            candidates.append(p)
    feasible = [p for p in candidates if weakly_feasible(p)]
    if not feasible:
        return 0

    if not live:
        raise Unbounded("no constraints cut the plane")
    for (a0, a1), _, _ in live:
        for u in ((-a1, a0), (a1, -a0)):
            if all(c0 * u[0] + c1 * u[1] >= 0 for (c0, c1), _, _ in live):
                raise Unbounded(f"recession direction {u} in the counting region")

    xs = [p[0] for p in feasible]
    ys = [p[1] for p in feasible]
    total = 0
    for t0 in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for t1 in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            if all(_row_holds(b, strict, a[0] * t0 + a[1] * t1) for a, b, strict in live):
                if region._class_ok(rebuild((t0, t1))):
                    total += 1
    return total


def polygon_inequalities(points):
    """Half-spaces (non-strict) cutting out the convex hull of 2d points.

    Handles the degenerate hulls: a single point and a segment both come
    back as finite intersections of half-planes.
    """
    pts = sorted({(Fraction(p[0]), Fraction(p[1])) for p in points})
    if not pts:
        raise ValueError("no points given")
    if len(pts) == 1:
        (x, y) = pts[0]
        return [
            HalfSpace((1, 0), -x),
            HalfSpace((-1, 0), x),
            HalfSpace((0, 1), -y),
            HalfSpace((0, -1), y),
        ]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    if all(cross(pts[0], pts[-1], p) == 0 for p in pts[1:-1]):
        p, q = pts[0], pts[-1]
        d = (q[0] - p[0], q[1] - p[1])
        n = (-d[1], d[0])
        return [
            HalfSpace(n, -(n[0] * p[0] + n[1] * p[1])),
            HalfSpace((-n[0], -n[1]), n[0] * p[0] + n[1] * p[1]),
            HalfSpace(d, -(d[0] * p[0] + d[1] * p[1])),
            HalfSpace((-d[0], -d[1]), d[0] * q[0] + d[1] * q[1]),
        ]

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]

    out = []
    for p, q in zip(hull, hull[1:] + hull[:1]):
        n = (-(q[1] - p[1]), q[0] - p[0])
        out.append(HalfSpace(n, -(n[0] * p[0] + n[1] * p[1])))
    return out


def region_from_family(fam, m, nu0=None, mu=None):
    """The projection of an orthogonal family's hull to Lambda_M, as a region.

    The vertices are pushed to block-sum coordinates for `m` and their hull
    is converted to half-spaces.  For a three-block Levi the total must be
    pinned so that two free variables remain.
    """
    sums = [m.block_sums(v) for v in fam.vertices.values()]
    total = sum(sums[0])
    k = m.k
    if k == 1:
        pin = (HalfSpace((1,), -total), HalfSpace((-1,), total))
        return LatticeRegion(m, pin, nu0=nu0, mu=mu)
    if k == 2:
        cuts = []
        for i in range(2):
            vals = [s[i] for s in sums]
            e = [Fraction(0)] * 2
            e[i] = Fraction(1)
            cuts.append(HalfSpace(tuple(e), -min(vals)))
            e = [Fraction(0)] * 2
            e[i] = Fraction(-1)
            cuts.append(HalfSpace(tuple(e), max(vals)))
        if nu0 is None:
            cuts.append(HalfSpace((1, 1), -total))
            cuts.append(HalfSpace((-1, -1), total))
        return LatticeRegion(m, tuple(cuts), nu0=nu0, mu=mu)
    if k == 3:
        if nu0 is None:
            raise ValueError("three-block projections need the total pinned")
        flat = polygon_inequalities([(s[0], s[1]) for s in sums])
        cuts = tuple(
            HalfSpace((h.coeffs[0], h.coeffs[1], 0), h.const) for h in flat
        )
        return LatticeRegion(m, cuts, nu0=nu0, mu=mu)
    raise ValueError(f"unsupported Levi with {k} blocks")


def _check_gl3_split_params(n1, n2, a1, a2):
    if not (1 <= n1 <= n2):
        raise ValueError(f"need 1 <= n1 <= n2, got ({n1}, {n2})")
    if 2 * a1 - a2 < n2 + 1 or 2 * a2 - a1 < n2 + 1:
        raise OutOfValidityRegion(
            f"dilation ({a1}, {a2}) too small for valuations ({n1}, {n2})"
        )


def gl3_hexagon_count(n1, n2, a1, a2):
    """Lattice points of trace zero in the central hexagon of the gl3 split case.

    Computed as a closed triangle count minus the three corner triangles
    that the hexagon cuts off.  Valid once every hexagon edge is
    nonnegative, i.e. 2*a1 - a2 and 2*a2 - a1 both exceed max(n1, n2);
    outside that range `OutOfValidityRegion` is raised.  A fully
    degenerate hexagon gives 1.
    """
    _check_gl3_split_params(n1, n2, a1, a2)
    e0 = 3 * a2 - 2 - 2 * n1 - n2
    c1 = 2 * a2 - a1 - n1 - 1
    c2 = 2 * a2 - a1 - n2 - 1
    return e0 * (e0 + 1) // 2 - c1 * (c1 + 1) - c2 * (c2 + 1) // 2


def gl3_strip_counts(n1, n2, a1, a2):
    """Lattice points in the three Levi projections of the central hexagon.

    Entry i is the count for the rank-one quotient of the Levi whose
    singleton block is {i+1}; the trace-zero slice of each projection is
    an integer interval.
    """
    _check_gl3_split_params(n1, n2, a1, a2)
    return (
        a1 + a2 - 2 * n1 - 1,
        a1 + a2 - n1 - n2 - 1,
        a1 + a2 - n1 - n2 - 1,
    )
