"""Split GL_n root datum and parabolic/Levi bookkeeping.

Levi subgroups containing the diagonal torus are set partitions of
{1, ..., n}; parabolic subgroups are Levis with a total order on the blocks.
Coweight vectors live in the rational span of the cocharacter lattice and
carry exact Fraction coordinates throughout.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .errors import NotAdjacent, RootNotInWedge


class CoweightVector:
    """A rational vector in R^n regarded as a point of the coweight space.

    >>> CoweightVector((1, -2, 1)) + CoweightVector((0, 1, -1))
    CoweightVector((1, -1, 0))
    """

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(Fraction(c) for c in coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other):
        return CoweightVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        return CoweightVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return CoweightVector(-a for a in self.coords)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return CoweightVector(a * scalar for a in self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CoweightVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        pretty = tuple(int(c) if c.denominator == 1 else c for c in self.coords)
        return f"CoweightVector({pretty!r})"

    def dot(self, other):
        it = other.coords if isinstance(other, CoweightVector) else other
        return sum(a * Fraction(b) for a, b in zip(self.coords, it))

    def total(self):
        return sum(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def pairing(self, root):
        """Value of the root (an integer vector) on this coweight."""
        return self.dot(root)

    @classmethod
    def zero(cls, n):
        return cls((0,) * n)


class RootDatum:
    """Roots, coroots and fundamental coweights of split GL_n.

    >>> RootDatum(2).simple_roots
    [(1, -1)]
    """

    def __init__(self, n):
        self.n = n
        self.roots = [
            tuple(1 if k == i else -1 if k == j else 0 for k in range(n))
            for i in range(n)
            for j in range(n)
            if i != j
        ]
        self.coroots = list(self.roots)
        self.simple_roots = [
            tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n))
            for i in range(n - 1)
        ]
        self.fundamental_coweights = [
            CoweightVector(tuple(1 if k <= i else 0 for k in range(n)))
            for i in range(n - 1)
        ]

    def root(self, i, j):
        """The root e_i - e_j (1-based indices)."""
        return tuple(
            1 if k == i - 1 else -1 if k == j - 1 else 0 for k in range(self.n)
        )


def _canonical_blocks(blocks):
    blocks = tuple(tuple(sorted(b)) for b in blocks)
    return tuple(sorted(blocks, key=lambda b: b[0]))


class LeviSpec:
    """A Levi subgroup of GL_n containing the diagonal torus: a set partition.

    Blocks are stored sorted by minimum element; this fixed arrangement is
    the "standard order" referenced by parabolic orders.
    """

    __slots__ = ("blocks", "n")

    def __init__(self, blocks):
        self.blocks = _canonical_blocks(blocks)
        flat = sorted(i for b in self.blocks for i in b)
        self.n = len(flat)
        if flat != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..n")

    @classmethod
    def torus(cls, n):
        return cls([(i,) for i in range(1, n + 1)])

    @classmethod
    def full(cls, n):
        return cls([tuple(range(1, n + 1))])

    @property
    def k(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, LeviSpec) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        word = "|".join("".join(map(str, b)) for b in self.blocks)
        return f"LeviSpec({word})"

    def contains(self, other):
        """True when this Levi contains the other (each block a union of theirs)."""
        return all(
            any(set(ob) <= set(sb) for sb in self.blocks) for ob in other.blocks
        )

    def block_index_of(self, i):
        for pos, b in enumerate(self.blocks):
            if i in b:
                return pos
        raise ValueError(f"index {i} not covered")

    def block_sums(self, v):
        """Block-sum coordinates of a CoweightVector."""
        return tuple(sum(v[i - 1] for i in b) for b in self.blocks)

    def spread(self, block_values):
        """CoweightVector with each block constant, given per-block sums."""
        coords = [Fraction(0)] * self.n
        for b, val in zip(self.blocks, block_values):
            share = Fraction(val, len(b))
            for i in b:
                coords[i - 1] = share
        return CoweightVector(coords)

    def semisimple_rank(self):
        return sum(len(b) - 1 for b in self.blocks)


class ParabolicSpec:
    """A parabolic subgroup with Levi `levi`: a total order on its blocks.

    `order` is a tuple of indices into `levi.blocks`; the nilradical consists
    of the roots pointing from an earlier block to a later one.
    """

    __slots__ = ("levi", "order")

    def __init__(self, levi, order):
        self.levi = levi
        self.order = tuple(order)
        if sorted(self.order) != list(range(levi.k)):
            raise ValueError(f"order {order} is not a permutation of the blocks")

    @property
    def blocks_in_order(self):
        return tuple(self.levi.blocks[i] for i in self.order)

    def word(self):
        """Block order word, e.g. "132" for the Borel with order (1)(3)(2)."""
        return "".join("".join(map(str, b)) for b in self.blocks_in_order)

    def __eq__(self, other):
        return (
            isinstance(other, ParabolicSpec)
            and self.levi == other.levi
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.levi, self.order))

    def __repr__(self):
        return f"ParabolicSpec({self.word()})"

    def opposite(self):
        return ParabolicSpec(self.levi, tuple(reversed(self.order)))

    def nilradical_roots(self, rd=None):
        """Roots e_i - e_j with i in an earlier block than j."""
        rd = rd or RootDatum(self.levi.n)
        out = []
        bo = self.blocks_in_order
        for s in range(len(bo)):
            for t in range(s + 1, len(bo)):
                for i in bo[s]:
                    for j in bo[t]:
                        out.append(rd.root(i, j))
        return out

    def contains(self, other):
        """True when this parabolic contains `other` (order-compatible coarsening)."""
        if not self.levi.contains(other.levi):
            return False
        runs = []
        for ob in other.blocks_in_order:
            pos = None
            for s, sb in enumerate(self.blocks_in_order):
                if set(ob) <= set(sb):
                    pos = s
                    break
            if pos is None:
                return False
            runs.append(pos)
        return runs == sorted(runs)


def parabolics(levi):
    """All parabolics with the given Levi (k! orders)."""
    return [ParabolicSpec(levi, p) for p in permutations(range(levi.k))]


def levis_above(m0):
    """All Levis containing m0: set partitions of m0's blocks, merged."""

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            yield [[first]] + part
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]

    out = []
    for grouping in partitions(list(m0.blocks)):
        merged = [tuple(sorted(i for b in group for i in b)) for group in grouping]
        out.append(LeviSpec(merged))
    seen = set()
    uniq = []
    for lv in out:
        if lv not in seen:
            seen.add(lv)
            uniq.append(lv)
    uniq.sort(key=lambda lv: (lv.k, lv.blocks))
    return uniq


def f_of(m0):
    """The finite set F(m0): all parabolics containing a member of P(m0)."""
    out = []
    for lv in levis_above(m0):
        out.extend(parabolics(lv))
    return out


def adjacent(p1, p2):
    """True when the orders differ by one adjacent transposition."""
    if p1.levi != p2.levi or p1.order == p2.order:
        return False
    diff = [t for t in range(len(p1.order)) if p1.order[t] != p2.order[t]]
    if len(diff) != 2 or diff[1] != diff[0] + 1:
        return False
    s = diff[0]
    return p1.order[s] == p2.order[s + 1] and p1.order[s + 1] == p2.order[s]


def wedge_roots(p1, p2, rd=None):
    """Phi(N1) intersect Phi(N2^-) for adjacent p1, p2."""
    if not adjacent(p1, p2):
        raise NotAdjacent(f"{p1!r} and {p2!r} are not adjacent")
    rd = rd or RootDatum(p1.levi.n)
    s = next(t for t in range(len(p1.order)) if p1.order[t] != p2.order[t])
    block_a = p1.levi.blocks[p1.order[s]]
    block_b = p1.levi.blocks[p1.order[s + 1]]
    return [rd.root(i, j) for i in block_a for j in block_b]


def project(m, v):
    """Orthogonal projections (pi_M(v), pi^M(v)) for a Levi m.

    pi_M averages coordinates within each block; the two parts are
    orthogonal and sum back to v.

    >>> m = LeviSpec([(1,), (2, 3)])
    >>> project(m, CoweightVector((0, -1, 1)))[0]
    CoweightVector((0, 0, 0))
    """
    coords = [Fraction(0)] * m.n
    for b in m.blocks:
        avg = Fraction(sum(v[i - 1] for i in b), len(b))
        for i in b:
            coords[i - 1] = avg
    pi_m = CoweightVector(coords)
    return pi_m, v - pi_m


def beta(p1, p2):
    """The minimal coroot image in Lambda_M across an adjacent pair.

    Realized as a coweight vector: +1 spread over the block leaving first
    in p1, -1 spread over the other.  beta(p2, p1) == -beta(p1, p2).
    """
    if not adjacent(p1, p2):
        raise NotAdjacent(f"{p1!r} and {p2!r} are not adjacent")
    s = next(t for t in range(len(p1.order)) if p1.order[t] != p2.order[t])
    vals = [0] * p1.levi.k
    vals[p1.order[s]] = 1
    vals[p1.order[s + 1]] = -1
    return p1.levi.spread(vals)


def m_alpha(m0, p1, p2, alpha):
    """Multiplicity m with image(alpha-coroot) = m * beta(p1, p2) in Lambda_M0."""
    roots = wedge_roots(p1, p2)
    if tuple(alpha) not in {tuple(r) for r in roots}:
        raise RootNotInWedge(f"{alpha} not in the wedge of {p1!r}, {p2!r}")
    b = beta(p1, p2)
    image = project(m0, CoweightVector(alpha))[0]
    for bs, ims in zip(m0.block_sums(b), m0.block_sums(image)):
        if bs != 0:
            m = Fraction(ims, bs)
            if m.denominator != 1 or m <= 0:
                raise RootNotInWedge(f"image of {alpha} is not a positive multiple of beta")
            return int(m)
    raise RootNotInWedge("degenerate beta")


def weyl_assign(p, standard_block_values):
    """Reassign standard-slot block sums according to a parabolic's order.

    Slot t of the standard arrangement carries value v_t; the block at
    position t of p's order receives it.  For the torus this is the plain
    Weyl permutation action on coordinates.
    """
    k = p.levi.k
    vals = [0] * k
    for t in range(k):
        vals[p.order[t]] = standard_block_values[t]
    return p.levi.spread(vals)


def relative_simple_coweights(m0):
    """pi_M0 images of the simple coroots between consecutive standard blocks."""
    out = []
    for j in range(m0.k - 1):
        vals = [0] * m0.k
        vals[j] = 1
        vals[j + 1] = -1
        out.append(m0.spread(vals))
    return out


class LambdaElement:
    """An element of Lambda_M: one integer per block of the Levi.

    >>> LambdaElement(LeviSpec([(1,), (2, 3)]), (2, -2)).nu_g()
    0
    """

    __slots__ = ("levi", "values")

    def __init__(self, levi, values):
        self.levi = levi
        self.values = tuple(int(v) for v in values)
        if len(self.values) != levi.k:
            raise ValueError("one value per block required")

    def nu_g(self):
        return sum(self.values)

    def c_m(self):
        """Class in Lambda_{M^ad}: each value modulo its block size."""
        return tuple(v % len(b) for v, b in zip(self.values, self.levi.blocks))

    def realize(self):
        return self.levi.spread(self.values)

    @classmethod
    def from_coweight(cls, levi, v):
        sums = levi.block_sums(v)
        if any(s.denominator != 1 for s in map(Fraction, sums)):
            raise ValueError(f"{v!r} has non-integral block sums for {levi!r}")
        return cls(levi, tuple(int(s) for s in sums))

    def __add__(self, other):
        if self.levi != other.levi:
            raise ValueError("mismatched Levis")
        return LambdaElement(self.levi, tuple(a + b for a, b in zip(self.values, other.values)))

    def __eq__(self, other):
        return (
            isinstance(other, LambdaElement)
            and self.levi == other.levi
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.levi, self.values))

    def __repr__(self):
        return f"LambdaElement({self.values!r})"
