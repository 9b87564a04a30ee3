"""The two counting pipelines and the orbital-integral extraction.

Both pipelines count the rational points of the same truncated fixed-point
set X^{nu0}(Pi), where Pi = dilate(Sigma_gamma, a):

* ``ak_count`` stratifies the Lambda_M lattice points of Pi by the perturbed
  region partition {R_P}; the central region contributes one fundamental
  domain and every cone stratum contributes a class-dependent fundamental
  domain of its Levi, weighted by q^{val det(ad gamma | n)};
* ``hn_main_body_count`` plus ``tail_count`` split the same total into the
  shrunken-core part, where the weighted integral J sits with coefficient
  one, and facet-strip corrections combined by inclusion-exclusion.

Equating the two on a small grid of truncation parameters cancels every
a-dependent term, leaving J as an integer polynomial in q
(``solve_weighted_integral``).  The ordinary orbital integral reduces to the
anisotropic core directly (``orbital_integral``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .closed_forms import FormulaId, eval_formula
from .errors import (
    InconsistentPipelines,
    NotRegular,
    NotSufficientlyRegular,
    UnsupportedGroup,
)
from .polytopes import (
    RegionPartition,
    RegularElementSpec,
    dilate,
    hull_contains,
    n_gamma,
    pi0,
    sigma_gamma,
    standard_parabolic,
)
from .qpoly import QPoly, TruncationQuasiPoly, qsum
from .root_data import (
    LambdaElement,
    LeviSpec,
    RootDatum,
    f_of,
    levis_above,
    parabolics,
)


# ---------------------------------------------------------------------------
# requests and fundamental-domain tables


@dataclass(frozen=True)
class CountRequest:
    """One truncated count: the element, the slice nu0, the dilation a.

    The optional xi is recorded for provenance; the counts themselves only
    use it through the regularity conventions baked into the polytopes.
    """

    spec: RegularElementSpec
    nu0: int = 0
    a: tuple = ()
    xi: object = None

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        d = self.spec.m0().k - 1
        if len(a) != d:
            raise ValueError(f"expected {d} truncation parameters, got {len(a)}")


class FundamentalDomainTable:
    """Counts |F^{M,mu}| for each Levi M in L(M0) and class mu.

    Entries are keyed by (LeviSpec, class tuple); the class tuple is one
    residue per block, as produced by ``LambdaElement.c_m``.  Lookups are
    recorded in ``used`` so a pipeline run can report which entries it
    consumed.
    """

    def __init__(self, entries):
        self._entries = {}
        for (levi, mu), poly in dict(entries).items():
            self._entries[(levi, tuple(int(x) for x in mu))] = poly
        self.used = []

    def value(self, levi, mu):
        mu = tuple(int(x) for x in mu)
        try:
            val = self._entries[(levi, mu)]
        except KeyError:
            raise KeyError(
                f"no fundamental-domain entry for Levi {levi!r}, class {mu}"
            ) from None
        self.used.append((levi.blocks, mu))
        return val

    def entries(self):
        return dict(self._entries)


def _pair_valuation(spec, levi):
    """Root valuation inside the unique size-2 block of a GL3 split Levi."""
    pair = next(b for b in levi.blocks if len(b) == 2)
    return spec.root_valuation(pair[0], pair[1])


def fundamental_table(spec):
    """The table of fundamental-domain counts built from the closed forms.

    Classes the closed forms do not pin down (split G-level classes other
    than 0, mixed G-level classes other than nu0 = n+1 mod 3) are left out;
    looking them up raises KeyError.
    """
    m0 = spec.m0()
    g = LeviSpec.full(spec.gl_rank)
    entries = {}
    if spec.case == "anisotropic":
        if spec.group == "GL2":
            fib = eval_formula(FormulaId.GL2_ANISO, n=spec.n)
        else:
            fib = _gl3_aniso_fiber(spec)
        # a uniformizer of the ramified extension shifts nu0 by one, so the
        # count is the same in every class
        for r in range(spec.gl_rank):
            entries[(g, (r,))] = fib
        return FundamentalDomainTable(entries)
    if spec.group == "GL2":
        entries[(m0, (0, 0))] = QPoly.one()
        entries[(g, (0,))] = qsum(0, spec.n)
        entries[(g, (1,))] = qsum(0, spec.n - 1)
        return FundamentalDomainTable(entries)
    if spec.case == "split":
        entries[(m0, (0, 0, 0))] = QPoly.one()
        for m in levis_above(m0):
            if m.k != 2:
                continue
            v = _pair_valuation(spec, m)
            for mu in product(*(range(len(b)) for b in m.blocks)):
                parity = sum(mu)
                entries[(m, mu)] = qsum(0, v) if parity == 0 else qsum(0, v - 1)
        entries[(g, (0,))] = eval_formula(
            FormulaId.GL3_SPLIT_POINCARE, n1=spec.n1, n2=spec.n2
        )
        return FundamentalDomainTable(entries)
    # mixed: the quadratic block has isomorphic fibers in both classes
    for s in range(2):
        entries[(m0, (0, s))] = qsum(0, spec.n)
    entries[(g, ((spec.n + 1) % 3,))] = eval_formula(
        FormulaId.GL3_MIXED_F, m=spec.m, n=spec.n
    )
    return FundamentalDomainTable(entries)


def _gl3_aniso_fiber(spec):
    if spec.n1 <= spec.n2:
        return eval_formula(FormulaId.GL3_ANISO_J_CASE1, n1=spec.n1, n2=spec.n2)
    return eval_formula(FormulaId.GL3_ANISO_J_CASE2, n2=spec.n2, n1=spec.n1)


def default_j_table(spec):
    """J^{M,xi^M} for every proper Levi above M0, computed recursively.

    The recursion bottoms out at the M0-level fiber (one point for a torus,
    a full anisotropic GL2 fiber for the mixed case); each GL2-type Levi of
    the split GL3 case is solved through its own pipeline.
    """
    m0 = spec.m0()
    out = {}
    for m in levis_above(m0):
        if m.k == 1:
            continue
        if m == m0:
            if spec.case == "mixed":
                out[m] = qsum(0, spec.n)
            else:
                out[m] = QPoly.one()
        else:
            v = _pair_valuation(spec, m)
            sub = RegularElementSpec("GL2", "split", n=v)
            out[m] = solve_weighted_integral(sub)
    return out


# ---------------------------------------------------------------------------
# shared geometry helpers


def half_val_g_over_m(spec, levi):
    """Half the valuation of det(ad gamma) on g/m, an integer.

    Equals val det(ad gamma | n) for any parabolic with this Levi factor:
    the sum of the root valuations crossing between distinct blocks.
    """
    if levi.k == 1:
        return 0
    if spec.case == "split":
        total = 0
        for s in range(levi.k):
            for t in range(s + 1, levi.k):
                for i in levi.blocks[s]:
                    for j in levi.blocks[t]:
                        total += spec.root_valuation(i, j)
        return total
    if spec.case == "mixed":
        p0 = standard_parabolic(spec.m0())
        return n_gamma(spec, p0, p0.opposite())
    raise ValueError("anisotropic elements have no proper Levi above M0")


def _base_polytopes(req):
    """Sigma and Pi translated onto the nu0 trace slice."""
    spec = req.spec
    m0 = spec.m0()
    sigma = sigma_gamma(spec)
    shift = int(req.nu0 - sigma.trace())
    if shift:
        vals = [0] * m0.k
        # the quadratic block absorbs the slice shift in the mixed case
        vals[1 if spec.case == "mixed" else 0] = shift
        sigma = sigma.translate(LambdaElement(m0, vals).realize())
    return sigma, dilate(sigma, req.a)


def _slice_points(fam, levi, nu0):
    """Lambda_levi points with total nu0 inside the projected hull of fam."""
    sums = [tuple(map(Fraction, levi.block_sums(v))) for v in fam.vertices.values()]
    ranges = []
    for i in range(levi.k - 1):
        lo = min(s[i] for s in sums)
        hi = max(s[i] for s in sums)
        ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
    last_lo = min(s[levi.k - 1] for s in sums)
    last_hi = max(s[levi.k - 1] for s in sums)
    out = []
    for head in product(*ranges):
        last = nu0 - sum(head)
        if not last_lo <= last <= last_hi:
            continue
        vals = head + (last,)
        if hull_contains(sums, tuple(map(Fraction, vals))):
            out.append(LambdaElement(levi, vals))
    return out


def _regular_window(spec, a):
    """The truncation-parameter window both pipelines are proved on."""
    if spec.case == "mixed":
        p0 = standard_parabolic(spec.m0())
        ng = n_gamma(spec, p0, p0.opposite())
        return (2 * a[0] - ng - 2 >= 0,), (f"2a >= {ng + 2}",)
    if spec.group == "GL2":
        return (2 * a[0] - spec.n - 2 >= 0,), (f"2a >= {spec.n + 2}",)
    checks = (
        2 * a[0] - a[1] - spec.n2 - 1 >= 0,
        2 * a[1] - a[0] - spec.n2 - 1 >= 0,
    )
    return checks, (f"2a1-a2 >= {spec.n2 + 1}", f"2a2-a1 >= {spec.n2 + 1}")


def _require_window(spec, a):
    checks, labels = _regular_window(spec, a)
    for ok, label in zip(checks, labels):
        if not ok:
            raise NotSufficientlyRegular(
                f"truncation parameters {a} violate {label}"
            )


# ---------------------------------------------------------------------------
# pipeline one: region-partition count


def ak_count(req, table):
    """|X^{nu0}(Pi)| by the region partition.

    The central region contributes the fundamental domain of the nu0 class;
    each lattice point of a cone region contributes the fundamental domain
    of its Levi and class, weighted by q^{val det(ad gamma | n)}.

    Along each cone of a rank-one Levi the classes strictly alternate, with
    the shifted domain sitting at the stratum adjacent to the central
    region, so a cone holding L points contributes ceil(L/2) shifted and
    floor(L/2) unshifted domains.  The alternation, not the absolute class
    of the block sums, is what survives conjugating the Levi into standard
    position.
    """
    spec = req.spec
    if any(x < 0 for x in req.a):
        raise NotRegular("truncation parameters must be nonnegative")
    m0 = spec.m0()
    g = LeviSpec.full(m0.n)
    total = table.value(g, (req.nu0 % m0.n,))
    if m0.k == 1:
        return total
    sigma, pi = _base_polytopes(req)
    part = RegionPartition(sigma)
    rd = RootDatum(m0.n)
    for m in levis_above(m0):
        if m.k == 1:
            continue
        factor = QPoly.q(half_val_g_over_m(spec, m))
        realized = [(lam, lam.realize()) for lam in _slice_points(pi, m, req.nu0)]
        alternating = spec.case == "split" and any(len(b) == 2 for b in m.blocks)
        for p in parabolics(m):
            mu_p = part.d0.face_pi_part(p)
            nil = p.nilradical_roots(rd)
            cone = [
                lam
                for lam, x in realized
                if all((x - mu_p).pairing(alpha) >= 0 for alpha in nil)
            ]
            if alternating:
                shifted = tuple(1 if len(b) == 2 else 0 for b in m.blocks)
                plain = (0,) * m.k
                for i in range(len(cone)):
                    mu = shifted if i % 2 == 0 else plain
                    total += table.value(m, mu) * factor
            else:
                for lam in cone:
                    total += table.value(m, lam.c_m()) * factor
    return total


def ak_quasi_polynomial(spec, nu0=None, table=None, samples_per_class=None):
    """Fit the a-dependence of ak_count over the regular window.

    Returns a TruncationQuasiPoly of degree two with one branch per parity
    class of a; its validity region is the window of ``_require_window``.
    """
    if nu0 is None:
        nu0 = _default_nu0(spec)
    if table is None:
        table = fundamental_table(spec)
    m0 = spec.m0()
    d = m0.k - 1
    if d == 0:
        raise ValueError("anisotropic counts do not depend on a")
    if d == 1:
        base = _grid_base(spec)
        span = samples_per_class or 8
        points = [(base + i,) for i in range(span)]
        validity = ((1 - _window_offset(spec), (2,)),)
    else:
        b = spec.n2 + 1
        span = samples_per_class or 9
        points = [
            (b + i, b + j)
            for i in range(span)
            for j in range(span)
            if 2 * (b + i) - (b + j) >= b and 2 * (b + j) - (b + i) >= b
        ]
        validity = (
            (-spec.n2, (2, -1)),
            (-spec.n2, (-1, 2)),
        )
    samples = {a: ak_count(CountRequest(spec, nu0, a), table) for a in points}
    return TruncationQuasiPoly.fit(d, samples, degree=2, modulus=2, validity=validity)


def _default_nu0(spec):
    """The slice holding the fundamental domain: det valuation n+1 for the
    mixed case (where the quadratic block contributes n+1), zero otherwise."""
    return spec.n + 1 if spec.case == "mixed" else 0


def ak_constant_part(spec, nu0=0, table=None):
    """The a-free coefficient of the even branch of the fitted count."""
    qp = ak_quasi_polynomial(spec, nu0=nu0, table=table)
    branch = qp.branches[(0,) * qp.d]
    coeffs = branch.get((0,) * qp.d, {})
    out = {}
    for e, v in coeffs.items():
        v = Fraction(v)
        if v.denominator != 1:
            raise InconsistentPipelines(f"non-integer constant coefficient {v}")
        out[e] = int(v)
    return QPoly(out)


def _window_offset(spec):
    if spec.case == "mixed":
        p0 = standard_parabolic(spec.m0())
        return n_gamma(spec, p0, p0.opposite()) + 2
    return spec.n + 2


def _grid_base(spec):
    return (_window_offset(spec) + 1) // 2


# ---------------------------------------------------------------------------
# pipeline two: core and tail


def hn_main_body_count(req, j_table):
    """The main-body count minus its symbolic leading J term.

    The full main body is J^{xi} plus the returned polynomial; the J term is
    kept out so the solver can treat it as the unknown.
    """
    spec = req.spec
    m0 = spec.m0()
    if m0.k == 1:
        return QPoly.zero()
    _require_window(spec, req.a)
    sigma, pi = _base_polytopes(req)
    core = pi0(pi, sigma)
    if not core.is_positive:
        raise NotSufficientlyRegular("the shrunken core is not a positive family")
    total = QPoly.zero()
    for m in levis_above(m0):
        if m.k == 1:
            continue
        stratum = len(_slice_points(core, m, req.nu0))
        total += j_table[m] * QPoly.q(half_val_g_over_m(spec, m)) * stratum
    return total


def tail_count(req, table):
    """Facet-strip correction with inclusion-exclusion signs.

    Each proper parabolic contributes |X^{nu0}(E_P(Pi))| with sign
    (-1)^{rk G - rk P - 1}; the strip counts chain down to the fundamental
    domain through ``ak_recursion_chain``.
    """
    spec = req.spec
    m0 = spec.m0()
    if m0.k == 1:
        return QPoly.zero()
    _require_window(spec, req.a)
    g_rank = LeviSpec.full(m0.n).semisimple_rank()
    total = QPoly.zero()
    for p in f_of(m0):
        if p.levi.k == 1:
            continue
        sign = (-1) ** (g_rank - p.levi.semisimple_rank() - 1)
        powers = _chain_powers(spec, p, req.a)
        total += sign * ak_recursion_chain(spec, req.nu0, p.levi, powers, table)
    return total


def _internal_simple_roots(levi):
    """Adjacent-coordinate roots inside each block, in block order."""
    rd = RootDatum(levi.n)
    out = []
    for b in levi.blocks:
        bs = sorted(b)
        for i, j in zip(bs, bs[1:]):
            out.append(rd.root(i, j))
    return out


def _chain_powers(spec, p, a):
    """How many edge-stretching steps E_P(Pi) sits above the domain."""
    if p.levi == spec.m0():
        # the strip against a minimal-parabolic facet is a single translate
        return {}
    first = p.blocks_in_order[0]
    k = 2 * a[1] - a[0] if len(first) == 1 else 2 * a[0] - a[1]
    alpha = _internal_simple_roots(p.levi)[0]
    return {tuple(alpha): k}


def ak_recursion_chain(spec, nu0, levi, powers, table):
    """Chain the strip count down to |F^{nu0}| by per-step increments.

    ``powers`` maps internal simple roots of the Levi to step counts (a
    sequence aligned with ``_internal_simple_roots`` is also accepted).
    Zero steps return the fundamental-domain count itself.
    """
    g = LeviSpec.full(spec.gl_rank)
    base = table.value(g, (nu0 % g.n,))
    internal = [tuple(r) for r in _internal_simple_roots(levi)]
    if not isinstance(powers, dict):
        powers = dict(zip(internal, powers))
    powers = {tuple(alpha): int(k) for alpha, k in powers.items()}
    for alpha in powers:
        if alpha not in internal:
            raise ValueError(f"{alpha} is not an internal simple root of {levi!r}")
    if all(k == 0 for k in powers.values()):
        return base
    if not (spec.group == "GL3" and spec.case == "split" and levi.k == 2):
        raise UnsupportedGroup(
            "step increments are implemented for the split GL3 maximal Levis only"
        )
    total = base
    for alpha, k in powers.items():
        if k < 0:
            raise NotSufficientlyRegular(f"negative step count {k} across {alpha}")
        total += k * _step_increment(spec, levi)
    return total


def _step_increment(spec, levi):
    """Lattice points swept by one edge stretch against a maximal facet.

    One stratum per other maximal Levi, in the odd class reached first, plus
    one minimal-parabolic corner stratum.
    """
    inc = QPoly.q(2 * spec.n1 + spec.n2)
    for other in levis_above(spec.m0()):
        if other.k != 2 or other == levi:
            continue
        v = _pair_valuation(spec, other)
        inc += QPoly.q(half_val_g_over_m(spec, other)) * qsum(0, v - 1)
    return inc


# ---------------------------------------------------------------------------
# solving for the weighted integral


def _default_grid(spec):
    if spec.group == "GL2" or spec.case == "mixed":
        b = _grid_base(spec)
        return ((b,), (b + 1,), (b + 2,))
    b = spec.n2 + 1
    return ((b, b), (b + 1, b + 1), (b + 2, b + 1), (b + 1, b + 2))


def solve_weighted_integral(spec, nu0=None, a_grid=None, table=None, j_table=None):
    """Extract J^{xi} by cancelling the two pipelines against each other.

    J = ak_count - (main body without J) - tail_count at every grid point;
    the results must agree exactly, otherwise some a-monomial failed to
    cancel and InconsistentPipelines is raised.
    """
    if nu0 is None:
        nu0 = _default_nu0(spec)
    if table is None:
        table = fundamental_table(spec)
    m0 = spec.m0()
    if m0.k == 1:
        # no truncation directions: stability is vacuous and J is the fiber
        return table.value(LeviSpec.full(spec.gl_rank), (nu0 % spec.gl_rank,))
    if j_table is None:
        j_table = default_j_table(spec)
    grid = tuple(tuple(a) for a in (a_grid or _default_grid(spec)))
    extracted = []
    for a in grid:
        req = CountRequest(spec, nu0, a)
        j = ak_count(req, table) - hn_main_body_count(req, j_table) - tail_count(req, table)
        extracted.append((a, j))
    a0, first = extracted[0]
    for a, j in extracted[1:]:
        if j != first:
            raise InconsistentPipelines(
                f"a-dependence fails to cancel: J at a={a} is {j}, at a={a0} is {first}"
            )
    return first


def orbital_integral(spec):
    """The ordinary orbital integral I^G.

    Reduction to the minimal Levi gives q^{half val det(ad gamma | g/m0)}
    times the anisotropic core: 1 for a torus, the ramified GL2 count for a
    quadratic block, the ramified GL3 count for the anisotropic case.
    """
    if spec.case == "split":
        m0 = spec.m0()
        return QPoly.q(half_val_g_over_m(spec, m0))
    if spec.case == "mixed":
        return QPoly.q(half_val_g_over_m(spec, spec.m0())) * qsum(0, spec.n)
    if spec.group == "GL2":
        return eval_formula(FormulaId.GL2_ANISO, n=spec.n)
    return _gl3_aniso_fiber(spec)


def m0_covolume_squared(spec):
    """Squared covolume of X_*(M0) in a_{M0} under the Euclidean product.

    The rationally-defined cocharacter lattice of a ramified block is
    spanned by the all-ones vector of the block, of squared length equal to
    the block size; blocks contribute multiplicatively.
    """
    if spec.case == "split":
        return Fraction(1)
    if spec.case == "mixed":
        return Fraction(2)
    return Fraction(spec.gl_rank)


@dataclass(frozen=True)
class ArthurResult:
    """The weighted integral together with its separately-reported volume."""

    weighted: QPoly
    vol_squared: Fraction

    @property
    def volume(self):
        return math.sqrt(self.vol_squared)

    def __str__(self):
        return f"sqrt({self.vol_squared}) * ({self.weighted})"


def arthur_J(spec):
    """vol(a_{M0}/X_*(M0)) times the solved weighted integral.

    The polynomial factor stays exact; the volume is reported separately as
    its exact square so no irrationality enters the result.
    """
    return ArthurResult(
        weighted=solve_weighted_integral(spec),
        vol_squared=m0_covolume_squared(spec),
    )


# ---------------------------------------------------------------------------
# provenance


@dataclass
class WeightedIntegralReport:
    """A solve run with everything needed to reproduce it."""

    group: str
    case: str
    params: dict
    nu0: int
    a_grid: tuple
    j: QPoly
    vol_squared: Fraction
    pieces: dict = field(default_factory=dict)
    table_entries: list = field(default_factory=list)

    def to_json(self):
        return json.dumps(
            {
                "pipeline": "region-partition vs core+tail",
                "group": self.group,
                "case": self.case,
                "params": self.params,
                "nu0": self.nu0,
                "a_grid": [list(a) for a in self.a_grid],
                "j": str(self.j),
                "vol_squared": str(self.vol_squared),
                "pieces": self.pieces,
                "table_entries": self.table_entries,
            },
            sort_keys=True,
        )


def weighted_integral_report(spec, nu0=None, a_grid=None):
    """Solve and record which pipeline pieces and table entries were used."""
    if nu0 is None:
        nu0 = _default_nu0(spec)
    table = fundamental_table(spec)
    params = {
        k: v
        for k, v in (("n", spec.n), ("m", spec.m), ("n1", spec.n1), ("n2", spec.n2))
        if v is not None
    }
    m0 = spec.m0()
    pieces = {}
    if m0.k == 1:
        j = solve_weighted_integral(spec, nu0=nu0, table=table)
        grid = ()
    else:
        j_table = default_j_table(spec)
        grid = tuple(tuple(a) for a in (a_grid or _default_grid(spec)))
        for a in grid:
            req = CountRequest(spec, nu0, a)
            pieces[str(list(a))] = {
                "ak": str(ak_count(req, table)),
                "main_rest": str(hn_main_body_count(req, j_table)),
                "tail": str(tail_count(req, table)),
            }
        j = solve_weighted_integral(
            spec, nu0=nu0, a_grid=grid, table=table, j_table=j_table
        )
    seen = []
    for blocks, mu in table.used:
        entry = {"levi": [list(b) for b in blocks], "class": list(mu)}
        if entry not in seen:
            seen.append(entry)
    return WeightedIntegralReport(
        group=spec.group,
        case=spec.case,
        params=params,
        nu0=nu0,
        a_grid=grid,
        j=j,
        vol_squared=m0_covolume_squared(spec),
        pieces=pieces,
        table_entries=seen,
    )
