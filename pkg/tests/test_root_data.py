from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbint.errors import NotAdjacent, RootNotInWedge
from orbint.root_data import (
    CoweightVector,
    LambdaElement,
    LeviSpec,
    ParabolicSpec,
    RootDatum,
    adjacent,
    beta,
    f_of,
    levis_above,
    m_alpha,
    parabolics,
    project,
    relative_simple_coweights,
    wedge_roots,
    weyl_assign,
)

T3 = LeviSpec.torus(3)
MIXED = LeviSpec([(1,), (2, 3)])


def borel(word):
    return ParabolicSpec(T3, tuple(int(c) - 1 for c in word))


def test_root_datum_basics():
    rd = RootDatum(3)
    assert len(rd.roots) == 6
    assert rd.root(1, 3) == (1, 0, -1)
    assert rd.simple_roots == [(1, -1, 0), (0, 1, -1)]
    assert rd.fundamental_coweights[0] == CoweightVector((1, 0, 0))
    assert rd.fundamental_coweights[1] == CoweightVector((1, 1, 0))


def test_levi_canonicalization():
    assert LeviSpec([(2, 3), (1,)]) == MIXED
    assert MIXED.blocks == ((1,), (2, 3))
    assert MIXED.k == 2
    assert MIXED.semisimple_rank() == 1
    assert LeviSpec.full(3).contains(MIXED)
    assert MIXED.contains(T3)
    assert not T3.contains(MIXED)
    with pytest.raises(ValueError):
        LeviSpec([(1,), (3,)])


def test_block_sums_spread_roundtrip():
    v = CoweightVector((2, -1, 3))
    sums = MIXED.block_sums(v)
    assert sums == (2, 2)
    w = MIXED.spread(sums)
    assert w == CoweightVector((2, Fraction(1), Fraction(1)))
    assert MIXED.block_sums(w) == sums


def test_parabolic_enumeration():
    assert len(parabolics(T3)) == 6
    assert len(parabolics(MIXED)) == 2
    assert len(parabolics(LeviSpec.full(3))) == 1
    words = sorted(p.word() for p in parabolics(T3))
    assert words == ["123", "132", "213", "231", "312", "321"]


def test_levis_above_and_f_of():
    assert len(levis_above(T3)) == 5  # T, three maximals, G
    assert len(levis_above(MIXED)) == 2
    # 6 Borels + 3 maximal Levis * 2 orders + G
    assert len(f_of(T3)) == 13
    assert len(f_of(MIXED)) == 3
    assert len(f_of(LeviSpec.torus(2))) == 3


def test_parabolic_containment():
    p_12_3 = ParabolicSpec(LeviSpec([(1, 2), (3,)]), (0, 1))
    assert p_12_3.contains(borel("123"))
    assert p_12_3.contains(borel("213"))
    assert not p_12_3.contains(borel("132"))
    assert ParabolicSpec(LeviSpec.full(3), (0,)).contains(borel("321"))
    assert borel("123").contains(borel("123"))


def test_opposite():
    assert borel("123").opposite() == borel("321")
    p = ParabolicSpec(MIXED, (1, 0))
    assert p.opposite().order == (0, 1)


def test_nilradical_roots():
    rd = RootDatum(3)
    assert set(borel("123").nilradical_roots(rd)) == {
        rd.root(1, 2),
        rd.root(1, 3),
        rd.root(2, 3),
    }
    p = ParabolicSpec(MIXED, (1, 0))  # block (2,3) first
    assert set(p.nilradical_roots(rd)) == {rd.root(2, 1), rd.root(3, 1)}


def test_adjacency():
    assert adjacent(borel("123"), borel("213"))
    assert adjacent(borel("123"), borel("132"))
    assert not adjacent(borel("123"), borel("231"))
    assert not adjacent(borel("123"), borel("123"))
    # each Borel has exactly two neighbours in the hexagon
    for p in parabolics(T3):
        assert sum(adjacent(p, q) for q in parabolics(T3)) == 2


def test_wedge_roots():
    rd = RootDatum(3)
    assert wedge_roots(borel("123"), borel("213"), rd) == [rd.root(1, 2)]
    assert wedge_roots(borel("213"), borel("231"), rd) == [rd.root(1, 3)]
    p, q = parabolics(MIXED)
    assert set(wedge_roots(p, q, rd)) == {rd.root(1, 2), rd.root(1, 3)}
    with pytest.raises(NotAdjacent):
        wedge_roots(borel("123"), borel("231"))


def test_beta():
    b = beta(borel("123"), borel("213"))
    assert b == CoweightVector((1, -1, 0))
    assert beta(borel("213"), borel("123")) == -b
    p, q = parabolics(MIXED)
    assert beta(p, q) == CoweightVector((1, Fraction(-1, 2), Fraction(-1, 2)))


def test_m_alpha():
    rd = RootDatum(3)
    assert m_alpha(T3, borel("123"), borel("213"), rd.root(1, 2)) == 1
    p, q = parabolics(MIXED)
    assert m_alpha(MIXED, p, q, rd.root(1, 2)) == 1
    assert m_alpha(MIXED, p, q, rd.root(1, 3)) == 1
    with pytest.raises(RootNotInWedge):
        m_alpha(T3, borel("123"), borel("213"), rd.root(2, 3))


def test_project_orthogonal_decomposition():
    v = CoweightVector((3, 1, -2))
    pi_m, pi_up = project(MIXED, v)
    assert pi_m + pi_up == v
    assert pi_m.dot(pi_up) == 0
    assert pi_m == CoweightVector((3, Fraction(-1, 2), Fraction(-1, 2)))
    # full Levi projects to the central line
    pi_g, _ = project(LeviSpec.full(3), v)
    assert pi_g == CoweightVector((Fraction(2, 3),) * 3)


def test_weyl_assign_torus_is_permutation():
    v = weyl_assign(borel("312"), (5, 7, 9))
    # slot 0 -> block 3, slot 1 -> block 1, slot 2 -> block 2
    assert v == CoweightVector((7, 9, 5))
    assert weyl_assign(borel("123"), (5, 7, 9)) == CoweightVector((5, 7, 9))


def test_weyl_assign_mixed_spreads():
    p = ParabolicSpec(MIXED, (1, 0))
    assert weyl_assign(p, (4, 6)) == CoweightVector((6, 2, 2))


def test_relative_simple_coweights():
    phis = relative_simple_coweights(T3)
    assert phis == [CoweightVector((1, -1, 0)), CoweightVector((0, 1, -1))]
    (d,) = relative_simple_coweights(MIXED)
    assert d == CoweightVector((1, Fraction(-1, 2), Fraction(-1, 2)))


def test_lambda_element():
    lam = LambdaElement(MIXED, (2, -2))
    assert lam.nu_g() == 0
    assert lam.c_m() == (0, 0)
    assert LambdaElement(MIXED, (1, 3)).c_m() == (0, 1)
    assert lam.realize() == CoweightVector((2, -1, -1))
    assert LambdaElement.from_coweight(MIXED, lam.realize()) == lam
    with pytest.raises(ValueError):
        LambdaElement.from_coweight(MIXED, CoweightVector((2, Fraction(1, 2), 0)))
    assert lam + LambdaElement(MIXED, (1, 1)) == LambdaElement(MIXED, (3, -1))


@given(st.permutations(range(3)), st.permutations(range(3)))
def test_adjacency_is_symmetric(o1, o2):
    p1 = ParabolicSpec(T3, tuple(o1))
    p2 = ParabolicSpec(T3, tuple(o2))
    assert adjacent(p1, p2) == adjacent(p2, p1)


@given(
    st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
)
def test_project_is_orthogonal_gl4(coords):
    m = LeviSpec([(1, 2), (3, 4)])
    v = CoweightVector(coords)
    pi_m, pi_up = project(m, v)
    assert pi_m + pi_up == v
    assert pi_m.dot(pi_up) == 0
    assert all(s == 0 for s in m.block_sums(pi_up))
