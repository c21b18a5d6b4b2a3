import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuntz.core import ConfigurationError, check_cu_axioms
from cuntz.elliott import (DEMOS, INF_PRIME, CalkinModel, Closed, EllInvariant, EllMorphism, Fun,
                           LAffPL, Open, Proj, demo_facts, embedding_check, functor_f,
                           functor_f_morphism, functoriality_check, goodearl_model, goodearl_vmodel,
                           integers_ell, interval_add, interval_leq, laff_model, matrix_ell,
                           rotation_ell, rotation_model, rr0_embedding_check, rr0_interval,
                           surj_approx, surj_gap_ok, whk_model, wtilde_boundary_check)
from cuntz.matrix import SpectralElement
from cuntz.values import INF, QuadraticNumber

from .conftest import random_spectral

F = Fraction
THETA = QuadraticNumber(-1, 1, 2)

piece = st.tuples(st.fractions(F(1, 4), 6, max_denominator=4), st.fractions(F(1, 4), 6, max_denominator=4))
laff2 = st.lists(piece, min_size=1, max_size=3).map(lambda ps: LAffPL(tuple(ps)))


@pytest.fixture(scope="module")
def m22():
    return functor_f(matrix_ell((2, 2)))


# ---------------------------------------------------------------- LAff

def test_laff_minimum_is_exact():
    # max of two crossing affine functions on a segment: minimum at the crossing
    f = LAffPL(((1, 3), (3, 1)))
    assert f.minimum() == 2
    assert f((F(1, 2), F(1, 2))) == 2
    assert LAffPL.constant(F(1, 2), 1).minimum() == F(1, 2)


@given(laff2, laff2)
def test_laff_order_matches_grid_oracle(f, g):
    # the exact minimum gap is at most the gap at any sampled point
    grid = [(F(k, 240), 1 - F(k, 240)) for k in range(241)]
    approx = min(g(p) - f(p) for p in grid)
    assert f.min_gap(g) <= approx
    if f.leq(g):
        assert approx >= 0


@given(laff2, laff2)
def test_laff_sum_dominates_parts(f, g):
    s = f.add(g)
    assert f.leq(s) and g.leq(s)
    assert LAffPL.from_json(s.to_json()) == s


# ---------------------------------------------------------------- W~ order rules

def test_wtilde_addition(m22):
    p = m22.proj((1, 1))
    assert m22.hat(p) == (F(1, 2), F(1, 2))
    half = m22.fun(F(1, 2))
    assert m22.eq(m22.add(p, half), m22.fun(1))
    assert m22.add(half, m22.zero) == half


def test_wtilde_rules(m22):
    p = m22.proj((1, 1))
    half = m22.fun(F(1, 2))
    assert m22.leq(half, p) and not m22.leq(p, half)
    assert m22.leq(p, Fun(LAffPL.affine(m22.hat(p)).shift(F(1, 10))))
    f, g = m22.fun((1, 2)), m22.fun((1, 3))
    assert m22.leq(f, g) and not m22.leq(g, f)
    crossing = m22.fun((3, 1))
    assert not m22.leq(f, crossing) and not m22.leq(crossing, f)
    assert wtilde_boundary_check(m22).passed


def test_wtilde_way_below(m22):
    p = m22.proj((1, 1))
    assert m22.way_below(p, p)
    f = m22.fun(1)
    assert not m22.way_below(f, f)
    assert m22.way_below(m22.fun(F(1, 2)), f)
    assert m22.way_below(f, INF) and not m22.way_below(INF, INF)


def test_sup_of_increasing_funs_is_not_a_projection(m22):
    # a strictly increasing Fun sequence never has a Proj supremum
    for x in itertools.islice(m22.basis(), 20):
        if isinstance(x, Fun):
            seq = m22.rapid_sequence(x)
            assert isinstance(m22.sup(seq), Fun)


def test_wtilde_axioms(m22):
    assert check_cu_axioms(m22, budget=40).passed
    assert check_cu_axioms(laff_model(2), budget=40).passed


def test_wtilde_parse_roundtrip(m22):
    for x in itertools.islice(m22.basis(), 20):
        assert m22.eq(m22.decode(m22.encode(x)), x)
        assert m22.eq(m22.parse(m22.format(x)), x)


# ---------------------------------------------------------------- surjectivity approximants

def test_surj_approx_constant():
    seq = surj_approx(LAffPL.constant(1), 1, 6)
    for k, f in enumerate(seq, start=1):
        h = F(k, 2 * (k + 1))
        assert f.vertex_values() == (h + F(1, 2) - F(1, 2 * k),)
    assert surj_gap_ok(LAffPL.constant(1), 1, seq, [(1,)])


@given(laff2)
def test_surj_approx_gap_at_vertices(f):
    delta = f.minimum()
    seq = surj_approx(f, delta, 8)
    assert surj_gap_ok(f, delta, seq, [(1, 0), (0, 1), (F(1, 2), F(1, 2))])
    assert all(a.leq(b) for a, b in zip(seq, seq[1:]))
    assert all(g.leq(f) for g in seq)


def test_surj_approx_rejects_small_delta():
    with pytest.raises(ConfigurationError):
        surj_approx(LAffPL.constant(1), 2, 3)
    with pytest.raises(ConfigurationError):
        surj_approx(LAffPL.constant(1), 0, 3)


# ---------------------------------------------------------------- interval models

def test_whk():
    w = whk_model()
    assert interval_add(w, w.closed((2,)), w.closed((3,))) == w.closed((5,))
    assert w.open(F(5, 2)) == w.closed((2,))
    assert w.open(3) == w.closed((2,))
    assert interval_leq(w, w.closed((7,)), w.open(INF))
    assert all(isinstance(x, Closed) or x.alpha is INF for x in itertools.islice(w.basis(), 30))


def test_goodearl_examples():
    g = goodearl_model()
    r1, p = g.open(1), g.closed((1, 0))
    assert g.eq(g.add(r1, r1), g.open(2))
    assert g.eq(g.add(r1, r1), g.add(r1, p)) and not g.eq(r1, p)
    unit = g.unit
    pool = list(itertools.islice(g.basis(), 40))
    assert all(any(g.leq(x, g.mul(k, unit)) for k in range(1, 8)) for x in pool if g.is_bounded(x))


def test_goodearl_validation():
    with pytest.raises(ConfigurationError):
        goodearl_vmodel((1, 3, 4))
    with pytest.raises(ConfigurationError):
        goodearl_vmodel((1, 2, 4), alphas=(2, 1))
    with pytest.raises(ConfigurationError):
        goodearl_vmodel((1, 2), ker_rank=-1)


def test_rotation_examples():
    r = rotation_model(THETA)
    assert r.V.positive((1, -1))
    assert not r.V.positive((-1, 1))
    assert r.states()[0](r.closed((2, 3))) == 2 + 3 * THETA
    a = r.closed((0, 1))
    assert r.leq(r.open(THETA), a) and not r.leq(a, r.open(THETA))
    assert r.leq(a, r.open(THETA + F(1, 100)))
    with pytest.raises(ConfigurationError):
        rotation_model(QuadraticNumber(0, 1, 2))
    with pytest.raises(ConfigurationError):
        rotation_model(F(1, 2))


@given(st.fractions(F(1, 8), 4, max_denominator=8), st.integers(-4, 4), st.integers(0, 6))
def test_rotation_real_vs_proj(alpha, a, b):
    r = rotation_model(THETA)
    if not r.V.positive((a, b)) or (a, b) == (0, 0):
        return
    p, x = r.closed((a, b)), r.open(alpha)
    v = a + b * THETA
    assert r.leq(x, p) == (alpha <= v)
    assert r.leq(p, x) == (v < alpha)


def test_calkin_table():
    c = CalkinModel()
    assert c.add(INF, INF_PRIME) is INF_PRIME
    assert c.add(3, INF) is INF
    assert c.leq(INF, INF_PRIME) and not c.leq(INF_PRIME, INF)
    assert c.way_below(INF_PRIME, INF_PRIME) and c.way_below(INF, INF_PRIME)
    assert not c.way_below(INF, INF)
    assert c.parse("∞'") is INF_PRIME and c.decode(c.encode(INF_PRIME)) is INF_PRIME


def test_embedding_checks():
    assert embedding_check(goodearl_model(), pairs=60).passed
    assert embedding_check(rotation_model(THETA), pairs=60).passed


def test_rr0_intervals():
    assert rr0_interval(SpectralElement.diag(1, F(1, 2), 0)) == (2,)
    assert rr0_interval(SpectralElement.zero((3,))) == (0,)
    rng = random.Random(5)
    elems = [random_spectral(rng, [3, 2]) for _ in range(30)]
    assert rr0_embedding_check(elems, pairs=50).passed


# ---------------------------------------------------------------- recovery functor

def test_functor_on_integers():
    w = functor_f(integers_ell())
    assert w.V.positive((3,)) and not w.V.positive((-1,))
    assert w.eq(w.add(w.proj((1,)), w.proj((2,))), w.proj((3,)))
    assert isinstance(w.add(w.proj((1,)), w.fun(F(1, 2))), Fun)


def test_functor_on_rotation():
    w = functor_f(rotation_ell(THETA))
    assert w.V.positive((1, -1)) and not w.V.positive((-3, 7))
    assert w.hat(w.proj((1, 1))) == (1 + THETA,)


def test_ell_validation_and_json():
    e = matrix_ell((2, 3))
    assert EllInvariant.from_json(e.to_json()) == e
    with pytest.raises(ConfigurationError):
        functor_f(EllInvariant(1, (1,), [[2]]))
    with pytest.raises(ConfigurationError):
        functor_f(EllInvariant(1, (1,), [[1], [1]]))


def test_functor_morphisms():
    a = functor_f(integers_ell())
    b = functor_f(matrix_ell((2,)))
    c = functor_f(matrix_ell((6,)))
    ident = EllMorphism([[1]], [[1]])
    phi, rep = functor_f_morphism(a, a, ident, budget=30)
    assert rep.passed
    assert all(a.eq(phi(x), x) for x in itertools.islice(a.basis(), 20))
    m1, m2 = EllMorphism([[2]], [[1]]), EllMorphism([[3]], [[1]])
    assert functor_f_morphism(a, b, m1, budget=30)[1].passed
    assert functor_f_morphism(b, c, m2, budget=30)[1].passed
    assert functoriality_check(a, b, c, m1, m2, budget=30).passed
    bad = EllMorphism([[1]], [[1]])
    assert not functor_f_morphism(a, b, bad, budget=30)[1].passed


def test_demo_facts_all_hold():
    for name in DEMOS:
        facts = demo_facts(name)
        assert facts and all(ok for _, ok in facts), (name, facts)
    with pytest.raises(ConfigurationError):
        demo_facts("nope")


def test_interval_encoding():
    g = goodearl_model()
    for x in itertools.islice(g.basis(), 30):
        assert g.eq(g.decode(g.encode(x)), x)
    assert g.parse("Real(1)") == Open(F(1))
    assert g.parse("Point(1, 0)") == Closed((F(1), F(0)))
    assert isinstance(g.iota(g.open(1)), Fun) and isinstance(g.iota(g.closed((1, 0))), Proj)
