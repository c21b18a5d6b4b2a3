from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cuntz.lsc import (PLContinuous, PowerPL, StepLsc, approximations, format_step,
                       is_projection_class_pl, lsc_add, lsc_leq, lsc_way_below, parse_step,
                       supp_closure_inside, supp_compare, way_below_oracle)
from cuntz.values import INF

F = Fraction
vals = st.sampled_from([0, 1, 2, 3, INF])


@st.composite
def steps(draw, finite=False):
    k = draw(st.integers(1, 4))
    cuts = sorted(draw(st.sets(st.integers(1, 7), min_size=k - 1, max_size=k - 1)))
    grid = [F(0)] + [F(c, 8) for c in cuts] + [F(1)]
    pool = st.sampled_from([0, 1, 2, 3]) if finite else vals
    iv = [draw(pool) for _ in range(len(grid) - 1)]
    f = StepLsc(grid, iv)
    if draw(st.booleans()) and len(grid) > 2:
        # dip to zero at one interior breakpoint
        pts = [f.value(t) for t in grid]
        pts[draw(st.integers(1, len(grid) - 2))] = 0
        f = StepLsc(grid, iv, pts)
    return f


def test_step_validation():
    with pytest.raises(ValueError):
        StepLsc([0, F(1, 2), 1], [0, 0], [0, 1, 0])
    with pytest.raises(ValueError):
        StepLsc([0, 1], [1, 2])


def test_indicator_below_constant():
    chi = StepLsc.indicator(0, 1)
    one = StepLsc.constant(1)
    assert lsc_leq(chi, one) and not lsc_leq(one, chi)


def test_way_below_examples():
    f = StepLsc.indicator(F(1, 4), F(3, 4))
    one = StepLsc.constant(1)
    assert lsc_way_below(f, one)
    assert lsc_way_below(one, one)
    stair = StepLsc([0, F(1, 2), 1], [1, INF])
    assert not lsc_way_below(stair, stair)
    assert not lsc_way_below(StepLsc.indicator(0, 1), StepLsc.indicator(0, 1))


@given(steps(), steps())
def test_way_below_matches_sequence_oracle(f, g):
    # the oracle checks f <= g_k for the canonical rapid sequence g_k of g
    assume(f.is_finite())
    assert lsc_way_below(f, g) == way_below_oracle(f, g, 64)


@given(steps(), steps())
def test_way_below_implies_leq(f, g):
    if lsc_way_below(f, g):
        assert lsc_leq(f, g)


@given(steps())
def test_approximations_increase_to_g(g):
    prev = StepLsc.constant(0)
    for k in (1, 2, 4, 8, 16):
        a = approximations(g, k)
        assert lsc_leq(prev, a) and lsc_leq(a, g)
        assert lsc_way_below(a, g)
        prev = a


@given(steps(), steps(), steps())
def test_addition_is_monotone(f, g, h):
    assert lsc_add(f, g) == lsc_add(g, f)
    if lsc_leq(f, g):
        assert lsc_leq(lsc_add(f, h), lsc_add(g, h))


@given(steps())
def test_format_roundtrip(f):
    assert parse_step(format_step(f)) == f
    assert StepLsc.from_json(f.to_json()) == f


def test_pl_support_comparison():
    f = PLContinuous.tent(F(1, 3), F(1, 2), F(2, 3))
    g = PLContinuous([0, F(1, 2), 1], [0, 1, 0])
    assert supp_compare(f, g) and not supp_compare(g, f)
    assert supp_closure_inside(f, g)
    assert supp_compare(f, PowerPL(f, 3)) and supp_compare(PowerPL(f, 3), f)
    zero = PLContinuous([0, 1], [0, 0])
    assert supp_compare(zero, f)


def test_pl_projection_class():
    assert not is_projection_class_pl(PLContinuous.tent(0, F(1, 2), 1))
    assert is_projection_class_pl(PLContinuous([0, 1], [0, 0]))
    assert is_projection_class_pl(PLContinuous([0, 1], [1, 2]))


@given(st.fractions(0, 1, max_denominator=8), st.fractions(0, 1, max_denominator=8))
def test_pl_eps_cut_composes(e1, e2):
    f = PLContinuous([0, F(1, 3), F(2, 3), 1], [0, 1, F(1, 2), 1])
    a, b = f.eps_cut(e1).eps_cut(e2), f.eps_cut(e1 + e2)
    for i in range(25):
        x = F(i, 24)
        assert a(x) == b(x)
