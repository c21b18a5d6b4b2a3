import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuntz.core import ConfigurationError, ExtNatModel, ScalarModel, check_cu_axioms
from cuntz.limits import (CompatibilityError, af_system, build_limit, constant_system, dyadic_value,
                          eta, fibonacci_system, functor_continuity_check, limit_leq, perron_data,
                          sequence_element, soft_element, system_from_json, uhf_system,
                          universal_map, value_leq, value_way_below)
from cuntz.values import INF, QuadraticNumber

F = Fraction


@pytest.fixture(scope="module")
def uhf2():
    s = uhf_system(2)
    return s, build_limit(s, horizon=64)


@pytest.fixture(scope="module")
def const():
    s = constant_system()
    return s, build_limit(s)


# ---------------------------------------------------------------- limitLeq examples

def test_shifted_doubling_sequences(uhf2):
    s, m = uhf2
    a = sequence_element(s, lambda i: (2 ** (i - 1),), "1,2,4,...", {"tau": (1, False)})
    b = sequence_element(s, lambda i: (2 ** i,), "2,4,8,...", {"tau": (2, False)})
    assert limit_leq(m, a, b) is True
    assert limit_leq(m, b, a) is False


def test_shift_by_one_stage_is_same_class(uhf2):
    # (0, 2, 4, ...) and (1, 2, 4, ...) agree from stage 2 on
    s, m = uhf2
    a = sequence_element(s, lambda i: (2 ** (i - 1),))
    b = sequence_element(s, lambda i: (0,) if i == 1 else (2 ** (i - 1),))
    assert limit_leq(m, a, b) is True and limit_leq(m, b, a) is True


def test_delayed_sequence_is_smaller(uhf2):
    # (0, 1, 2, 4, ...) sups to half of (1, 2, 4, ...)
    s, m = uhf2
    a = sequence_element(s, lambda i: (2 ** (i - 1),))
    b = sequence_element(s, lambda i: (0,) if i == 1 else (2 ** (i - 2),))
    assert limit_leq(m, b, a) is True
    assert m.eq(m.add(b, b), a)


def test_refutation_against_zero(uhf2):
    s, m = uhf2
    a = sequence_element(s, lambda i: (2 ** (i - 1),))
    c = m.compare(a, m.zero)
    assert c.verdict is False and c.certificate in ("state", "horizon", "embedding")


def test_dyadic_oracle_sample(uhf2):
    s, m = uhf2
    pool = list(itertools.islice(m.basis(), 60))
    rng = random.Random(1)
    for _ in range(60):
        a, b = rng.choice(pool), rng.choice(pool)
        assert m.leq(a, b) == value_leq(dyadic_value(a), dyadic_value(b))
        assert m.way_below(a, b) == value_way_below(dyadic_value(a), dyadic_value(b))


def test_soft_element_values(uhf2):
    s, m = uhf2
    one = eta(s, 1, (1,))
    soft = soft_element(s, 1)
    assert m.leq(soft, one) and not m.leq(one, soft)
    assert not m.way_below(soft, soft)
    assert m.way_below(one, one)
    assert m.eq(eta(s, 2, (1,)), eta(s, 3, (2,)))


# ---------------------------------------------------------------- rapidify and sups

def test_rapidify_constant_system(const):
    s, m = const
    r = m.rapidify(eta(s, 1, 3))
    assert [r.term(i) for i in range(1, 5)] == [3, 3, 3, 3]
    top = m.rapidify(eta(s, 1, INF))
    vals = [top.term(i) for i in range(1, 6)]
    assert all(v is not INF for v in vals) and vals == sorted(vals) and len(set(vals)) == 5
    assert m.eq(top, eta(s, 1, INF))


def test_rapidify_rapid_input_is_unchanged(uhf2):
    s, m = uhf2
    r = m.rapidify(soft_element(s, F(3, 4)))
    assert m.eq(m.rapidify(r), r)


def test_limit_sup(const):
    s, m = const
    sup = m.limit_sup(lambda n: eta(s, 1, n + 1))
    assert m.eq(sup, eta(s, 1, INF))
    x = eta(s, 1, 4)
    assert m.limit_sup([x]) is x
    assert m.eq(m.limit_sup([x, x, x]), x)
    with pytest.raises(ConfigurationError):
        m.limit_sup([eta(s, 1, 5), eta(s, 1, 2)])


def test_constant_system_matches_extnat(const):
    s, m = const
    n = ExtNatModel()
    vals = [0, 1, 2, 5, INF]
    for a, b in itertools.product(vals, vals):
        assert m.leq(eta(s, 1, a), eta(s, 2, b)) == n.leq(a, b)
        assert m.way_below(eta(s, 1, a), eta(s, 1, b)) == n.way_below(a, b)


def test_one_stage_identity_system():
    s = af_system([[[1, 0], [0, 1]]], name="identity")
    m = build_limit(s)
    stage = s.stage(1)
    for a, b in itertools.product(list(itertools.islice(stage.basis(), 12)), repeat=2):
        assert m.leq(eta(s, 1, a), eta(s, 3, b)) == stage.leq(a, b)


# ---------------------------------------------------------------- axioms and universal property

@pytest.mark.parametrize("system", [uhf_system(2), constant_system()], ids=["uhf2", "constant"])
def test_limit_axioms_small_budget(system):
    assert check_cu_axioms(build_limit(system), budget=40).passed


def test_universal_map(uhf2):
    s, m = uhf2
    tau = universal_map(m, lambda i, x: x[0] if x[0] is INF else F(x[0], 2 ** (i - 1)), ScalarModel(),
                        state="tau")
    assert tau(eta(s, 1, (1,))) == 1
    assert tau(eta(s, 3, (3,))) == F(3, 4)
    assert tau(soft_element(s, F(5, 2))) == F(5, 2)
    zero = universal_map(m, lambda i, x: 0, ScalarModel())
    assert zero(eta(s, 2, (7,))) == 0


def test_incompatible_family():
    s = uhf_system(2)
    m = build_limit(s)
    with pytest.raises(CompatibilityError) as info:
        universal_map(m, lambda i, x: x[0], ExtNatModel())
    w = info.value.witness
    assert (w["x"], w["lhs"], w["rhs"]) == ((1,), 2, 1)


# ---------------------------------------------------------------- continuity

@pytest.mark.parametrize("matrices", [[[[2]]], [[[1, 1], [1, 0]]], [[[2, 1], [1, 1]]],
                                      [[[1, 0], [0, 1]]]])
def test_continuity(matrices):
    rep = functor_continuity_check(matrices, pairs=40)
    assert rep.passed, rep.verdicts


def test_continuity_rejects_unsupported():
    with pytest.raises(ConfigurationError):
        functor_continuity_check([[[1, 1, 0], [0, 1, 1], [1, 0, 1]]])


@given(st.integers(1, 6), st.integers(0, 6), st.integers(0, 6), st.integers(1, 6))
@settings(max_examples=25)
def test_perron_data_is_left_eigenvector(a, b, c, d):
    m = [[a, b], [c, d]]
    if b == 0 and c == 0:
        return
    lam, v = perron_data(m)
    lhs = (v[0] * a + v[1] * c, v[0] * b + v[1] * d)
    assert lhs[0] == lam * v[0] and lhs[1] == lam * v[1]
    assert v[0] >= 0 and v[1] >= 0


def test_fibonacci_perron():
    lam, _ = perron_data([[1, 1], [1, 0]])
    assert lam == QuadraticNumber(F(1, 2), F(1, 2), 5)
    s = fibonacci_system()
    m = build_limit(s)
    x = eta(s, 1, (1, 0))
    assert m.eq(x, eta(s, 2, (1, 1)))
    assert m.leq(eta(s, 1, (0, 1)), x) and not m.leq(x, eta(s, 1, (0, 1)))


def test_system_from_json():
    assert system_from_json("uhf3").name == "uhf3"
    assert system_from_json({"matrices": [[[3]]]}).name == "uhf3"
    with pytest.raises(ConfigurationError):
        system_from_json("nope")
    with pytest.raises(ConfigurationError):
        system_from_json({"mats": []})
    with pytest.raises(ConfigurationError):
        af_system([[[1, -1]]])
