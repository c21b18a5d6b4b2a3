import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cuntz.matrix import (BlockMismatchError, DenseElement, SpectralElement, TraceSpec, cuntz_class,
                          cuntz_eq, cuntz_leq, dtau, dtau_limit_sequence, eps_cut, format_spectral,
                          is_projection_class, norm_less_than, parse_spectral, proj_complement,
                          spectral_from_json, spectral_to_json)
from cuntz.states import strict_comparison_check

from .conftest import random_spectral

F = Fraction


@st.composite
def spectral(draw, dims=None):
    dims = dims or draw(st.lists(st.integers(1, 4), min_size=1, max_size=3))
    diags = [draw(st.lists(st.fractions(0, 2, max_denominator=6), min_size=n, max_size=n)) for n in dims]
    return SpectralElement.from_blocks(*diags)


@st.composite
def spectral_pair(draw):
    dims = draw(st.lists(st.integers(1, 4), min_size=1, max_size=3))
    return draw(spectral(dims)), draw(spectral(dims))


def _dense_rank_oracle(a: SpectralElement, seed: int) -> tuple:
    """Rank of each block after a random rational similarity, computed by sympy."""
    rng = random.Random(seed)
    out = []
    for b in a.blocks:
        d = sympy.diag(*(b.values() + [0] * (b.n - len(b.values()))))
        while True:
            s = sympy.Matrix(b.n, b.n, lambda i, j: rng.randint(-3, 3))
            if s.det() != 0:
                break
        out.append((s * d * s.inv()).rank())
    return tuple(out)


# ---------------------------------------------------------------- eps cut

def test_eps_cut_examples():
    a = SpectralElement.diag(1, F(1, 2), 0)
    assert eps_cut(a, F(1, 4)) == SpectralElement.diag(F(3, 4), F(1, 4), 0)
    assert eps_cut(a, 1).is_zero()
    assert eps_cut(a, 5).is_zero()
    with pytest.raises(ValueError):
        eps_cut(a, -1)


@given(spectral(), st.fractions(0, 2, max_denominator=8), st.fractions(0, 2, max_denominator=8))
def test_eps_cut_composes(a, e1, e2):
    assert eps_cut(eps_cut(a, e1), e2) == eps_cut(a, e1 + e2)


# ---------------------------------------------------------------- comparison

def test_cuntz_leq_examples():
    assert cuntz_leq(SpectralElement.diag(1, 0), SpectralElement.diag(1, 1))
    assert not cuntz_leq(SpectralElement.diag(1, 1), SpectralElement.diag(1, 0))
    a = SpectralElement.diag(1, F(1, 2), 0)
    assert cuntz_eq(a, a.power(2))
    z = SpectralElement.zero((3,))
    assert not cuntz_leq(a, z)
    assert cuntz_leq(z, z)


def test_cuntz_class_examples():
    assert cuntz_class(SpectralElement.diag(1, F(1, 2), 0)) == (2,)
    assert cuntz_class(SpectralElement.zero((2, 3))) == (0, 0)


def test_block_mismatch():
    with pytest.raises(BlockMismatchError):
        cuntz_leq(SpectralElement.diag(1), SpectralElement.from_blocks([1], [1]))


@given(spectral_pair(), st.integers(0, 1000))
def test_cuntz_leq_matches_dense_rank_oracle(pair, seed):
    a, b = pair
    ra, rb = _dense_rank_oracle(a, seed), _dense_rank_oracle(b, seed + 1)
    assert cuntz_leq(a, b) == all(x <= y for x, y in zip(ra, rb))


@given(spectral(), st.integers(1, 5))
def test_a_equivalent_to_powers(a, n):
    assert cuntz_eq(a, a.power(n))


@given(spectral_pair())
def test_direct_sum_is_additive_on_classes(pair):
    a, b = pair
    assert cuntz_class(a + b) == tuple(x + y for x, y in zip(cuntz_class(a), cuntz_class(b)))


# ---------------------------------------------------------------- projections

def test_projection_class_examples():
    assert is_projection_class(SpectralElement.diag(1, F(1, 3)))
    assert is_projection_class(SpectralElement.zero((2,)))


def test_proj_complement():
    p = SpectralElement.diag(1, 0, 0)
    a = SpectralElement.diag(2, 3, 0)
    b = proj_complement(p, a)
    assert cuntz_class(b) == (1,) and b.is_projection()
    assert proj_complement(SpectralElement.diag(1, 1, 0), a).is_zero()
    with pytest.raises(ValueError):
        proj_complement(SpectralElement.diag(1, 1, 1), a)
    with pytest.raises(ValueError):
        proj_complement(a, a)


@given(spectral_pair())
def test_proj_complement_adds_back(pair):
    a, _ = pair
    p = SpectralElement([(b.n, [(1, min(1, b.rank))] if b.rank else []) for b in a.blocks])
    b = proj_complement(p, a)
    assert cuntz_eq(p + b, a + SpectralElement.zero(a.dims))


# ---------------------------------------------------------------- traces

def test_dtau_examples():
    a = SpectralElement.diag(5, 2, 0)
    assert dtau(a, TraceSpec.uniform((3,))) == F(2, 3)
    a = SpectralElement.diag(1, F(1, 2), 0)
    tau = TraceSpec.uniform((3,))
    assert dtau(eps_cut(a, F(3, 4)), tau) == F(1, 3)
    assert dtau(eps_cut(a, F(1, 4)), tau) == F(2, 3)


def test_trace_spec_validation():
    with pytest.raises(ValueError):
        TraceSpec((F(1, 2), F(1, 2)), (2, 3))
    assert [t.weights for t in TraceSpec.vertices((2, 3))] == [(F(1, 2), 0), (0, F(1, 3))]
    assert not TraceSpec.vertices((2, 3))[0].faithful


def test_dtau_is_limit_of_trace_of_roots():
    a = SpectralElement.diag(F(1, 2), F(1, 8), 0, 0)
    tau = TraceSpec.uniform((4,))
    vals = [dtau_limit_sequence(a, tau, n) for n in (1, 10, 100, 10000)]
    assert vals == sorted(vals)
    assert abs(vals[-1] - float(dtau(a, tau))) < 1e-3


# ---------------------------------------------------------------- strict comparison

def test_strict_comparison_examples():
    p = SpectralElement.diag(1, 0)
    soft = SpectralElement.diag(F(1, 2), 0)
    assert not strict_comparison_check(p, soft, b_purely_positive=True)
    a = SpectralElement.from_blocks([1, 0], [0, 0])
    b = SpectralElement.from_blocks([1, 1], [1, 0])
    assert strict_comparison_check(a, b) and cuntz_leq(a, b)
    assert strict_comparison_check(b, b)


@given(spectral_pair())
def test_strict_comparison_agrees_with_cuntz_leq(pair):
    a, b = pair
    assert strict_comparison_check(a, b) == cuntz_leq(a, b)


# ---------------------------------------------------------------- parsing and dense

def test_spectral_text_and_json_roundtrip():
    rng = random.Random(1)
    for _ in range(50):
        a = random_spectral(rng)
        assert parse_spectral(format_spectral(a)) == a
        assert spectral_from_json(spectral_to_json(a)) == a
    with pytest.raises(ValueError):
        parse_spectral("blocks: [n=2: (1,1)] junk")


def test_dense_element_checks():
    with pytest.raises(ValueError):
        DenseElement([[[1, 2], [3, 1]]])
    with pytest.raises(ValueError):
        DenseElement([[[1, 0], [0, -1]]])
    a, b = DenseElement.diag([1, 1]), DenseElement.diag([1, F(9, 10)])
    assert norm_less_than(a, b, F(1, 5))
    assert not norm_less_than(a, b, F(1, 10))
    assert DenseElement.from_json(a.to_json()).blocks == a.blocks
