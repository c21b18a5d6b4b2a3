"""Dimension functions as states, exact state polytopes, regularisation of
dimension functions, and detectors for regularity properties of Cu-semigroups
(almost unperforation, weak divisibility, strict comparison, Rordam's lemma).
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import CuModel, ConfigurationError, Report, Verdict, _Check, _pool
from .grothendieck import ALGEBRAIC, COORDINATEWISE, FUNCTIONALS, FgCommMonoid
from .lp import cone_constraints, dot, enumerate_vertices, minimize
from .matrix import SpectralElement, TraceSpec, dtau, eps_cut, is_projection_class
from .values import INF, encode_value, is_inf


class DomainError(ValueError):
    pass


@dataclass
class StateVector:
    """A state given by a linear functional on the ambient lattice of the monoid."""

    values: tuple
    unit: tuple

    def __call__(self, x):
        if is_inf(x):
            return INF
        return dot(self.values, x)

    def to_json(self):
        return {"values": [encode_value(v) for v in self.values], "unit": list(self.unit)}


@dataclass
class StatePolytopeReport:
    vertices: list
    dimension: int
    empty: bool
    unbounded: bool
    constraints: list = field(default_factory=list)
    bound: int = 0

    @property
    def unique(self) -> bool:
        return not self.empty and not self.unbounded and len(self.vertices) == 1

    def constraint_hash(self) -> str:
        blob = json.dumps([[encode_value(c) for c in r] for r in self.constraints], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_json(self) -> dict:
        return {"vertices": [v.to_json() for v in self.vertices], "dimension": self.dimension,
                "empty": self.empty, "unbounded": self.unbounded,
                "constraints": len(self.constraints), "constraint_hash": self.constraint_hash(),
                "bound": self.bound}


def _state_constraints(m: FgCommMonoid, pairs: Sequence[tuple]) -> tuple[list, list]:
    """Rows r (meaning r . psi >= 0) and equality rows (r . psi = 0)."""
    ge, eq = [], []
    if m.generators is not None:
        ge += [list(g) for g in m.generators]
    if m.functionals:
        rays, lineal = cone_constraints(m.functionals, m.dim)
        ge += rays
        eq += lineal
    if m.order == COORDINATEWISE:
        ge += [[int(i == j) for j in range(m.dim)] for i in range(m.dim)]
    if m.order == FUNCTIONALS:
        # y - x lies in the closed cone spanned by the rays: already constrained
        return ge, eq
    seen = set()
    for x, y in pairs:
        if is_inf(x) or is_inf(y):
            continue
        if m.leq(x, y):
            d = [b - a for a, b in zip(x, y)]
            if any(d):
                g = math.gcd(*d)
                key = tuple(c // g for c in d)
                if key not in seen:
                    seen.add(key)
                    ge.append(d)
    return ge, eq


def find_states(m: FgCommMonoid, u: Sequence[int], pairs: Optional[Sequence[tuple]] = None,
                bound: int = 32) -> StatePolytopeReport:
    """Vertices of the state space S(M, u) relative to the sampled constraints.

    States are additive, so on a cancellative submonoid of Z^d they are
    restrictions of linear functionals psi; the constraints are psi >= 0 on
    generators (or on the rays of the closed cone for cone monoids), psi = 0
    on its lineality space, monotonicity on sampled pairs, and psi(u) = 1.
    An absorbing top is sent to infinity and does not constrain psi.
    """
    u = tuple(u)
    els = [x for x in m.elements() if not is_inf(x)]
    for x in els:
        if not any(m.leq(x, tuple(k * c for c in u)) for k in range(bound + 1)):
            raise DomainError(f"u = {u} is not an order unit: {x} exceeds every k*u, k <= {bound}")
    if pairs is None:
        pairs = list(itertools.product(els[:16], els[:16]))
    ge, eq = _state_constraints(m, pairs)
    d = m.dim
    eq_rows = [list(u)] + eq
    eq_rhs = [Fraction(1)] + [Fraction(0)] * len(eq)
    zeros = [Fraction(0)] * len(ge)
    verts = enumerate_vertices(eq_rows, eq_rhs, ge, zeros) if ge else []
    unbounded = False
    feasible = bool(verts)
    if ge or eq:
        for i in range(d):
            for sign in (1, -1):
                c = [Fraction(sign * int(j == i)) for j in range(d)]
                res = minimize(c, [[-x for x in r] for r in ge], zeros, eq_rows, eq_rhs, free=True)
                if res.status == "unbounded":
                    unbounded = True
                if res.status == "optimal":
                    feasible = True
    else:
        unbounded = d > 1
        feasible = True
    states = [StateVector(tuple(v), u) for v in verts]
    for s in states:  # exact post-check
        assert all(dot(r, s.values) >= 0 for r in ge)
        assert all(dot(r, s.values) == 0 for r in eq)
        assert s(u) == 1
    dim = _affine_dim(verts) if verts else -1
    return StatePolytopeReport(states, dim, not feasible, unbounded, ge + eq, bound)


def _affine_dim(points) -> int:
    from .lp import rank
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


# ------------------------------------------------------------ regularisation

def regularize(d: Callable, kind: str = "matrix", steps: int = 40) -> Callable:
    """``dbar(a) = sup_{eps > 0} d((a - eps)_+)``.

    ``matrix``: finite spectra make the supremum attained at any eps below the
    smallest positive eigenvalue, so the value is exact.
    ``pl``: the supremum is taken over eps_k = eps_0 / 2^k, k <= ``steps``,
    with eps_0 half the smallest positive breakpoint value; this is exact
    when d((f - eps)_+) is eventually constant as eps decreases (as for
    support-determined functions) and a lower bound otherwise.
    """
    if kind == "matrix":
        def dbar(a: SpectralElement):
            pos = [lam for b in a.blocks for lam, _ in b.eigen]
            if not pos:
                return d(a)
            return d(eps_cut(a, min(pos) / 2))
    elif kind == "pl":
        def dbar(f):
            pos = [v for v in f.values if v > 0]
            if not pos:
                return d(f)
            e0 = min(pos) / 2
            return max(d(f.eps_cut(e0 / 2**k)) for k in range(steps + 1))
    else:
        raise ConfigurationError(f"unknown model kind {kind!r}")
    return dbar


def left_germ_rank(point=Fraction(1, 2)) -> Callable:
    """d(f) = 1 if f > 0 on some interval (point - eta, point), else 0.

    A dimension function on C([0,1]) that is not lower semicontinuous: a tent
    supported in (1/4, point) has d = 1, yet every cut (f - eps)_+ vanishes
    near the point, so its regularisation is 0 there.
    """
    point = Fraction(point)

    def d(f):
        prev = max(t for t in f.breaks if t < point)
        return 1 if f((prev + point) / 2) > 0 else 0
    return d


# ------------------------------------------------------------ detectors

def check_almost_unperforated(model: CuModel, bound: int = 4, budget: int = 40) -> Report:
    """Search (x, y, n <= bound) with (n+1)x <= ny but x not <= y."""
    pool = _pool(model, budget)
    ch = _Check("almost-unperforated")
    for x in pool:
        for y in pool:
            if ch.failed:
                break
            for n in range(1, bound + 1):
                if model.leq(model.mul(n + 1, x), model.mul(n, y)):
                    ch.record(model.leq(x, y), {"x": x, "y": y, "n": n})
                    break
    return Report(model.name, [ch.verdict(f"n <= {bound}")], {"bound": bound, "budget": budget})


def check_weak_divisibility(model: CuModel, bound: int = 4, budget: int = 40,
                            eligible: Optional[Callable] = None,
                            divide: Optional[Callable] = None) -> Report:
    """For eligible x and 2 <= n <= bound find eligible y with ny <= x <= (n+1)y.

    Eligibility defaults to the model's purely-positive test, or to x != 0.
    ``divide(x, n)`` (or the model's ``divide`` hook) proposes a candidate y
    before the basis is searched.
    """
    pp = eligible or getattr(model, "is_purely_positive", None) or \
        (lambda x: not model.eq(x, model.zero))
    div = divide or getattr(model, "divide", None)
    pool = _pool(model, budget)
    cands = [y for y in pool if pp(y)]
    ch = _Check("weak-divisibility")
    for x in pool:
        if not pp(x):
            continue
        for n in range(2, bound + 1):
            trial = ([div(x, n)] if div else []) + cands
            ok = any(pp(y) and model.leq(model.mul(n, y), x) and model.leq(x, model.mul(n + 1, y))
                     for y in trial)
            ch.record(ok, {"x": x, "n": n})
            if not ok:
                break
        if ch.failed:
            break
    return Report(model.name, [ch.verdict(f"n <= {bound}")], {"bound": bound, "budget": budget})


def check_rordam_lemma(model: CuModel, states: Optional[Sequence[Callable]] = None,
                       unit: Optional[object] = None, bound: int = 4, budget: int = 40) -> Report:
    """Sampled instances of: d(t') < d(t) for all states d, t' an order unit => t' <= t.

    Runs only on models that pass the almost-unperforation search; a failure
    points at the model or the bounds, not at the lemma.
    """
    au = check_almost_unperforated(model, bound, budget)
    cfg = {"bound": bound, "budget": budget}
    if not au.passed:
        return Report(model.name, [Verdict("rordam", "not-applicable", au.failures[0].witness, 0,
                                           "model is not almost unperforated")], cfg)
    sts = list(states) if states is not None else list(model.states())
    if not sts:
        raise ConfigurationError("no states supplied")
    below = getattr(model, "strictly_below", None) if states is None else None
    if below is None:
        def below(x, y):
            return all(_ext_lt(s(x), s(y)) for s in sts)
    pool = _pool(model, budget)
    ch = _Check("rordam")
    for tp, t in itertools.product(pool, pool):
        if not _is_order_unit(model, tp, pool, bound):
            continue
        if below(tp, t):
            ch.record(model.leq(tp, t), {"t_prime": tp, "t": t})
    return Report(model.name, [ch.verdict()], cfg)


def _is_order_unit(model, u, pool, bound) -> bool:
    if model.eq(u, model.zero):
        return False
    bounded = getattr(model, "is_bounded", lambda x: not is_inf(x))
    return bounded(u) and all(any(model.leq(x, model.mul(k, u)) for k in range(1, bound + 1))
                              for x in pool[:16] if bounded(x))


def _ext_lt(a, b) -> bool:
    if is_inf(a):
        return False
    return is_inf(b) or a < b


def strict_comparison_check(a: SpectralElement, b: SpectralElement,
                            vertices: Optional[Sequence[TraceSpec]] = None,
                            b_purely_positive: bool = False) -> bool:
    """Decide <a> <= <b> from dimension functions alone.

    With b flagged purely positive and a a projection class, comparison needs
    d_tau(a) < d_tau(b) at every vertex; otherwise d_tau(a) <= d_tau(b) at
    every vertex.  Without the flag the answer agrees with ``cuntz_leq``.
    """
    vs = list(vertices) if vertices is not None else TraceSpec.vertices(a.dims)
    da = [dtau(a, t) for t in vs]
    db = [dtau(b, t) for t in vs]
    if b_purely_positive and is_projection_class(a) and not a.is_zero():
        return all(x < y for x, y in zip(da, db))
    return all(x <= y for x, y in zip(da, db))


# ------------------------------------------------------------ fixtures

class MonoidModel(CuModel):
    """A finitely generated monoid seen as an ordered semigroup; all elements
    are compact (way_below = leq).  Mainly used for test fixtures such as the
    perforated monoid N0^2 minus {(1, 0)}.
    """

    def __init__(self, monoid: FgCommMonoid, states: Sequence[Callable] = ()):
        self.monoid = monoid
        self.name = monoid.name
        self._states = list(states)

    @property
    def zero(self):
        return self.monoid.zero

    def add(self, x, y):
        return self.monoid.add(x, y)

    def leq(self, x, y):
        r = self.monoid.leq(x, y)
        return bool(r)

    def way_below(self, x, y):
        return not is_inf(x) and self.leq(x, y)

    def eq(self, x, y):
        return x == y

    def basis(self):
        yield from self.monoid.elements(200)

    def states(self):
        return self._states

    def encode(self, x):
        return "inf" if is_inf(x) else list(x)


def perforated_monoid() -> MonoidModel:
    """N0^2 minus {(1, 0)} with the algebraic order: 3(2,0) <= 2(3,0) yet (2,0) is not <= (3,0)."""
    m = FgCommMonoid(2, [[2, 0], [3, 0], [0, 1], [1, 1]], order=ALGEBRAIC, name="perforated")
    return MonoidModel(m)
