"""Grothendieck groups of ordered abelian monoids, the cones G+ and G++,
and the structure check relating K0* to the purely positive part of W(A).

Group elements are formal differences ``(a, b)`` standing for
``gamma(a) - gamma(b)``.  Witness searches are bounded; when a search runs out
the answer is ``None`` rather than a guess.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .core import CuModel, ConfigurationError, Report, Verdict, _Check, _pool
from .lp import rank as q_rank
from .values import INF, is_inf

ALGEBRAIC, COORDINATEWISE, FUNCTIONALS = "algebraic", "coordinatewise", "functionals"


def _vadd(x, y):
    if is_inf(x) or is_inf(y):
        return INF
    return tuple(a + b for a, b in zip(x, y))


def _vsub(x, y):
    return tuple(a - b for a, b in zip(x, y))


class FgCommMonoid:
    """Submonoid of Z^d, optionally with an absorbing top ``INF``.

    ``generators`` lists integer vectors; with ``generators=None`` the monoid
    is the cone monoid ``{0} u {v : phi(v) > 0 for all phi}`` cut out by
    ``functionals`` (this covers (Z + theta Z)+).  The order is one of

    * ``algebraic``: x <= y iff y = x + z for some z in M,
    * ``coordinatewise``: y - x >= 0 in every coordinate,
    * ``functionals``: x = y or phi(y - x) > 0 for every functional (strict).

    Membership for generated monoids is decided by a search over coefficient
    vectors of total weight at most ``bound``; a miss is reported as ``None``
    when the search could not be exhaustive.
    """

    def __init__(self, dim: int, generators: Optional[Sequence[Sequence[int]]] = None, *,
                 has_inf: bool = False, order: str = ALGEBRAIC,
                 functionals: Sequence[Sequence] = (), bound: int = 32, name: str = "monoid"):
        if order not in (ALGEBRAIC, COORDINATEWISE, FUNCTIONALS):
            raise ConfigurationError(f"unknown order oracle {order!r}")
        if generators is None and not functionals:
            raise ConfigurationError("a cone monoid needs defining functionals")
        if order == FUNCTIONALS and not functionals:
            raise ConfigurationError("order 'functionals' needs a functional list")
        self.dim = dim
        self.generators = None if generators is None else [tuple(int(c) for c in g) for g in generators]
        if self.generators is not None and any(len(g) != dim for g in self.generators):
            raise ConfigurationError("generator of the wrong dimension")
        self.has_inf = has_inf
        self.order = order
        self.functionals = [tuple(p) for p in functionals]
        self.bound = bound
        self.name = name
        self._members = None

    # ------------------------------------------------------------ elements
    @property
    def zero(self):
        return (0,) * self.dim

    def add(self, x, y):
        return _vadd(x, y)

    def _phi(self, p, v):
        s = 0
        for a, b in zip(p, v):
            if b:
                s = s + a * b
        return s

    def _reachable(self) -> set:
        if self._members is None:
            seen = {self.zero}
            frontier = [self.zero]
            for _ in range(self.bound):
                nxt = []
                for v in frontier:
                    for g in self.generators:
                        w = _vadd(v, g)
                        if w not in seen:
                            seen.add(w)
                            nxt.append(w)
                frontier = nxt
            self._members = seen
        return self._members

    def contains(self, x) -> Optional[bool]:
        if is_inf(x):
            return self.has_inf
        x = tuple(x)
        if self.generators is None:
            return x == self.zero or all(self._phi(p, x) > 0 for p in self.functionals)
        if x in self._reachable():
            return True
        # positive generators: a vector beyond reach of weight <= bound is decided
        if all(all(c >= 0 for c in g) and any(g) for g in self.generators):
            if sum(x) <= self.bound * min(sum(g) for g in self.generators) or any(c < 0 for c in x):
                return False
        return None

    def leq(self, x, y) -> Optional[bool]:
        if is_inf(y):
            return True
        if is_inf(x):
            return False
        d = _vsub(y, x)
        if self.order == ALGEBRAIC:
            return self.contains(d)
        if self.order == COORDINATEWISE:
            return all(c >= 0 for c in d)
        return all(c == 0 for c in d) or all(self._phi(p, d) > 0 for p in self.functionals)

    def eq(self, x, y) -> bool:
        return x == y

    def elements(self, limit: int = 64) -> list:
        """Small elements, deterministic order; INF last when present."""
        if self.generators is not None:
            out = sorted(self._reachable(), key=lambda v: (sum(abs(c) for c in v), v))[:limit]
        else:
            box = range(-6, 7)
            cands = [v for v in itertools.product(box, repeat=self.dim) if self.contains(v)]
            out = sorted(cands, key=lambda v: (sum(abs(c) for c in v), v))[:limit]
        if self.has_inf:
            out.append(INF)
        return out

    @property
    def cancellative(self) -> bool:
        return not self.has_inf

    def describe(self) -> dict:
        return {"name": self.name, "dim": self.dim, "generators": self.generators,
                "has_inf": self.has_inf, "order": self.order,
                "functionals": [[str(c) for c in p] for p in self.functionals], "bound": self.bound}

    @classmethod
    def from_json(cls, obj: dict) -> FgCommMonoid:
        from .values import scalar
        try:
            return cls(int(obj["dim"]), obj.get("generators"), has_inf=bool(obj.get("has_inf", False)),
                       order=obj.get("order", ALGEBRAIC),
                       functionals=[[scalar(c) for c in p] for p in obj.get("functionals", [])],
                       bound=int(obj.get("bound", 32)), name=obj.get("name", "monoid"))
        except KeyError as exc:
            raise ConfigurationError(f"monoid spec is missing field {exc}") from exc


# ------------------------------------------------------------ groups

@dataclass
class OrderedGroupWithCones:
    """G(M) with the image cone G+ and the order cone G++."""

    monoid: FgCommMonoid
    rank: int
    torsion: list = field(default_factory=list)

    def gamma(self, x) -> tuple:
        """Coordinates of gamma(x); the trivial group has the empty tuple."""
        if self.rank == 0 and not self.torsion:
            return ()
        return tuple(x)

    def diff(self, a, b) -> tuple:
        return (a, b)

    def in_plus(self, g) -> Optional[bool]:
        return cones_leq(self.monoid, (self.monoid.zero, self.monoid.zero), g, "plus")

    def in_plusplus(self, g) -> Optional[bool]:
        return cones_leq(self.monoid, (self.monoid.zero, self.monoid.zero), g, "plusplus")

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": self.torsion, "monoid": self.monoid.describe()}


def groth_group(m: FgCommMonoid) -> OrderedGroupWithCones:
    """G(M).  An absorbing top collapses every class (x + inf = y + inf)."""
    if m.has_inf:
        return OrderedGroupWithCones(m, 0, [])
    if m.generators is None:
        return OrderedGroupWithCones(m, m.dim, [])
    # a subgroup of Z^d is free; its rank is the rank of the generator matrix
    r = q_rank([list(g) for g in m.generators]) if m.generators else 0
    return OrderedGroupWithCones(m, r, [])


def presented_group(ngens: int, relations: Sequence[tuple[Sequence[int], Sequence[int]]]) -> tuple[int, list[int]]:
    """Rank and torsion invariants of the group of a presented commutative monoid.

    The Grothendieck group of <g_1..g_k | u_i = v_i> is Z^k modulo the
    lattice spanned by the u_i - v_i; its invariants come from the Smith form.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    rows = [[int(a) - int(b) for a, b in zip(u, v)] for u, v in relations]
    rows = [r for r in rows if any(r)]
    if not rows:
        return ngens, []
    facs = [abs(int(f)) for f in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [f for f in facs if f != 0]
    return ngens - len(nonzero), [f for f in nonzero if f != 1]


def _search_elements(m, extra: Sequence = ()) -> list:
    els = list(extra) + list(m.elements())
    out, seen = [], set()
    for e in els:
        k = repr(e)
        if k not in seen:
            seen.add(k)
            out.append(e)
    return out


def cones_leq(m, x: tuple, y: tuple, which: str = "plusplus") -> Optional[bool]:
    """Compare ``x = [a] - [b]`` and ``y = [c] - [d]`` in G(M).

    ``plusplus``: a + d + e <= b + c + e for some e.
    ``plus``:     a + d + z + e = b + c + e for some z, e (y - x lies in gamma(M)).
    For a cancellative monoid with a translation-invariant order the witness
    ``e = 0`` suffices, so a failed search is a refutation; otherwise the result
    is ``None`` when the bounded search is exhausted.
    """
    if which not in ("plus", "plusplus"):
        raise ConfigurationError(f"unknown cone {which!r}")
    (a, b), (c, d) = x, y
    lhs, rhs = m.add(a, d), m.add(b, c)
    cancellative = getattr(m, "cancellative", False)
    es = [m.zero] if cancellative else _search_elements(m)
    undecided = False
    for e in es:
        l, r = m.add(lhs, e), m.add(rhs, e)
        if which == "plusplus":
            res = m.leq(l, r)
        elif cancellative and not is_inf(l) and not is_inf(r):
            res = m.contains(_vsub(r, l))
        else:
            res = None
            for z in _search_elements(m):
                if m.eq(m.add(l, z), r):
                    res = True
                    break
        if res:
            return True
        if res is None:
            undecided = True
    if cancellative and not undecided:
        return False
    return None


def group_eq(m, x: tuple, y: tuple) -> Optional[bool]:
    """``[a] - [b] = [c] - [d]`` iff a + d + e = b + c + e for some e."""
    (a, b), (c, d) = x, y
    es = [m.zero] if getattr(m, "cancellative", False) else _search_elements(m)
    for e in es:
        if m.eq(m.add(m.add(a, d), e), m.add(m.add(b, c), e)):
            return True
    return False if getattr(m, "cancellative", False) else None


def check_group(m: FgCommMonoid, budget: int = 60) -> Report:
    """Sampled invariants: gamma additive and monotone, G+ in G++, (G, G++) antisymmetric."""
    els = m.elements(budget)
    g = groth_group(m)
    names = ["gamma-additive", "gamma-monotone", "plus-in-plusplus", "antisymmetric"]
    if m.cancellative:
        names.append("gamma-injective")
    checks = {k: _Check(k) for k in names}
    zero = m.zero
    for x, y in itertools.islice(itertools.product(els, els), budget * 4):
        gs = g.gamma(m.add(x, y))
        checks["gamma-additive"].record(
            gs == () or gs == _vadd(g.gamma(x), g.gamma(y)), {"x": x, "y": y})
        if m.leq(x, y):
            checks["gamma-monotone"].record(cones_leq(m, (x, zero), (y, zero)), {"x": x, "y": y})
        dxy = (y, x)
        p = cones_leq(m, (zero, zero), dxy, "plus")
        if p:
            checks["plus-in-plusplus"].record(cones_leq(m, (zero, zero), dxy, "plusplus"), {"x": x, "y": y})
        if cones_leq(m, (x, zero), (y, zero)) and cones_leq(m, (y, zero), (x, zero)):
            checks["antisymmetric"].record(group_eq(m, (x, zero), (y, zero)), {"x": x, "y": y})
        if m.cancellative and x != y:
            checks["gamma-injective"].record(g.gamma(x) != g.gamma(y), {"x": x, "y": y})
    return Report(m.name, [c.verdict() for c in checks.values()], {"budget": budget, "rank": g.rank})


# ------------------------------------------------------------ K0*

def k0_star_check(model: CuModel, budget: int = 200, seed: int = 0, *,
                  is_purely_positive: Optional[Callable] = None,
                  groth_value: Optional[Callable] = None) -> Report:
    """Check the map alpha : W -> G(W+) behind K0*(A) = G(W(A)).

    alpha(a) = gamma(a) on purely positive a and alpha(p) = gamma(p + c) - gamma(c)
    on projection classes, for a fixed purely positive c.  ``groth_value`` is a
    concrete model of gamma : W+ -> G(W+) (numbers or tuples, with G+ the
    nonnegative part); it is validated on samples as well.  alpha should be
    additive, identify exactly the congruent pairs (x + z = y + z), and carry
    the order of K0*++ (x + e <= y + e for some e) onto G(W+)+.
    """
    import random

    pp = is_purely_positive or getattr(model, "is_purely_positive", None)
    gv = groth_value or getattr(model, "groth_value", None)
    if pp is None or gv is None:
        raise ConfigurationError(f"{model.name} exposes no projection/purely-positive split")
    bounded = getattr(model, "is_bounded", None)
    # K0* is built from W(A); the top element of a Cu completion is left out
    pool = [x for x in _pool(model, budget) if bounded is None or bounded(x)]
    wplus = [x for x in pool if pp(x)]
    cfg = {"budget": budget, "seed": seed}
    if not wplus:
        return Report(model.name, [Verdict("k0-star", "not-applicable", None, 0,
                                           "W(A)+ is empty: W(A) = V(A)")], cfg)
    rng = random.Random(seed)
    c = wplus[0]
    cfg["c"] = model.encode(c)
    probes = wplus[:12] + [x for x in pool if not pp(x)][:12]

    def alpha(x):
        return gv(x) if pp(x) else _gsub(gv(model.add(x, c)), gv(c))

    def congruent(x, y):
        return model.eq(x, y) or any(model.eq(model.add(x, z), model.add(y, z)) for z in probes)

    checks = {k: _Check(k) for k in ("W+ absorbing", "gamma additive", "alpha additive",
                                     "alpha congruence", "alpha order")}
    for _ in range(budget):
        x, y = rng.choice(pool), rng.choice(pool)
        a = rng.choice(wplus)
        checks["W+ absorbing"].record(bool(pp(model.add(x, a))), {"x": x, "a": a})
        if pp(x) and pp(y):
            checks["gamma additive"].record(gv(model.add(x, y)) == _gadd(gv(x), gv(y)), {"x": x, "y": y})
        checks["alpha additive"].record(alpha(model.add(x, y)) == _gadd(alpha(x), alpha(y)),
                                        {"x": x, "y": y})
        checks["alpha congruence"].record((alpha(x) == alpha(y)) == congruent(x, y), {"x": x, "y": y})
        le = model.leq(x, y) or any(model.leq(model.add(x, e), model.add(y, e)) for e in probes)
        checks["alpha order"].record(_gle(alpha(x), alpha(y)) == le, {"x": x, "y": y})
    return Report(model.name, [ch.verdict() for ch in checks.values()], cfg)


def _gadd(a, b):
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _gsub(a, b):
    if isinstance(a, tuple):
        return tuple(x - y for x, y in zip(a, b))
    return a - b


def _gle(a, b):
    if isinstance(a, tuple):
        return all(x <= y for x, y in zip(a, b))
    return a <= b
