"""W~(A) = V(A) u LAff_b(T(A))++, interval semigroups and the worked example models."""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .core import (ConfigurationError, CuModel, ExtNatModel, IncreasingSequence, Report,
                   _Check, _pool, check_cu_morphism)
from .lp import min_max_affine_on_simplex
from .matrix import SpectralElement, cuntz_class, cuntz_leq
from .values import (INF, QuadraticNumber, decode_value, encode_value, ext_add, format_value,
                     is_inf)


def _fr(x):
    if isinstance(x, (QuadraticNumber, Fraction)) or is_inf(x):
        return x
    if isinstance(x, str):
        return decode_value(x) if any(c in x for c in "√∞i") else Fraction(x)
    return Fraction(x)


def _ext_lt(a, b) -> bool:
    if is_inf(a):
        return False
    return is_inf(b) or a < b


def _ext_le(a, b) -> bool:
    if is_inf(b):
        return True
    return not is_inf(a) and a <= b


# ------------------------------------------------------------ simplex and LAff

@dataclass(frozen=True)
class SimplexModel:
    """A finite-dimensional simplex given by its vertex labels."""

    labels: tuple

    def __post_init__(self):
        if len(self.labels) < 1:
            raise ConfigurationError("a simplex needs at least one vertex")

    @classmethod
    def of(cls, n_or_labels) -> SimplexModel:
        if isinstance(n_or_labels, int):
            return cls(tuple(f"t{i}" for i in range(n_or_labels)))
        return cls(tuple(n_or_labels))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def evaluate(self, values: Sequence, point: Sequence):
        """Affine evaluation: the convex combination of vertex values."""
        return sum((Fraction(w) * v for w, v in zip(point, values)), Fraction(0))

    def sample_points(self, rng: random.Random, count: int) -> list[tuple]:
        out = [tuple(Fraction(int(i == j)) for j in range(self.dim)) for i in range(self.dim)]
        for _ in range(count):
            w = [rng.randint(0, 8) for _ in range(self.dim)]
            if sum(w) == 0:
                w[0] = 1
            out.append(tuple(Fraction(x, sum(w)) for x in w))
        return out


def _min_over_simplex(pieces: Sequence[Sequence]):
    """min over the simplex of the pointwise max of affine pieces (vertex-value vectors)."""
    if len(pieces[0]) == 1:
        return max(p[0] for p in pieces)
    return min_max_affine_on_simplex(pieces)[0]


@dataclass(frozen=True)
class LAffPL:
    """Pointwise maximum of affine functions, each given by its vertex values."""

    pieces: tuple

    def __post_init__(self):
        ps = tuple(tuple(_fr(v) for v in p) for p in self.pieces)
        if not ps or len({len(p) for p in ps}) != 1:
            raise ConfigurationError("LAffPL needs pieces of equal length")
        # drop pieces dominated at every vertex by another piece
        keep = []
        for i, p in enumerate(ps):
            dominated = any(j != i and all(a <= b for a, b in zip(p, q)) and (p != q or j < i)
                            for j, q in enumerate(ps))
            if not dominated:
                keep.append(p)
        object.__setattr__(self, "pieces", tuple(sorted(set(keep), key=repr)))

    @classmethod
    def constant(cls, c, dim: int = 1) -> LAffPL:
        return cls(((_fr(c),) * dim,))

    @classmethod
    def affine(cls, values: Sequence) -> LAffPL:
        return cls((tuple(values),))

    @property
    def dim(self) -> int:
        return len(self.pieces[0])

    def vertex_values(self) -> tuple:
        return tuple(max(p[i] for p in self.pieces) for i in range(self.dim))

    def __call__(self, point: Sequence):
        return max(sum((Fraction(w) * v for w, v in zip(point, p)), Fraction(0)) for p in self.pieces)

    def minimum(self):
        return _min_over_simplex(self.pieces)

    def is_strictly_positive(self) -> bool:
        return self.minimum() > 0

    def scale(self, c) -> LAffPL:
        return LAffPL(tuple(tuple(c * v for v in p) for p in self.pieces))

    def shift(self, c) -> LAffPL:
        return LAffPL(tuple(tuple(v + c for v in p) for p in self.pieces))

    def add(self, other: LAffPL) -> LAffPL:
        return LAffPL(tuple(tuple(a + b for a, b in zip(p, q))
                            for p in self.pieces for q in other.pieces))

    def add_affine(self, values: Sequence) -> LAffPL:
        return LAffPL(tuple(tuple(a + b for a, b in zip(p, values)) for p in self.pieces))

    def min_gap(self, other: LAffPL):
        """min over the simplex of other - self."""
        return min(_min_over_simplex([tuple(b - a for a, b in zip(p, q)) for q in other.pieces])
                   for p in self.pieces)

    def leq(self, other: LAffPL) -> bool:
        return self.min_gap(other) >= 0

    def to_json(self):
        return {"pieces": [[encode_value(v) for v in p] for p in self.pieces]}

    @classmethod
    def from_json(cls, obj) -> LAffPL:
        return cls(tuple(tuple(decode_value(v) for v in p) for p in obj["pieces"]))

    def __str__(self):
        if len(self.pieces) == 1 and len(set(self.pieces[0])) == 1:
            return format_value(self.pieces[0][0])
        inner = " v ".join("(" + ", ".join(format_value(v) for v in p) + ")" for p in self.pieces)
        return f"max[{inner}]"


def surj_approx(f: LAffPL, delta, n: int) -> list[LAffPL]:
    """f_1, ..., f_n increasing to f with f_{k+1} - f_k >= (delta/2)(1/k - 1/(k+1)).

    f_k = f - (f - delta/2)/(k + 1) - delta/(2k); for a max of affine pieces
    the formula acts piecewise (it is increasing and affine in the value).
    """
    delta = _fr(delta)
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    if f.minimum() < delta:
        raise ConfigurationError(f"f must be >= delta = {delta} on the simplex")
    out = []
    for k in range(1, n + 1):
        # f - (f - delta/2)/(k+1) - delta/(2k) = (k/(k+1)) f + delta/(2(k+1)) - delta/(2k)
        out.append(f.scale(Fraction(k, k + 1)).shift(delta / (2 * (k + 1)) - delta / (2 * k)))
    return out


def surj_gap_ok(f: LAffPL, delta, seq: Sequence[LAffPL], points: Sequence) -> bool:
    """The gap inequality at every given point, exactly."""
    delta = _fr(delta)
    for k, (a, b) in enumerate(zip(seq, seq[1:]), start=1):
        need = delta / 2 * (Fraction(1, k) - Fraction(1, k + 1))
        if any(b(p) - a(p) < need for p in points):
            return False
    return True


# ------------------------------------------------------------ V(A)

class VModel:
    """An ordered abelian group presented on coordinates, restricted to its positive cone.

    ``order`` is ``coordinatewise`` (rank tuples) or ``strict``: v >= 0 iff
    v = 0 or every pairing row is > 0 on v (simple order from the state list).
    ``pairing`` has one row per simplex vertex.
    """

    def __init__(self, dim: int, pairing: Sequence[Sequence], *, order: str = "strict",
                 unit: Optional[Sequence] = None, basis: Optional[Callable[[], Iterator]] = None,
                 name: str = "V"):
        if order not in ("strict", "coordinatewise"):
            raise ConfigurationError(f"unknown order {order!r}")
        self.dim = dim
        self.pairing = [tuple(_fr(v) for v in row) for row in pairing]
        if any(len(r) != dim for r in self.pairing):
            raise ConfigurationError("pairing rows must have one entry per K0 coordinate")
        self.order = order
        self.unit = tuple(_fr(v) for v in unit) if unit is not None else None
        self._basis = basis
        self.name = name

    @property
    def zero(self) -> tuple:
        return (Fraction(0),) * self.dim

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def hat(self, x) -> tuple:
        """p^ : the pairing values at the simplex vertices."""
        return tuple(sum((r * v for r, v in zip(row, x)), Fraction(0)) for row in self.pairing)

    def positive(self, x) -> bool:
        if all(v == 0 for v in x):
            return True
        if self.order == "coordinatewise":
            return all(v >= 0 for v in x)
        return all(h > 0 for h in self.hat(x))

    def leq(self, x, y) -> bool:
        return self.positive(self.sub(y, x))

    def basis(self) -> Iterator:
        if self._basis is not None:
            yield from self._basis()
            return
        yield self.zero
        seen = {self.zero}
        for r in itertools.count(1):
            for v in itertools.product(range(-r, r + 1), repeat=self.dim):
                if max(abs(c) for c in v) != r:
                    continue
                x = tuple(Fraction(c) for c in v)
                if x not in seen and self.positive(x):
                    seen.add(x)
                    yield x
            if r > 40:
                return

    def describe(self):
        return {"dim": self.dim, "order": self.order,
                "pairing": [[encode_value(v) for v in r] for r in self.pairing],
                "unit": None if self.unit is None else [encode_value(v) for v in self.unit]}


def rotation_vmodel(theta) -> VModel:
    """(Z + theta Z)+ as pairs (a, b) with a + b theta >= 0."""
    theta = _fr(theta)
    if not (0 < theta < 1):
        raise ConfigurationError("theta must lie in (0, 1)")
    if not isinstance(theta, QuadraticNumber):
        raise ConfigurationError("theta must be an exactly represented quadratic irrational")
    return VModel(2, [(Fraction(1), theta)], unit=(1, 0), name=f"Z+{theta}Z")


def _goodearl_basis(upsilon, alphas, ker_rank):
    def gen():
        yield (Fraction(0),) * (1 + ker_rank)
        seen = set()
        for n in itertools.count(1):
            if n > len(upsilon):
                return
            du = upsilon[n - 1]
            dv = 1
            for a in alphas[:n]:
                dv *= a
            for m in range(1, 3 * du + 1):
                a = Fraction(m, du)
                bs = [Fraction(k, dv) for k in range(-2, 3)] if ker_rank else [None]
                for b in bs:
                    x = (a,) + ((b,) * ker_rank if ker_rank else ())
                    if x not in seen:
                        seen.add(x)
                        yield x
    return gen


def goodearl_vmodel(upsilon: Sequence[int] = (1, 2, 4, 8), alphas: Sequence[int] = (1, 1, 1),
                    ker_rank: int = 1) -> VModel:
    """W+ = {0} u {(a, b) in U + V (x) ker t : a > 0}, unit (1, 0).

    U = union of (1/upsilon(n))Z, V = union of (1/(alpha_1...alpha_n))Z.
    """
    ups = [int(u) for u in upsilon]
    als = [int(a) for a in alphas]
    if not ups or any(u <= 0 for u in ups) or any(b % a for a, b in zip(ups, ups[1:])):
        raise ConfigurationError("upsilon must be positive with upsilon(n) | upsilon(n+1)")
    for n, a in enumerate(als):
        if n + 1 < len(ups) and not (0 < a < ups[n + 1] // ups[n]):
            raise ConfigurationError(f"need 0 < alpha_{n + 1} < upsilon({n + 2})/upsilon({n + 1})")
    if ker_rank < 0:
        raise ConfigurationError("kernel rank must be nonnegative")
    dim = 1 + ker_rank
    return VModel(dim, [(Fraction(1),) + (Fraction(0),) * ker_rank],
                  unit=(1,) + (0,) * ker_rank, basis=_goodearl_basis(ups, als, ker_rank),
                  name="goodearl-W+")


# ------------------------------------------------------------ W~

@dataclass(frozen=True)
class Proj:
    v: tuple


@dataclass(frozen=True)
class Fun:
    f: LAffPL


class WTildeModel(CuModel):
    """V u LAff(T)++ with the order rules (i)-(iv); ``unbounded`` adds the top inf."""

    def __init__(self, V: VModel, simplex: Optional[SimplexModel] = None, *, unbounded: bool = True,
                 name: str = "wtilde"):
        self.V = V
        self.simplex = simplex or SimplexModel.of(len(V.pairing))
        if self.simplex.dim != len(V.pairing):
            raise ConfigurationError("pairing rows must match the simplex vertices")
        self.unbounded = unbounded
        self.name = name

    # elements
    def proj(self, v) -> Proj:
        v = tuple(_fr(c) for c in v)
        if not self.V.positive(v):
            raise ValueError(f"{v} is not in the positive cone")
        return Proj(v)

    def fun(self, f) -> Fun:
        if not isinstance(f, LAffPL):
            f = LAffPL.constant(f, self.simplex.dim) if not isinstance(f, (list, tuple)) \
                else LAffPL.affine(f)
        if not f.is_strictly_positive():
            raise ValueError("LAff++ elements must be strictly positive")
        return Fun(f)

    def hat(self, p: Proj) -> tuple:
        return self.V.hat(p.v)

    @property
    def zero(self):
        return Proj(self.V.zero)

    @property
    def unit(self):
        return Proj(self.V.unit) if self.V.unit is not None else None

    def is_zero(self, x) -> bool:
        return isinstance(x, Proj) and all(c == 0 for c in x.v)

    def add(self, x, y):
        if is_inf(x) or is_inf(y):
            return INF
        if isinstance(x, Proj) and isinstance(y, Proj):
            return Proj(self.V.add(x.v, y.v))
        if isinstance(x, Proj):
            x, y = y, x
        if isinstance(y, Proj):
            if self.is_zero(y):
                return x
            return Fun(x.f.add_affine(self.hat(y)))
        return Fun(x.f.add(y.f))

    def leq(self, x, y) -> bool:
        if is_inf(y):
            return True
        if is_inf(x):
            return False
        if isinstance(x, Proj) and isinstance(y, Proj):
            return self.V.leq(x.v, y.v)                          # (i)
        if isinstance(x, Fun) and isinstance(y, Fun):
            return x.f.leq(y.f)                                  # (ii)
        if isinstance(x, Fun):
            return all(a <= b for p in x.f.pieces for a, b in zip(p, self.hat(y)))   # (iii)
        if self.is_zero(x):
            return True
        return LAffPL.affine(self.hat(x)).min_gap(y.f) > 0       # (iv)

    def way_below(self, x, y) -> bool:
        if is_inf(x):
            return False
        if is_inf(y):
            return True
        if isinstance(x, Proj):
            return self.leq(x, y)
        if isinstance(y, Proj):
            return self.leq(x, y)
        return x.f.min_gap(y.f) > 0

    def is_purely_positive(self, x) -> bool:
        return is_inf(x) or isinstance(x, Fun)

    def divide(self, x, n: int):
        if is_inf(x):
            return INF
        f = x.f if isinstance(x, Fun) else LAffPL.affine(self.hat(x))
        return Fun(f.scale(Fraction(2, 2 * n + 1)))

    def _as_fun(self, x) -> LAffPL:
        return x.f if isinstance(x, Fun) else LAffPL.affine(self.hat(x))

    def strictly_below(self, x, y) -> bool:
        """tau(x) < tau(y) for every tau in the simplex (exact, via LP)."""
        if is_inf(x):
            return False
        if is_inf(y):
            return True
        return self._as_fun(x).min_gap(self._as_fun(y)) > 0

    def is_bounded(self, x) -> bool:
        return not is_inf(x)

    def states(self):
        def st(i):
            def s(x):
                if is_inf(x):
                    return INF
                if isinstance(x, Proj):
                    return self.hat(x)[i]
                return x.f.vertex_values()[i]
            return s
        return [st(i) for i in range(self.simplex.dim)]

    def basis(self):
        d = self.simplex.dim
        vs = self.V.basis()
        if self.unbounded:
            yield INF
        for k in itertools.count(1):
            produced = False
            for _ in range(2):
                v = next(vs, None)
                if v is not None:
                    produced = True
                    yield Proj(v)
            for c in (Fraction(k, 2), Fraction(k, 3), Fraction(2 * k - 1, 4)):
                produced = True
                yield Fun(LAffPL.constant(c, d))
            if d > 1:
                rng = random.Random(k)
                vals = tuple(Fraction(rng.randint(1, 4 * k), 4) for _ in range(d))
                yield Fun(LAffPL.affine(vals))
                vals2 = tuple(Fraction(rng.randint(1, 4 * k), 4) for _ in range(d))
                yield Fun(LAffPL((vals, vals2)))
            if not produced:
                return

    def rapid_sequence(self, x):
        if is_inf(x):
            u = self._unit_fun()
            return IncreasingSequence([Fun(u)], lambda i: Fun(u.scale(i + 1)), limit=INF)
        if isinstance(x, Proj):
            return IncreasingSequence.constant(x)
        f = x.f
        return IncreasingSequence([Fun(f.scale(Fraction(1, 2)))],
                                  lambda i: Fun(f.scale(Fraction(i + 1, i + 2))), limit=x)

    def _unit_fun(self) -> LAffPL:
        if self.V.unit is not None and any(h > 0 for h in self.V.hat(self.V.unit)):
            h = self.V.hat(self.V.unit)
            if all(v > 0 for v in h):
                return LAffPL.affine(h)
        return LAffPL.constant(1, self.simplex.dim)

    def encode(self, x):
        if is_inf(x):
            return "inf"
        if isinstance(x, Proj):
            return {"proj": [encode_value(c) for c in x.v]}
        return {"fun": x.f.to_json()}

    def decode(self, obj):
        if obj == "inf":
            return INF
        if "proj" in obj:
            return self.proj([decode_value(c) for c in obj["proj"]])
        return self.fun(LAffPL.from_json(obj["fun"]))

    def format(self, x):
        if is_inf(x):
            return "∞"
        if isinstance(x, Proj):
            return "[" + ", ".join(format_value(c) for c in x.v) + "]"
        return f"Fun({x.f})"

    def parse(self, text):
        t = text.strip()
        if t in ("inf", "∞"):
            return INF
        if t.startswith("["):
            return self.proj([_fr(c.strip()) for c in t.strip("[]").split(",")])
        if t.lower().startswith("fun(") and t.endswith(")"):
            t = t[4:-1].strip()
        if t.startswith("max[") and t.endswith("]"):
            pieces = re.findall(r"\(([^()]*)\)", t[4:-1])
            return self.fun(LAffPL(tuple(tuple(_fr(c.strip()) for c in p.split(",")) for p in pieces)))
        parts = [_fr(c.strip()) for c in t.strip("()").split(",")]
        if len(parts) == 1:
            return self.fun(parts[0])
        return self.fun(LAffPL.affine(parts))

    def describe(self):
        return {"model": "wtilde", "V": self.V.describe(), "simplex": list(self.simplex.labels),
                "unbounded": self.unbounded}


def laff_model(vertices: int = 2) -> WTildeModel:
    """LAff(T)++ u {0, inf} on a simplex: W~ with trivial V."""
    v = VModel(1, [(Fraction(0),)] * vertices, order="coordinatewise",
               basis=lambda: iter([(Fraction(0),)]), name="0")
    m = WTildeModel(v, SimplexModel.of(vertices), name=f"laff{vertices}")
    return m


# ------------------------------------------------------------ the recovery functor

@dataclass
class EllInvariant:
    """((K0, K0+, [1]), K1, T, r) with K0 = Z^d presented by an order rule."""

    k0_dim: int
    unit: tuple
    pairing: list                    # one row per vertex: r(vertex)(e_k)
    vertices: tuple = ("t0",)
    order: str = "strict"
    k1: tuple = ()
    name: str = "ell"

    def validate(self):
        rows = [tuple(_fr(v) for v in r) for r in self.pairing]
        if len(rows) != len(self.vertices):
            raise ConfigurationError("one pairing row per simplex vertex")
        if any(len(r) != self.k0_dim for r in rows):
            raise ConfigurationError("pairing rows must have one entry per K0 coordinate")
        for lbl, r in zip(self.vertices, rows):
            val = sum((a * _fr(u) for a, u in zip(r, self.unit)), Fraction(0))
            if val != 1:
                raise ConfigurationError(f"r({lbl}) takes value {val} on the unit, not 1")
            if self.order == "coordinatewise" and any(a < 0 for a in r):
                raise ConfigurationError(f"r({lbl}) is negative on a cone generator")
        return rows

    def to_json(self):
        return {"k0": {"dim": self.k0_dim, "order": self.order,
                       "unit": [encode_value(_fr(u)) for u in self.unit]},
                "k1": list(self.k1), "vertices": list(self.vertices),
                "pairing": [[encode_value(_fr(v)) for v in r] for r in self.pairing],
                "name": self.name}

    @classmethod
    def from_json(cls, obj) -> EllInvariant:
        k0 = obj["k0"]
        return cls(int(k0["dim"]), tuple(decode_value(u) for u in k0["unit"]),
                   [[decode_value(v) for v in r] for r in obj["pairing"]],
                   tuple(obj.get("vertices", ["t0"])), k0.get("order", "strict"),
                   tuple(obj.get("k1", ())), obj.get("name", "ell"))


def integers_ell() -> EllInvariant:
    return EllInvariant(1, (1,), [[1]], name="C")


def rotation_ell(theta) -> EllInvariant:
    return EllInvariant(2, (1, 0), [[1, _fr(theta)]], k1=(0, 0), name="rotation")


def matrix_ell(dims: Sequence[int] = (2, 3)) -> EllInvariant:
    k = len(dims)
    rows = [[Fraction(int(i == j), dims[j]) if i == j else 0 for j in range(k)] for i in range(k)]
    return EllInvariant(k, tuple(dims), rows, tuple(f"tr{i}" for i in range(k)), "coordinatewise",
                        name="M" + "+M".join(map(str, dims)))


def functor_f(ell: EllInvariant) -> WTildeModel:
    """F(Ell(A)) = (W~(A), [1_A])."""
    rows = ell.validate()
    v = VModel(ell.k0_dim, rows, order=ell.order, unit=ell.unit, name=f"K0({ell.name})")
    return WTildeModel(v, SimplexModel(tuple(ell.vertices)), name=f"F({ell.name})")


@dataclass
class EllMorphism:
    """(theta0, theta1, gamma): theta0 is a K0 matrix (rows = target coordinates);
    gamma sends each target vertex to barycentric coordinates in the source simplex."""

    theta0: list
    gamma: list
    theta1: object = None

    def compose(self, after: EllMorphism) -> EllMorphism:
        """after o self."""
        t0 = [[sum(_fr(after.theta0[i][k]) * _fr(self.theta0[k][j]) for k in range(len(self.theta0)))
               for j in range(len(self.theta0[0]))] for i in range(len(after.theta0))]
        # gamma runs backwards: T(C) -> T(B) -> T(A)
        g = [[sum(_fr(after.gamma[i][k]) * _fr(self.gamma[k][j]) for k in range(len(self.gamma)))
              for j in range(len(self.gamma[0]))] for i in range(len(after.gamma))]
        return EllMorphism(t0, g)


def functor_f_morphism(src: WTildeModel, dst: WTildeModel, mor: EllMorphism, *,
                       budget: int = 40, seed: int = 0) -> tuple[Callable, Report]:
    """The induced map W~(A) -> W~(B) and a report that it is a W~ morphism."""
    t0 = [[_fr(c) for c in r] for r in mor.theta0]
    g = [[_fr(c) for c in r] for r in mor.gamma]

    def on_v(v):
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in t0)

    def on_f(f: LAffPL) -> LAffPL:
        return LAffPL(tuple(tuple(sum((w * p[i] for i, w in enumerate(gr)), Fraction(0)) for gr in g)
                            for p in f.pieces))

    def phi(x):
        if is_inf(x):
            return INF
        if isinstance(x, Proj):
            return Proj(on_v(x.v))
        return Fun(on_f(x.f))

    pool = _pool(src, budget)
    cone = _Check("theta0(V(A)) in V(B)")
    pair = _Check("pairing compatible")
    unit = _Check("unit preserved")
    for x in pool:
        if isinstance(x, Proj):
            y = on_v(x.v)
            cone.record(dst.V.positive(y), {"v": x.v})
            lhs = dst.V.hat(y)
            rhs = on_f(LAffPL.affine(src.hat(x))).pieces[0] if not src.is_zero(x) else lhs
            pair.record(tuple(lhs) == tuple(rhs), {"v": x.v})
    if src.V.unit is not None and dst.V.unit is not None:
        unit.record(on_v(src.V.unit) == dst.V.unit, {"unit": src.V.unit})
    rep = check_cu_morphism(phi, src, dst, budget=budget, seed=seed)
    rep.verdicts = [cone.verdict(), pair.verdict(), unit.verdict()] + rep.verdicts
    return phi, rep


def functoriality_check(a: WTildeModel, b: WTildeModel, c: WTildeModel, m1: EllMorphism,
                        m2: EllMorphism, budget: int = 40) -> Report:
    f1, _ = functor_f_morphism(a, b, m1, budget=8)
    f2, _ = functor_f_morphism(b, c, m2, budget=8)
    f21, _ = functor_f_morphism(a, c, m1.compose(m2), budget=8)
    ch = _Check("F(m2 m1) = F(m2) F(m1)")
    for x in _pool(a, budget):
        ch.record(c.eq(f21(x), f2(f1(x))), {"x": x})
    return Report("functor F", [ch.verdict()], {"budget": budget})


# ------------------------------------------------------------ interval models

@dataclass(frozen=True)
class Open:
    """[0, alpha) = {v : sigma(v) < alpha}; alpha may be inf (the whole monoid)."""
    alpha: object


@dataclass(frozen=True)
class Closed:
    """[0, v] = {w : w <= v}: the principal interval at v."""
    v: tuple


class IntervalModel(CuModel):
    """Countably generated intervals in a simply ordered monoid with a unique state.

    The monoid is the positive cone of a ``VModel`` with one pairing row
    ``sigma``; v <= w iff sigma(v) < sigma(w) or v = w.  With ``discrete``
    (sigma integer valued, e.g. N0) the bounded open intervals are principal.
    """

    def __init__(self, V: VModel, *, discrete: bool = False, name: str = "intervals",
                 open_label: str = "Real", closed_label: str = "Point", real_basis=None):
        if len(V.pairing) != 1:
            raise ConfigurationError("interval models need a single state")
        self.V = V
        self.discrete = discrete
        self.name = name
        self.open_label = open_label
        self.closed_label = closed_label
        self._real_basis = real_basis

    def sigma(self, v):
        return self.V.hat(v)[0]

    def _norm(self, x):
        if isinstance(x, Open) and self.discrete and not is_inf(x.alpha):
            n = x.alpha
            k = int(n) - 1 if n == int(n) else int(n)
            return Closed((Fraction(max(k, 0)),) + (Fraction(0),) * (self.V.dim - 1))
        return x

    def open(self, alpha):
        a = _fr(alpha)
        if not is_inf(a) and a <= 0:
            raise ValueError("[0, alpha) needs alpha > 0")
        return self._norm(Open(a))

    def closed(self, v):
        v = tuple(_fr(c) for c in v)
        if not self.V.positive(v):
            raise ValueError(f"{v} is not positive")
        return Closed(v)

    @property
    def zero(self):
        return Closed(self.V.zero)

    @property
    def unit(self):
        return Closed(self.V.unit)

    def value(self, x):
        return x.alpha if isinstance(x, Open) else self.sigma(x.v)

    def add(self, x, y):
        if isinstance(x, Closed) and isinstance(y, Closed):
            return Closed(self.V.add(x.v, y.v))
        return self._norm(Open(ext_add(self.value(x), self.value(y))))

    def leq(self, x, y) -> bool:
        """Containment of intervals."""
        if isinstance(x, Open) and isinstance(y, Open):
            return _ext_le(x.alpha, y.alpha)
        if isinstance(x, Open):
            return _ext_le(x.alpha, self.sigma(y.v))
        if isinstance(y, Open):
            return _ext_lt(self.sigma(x.v), y.alpha)
        return self.V.leq(x.v, y.v)

    def way_below(self, x, y) -> bool:
        if isinstance(x, Closed):
            return self.leq(x, y)
        if is_inf(x.alpha):
            return False
        if isinstance(y, Closed):
            return x.alpha <= self.sigma(y.v)
        return _ext_lt(x.alpha, y.alpha)

    def contains(self, interval, v) -> bool:
        """Membership of a monoid element in an interval."""
        return self.leq(Closed(tuple(_fr(c) for c in v)), interval)

    def basis(self):
        yield Open(INF)
        vs = self.V.basis()
        reals = self._real_basis() if self._real_basis else _default_reals()
        while True:
            produced = False
            for _ in range(2):
                v = next(vs, None)
                if v is not None:
                    produced = True
                    yield Closed(v)
            a = next(reals, None)
            if a is not None:
                x = self._norm(Open(a))
                produced = True
                yield x
            if not produced:
                return

    def rapid_sequence(self, x):
        if isinstance(x, Closed):
            return IncreasingSequence.constant(x)
        a = x.alpha
        if is_inf(a):
            return IncreasingSequence([self._norm(Open(Fraction(1)))],
                                      lambda i: self._norm(Open(Fraction(i + 1))), limit=x)
        return IncreasingSequence([Open(a / 2)], lambda i: Open(a * Fraction(i + 1, i + 2)), limit=x)

    def way_below_witnesses(self, x, k=8):
        if isinstance(x, Closed):
            return [x]
        seq = self.rapid_sequence(x)
        return seq.terms(k) + [seq.term(2**j) for j in range(4, 21)]

    # hooks used by the states and grothendieck checks
    def is_purely_positive(self, x) -> bool:
        return isinstance(x, Open)

    def is_bounded(self, x) -> bool:
        return not (isinstance(x, Open) and is_inf(x.alpha))

    def groth_value(self, x):
        return self.value(x)

    def divide(self, x, n: int):
        a = self.value(x)
        if is_inf(a):
            return Open(INF)
        return self._norm(Open(a * Fraction(2, 2 * n + 1)))

    def states(self):
        def s(x):
            return self.value(x)
        return [s]

    # embedding into W~
    def wtilde(self) -> WTildeModel:
        return WTildeModel(self.V, SimplexModel(("tau",)), name=f"W~({self.name})")

    def iota(self, x):
        if isinstance(x, Closed):
            return Proj(x.v)
        if is_inf(x.alpha):
            return INF
        return Fun(LAffPL.constant(x.alpha))

    def encode(self, x):
        if isinstance(x, Open):
            return {"open": encode_value(x.alpha)}
        return {"closed": [encode_value(c) for c in x.v]}

    def decode(self, obj):
        if "open" in obj:
            return self.open(decode_value(obj["open"]))
        return self.closed([decode_value(c) for c in obj["closed"]])

    def format(self, x):
        if isinstance(x, Open):
            return "∞" if is_inf(x.alpha) else f"{self.open_label}({format_value(x.alpha)})"
        if self.discrete:
            return format_value(x.v[0])
        return f"{self.closed_label}(" + ", ".join(format_value(c) for c in x.v) + ")"

    def parse(self, text):
        t = text.strip()
        if t in ("inf", "∞"):
            return Open(INF)
        for lbl, fn in ((self.open_label, self.open), ("Real", self.open), ("Open", self.open)):
            if t.startswith(lbl + "("):
                return fn(_fr(t[len(lbl) + 1:-1].strip()))
        for lbl in (self.closed_label, "Point", "Proj", "Closed"):
            if t.startswith(lbl + "("):
                parts = [_fr(c.strip()) for c in t[len(lbl) + 1:-1].split(",")]
                return self.closed(parts + [0] * (self.V.dim - len(parts)))
        if self.discrete:
            return self.closed([_fr(t)])
        raise ValueError(f"cannot parse {text!r}")

    def describe(self):
        return {"model": self.name, "V": self.V.describe(), "discrete": self.discrete}


def _default_reals():
    seen = set()
    for q in itertools.count(1):
        for p in range(1, 4 * q + 1):
            a = Fraction(p, q)
            if a not in seen:
                seen.add(a)
                yield a
        if q > 64:
            return


def interval_add(model: IntervalModel, i, j):
    return model.add(i, j)


def interval_leq(model: IntervalModel, i, j) -> bool:
    return model.leq(i, j)


def whk_model() -> IntervalModel:
    """Countably generated intervals in N0: {[0, n]} u {[0, inf)} = W(K)."""
    v = VModel(1, [(Fraction(1),)], unit=(1,), basis=lambda: ((Fraction(n),) for n in itertools.count()),
               name="N0")
    return IntervalModel(v, discrete=True, name="whk")


def goodearl_model(upsilon: Sequence[int] = (1, 2, 4, 8), alphas: Sequence[int] = (1, 1, 1),
                   ker_rank: int = 1) -> IntervalModel:
    """W(A) = R++ u W+ for a Goodearl algebra over a connected space."""
    ups = [int(u) for u in upsilon]

    def reals():
        seen = set()
        yield QuadraticNumber(0, 1, 2)
        for q in itertools.count(1):
            for p in range(1, 4 * q + 1):
                a = Fraction(p, q)
                if a not in seen:
                    seen.add(a)
                    yield a
            if q > 64:
                return
    return IntervalModel(goodearl_vmodel(ups, alphas, ker_rank), name="goodearl", real_basis=reals)


def rotation_model(theta=None) -> IntervalModel:
    """W(A_theta) = R++ u (Z + theta Z)+'."""
    theta = QuadraticNumber(-1, 1, 2) if theta is None else _fr(theta)
    v = rotation_vmodel(theta)

    def basis():
        yield (Fraction(0), Fraction(0))
        for r in itertools.count(1):
            for a, b in itertools.product(range(-r, r + 1), repeat=2):
                if max(abs(a), abs(b)) == r and v.positive((a, b)):
                    yield (Fraction(a), Fraction(b))
            if r > 30:
                return
    v._basis = basis

    def reals():
        for a in _default_reals():
            yield a
            yield a * theta if a <= 2 else a
    return IntervalModel(v, name="rotation", closed_label="Proj", real_basis=reals)


# ------------------------------------------------------------ Calkin

class _InfPrime:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF_PRIME"

    def __str__(self):
        return "∞'"

    def __reduce__(self):
        return (_InfPrime, ())


INF_PRIME = _InfPrime()


class CalkinModel(CuModel):
    """W(B(H)) = N0 u {inf} u {inf'} with inf + inf' = inf'; inf' is compact."""

    name = "calkin"

    @property
    def zero(self):
        return 0

    def _rank(self, x):
        return 2 if x is INF_PRIME else 1 if x is INF else 0

    def add(self, x, y):
        if x is INF_PRIME or y is INF_PRIME:
            return INF_PRIME
        return ext_add(x, y)

    def leq(self, x, y):
        rx, ry = self._rank(x), self._rank(y)
        if rx or ry:
            return rx <= ry
        return x <= y

    def way_below(self, x, y):
        if x is INF:
            return y is INF_PRIME
        return self.leq(x, y)

    def basis(self):
        yield 0
        yield INF
        yield INF_PRIME
        yield from itertools.count(1)

    def rapid_sequence(self, x):
        if x is INF:
            return IncreasingSequence([1], lambda i: i + 1, limit=INF)
        return IncreasingSequence.constant(x)

    def way_below_witnesses(self, x, k=8):
        if x is INF:
            return list(range(1, k + 1)) + [2**j for j in range(4, 21)]
        return [x]

    def encode(self, x):
        return "inf'" if x is INF_PRIME else encode_value(x)

    def decode(self, obj):
        return INF_PRIME if obj == "inf'" else decode_value(obj)

    def format(self, x):
        return str(x) if x is INF_PRIME else format_value(x)

    def parse(self, text):
        t = text.strip()
        if t in ("inf'", "∞'"):
            return INF_PRIME
        return ExtNatModel().parse(t)


# ------------------------------------------------------------ real rank zero intervals

def rr0_interval(a: SpectralElement) -> tuple:
    """I(a) in V(A) = N0^k for a matrix algebra: principal at the rank tuple of a."""
    return tuple(cuntz_class(a))


def rr0_embedding_check(elements: Sequence[SpectralElement], pairs: int = 50, seed: int = 0) -> Report:
    """<a> <= <b> iff I(a) is contained in I(b), on sampled pairs."""
    rng = random.Random(seed)
    ch = _Check("order embedding")
    for _ in range(pairs):
        a, b = rng.choice(elements), rng.choice(elements)
        ia, ib = rr0_interval(a), rr0_interval(b)
        contained = all(x <= y for x, y in zip(ia, ib))
        ch.record(cuntz_leq(a, b) == contained, {"a": a, "b": b})
    return Report("rr0 intervals", [ch.verdict()], {"pairs": pairs, "seed": seed})


# ------------------------------------------------------------ embedding check

def embedding_check(model: IntervalModel, pairs: int = 200, seed: int = 0,
                    budget: int = 120) -> Report:
    """iota : W(A) -> W~(A) reflects and preserves the order on sampled pairs."""
    wt = model.wtilde()
    pool = _pool(model, budget)
    rng = random.Random(seed)
    pre = _Check("strict comparison")
    for x in pool:
        if isinstance(x, Closed) and not all(c == 0 for c in x.v):
            f = model.open(model.sigma(x.v))
            # f <= [p] but not [p] <= f, in both models
            pre.record(model.leq(f, x) and not model.leq(x, f)
                       and wt.leq(model.iota(f), model.iota(x)) and not wt.leq(model.iota(x), model.iota(f)),
                       {"p": x})
    ch = _Check("iota order embedding")
    for _ in range(pairs):
        x, y = rng.choice(pool), rng.choice(pool)
        ch.record(model.leq(x, y) == wt.leq(model.iota(x), model.iota(y)), {"x": x, "y": y})
    add = _Check("iota additive")
    for _ in range(pairs // 4):
        x, y = rng.choice(pool), rng.choice(pool)
        add.record(wt.eq(model.iota(model.add(x, y)), wt.add(model.iota(x), model.iota(y))),
                   {"x": x, "y": y})
    return Report(model.name, [pre.verdict(), ch.verdict(), add.verdict()],
                  {"pairs": pairs, "seed": seed, "budget": budget})


def wtilde_boundary_check(wt: WTildeModel, budget: int = 40) -> Report:
    """Rule (iv) at the boundary: p^ vs Fun(p^) and Fun(p^ + eps)."""
    ch = _Check("rule (iv) boundary")
    for x in itertools.islice(wt.basis(), budget):
        if not isinstance(x, Proj) or wt.is_zero(x):
            continue
        h = wt.hat(x)
        if not all(v > 0 for v in h):
            continue
        f = Fun(LAffPL.affine(h))
        g = Fun(LAffPL.affine(h).shift(Fraction(1, 10)))
        ch.record(wt.leq(f, x) and not wt.leq(x, f) and wt.leq(x, g) and not wt.leq(g, x),
                  {"p": x})
    return Report(wt.name, [ch.verdict()], {"budget": budget})


# ------------------------------------------------------------ named demos

def demo_model(name: str, **kw) -> CuModel:
    if name == "goodearl":
        return goodearl_model(**kw)
    if name == "rotation":
        return rotation_model(kw.get("theta"))
    if name == "calkin":
        return CalkinModel()
    if name == "whk":
        return whk_model()
    if name == "uhf":
        from .limits import build_limit, uhf_system
        return build_limit(uhf_system(int(kw.get("n", 2))), horizon=64)
    raise ConfigurationError(f"unknown demo {name!r}; choose goodearl, rotation, calkin, whk or uhf")


DEMOS = ("goodearl", "rotation", "calkin", "whk", "uhf")


def demo_facts(name: str) -> list[tuple[str, bool]]:
    """The worked-example statements for a named demo, each with its exact check."""
    out = []
    if name == "goodearl":
        g = goodearl_model()
        r1, p = g.open(1), g.closed((1, 0))
        s1, s2 = g.add(r1, r1), g.add(r1, p)
        out.append((f"Real(1) + Real(1) = {g.format(s1)}", g.eq(s1, g.open(2))))
        out.append((f"Real(1) + Point(1, 0) = {g.format(s2)}", g.eq(s2, g.open(2))))
        out.append(("Real(1) != Point(1, 0)", not g.eq(r1, p)))
        out.append(("[0,1) + [0,1) = [0,1) + ([0,1) u {(1,0)}): non-cancellation", g.eq(s1, s2)))
        out.append(("Real(1) <= Point(1, 0) and not conversely", g.leq(r1, p) and not g.leq(p, r1)))
    elif name == "rotation":
        theta = QuadraticNumber(-1, 1, 2)
        r = rotation_model(theta)
        out.append(("theta = √2 - 1 lies in (0, 1)", 0 < theta < 1))
        out.append(("(1, -1): 1 - theta > 0, in the cone", r.V.positive((1, -1))))
        out.append(("(-1, 1): theta - 1 < 0, not in the cone", not r.V.positive((-1, 1))))
        out.append(("(0, 3) - (1, 0): 3 theta - 1 > 0", r.V.positive((-1, 3))))
        out.append(("(-3, 7): 7 theta - 3 < 0", not r.V.positive((-3, 7))))
        p = r.closed((0, 1))
        out.append(("Real(theta) <= Proj(theta), Proj(theta) not <= Real(theta)",
                    r.leq(r.open(theta), p) and not r.leq(p, r.open(theta))))
    elif name == "calkin":
        c = CalkinModel()
        out.append(("∞ + ∞' = ∞'", c.add(INF, INF_PRIME) is INF_PRIME))
        out.append(("5 + ∞ = ∞", c.add(5, INF) is INF))
        out.append(("5 + ∞' = ∞'", c.add(5, INF_PRIME) is INF_PRIME))
        out.append(("∞ <= ∞' and ∞' not <= ∞", c.leq(INF, INF_PRIME) and not c.leq(INF_PRIME, INF)))
        out.append(("∞' is compact, ∞ is not", c.way_below(INF_PRIME, INF_PRIME) and not c.way_below(INF, INF)))
    elif name == "whk":
        w = whk_model()
        elems = list(itertools.islice(w.basis(), 12))
        out.append(("every sampled interval is [0, n] or [0, ∞)",
                    all(isinstance(x, Closed) or is_inf(x.alpha) for x in elems)))
        out.append(("[0, 5/2) = [0, 2]", w.eq(w.open(Fraction(5, 2)), w.closed((2,)))))
        out.append(("[0, 2] + [0, 3] = [0, 5]", w.eq(w.add(w.closed((2,)), w.closed((3,))), w.closed((5,)))))
        out.append(("[0, n] + [0, ∞) = [0, ∞)", w.eq(w.add(w.closed((4,)), w.open(INF)), w.open(INF))))
    elif name == "uhf":
        from .limits import build_limit, dyadic_value, eta, soft_element, uhf_system, value_leq
        s = uhf_system(2)
        m = build_limit(s, horizon=64)
        one, half = eta(s, 1, (1,)), eta(s, 2, (1,))
        out.append(("eta_1(1) ~ eta_2(2)", m.eq(one, eta(s, 2, (2,)))))
        out.append(("eta_2(1) + eta_2(1) = eta_1(1)", m.eq(m.add(half, half), one)))
        soft = soft_element(s, 1)
        out.append(("soft(1) <= eta_1(1), not conversely", m.leq(soft, one) and not m.leq(one, soft)))
        out.append(("order agrees with the dyadic oracle on the first 30 basis pairs",
                    all(m.leq(a, b) == value_leq(dyadic_value(a), dyadic_value(b))
                        for a in itertools.islice(m.basis(), 30) for b in itertools.islice(m.basis(), 6))))
    else:
        raise ConfigurationError(f"unknown demo {name!r}; choose {', '.join(DEMOS)}")
    return out
