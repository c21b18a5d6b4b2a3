"""The CuModel interface, increasing sequences, basic models and the
sampling harness for the axioms O1-O6 and the morphism properties M1-M4.
"""
from __future__ import annotations

import itertools
import json
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional, Sequence

from .values import INF, decode_value, encode_value, ext_add, extnat, format_value, scalar


class ConfigurationError(ValueError):
    """Raised when a check cannot even be set up (empty basis, undefined map, ...)."""


class UndecidedError(RuntimeError):
    """Raised by models whose order test was inconclusive within its bounds."""


# indices probed when a sequence has an infinite tail
def probe_indices(horizon: int = 32, exp_max: int = 40) -> list[int]:
    idx = set(range(horizon))
    idx.update(2**k for k in range(exp_max + 1))
    return sorted(idx)


class IncreasingSequence:
    """An increasing sequence ``x_0 <= x_1 <= ...`` in some model.

    Either the sequence is eventually constant (``tail`` is None, the last
    prefix term repeats forever), or ``tail(i)`` gives term ``i`` for
    ``i >= len(prefix)`` and ``limit`` records its supremum in closed form.
    """

    def __init__(self, prefix: Sequence = (), tail: Optional[Callable[[int], Any]] = None,
                 limit: Any = None, name: str = "", max_index: Optional[int] = None):
        if not prefix and tail is None:
            raise ValueError("an increasing sequence needs at least one term")
        if tail is not None and limit is None:
            raise ValueError("a sequence with an infinite tail needs a declared limit")
        self.prefix = tuple(prefix)
        self.tail = tail
        self.limit = limit
        self.name = name
        # terms beyond max_index are too costly to evaluate; probing stops there
        self.max_index = max_index

    @classmethod
    def constant(cls, x) -> IncreasingSequence:
        return cls([x])

    @property
    def eventually_constant(self) -> bool:
        return self.tail is None

    def term(self, i: int):
        if i < len(self.prefix):
            return self.prefix[i]
        if self.tail is None:
            return self.prefix[-1]
        return self.tail(i)

    def terms(self, n: int) -> list:
        return [self.term(i) for i in range(n)]

    def probe(self, horizon: int = 32) -> list:
        """Terms at the probe indices (all terms, if eventually constant)."""
        if self.tail is None:
            return list(self.prefix)
        idx = probe_indices(horizon)
        if self.max_index is not None:
            idx = [i for i in idx if i <= self.max_index]
        return [self.term(i) for i in idx]

    def map(self, f: Callable, limit: Any = None) -> IncreasingSequence:
        pre = [f(x) for x in self.prefix]
        if self.tail is None:
            return IncreasingSequence(pre)
        tail = self.tail
        return IncreasingSequence(pre, lambda i: f(tail(i)), limit=limit, max_index=self.max_index)

    def __repr__(self):
        kind = "const" if self.tail is None else "tail"
        return f"IncreasingSequence({kind}, prefix={list(self.prefix)[:4]}..., limit={self.limit!r})"


def add_sequences(model: CuModel, s: IncreasingSequence, t: IncreasingSequence) -> IncreasingSequence:
    """Termwise sum; the declared limit is ``sup s + sup t`` (checked, not assumed, by O5)."""
    n = max(len(s.prefix), len(t.prefix))
    pre = [model.add(s.term(i), t.term(i)) for i in range(n)]
    if s.tail is None and t.tail is None:
        return IncreasingSequence(pre)
    caps = [c for c in (s.max_index, t.max_index) if c is not None]
    return IncreasingSequence(pre, lambda i: model.add(s.term(i), t.term(i)),
                              limit=model.add(model.sup(s), model.sup(t)),
                              max_index=min(caps) if caps else None)


class CuModel(ABC):
    """Abstract ordered semigroup presented operationally.

    Nothing about the axioms is assumed: ``check_cu_axioms`` tests them.
    """

    name: str = "model"

    @property
    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def add(self, x, y): ...

    @abstractmethod
    def leq(self, x, y) -> bool: ...

    @abstractmethod
    def way_below(self, x, y) -> bool: ...

    @abstractmethod
    def basis(self) -> Iterator:
        """Countable enumeration of elements, intended to be way-below dense."""

    def eq(self, x, y) -> bool:
        return self.leq(x, y) and self.leq(y, x)

    def mul(self, n: int, x):
        """n-fold sum ``x + ... + x`` (``0`` for n = 0)."""
        out = self.zero
        for _ in range(n):
            out = self.add(out, x)
        return out

    def sup(self, seq: IncreasingSequence):
        if seq.tail is None:
            return seq.prefix[-1]
        return seq.limit

    def rapid_sequence(self, x) -> IncreasingSequence:
        """A rapidly increasing sequence with supremum ``x`` (O4 data)."""
        raise NotImplementedError(f"{self.name} exposes no O4 data")

    def way_below_witnesses(self, x, k: int = 8) -> list:
        """Elements way below ``x``, cofinal among them in the sense that any
        ``y << x`` is dominated by one of them (for k large enough)."""
        seq = self.rapid_sequence(x)
        out = seq.terms(k)
        if seq.tail is not None:
            out += [seq.term(2**j) for j in range(4, 21)]
        if self.way_below(x, x):
            out.append(x)
        return out

    def sample_sequences(self, rng: random.Random, pool: list, count: int) -> list[IncreasingSequence]:
        """Increasing sequences used by the O3/O5 checks."""
        out = []
        for x in rng.sample(pool, min(count, len(pool))):
            try:
                out.append(self.rapid_sequence(x))
            except NotImplementedError:
                break
        for _ in range(count):
            k = rng.randint(1, 4)
            parts = [rng.choice(pool) for _ in range(k)]
            terms = [parts[0]]
            for p in parts[1:]:
                terms.append(self.add(terms[-1], p))
            if all(self.leq(a, b) for a, b in zip(terms, terms[1:])):
                out.append(IncreasingSequence(terms))
        return out

    def encode(self, x) -> Any:
        return encode_value(x)

    def decode(self, obj):
        return decode_value(obj)

    def format(self, x) -> str:
        return format_value(x)

    def parse(self, text: str):
        return self.decode(json.loads(text)) if text.strip().startswith(("{", "[", '"')) else scalar(text)

    def describe(self) -> dict:
        return {"model": self.name}


# ---------------------------------------------------------------- models

class ExtNatModel(CuModel):
    """The semigroup N0 u {inf} with its usual order."""

    name = "extnat"

    @property
    def zero(self):
        return 0

    def add(self, x, y):
        return ext_add(x, y)

    def leq(self, x, y):
        return x <= y if x is not INF else y is INF

    def way_below(self, x, y):
        return extnat_way_below(x, y)

    def basis(self):
        yield 0
        yield INF
        yield from itertools.count(1)

    def rapid_sequence(self, x):
        if x is INF:
            return IncreasingSequence([1], lambda i: i + 1, limit=INF)
        return IncreasingSequence.constant(x)

    def way_below_witnesses(self, x, k=8):
        if x is INF:
            return list(range(1, k + 1)) + [2**j for j in range(4, 21)]
        return [x]

    def states(self):
        """The normalised state at the order unit 1 is the identity."""
        return [lambda x: x]

    def parse(self, text):
        return extnat(text)

    def decode(self, obj):
        return extnat(obj)


def extnat_way_below(x, y) -> bool:
    """``x << y`` in N0 u {inf}: x finite and x <= y."""
    return x is not INF and (y is INF or x <= y)


class TwoPointModel(CuModel):
    """{0, inf}: the Cuntz semigroup of a purely infinite simple algebra."""

    name = "twopoint"

    @property
    def zero(self):
        return 0

    def add(self, x, y):
        return INF if (x is INF or y is INF) else 0

    def leq(self, x, y):
        return x == 0 or y is INF

    def way_below(self, x, y):
        # every increasing sequence here is eventually constant, so both
        # elements are compact
        return self.leq(x, y)

    def basis(self):
        yield 0
        yield INF

    def rapid_sequence(self, x):
        return IncreasingSequence.constant(x)

    def parse(self, text):
        v = extnat(text)
        if v not in (0, INF):
            raise ValueError("two-point model has elements 0 and inf only")
        return v

    def decode(self, obj):
        return self.parse(str(obj))


class NumericalSemigroupModel(ExtNatModel):
    """A submonoid of N0 generated by ``generators``, together with inf."""

    name = "numerical"

    def __init__(self, generators: Sequence[int]):
        gens = sorted(set(int(g) for g in generators if int(g) > 0))
        if not gens:
            raise ConfigurationError("need at least one positive generator")
        self.generators = gens
        self._members = self._closure(4096)

    def _closure(self, limit):
        ok = [False] * (limit + 1)
        ok[0] = True
        for n in range(1, limit + 1):
            ok[n] = any(n >= g and ok[n - g] for g in self.generators)
        return ok

    def contains(self, x) -> bool:
        if x is INF:
            return True
        if x < len(self._members):
            return self._members[x]
        return any(self.contains(x - g) for g in self.generators if x >= g)

    def basis(self):
        yield 0
        yield INF
        for n in itertools.count(1):
            if self.contains(n):
                yield n

    def rapid_sequence(self, x):
        if x is INF:
            g = self.generators[0]
            return IncreasingSequence([g], lambda i: (i + 1) * g, limit=INF)
        return IncreasingSequence.constant(x)

    def way_below_witnesses(self, x, k=8):
        if x is INF:
            g = self.generators[0]
            return [g * i for i in range(1, k + 1)] + [g * 2**j for j in range(4, 21)]
        return [x]

    def parse(self, text):
        v = extnat(text)
        if not self.contains(v):
            raise ValueError(f"{v} is not in the semigroup generated by {self.generators}")
        return v

    def describe(self):
        return {"model": self.name, "generators": self.generators}


class ScalarModel(CuModel):
    """[0, inf] with exact nonnegative scalars; ``x << y`` iff x = 0 or x < y.

    ``radicand`` optionally fixes the quadratic extension used in samples.
    """

    name = "scalar"

    def __init__(self, radicand: Optional[int] = None):
        self.radicand = radicand

    @property
    def zero(self):
        from fractions import Fraction
        return Fraction(0)

    def add(self, x, y):
        return ext_add(x, y)

    def leq(self, x, y):
        if x is INF:
            return y is INF
        return y is INF or x <= y

    def way_below(self, x, y):
        if x is INF:
            return False
        return x == 0 or y is INF or x < y

    def basis(self):
        from fractions import Fraction
        from .values import QuadraticNumber
        yield Fraction(0)
        yield INF
        for q in itertools.count(1):
            for p in range(1, 4 * q + 1):
                f = Fraction(p, q)
                if f.denominator == q:
                    yield f
                    if self.radicand and p <= 2 * q:
                        yield QuadraticNumber(0, f, self.radicand)

    def rapid_sequence(self, x):
        from fractions import Fraction
        if x == 0:
            return IncreasingSequence.constant(x)
        if x is INF:
            return IncreasingSequence([Fraction(1)], lambda i: Fraction(i + 1), limit=INF)
        return IncreasingSequence([x / 2], lambda i: x - x / (i + 2), limit=x)

    def way_below_witnesses(self, x, k=8):
        if x == 0:
            return [x]
        seq = self.rapid_sequence(x)
        return seq.terms(k) + [seq.term(2**j) for j in range(4, 21)]

    def describe(self):
        return {"model": self.name, "radicand": self.radicand}


class ProductModel(CuModel):
    """Finite product of models with coordinatewise operations (elements are tuples)."""

    def __init__(self, factors: Sequence[CuModel]):
        if not factors:
            raise ConfigurationError("empty product")
        self.factors = tuple(factors)
        self.name = "product(" + ",".join(f.name for f in factors) + ")"

    @property
    def zero(self):
        return tuple(f.zero for f in self.factors)

    def add(self, x, y):
        return tuple(f.add(a, b) for f, a, b in zip(self.factors, x, y))

    def leq(self, x, y):
        return all(f.leq(a, b) for f, a, b in zip(self.factors, x, y))

    def way_below(self, x, y):
        return all(f.way_below(a, b) for f, a, b in zip(self.factors, x, y))

    def basis(self):
        # diagonal enumeration: all tuples whose largest factor index is `level`
        caches = [[] for _ in self.factors]
        gens = [f.basis() for f in self.factors]
        for level in itertools.count(0):
            grew = False
            for c, g in zip(caches, gens):
                if len(c) == level:
                    try:
                        c.append(next(g))
                        grew = True
                    except StopIteration:
                        pass
            if not grew:
                return
            for idx in itertools.product(*[range(len(c)) for c in caches]):
                if max(idx) == level:
                    yield tuple(c[i] for c, i in zip(caches, idx))

    def rapid_sequence(self, x):
        seqs = [f.rapid_sequence(a) for f, a in zip(self.factors, x)]
        n = max(len(s.prefix) for s in seqs)
        pre = [tuple(s.term(i) for s in seqs) for i in range(n)]
        if all(s.tail is None for s in seqs):
            return IncreasingSequence(pre)
        return IncreasingSequence(pre, lambda i: tuple(s.term(i) for s in seqs), limit=tuple(x))

    def way_below_witnesses(self, x, k=8):
        seq = self.rapid_sequence(x)
        out = seq.terms(k)
        if seq.tail is not None:
            out += [seq.term(2**j) for j in range(4, 21)]
        if self.way_below(x, x):
            out.append(tuple(x))
        return out

    def encode(self, x):
        return [f.encode(a) for f, a in zip(self.factors, x)]

    def decode(self, obj):
        return tuple(f.decode(a) for f, a in zip(self.factors, obj))

    def format(self, x):
        return "(" + ", ".join(f.format(a) for f, a in zip(self.factors, x)) + ")"

    def parse(self, text):
        parts = [p for p in text.strip().strip("()").split(",") if p.strip()]
        return tuple(f.parse(p) for f, p in zip(self.factors, parts))

    def describe(self):
        return {"model": "product", "factors": [f.describe() for f in self.factors]}


def rank_tuple_model(k: int) -> ProductModel:
    """(N0 u {inf})^k: the Cuntz semigroup of a stabilised k-block algebra."""
    m = ProductModel([ExtNatModel() for _ in range(k)])
    m.name = f"ranks{k}"
    return m


# ---------------------------------------------------------------- reports

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class Verdict:
    axiom: str
    verdict: str
    witness: Any = None
    checked: int = 0
    note: str = ""

    def to_json(self, model: Optional[CuModel] = None) -> dict:
        return {"axiom": self.axiom, "verdict": self.verdict,
                "witness": _encode_witness(self.witness, model), "checked": self.checked,
                "note": self.note}


def _encode_witness(w, model):
    if w is None:
        return None
    if isinstance(w, dict):
        return {k: _encode_witness(v, model) for k, v in w.items()}
    if isinstance(w, (list, tuple)) and not (model is not None and _is_element(model, w)):
        return [_encode_witness(v, model) for v in w]
    if isinstance(w, (str, bool)) or (isinstance(w, int) and not isinstance(w, bool)):
        return w
    try:
        if model is not None:
            return model.encode(w)
        return encode_value(w)
    except Exception:
        return repr(w)


def _is_element(model, w):
    return isinstance(model, ProductModel) and len(w) == len(model.factors)


@dataclass
class Report:
    subject: str
    verdicts: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __getitem__(self, key: str) -> Verdict:
        for v in self.verdicts:
            if v.axiom == key:
                return v
        raise KeyError(key)

    @property
    def passed(self) -> bool:
        return all(v.verdict == PASS for v in self.verdicts)

    @property
    def failures(self) -> list:
        return [v for v in self.verdicts if v.verdict == FAIL]

    def to_json(self, model: Optional[CuModel] = None) -> dict:
        return {"subject": self.subject, "config": self.config,
                "verdicts": [v.to_json(model) for v in self.verdicts]}


AxiomReport = Report
MorphismReport = Report


class _Check:
    """Accumulates evidence for one property; the first failure wins."""

    def __init__(self, name):
        self.name = name
        self.count = 0
        self.witness = None
        self.failed = False
        self.undecided = None

    def record(self, ok, witness):
        if self.failed:
            return
        self.count += 1
        if ok is None:
            if self.undecided is None:
                self.undecided = witness
        elif not ok:
            self.failed = True
            self.witness = witness

    def verdict(self, note="") -> Verdict:
        if self.failed:
            return Verdict(self.name, FAIL, self.witness, self.count, note)
        if self.undecided is not None:
            return Verdict(self.name, INCONCLUSIVE, self.undecided, self.count, note)
        if self.count == 0:
            return Verdict(self.name, INCONCLUSIVE, None, 0, "no instances sampled")
        return Verdict(self.name, PASS, None, self.count, note)


def _safe(fn, *args):
    try:
        return fn(*args)
    except UndecidedError:
        return None


def _pool(model: CuModel, budget: int) -> list:
    pool = list(itertools.islice(model.basis(), budget))
    if not pool:
        raise ConfigurationError(f"basis of {model.name} is empty")
    return pool


def _upper_bound_of(model, seq, u, horizon):
    """True if ``u`` dominates every probed term of ``seq``."""
    for t in seq.probe(horizon):
        r = _safe(model.leq, t, u)
        if not r:
            return r
    return True


def check_cu_axioms(model: CuModel, budget: int = 200, seed: int = 0,
                    horizon: int = 32) -> Report:
    """Sample-based verification of O1-O6 on ``model``."""
    if budget <= 0:
        raise ConfigurationError("budget must be positive")
    rng = random.Random(seed)
    pool = _pool(model, budget)
    z = model.zero
    npairs = budget

    def pairs(k):
        return [tuple(rng.choice(pool) for _ in range(k)) for _ in range(npairs)]

    # O1: zero is neutral
    o1 = _Check("O1")
    for x in pool:
        o1.record(_safe(model.eq, model.add(z, x), x) and _safe(model.eq, model.add(x, z), x),
                  {"x": x})

    # O2: ordered abelian semigroup, order compatible with addition
    o2 = _Check("O2")
    for x, y in pairs(2):
        o2.record(_safe(model.eq, model.add(x, y), model.add(y, x)),
                  {"x": x, "y": y, "reason": "x + y != y + x"})
    for x, y, w in pairs(3):
        o2.record(_safe(model.eq, model.add(model.add(x, y), w), model.add(x, model.add(y, w))),
                  {"x": x, "y": y, "z": w, "reason": "addition not associative"})
    for x in pool[: max(1, budget // 4)]:
        o2.record(_safe(model.leq, x, x), {"x": x, "reason": "not reflexive"})
    for x, y, w in pairs(3):
        a, b = _safe(model.leq, x, y), _safe(model.leq, y, w)
        if a and b:
            o2.record(_safe(model.leq, x, w), {"x": x, "y": y, "z": w, "reason": "not transitive"})
    for x1, y1, x2, y2 in pairs(4):
        # bias toward comparable pairs
        if not _safe(model.leq, x1, y1):
            x1, y1 = y1, x1
        if not _safe(model.leq, x2, y2):
            x2, y2 = y2, x2
        if _safe(model.leq, x1, y1) and _safe(model.leq, x2, y2):
            o2.record(_safe(model.leq, model.add(x1, x2), model.add(y1, y2)),
                      {"x1": x1, "y1": y1, "x2": x2, "y2": y2, "reason": "addition not monotone"})

    seqs = model.sample_sequences(rng, pool, max(4, budget // 10))

    # O3: suprema of sampled increasing sequences
    o3 = _Check("O3")
    for seq in seqs:
        try:
            s = model.sup(seq)
        except Exception as exc:  # noqa: BLE001 - any failure to produce a sup is evidence
            o3.record(False, {"sequence": seq.terms(3), "reason": f"no supremum: {exc}"})
            continue
        for t in seq.probe(horizon):
            o3.record(_safe(model.leq, t, s), {"term": t, "sup": s, "reason": "sup below a term"})
        for u in rng.sample(pool, min(len(pool), 20)):
            if _upper_bound_of(model, seq, u, horizon):
                o3.record(_safe(model.leq, s, u), {"sup": s, "upper": u, "reason": "sup not least"})

    # O4: rapidly increasing approximations and directedness of x^<<
    o4 = _Check("O4")
    for x in rng.sample(pool, min(len(pool), max(8, budget // 4))):
        try:
            seq = model.rapid_sequence(x)
        except NotImplementedError:
            o4.record(None, {"x": x, "reason": "no O4 data"})
            continue
        terms = seq.terms(8)
        for a, b in zip(terms, terms[1:]):
            o4.record(_safe(model.way_below, a, b), {"x": x, "terms": (a, b), "reason": "not rapid"})
        for a in terms:
            o4.record(_safe(model.way_below, a, x), {"x": x, "term": a, "reason": "term not << x"})
        o4.record(_safe(model.eq, model.sup(seq), x), {"x": x, "reason": "sup of O4 sequence != x"})
        # directedness: two elements way below x are dominated by a common term
        below = [y for y in rng.sample(pool, min(len(pool), 12)) if _safe(model.way_below, y, x)]
        for y1, y2 in zip(below, below[1:]):
            found = None
            for t in seq.probe(horizon):
                if _safe(model.leq, y1, t) and _safe(model.leq, y2, t):
                    found = t
                    break
            o4.record(found is not None if seq.tail is not None or found is not None else False,
                      {"x": x, "y1": y1, "y2": y2, "reason": "x^<< not directed"})
    # << implies <=, and << is stable under <= on either side
    for x, y, w in pairs(3):
        if _safe(model.way_below, x, y):
            o4.record(_safe(model.leq, x, y), {"x": x, "y": y, "reason": "x << y but not x <= y"})
            if _safe(model.leq, y, w):
                o4.record(_safe(model.way_below, x, w), {"x": x, "y": y, "z": w,
                                                          "reason": "x << y <= z but not x << z"})
        if _safe(model.leq, x, y) and _safe(model.way_below, y, w):
            o4.record(_safe(model.way_below, x, w), {"x": x, "y": y, "z": w,
                                                      "reason": "x <= y << z but not x << z"})
    # the defining property of << against sampled sequences
    for seq in seqs:
        s = model.sup(seq)
        for y in rng.sample(pool, min(len(pool), 10)):
            if _safe(model.way_below, y, s):
                hit = any(_safe(model.leq, y, t) for t in seq.probe(horizon))
                o4.record(hit if (hit or seq.tail is None) else None,
                          {"x": y, "sup": s, "reason": "x << sup but no term dominates x"})

    # O5: sup and << compatible with addition
    o5 = _Check("O5")
    for s1, s2 in zip(seqs, seqs[1:] + seqs[:1]):
        tot = add_sequences(model, s1, s2)
        s = model.add(model.sup(s1), model.sup(s2))
        for t in tot.probe(horizon):
            o5.record(_safe(model.leq, t, s), {"term": t, "sum_of_sups": s,
                                                "reason": "sum of sups below a term"})
        for u in rng.sample(pool, min(len(pool), 12)):
            if _upper_bound_of(model, tot, u, horizon):
                o5.record(_safe(model.leq, s, u), {"sum_of_sups": s, "upper": u,
                                                    "reason": "sum of sups not least"})
    for x1, y1, x2, y2 in pairs(4):
        if _safe(model.way_below, x1, y1) and _safe(model.way_below, x2, y2):
            o5.record(_safe(model.way_below, model.add(x1, x2), model.add(y1, y2)),
                      {"x1": x1, "y1": y1, "x2": x2, "y2": y2, "reason": "<< not additive"})

    # O6: positivity
    o6 = _Check("O6")
    for x in pool:
        o6.record(_safe(model.leq, z, x), {"x": x, "reason": "0 not below x"})

    report = Report(model.name, [c.verdict() for c in (o1, o2, o3, o4, o5, o6)],
                    {"budget": budget, "seed": seed, "horizon": horizon})
    return report


def check_cu_morphism(f: Callable, dom: CuModel, cod: CuModel, budget: int = 200,
                      seed: int = 0, horizon: int = 32) -> Report:
    """Sample-based verification that ``f`` is a Cu-morphism ``dom -> cod``."""
    rng = random.Random(seed)
    pool = _pool(dom, budget)
    images = {}

    def F(x):
        key = _key(dom, x)
        if key not in images:
            try:
                images[key] = f(x)
            except Exception as exc:  # noqa: BLE001
                raise ConfigurationError(f"map undefined at {dom.format(x)}: {exc}") from exc
        return images[key]

    for x in pool:
        F(x)

    add_c = _Check("additive")
    for _ in range(budget):
        x, y = rng.choice(pool), rng.choice(pool)
        add_c.record(_safe(cod.eq, F(dom.add(x, y)), cod.add(F(x), F(y))),
                     {"x": x, "y": y, "reason": "f(x + y) != f(x) + f(y)"})
    m1 = _Check("M1")
    m1.record(_safe(cod.eq, F(dom.zero), cod.zero), {"reason": "f(0) != 0"})
    m2 = _Check("M2")
    m4 = _Check("M4")
    for _ in range(budget):
        x, y = rng.choice(pool), rng.choice(pool)
        if _safe(dom.leq, x, y):
            m2.record(_safe(cod.leq, F(x), F(y)), {"x": x, "y": y, "reason": "order not preserved"})
        if _safe(dom.way_below, x, y):
            m4.record(_safe(cod.way_below, F(x), F(y)), {"x": x, "y": y,
                                                          "reason": "<< not preserved"})
    m3 = _Check("M3")
    cpool = _pool(cod, min(budget, 60))
    for seq in dom.sample_sequences(rng, pool, max(4, budget // 10)):
        s = F(dom.sup(seq))
        img = [F(t) for t in seq.probe(horizon)]
        for t in img:
            m3.record(_safe(cod.leq, t, s), {"sequence": seq.terms(3), "reason": "f(sup) below f(term)"})
        for u in rng.sample(cpool, min(len(cpool), 12)):
            if all(_safe(cod.leq, t, u) for t in img):
                m3.record(_safe(cod.leq, s, u), {"sequence": seq.terms(3), "upper": u,
                                                  "reason": "f(sup) not the sup of the images"})
    # witnesses are reported in the domain encoding
    return Report(f"{dom.name}->{cod.name}", [c.verdict() for c in (add_c, m1, m2, m3, m4)],
                  {"budget": budget, "seed": seed, "horizon": horizon})


def _key(model, x):
    try:
        hash(x)
        return x
    except TypeError:
        return json.dumps(model.encode(x), sort_keys=True)


def sample_pairs(model: CuModel, count: int, seed: int = 0, budget: int = 200) -> list[tuple]:
    rng = random.Random(seed)
    pool = _pool(model, budget)
    return [(rng.choice(pool), rng.choice(pool)) for _ in range(count)]


def report_json(report: Report, model: Optional[CuModel] = None) -> str:
    return json.dumps(report.to_json(model), sort_keys=True, ensure_ascii=False)
