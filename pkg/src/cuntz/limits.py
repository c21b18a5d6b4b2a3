"""Inductive limits in Cu, built explicitly from sequences across stages.

An element of the limit is an increasing sequence ``(s_i)`` with ``s_i`` in
stage i and ``gamma_i(s_i) <= s_{i+1}``.  ``s <= t`` means: for every i and
every ``s' << s_i`` we have ``gamma_{i,j}(s') << t_j`` for all large j.  Since
"all large j" cannot be checked, comparisons look ahead to a horizon and
answer ``True``, ``False`` or ``None`` (unknown), and every refutation names
the certificate it used.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .core import (ConfigurationError, CuModel, ExtNatModel, IncreasingSequence, Report,
                   UndecidedError, _Check, check_cu_morphism, rank_tuple_model)
from .values import INF, QuadraticNumber, ext_add, ext_mul, is_inf


class CompatibilityError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _le(a, b) -> bool:
    if is_inf(b):
        return True
    if is_inf(a):
        return False
    return a <= b


def _lt(a, b) -> bool:
    if is_inf(a):
        return False
    return is_inf(b) or a < b


# ------------------------------------------------------------ systems

class CuSystem:
    """An inductive sequence S_1 -> S_2 -> ... in Cu.

    ``stage(i)`` returns the model S_i and ``gamma(i, x)`` maps S_i to S_{i+1}.
    ``states`` maps a name to a compatible family ``sigma(j, x)`` (so that
    sigma(j+1, gamma(j, x)) = sigma(j, x)); such families certify refutations.
    ``order_embedding`` declares every gamma_i an order embedding.
    """

    def __init__(self, stage: Callable[[int], CuModel], gamma: Callable[[int, object], object], *,
                 states: Optional[dict] = None, order_embedding: bool = False,
                 extra_basis: Optional[Callable[["LimitModel"], Iterable]] = None,
                 name: str = "system", spec: Optional[dict] = None):
        self._stage = stage
        self._gamma = gamma
        self.states = dict(states or {})
        self.order_embedding = order_embedding
        self.extra_basis = extra_basis
        self.name = name
        self.spec = spec or {"name": name}
        self._stages: dict[int, CuModel] = {}

    def stage(self, i: int) -> CuModel:
        if i not in self._stages:
            self._stages[i] = self._stage(i)
        return self._stages[i]

    def gamma(self, i: int, x):
        return self._gamma(i, x)

    def gamma_ij(self, i: int, j: int, x):
        for k in range(i, j):
            x = self._gamma(k, x)
        return x

    def validate(self, stages: int = 3, budget: int = 40, seed: int = 0) -> list[Report]:
        out = []
        for i in range(1, stages + 1):
            rep = check_cu_morphism(lambda x, i=i: self.gamma(i, x), self.stage(i), self.stage(i + 1),
                                    budget=budget, seed=seed)
            if rep.failures:
                raise ConfigurationError(f"connecting map gamma_{i} is not a Cu-morphism: "
                                         f"{rep.failures[0].axiom} {rep.failures[0].witness}")
            out.append(rep)
        return out


def _matvec_ext(m, x):
    out = []
    for row in m:
        acc = 0
        for c, v in zip(row, x):
            acc = ext_add(acc, ext_mul(c, v))
        out.append(acc)
    return tuple(out)


def af_system(matrices: Sequence[Sequence[Sequence[int]]], *, name: str = "af",
              states: Optional[dict] = None, extra_basis=None) -> CuSystem:
    """AF system: stage i is (N0 u {inf})^{k_i}, gamma_i(x) = M_i x, last matrix repeated."""
    mats = [[list(map(int, r)) for r in m] for m in matrices]
    if not mats:
        raise ConfigurationError("need at least one multiplicity matrix")
    for m in mats:
        if not m or any(len(r) != len(m[0]) for r in m) or any(c < 0 for r in m for c in r):
            raise ConfigurationError("multiplicity matrices must be rectangular and nonnegative")
    for a, b in zip(mats, mats[1:]):
        if len(a) != len(b[0]):
            raise ConfigurationError(f"incompatible sizes: {len(a)} rows feed {len(b[0])} columns")
    if len(mats[-1]) != len(mats[-1][0]):
        raise ConfigurationError("the repeated last matrix must be square")

    def mat(i):
        return mats[min(i, len(mats)) - 1]

    def stage(i):
        return rank_tuple_model(len(mat(i)[0]))

    def gamma(i, x):
        return _matvec_ext(mat(i), x)

    inj = all(_injective(m) for m in mats)
    emb = all(_is_permutation_like(m) for m in mats)
    return CuSystem(stage, gamma, states=states, order_embedding=emb, extra_basis=extra_basis,
                    name=name, spec={"name": name, "matrices": mats, "injective": inj})


def _injective(m) -> bool:
    from .lp import rank
    return len(m) >= len(m[0]) and rank(m) == len(m[0])


def _is_permutation_like(m) -> bool:
    # x -> Mx reflects the coordinatewise order iff every column has a private
    # nonzero row, e.g. the identity or [[2]]
    cols = len(m[0])
    return all(any(m[r][c] > 0 and all(m[r][k] == 0 for k in range(cols) if k != c)
                   for r in range(len(m))) for c in range(cols))


# ------------------------------------------------------------ elements

_counter = itertools.count()


class LimitElement:
    """An increasing sequence across stages.

    ``kind`` is ``eta`` for eta_m(w) (zero before stage m, gamma images of w
    after), ``rapid`` when s_i << s_{i+1} has been certified on stored
    indices, and ``general`` otherwise.  ``sup_values`` optionally records,
    per state name, ``(L, strict)``: the supremum of sigma_j(s_j) and whether
    it is never attained.
    """

    def __init__(self, system: CuSystem, term: Callable[[int], object], *, kind: str = "general",
                 key=None, eta: Optional[tuple] = None, sup_values: Optional[dict] = None,
                 label: str = ""):
        self.system = system
        self._term = term
        self._memo: dict[int, object] = {}
        self.kind = kind
        self.eta = eta
        self.sup_values = dict(sup_values or {})
        self.key = key if key is not None else ("anon", next(_counter))
        self.label = label

    def term(self, i: int):
        if i not in self._memo:
            self._memo[i] = self._term(i)
        return self._memo[i]

    def terms(self, n: int, start: int = 1) -> list:
        return [self.term(i) for i in range(start, start + n)]

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, LimitElement) and self.key == other.key

    def __repr__(self):
        if self.label:
            return f"LimitElement({self.label})"
        return f"LimitElement({self.kind}, {self.terms(4)}...)"


def eta(system: CuSystem, m: int, w) -> LimitElement:
    """The canonical image eta_m(w) of an element of stage m."""
    zero_cache = {}

    def term(i):
        if i < m:
            if i not in zero_cache:
                zero_cache[i] = system.stage(i).zero
            return zero_cache[i]
        return system.gamma_ij(m, i, w) if i > m else w
    sv = {name: (sig(m, w), False) for name, sig in system.states.items()}
    try:
        k = ("eta", m, w)
        hash(k)
    except TypeError:
        k = None
    el = LimitElement(system, _memo_chain(system, m, w, term), kind="eta", key=k, eta=(m, w),
                      sup_values=sv, label=f"eta_{m}({system.stage(m).format(w)})")
    return el


def _memo_chain(system, m, w, fallback):
    """Terms of eta_m(w) computed incrementally."""
    cache = {m: w}

    def term(i):
        if i < m:
            return fallback(i)
        k = max(j for j in cache if j <= i)
        x = cache[k]
        for j in range(k, i):
            x = system.gamma(j, x)
            cache[j + 1] = x
        return x
    return term


# ------------------------------------------------------------ comparison

@dataclass
class Comparison:
    verdict: Optional[bool]
    certificate: str
    detail: dict = field(default_factory=dict)


def _maximal(model: CuModel, xs: list) -> list:
    out = []
    for x in xs:
        if any(model.leq(x, y) and not model.leq(y, x) for y in xs):
            continue
        if any(model.eq(x, y) for y in out):
            continue
        out.append(x)
    return out


class LimitModel(CuModel):
    """The limit S = S°/~ presented operationally (the output of build_limit)."""

    def __init__(self, system: CuSystem, horizon: int = 32, index_bound: int = 12,
                 basis_stages: int = 4):
        self.system = system
        self.horizon = horizon
        self.index_bound = index_bound
        self.basis_stages = basis_stages
        self.name = f"lim({system.name})"
        self._cmp: dict = {}
        self._wit: dict = {}
        self._rapid: dict = {}

    # -------------------------------------------------------- structure
    @property
    def zero(self):
        return eta(self.system, 1, self.system.stage(1).zero)

    def eta(self, m: int, w) -> LimitElement:
        return eta(self.system, m, w)

    def add(self, x: LimitElement, y: LimitElement) -> LimitElement:
        sysm = self.system
        sv = {}
        for name in set(x.sup_values) & set(y.sup_values):
            (a, sa), (b, sb) = x.sup_values[name], y.sup_values[name]
            sv[name] = (ext_add(a, b), sa or sb)
        if x.kind == "eta" and y.kind == "eta":
            m = max(x.eta[0], y.eta[0])
            return eta(sysm, m, sysm.stage(m).add(x.term(m), y.term(m)))
        kind = "rapid" if x.kind in ("rapid", "eta") and y.kind in ("rapid", "eta") else "general"
        return LimitElement(sysm, lambda i: sysm.stage(i).add(x.term(i), y.term(i)), kind=kind,
                            key=("sum",) + tuple(sorted((repr(x.key), repr(y.key)))),
                            sup_values=sv, label=f"{x.label or '?'} + {y.label or '?'}")

    def eq(self, x, y):
        a = self.leq(x, y)
        return a and self.leq(y, x)

    def leq(self, x, y) -> bool:
        c = self.compare(x, y)
        if c.verdict is None:
            raise UndecidedError(f"limit comparison undecided within horizon {self.horizon}")
        return c.verdict

    # -------------------------------------------------------- limitLeq
    def _witnesses(self, i: int, s_i):
        st = self.system.stage(i)
        k = (i, _hkey(s_i))
        if k not in self._wit:
            try:
                ws = st.way_below_witnesses(s_i)
            except NotImplementedError as exc:
                raise ConfigurationError(f"stage {i} exposes no O4 data") from exc
            self._wit[k] = _maximal(st, ws)
        return self._wit[k]

    def compare(self, s: LimitElement, t: LimitElement, horizon: Optional[int] = None) -> Comparison:
        """limitLeq with its certificate."""
        h = horizon or self.horizon
        key = (s.key, t.key, h)
        if key in self._cmp:
            return self._cmp[key]
        res = self._compare(s, t, h)
        self._cmp[key] = res
        return res

    def _indices(self, s: LimitElement, h: int):
        if s.kind == "eta":
            m, w = s.eta
            st = self.system.stage(m)
            # every later term is gamma(w); if w << w the single index m is enough
            if st.way_below(w, w):
                return [m] if m <= h else []
            return list(range(m, min(h, m + self.index_bound) + 1))
        return list(range(1, min(h, self.index_bound) + 1))

    def _compare(self, s, t, h) -> Comparison:
        for i in self._indices(s, h):
            s_i = s.term(i)
            for sp in self._witnesses(i, s_i):
                ok, detail = self._search(i, sp, t, h)
                if ok:
                    continue
                return self._refute(i, sp, t, h, detail)
        return Comparison(True, "search", {"horizon": h})

    def _search(self, i, sp, t, h):
        sysm = self.system
        x = sp
        prev = None
        for j in range(i, h + 1):
            if j > i:
                x = sysm.gamma(j - 1, x)
            if sysm.stage(j).way_below(x, t.term(j)):
                nxt = sysm.gamma(j, x)
                if sysm.stage(j + 1).way_below(nxt, t.term(j + 1)):
                    return True, {"j": j}
            prev = x
        return False, {"last": prev}

    def _refute(self, i, sp, t, h, detail) -> Comparison:
        sysm = self.system
        for name, sig in sysm.states.items():
            if name not in t.sup_values:
                continue
            L, strict = t.sup_values[name]
            v = sig(i, sp)
            if _lt(L, v) or (strict and _le(L, v) and not is_inf(L)):
                return Comparison(False, "state", {"state": name, "index": i, "value": v, "sup": L,
                                                   "strict": strict})
        if t.kind == "eta":
            kind = "embedding" if sysm.order_embedding else "horizon"
            return Comparison(False, kind, {"index": i, "horizon": h})
        return Comparison(None, "unknown", {"index": i, "horizon": h})

    # -------------------------------------------------------- way-below
    def way_below(self, s: LimitElement, t: LimitElement) -> bool:
        sysm = self.system
        if t.kind == "eta":
            m, w = t.eta
            if sysm.stage(m).way_below(w, w):
                return self.leq(s, t)
        for name in set(s.sup_values) & set(t.sup_values):
            (ls, _), (lt, strict_t) = s.sup_values[name], t.sup_values[name]
            if _lt(lt, ls) or (strict_t and _le(lt, ls) and not is_inf(lt)):
                return False
            if is_inf(ls) and not is_inf(lt):
                return False
            if is_inf(ls) and t.kind in ("eta", "rapid"):
                # every rapid term of t has finite state value
                return False
        tb = self.rapidify(t)
        undecided = False
        for k in range(1, self.index_bound + 1):
            c = self.compare(s, eta(sysm, k, tb.term(k)))
            if c.verdict:
                return True
            if c.verdict is None:
                undecided = True
        if undecided:
            raise UndecidedError("way-below undecided within the index bound")
        raise UndecidedError("no stage term of the rapid form dominates s within the index bound")

    # -------------------------------------------------------- rapidify / sup
    def rapidify(self, s: LimitElement) -> LimitElement:
        """An equivalent element with s_i << s_{i+1}: the diagonal of stage O4 data."""
        if s.key in self._rapid:
            return self._rapid[s.key]
        sysm = self.system
        if s.kind == "eta":
            m, w = s.eta
            if sysm.stage(m).way_below(w, w):
                self._rapid[s.key] = s
                return s
        if s.kind == "rapid" and self._certified(s):
            self._rapid[s.key] = s
            return s
        cache: dict[int, object] = {}
        seqs: dict[int, IncreasingSequence] = {}

        def stage_seq(i):
            if i not in seqs:
                seqs[i] = sysm.stage(i).rapid_sequence(s.term(i))
            return seqs[i]

        def term(i):
            if i in cache:
                return cache[i]
            if i == 1:
                val = stage_seq(1).term(1)
            else:
                prev = sysm.gamma(i - 1, term(i - 1))
                # d_i must also dominate the i-th approximant of every earlier s_j,
                # otherwise mass escapes (e.g. inf in a UHF limit)
                # start at index 2^(i-1) so that unbounded stage sequences outrun
                # any fixed probe cap
                k0 = i + 2 ** min(i - 1, 40)
                floor = [sysm.gamma_ij(j, i, stage_seq(j).term(k0)) for j in range(1, i)]
                seq = stage_seq(i)
                st = sysm.stage(i)
                val = None
                for k in itertools.chain(range(k0, k0 + 16), (k0 + 2**t for t in range(4, 64))):
                    cand = seq.term(k)
                    if seq.tail is None and k >= len(seq.prefix) + 1:
                        break
                    if st.way_below(prev, cand) and all(st.leq(f, cand) for f in floor):
                        val = cand
                        break
                if val is None:
                    val = seq.term(i)
            cache[i] = val
            return val

        out = LimitElement(sysm, term, kind="rapid", key=("rapid", s.key), sup_values=s.sup_values,
                           label=f"rapid({s.label or s.kind})")
        self._rapid[s.key] = out
        return out

    def _certified(self, s, n: int = 6) -> bool:
        sysm = self.system
        return all(sysm.stage(i + 1).way_below(sysm.gamma(i, s.term(i)), s.term(i + 1))
                   for i in range(1, n))

    def limit_sup(self, elems) -> LimitElement:
        """Supremum of an increasing list, IncreasingSequence, or generator
        function ``n -> element`` (n = 0, 1, ...) of limit elements."""
        if callable(elems) and not isinstance(elems, IncreasingSequence):
            return self._diagonal(_FnSeq(elems))
        if not isinstance(elems, IncreasingSequence):
            elems = list(elems)
            if not elems:
                raise ConfigurationError("empty sequence")
            for a, b in zip(elems, elems[1:]):
                c = self.compare(a, b)
                if c.verdict is not True:
                    raise ConfigurationError(f"inputs are not increasing ({c.certificate})")
            return elems[-1]
        if elems.tail is None:
            return elems.prefix[-1]
        if elems.limit is not None and isinstance(elems.limit, LimitElement):
            return elems.limit
        return self._diagonal(elems)

    def _diagonal(self, seq: IncreasingSequence) -> LimitElement:
        sysm = self.system
        rap = {}

        def x(j):
            # a cofinal subsequence has the same supremum and lets the diagonal
            # outrun slowly growing inputs within the horizon
            if j not in rap:
                rap[j] = self.rapidify(seq.term(2 ** min(j, 40) - 1))
            return rap[j]
        nodes = [(1, x(0).term(1))]  # (n_j, d_j)

        def extend():
            j = len(nodes)
            n, d = nodes[-1]
            for cand in range(n + 1, n + 65):
                img = sysm.gamma_ij(n, cand, d)
                v = x(j).term(cand)
                if sysm.stage(cand).way_below(img, v):
                    nodes.append((cand, v))
                    return
            nodes.append((n + 1, sysm.stage(n + 1).add(sysm.gamma(n, d), x(j).term(n + 1))))

        def term(i):
            while nodes[-1][0] <= i:
                extend()
            for (n, d), (n2, _) in zip(nodes, nodes[1:]):
                if n <= i < n2:
                    return sysm.gamma_ij(n, i, d)
            raise AssertionError
        return LimitElement(sysm, term, kind="rapid", key=("diag", id(seq)), label="diagonal sup")

    # -------------------------------------------------------- CuModel plumbing
    def rapid_sequence(self, x):
        r = self.rapidify(x)
        if r.kind == "eta":
            return IncreasingSequence.constant(x)
        sysm = self.system
        cap = max(2, self.horizon // 2)
        return IncreasingSequence([eta(sysm, 1, r.term(1))], lambda i: eta(sysm, i + 1, r.term(i + 1)),
                                  limit=x, max_index=cap)

    def way_below_witnesses(self, x, k=8):
        seq = self.rapid_sequence(x)
        out = seq.terms(min(k, seq.max_index or k))
        if self.way_below(x, x) if x.kind == "eta" else False:
            out.append(x)
        return out

    def basis(self):
        sysm = self.system
        gens = {}
        extra = iter(sysm.extra_basis(self)) if sysm.extra_basis else iter(())
        seen = set()
        for level in itertools.count(0):
            produced = False
            for i in range(1, self.basis_stages + 1):
                n = level - (i - 1)
                if n < 0:
                    continue
                g = gens.setdefault(i, ([], sysm.stage(i).basis()))
                while len(g[0]) <= n:
                    try:
                        g[0].append(next(g[1]))
                    except StopIteration:
                        break
                if n < len(g[0]):
                    el = eta(sysm, i, g[0][n])
                    if el.key not in seen:
                        seen.add(el.key)
                        produced = True
                        yield el
            e = next(extra, None)
            if e is not None:
                produced = True
                yield e
            if not produced and level > 64:
                return

    def encode(self, x):
        if x.kind == "eta":
            m, w = x.eta
            return {"eta": m, "value": self.system.stage(m).encode(w)}
        out = {"kind": x.kind, "label": x.label,
               "terms": [self.system.stage(i).encode(x.term(i)) for i in range(1, 5)]}
        return out

    def format(self, x):
        return x.label or repr(x)

    def describe(self):
        return {"model": "limit", "system": self.system.spec, "horizon": self.horizon,
                "index_bound": self.index_bound}


class _FnSeq:
    def __init__(self, fn):
        self.term = fn


def sequence_element(system: CuSystem, term: Callable[[int], object], label: str = "",
                     sup_values: Optional[dict] = None) -> LimitElement:
    """A general element from a term rule i -> s_i (i >= 1)."""
    return LimitElement(system, term, kind="general", sup_values=sup_values, label=label)


def _hkey(x):
    try:
        hash(x)
        return x
    except TypeError:
        return repr(x)


def build_limit(system: CuSystem, horizon: int = 32, validate: bool = True, **kw) -> LimitModel:
    """The inductive limit; connecting maps are checked as Cu-morphisms first."""
    if validate:
        system.validate()
    return LimitModel(system, horizon=horizon, **kw)


def limit_leq(model: LimitModel, s: LimitElement, t: LimitElement,
              horizon: Optional[int] = None) -> Optional[bool]:
    return model.compare(s, t, horizon).verdict


# ------------------------------------------------------------ universal property

def universal_map(model: LimitModel, phi: Callable[[int, object], object], target: CuModel, *,
                  state: Optional[str] = None, stages: int = 4, budget: int = 40) -> Callable:
    """phi(s) = sup phi_i(s_i), given compatible phi_i : S_i -> target.

    Exact on eta elements (phi_m(w)); for other elements the supremum is read
    from the element's recorded supremum for ``state`` (which must be the
    state family that phi realises).
    """
    sysm = model.system
    for i in range(1, stages + 1):
        st = sysm.stage(i)
        for x in itertools.islice(st.basis(), budget):
            a, b = phi(i + 1, sysm.gamma(i, x)), phi(i, x)
            if not target.eq(a, b):
                raise CompatibilityError(
                    f"phi_{i + 1}(gamma_{i}(x)) != phi_{i}(x) at x = {st.format(x)}",
                    {"stage": i, "x": x, "lhs": a, "rhs": b})

    def f(s: LimitElement):
        if s.kind == "eta":
            m, w = s.eta
            return phi(m, w)
        if state and state in s.sup_values:
            return s.sup_values[state][0]
        raise UndecidedError("no closed form for the supremum of this element")
    return f


# ------------------------------------------------------------ concrete systems

def _pow(base, k):
    out = Fraction(1)
    for _ in range(k):
        out = out * base
    return out


def _div(x, q):
    return INF if is_inf(x) else x / q


def uhf_system(n: int = 2) -> CuSystem:
    """(N0 u {inf}, x n) with state sigma_j(x) = x / n^{j-1} and soft elements."""
    n = int(n)
    if n < 2:
        raise ConfigurationError("UHF multiplicity must be at least 2")
    states = {"tau": lambda j, x: _div(x[0], Fraction(n) ** (j - 1))}

    def extra(model):
        for c in _sample_values():
            yield soft_element(model.system, c, n)
    sysm = af_system([[[n]]], name=f"uhf{n}", states=states, extra_basis=extra)
    sysm.spec = {"name": f"uhf{n}", "matrices": [[[n]]]}
    return sysm


def _sample_values():
    seen = set()
    for q in (1, 2, 3, 4, 5, 8):
        for p in range(1, 4 * q + 1):
            c = Fraction(p, q)
            if c not in seen:
                seen.add(c)
                yield c


def soft_element(system: CuSystem, c, n: int = 2) -> LimitElement:
    """s_i = ceil(c n^{i-1}) - 1: sigma(s_i) increases strictly to c."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("soft elements need c > 0")

    def term(i):
        return (math.ceil(c * n ** (i - 1)) - 1,)
    return LimitElement(system, term, kind="general", key=("soft", c, n),
                        sup_values={"tau": (c, True)}, label=f"soft({c})")


PHI = QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)


def fibonacci_system() -> CuSystem:
    """(N0 u {inf})^2 with gamma = [[1,1],[1,0]]; sigma_j(x) = (phi x1 + x2) / phi^{j-1}."""
    def sig(j, x):
        if any(is_inf(c) for c in x):
            return INF
        v = PHI * x[0] + x[1]
        return v / _qpow(PHI, j - 1)

    def extra(model):
        for c in _sample_values():
            yield greedy_soft(model.system, c)
    return af_system([[[1, 1], [1, 0]]], name="fibonacci", states={"tau": sig}, extra_basis=extra)


def _qpow(q, k):
    out = Fraction(1)
    for _ in range(k):
        out = q * out
    return out


def greedy_soft(system: CuSystem, c) -> LimitElement:
    """Greedy increasing sequence with state values rising strictly to c."""
    sig = system.states["tau"]
    cache = {}

    def term(i):
        if i in cache:
            return cache[i]
        base = system.gamma(i - 1, term(i - 1)) if i > 1 else (0, 0)
        x = list(base)
        for k in (0, 1):
            while True:
                y = list(x)
                y[k] += 1
                if sig(i, tuple(y)) < c:
                    x = y
                else:
                    break
        cache[i] = tuple(x)
        return cache[i]
    return LimitElement(system, term, kind="general", key=("gsoft", c, system.name),
                        sup_values={"tau": (c, True)}, label=f"soft({c})")


def constant_system(model: Optional[CuModel] = None) -> CuSystem:
    m = model or ExtNatModel()
    states = {"id": lambda j, x: x} if isinstance(m, ExtNatModel) else {}
    return CuSystem(lambda i: m, lambda i, x: x, states=states, order_embedding=True,
                    name=f"const({m.name})", spec={"name": "constant", "model": m.describe()})


# ------------------------------------------------------------ oracles

def dyadic_value(x: LimitElement, n: int = 2) -> tuple:
    """(value, kind) with kind 'compact' or 'soft' for elements of the UHF limit."""
    if x.kind == "eta":
        m, w = x.eta
        v = w[0] if isinstance(w, tuple) else w
        if is_inf(v):
            return (INF, "soft")
        return (Fraction(v, n ** (m - 1)), "compact")
    L, strict = x.sup_values["tau"]
    return (L, "soft" if strict else "compact")


def value_leq(a: tuple, b: tuple) -> bool:
    """Order of V+ u (0, inf] (compact values and soft values)."""
    (x, kx), (y, ky) = a, b
    if kx == "compact" and x == 0:
        return True
    if kx == "compact" and ky == "soft":
        return _lt(x, y)
    return _le(x, y)


def value_way_below(a: tuple, b: tuple) -> bool:
    """x << y iff x <= y when either side is compact, else strictly smaller values."""
    (x, kx), (y, ky) = a, b
    if kx == "compact" or ky == "compact":
        return value_leq(a, b)
    return _lt(x, y)


def perron_data(m: Sequence[Sequence[int]]):
    """Perron eigenvalue and a positive left eigenvector, exactly (1x1 or 2x2)."""
    if len(m) == 1:
        return Fraction(m[0][0]), (Fraction(1),)
    if len(m) != 2:
        raise ConfigurationError("exact Perron data only for 1x1 and 2x2 matrices")
    (a, b), (c, d) = m
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    r = math.isqrt(disc)
    if r * r == disc:
        lam = Fraction(tr + r, 2)
    else:
        k, sf = _squarefree_split(disc)
        lam = QuadraticNumber(Fraction(tr, 2), Fraction(k, 2), sf)
    # v M = lam v  =>  v = (c, lam - a) (or (lam - d, b))
    v = (Fraction(c), lam - a) if c != 0 else (lam - d, Fraction(b))
    if v[0] < 0 or v[1] < 0:
        v = (-v[0], -v[1])
    return lam, v


def _squarefree_split(n: int) -> tuple[int, int]:
    k, sf = 1, n
    p = 2
    while p * p <= sf:
        while sf % (p * p) == 0:
            sf //= p * p
            k *= p
        p += 1
    return k, sf


def functor_continuity_check(matrices: Sequence[Sequence[Sequence[int]]], pairs: int = 100,
                             seed: int = 0, horizon: int = 48) -> Report:
    """Compare the built limit of an AF system with the directly constructed
    dimension-group model on sampled pairs.

    Supported: identity systems (the limit is the stage itself) and stationary
    primitive 1x1 or 2x2 systems, whose limit is the simple dimension group
    given by the Perron state, with soft elements attached.
    """
    import random

    mats = [[list(map(int, r)) for r in m] for m in matrices]
    stationary = all(m == mats[0] for m in mats)
    k = len(mats[0])
    ident = stationary and mats[0] == [[int(i == j) for j in range(k)] for i in range(k)]
    cfg = {"matrices": mats, "pairs": pairs, "seed": seed, "horizon": horizon}
    if ident:
        sysm = af_system(mats, name="identity")
        model = build_limit(sysm, horizon=horizon)
        stage = sysm.stage(1)
        rng = random.Random(seed)
        pool = [eta(sysm, rng.randint(1, 3), x) for x in itertools.islice(stage.basis(), 60)]
        ch = _Check("order agreement")
        for _ in range(pairs):
            a, b = rng.choice(pool), rng.choice(pool)
            direct = stage.leq(a.eta[1], b.eta[1])
            ch.record(model.compare(a, b).verdict == direct, {"a": a.label, "b": b.label})
        return Report("identity", [ch.verdict()], cfg)
    if not stationary or k > 2:
        raise ConfigurationError("continuity check supports identity systems and stationary "
                                 "1x1 or 2x2 primitive systems")
    sysm = stationary_system(mats[0])
    model = build_limit(sysm, horizon=horizon)
    pool = list(itertools.islice(model.basis(), 80))
    rng = random.Random(seed)
    ch = _Check("order agreement")
    unknown = 0
    for _ in range(pairs):
        a, b = rng.choice(pool), rng.choice(pool)
        got = model.compare(a, b).verdict
        if got is None:
            unknown += 1
        ch.record(got == _direct_leq(sysm, a, b), {"a": a.label, "b": b.label, "limit": got})
    return Report(sysm.name, [ch.verdict(f"{unknown} unknown")], cfg)


def stationary_system(m: Sequence[Sequence[int]], name: Optional[str] = None) -> CuSystem:
    """AF system with one repeated primitive 1x1 or 2x2 matrix, its Perron
    state attached and soft elements added to the basis."""
    m = [list(map(int, r)) for r in m]
    if not m or len(m) != len(m[0]) or len(m) > 2:
        raise ConfigurationError("stationary systems need a square 1x1 or 2x2 matrix")
    if not _primitive(m):
        raise ConfigurationError("stationary matrix must be primitive")
    lam, v = perron_data(m)

    def sig(j, x):
        if any(is_inf(c) for c in x):
            return INF
        s = sum((vi * xi for vi, xi in zip(v, x)), Fraction(0))
        return s / _qpow(lam, j - 1)

    def extra(model):
        for c in _sample_values():
            yield _soft_for(model.system, c)
    return af_system([m], name=name or f"af{m}", states={"tau": sig}, extra_basis=extra)


def system_from_json(obj) -> CuSystem:
    """``{"matrices": [...], "name": ...}``; a single primitive 1x1/2x2 matrix
    gets its Perron state, anything else is a plain AF system."""
    if isinstance(obj, str):
        named = {"uhf2": lambda: uhf_system(2), "uhf3": lambda: uhf_system(3),
                 "fibonacci": fibonacci_system, "constant": constant_system}
        if obj not in named:
            raise ConfigurationError(f"unknown system {obj!r}; choose {', '.join(named)} or a JSON file")
        return named[obj]()
    try:
        mats = obj["matrices"]
    except (KeyError, TypeError) as exc:
        raise ConfigurationError("system spec needs a 'matrices' field") from exc
    name = obj.get("name")
    if len(mats) == 1 and len(mats[0]) <= 2 and len(mats[0]) == len(mats[0][0]) and _primitive(mats[0]):
        if len(mats[0]) == 1:
            return uhf_system(mats[0][0][0]) if mats[0][0][0] >= 2 else af_system(mats, name=name or "af")
        return stationary_system(mats[0], name)
    return af_system(mats, name=name or "af")


def _soft_for(system, c):
    if len(system.stage(1).factors) == 1:
        n = system.gamma(1, (1,))[0]
        return soft_element(system, c, n)
    return greedy_soft(system, c)


def _primitive(m) -> bool:
    k = len(m)
    p = [row[:] for row in m]
    for _ in range(k * k):
        if all(x > 0 for row in p for x in row):
            return True
        p = [[sum(p[i][t] * m[t][j] for t in range(k)) for j in range(k)] for i in range(k)]
    return False


def _direct_leq(system, a: LimitElement, b: LimitElement) -> bool:
    """The dimension-group-with-suprema order, computed from state values."""
    sig = system.states["tau"]

    def val(x):
        if x.kind == "eta":
            m, w = x.eta
            if any(is_inf(c) for c in w):
                return INF, "soft", None
            return sig(m, w), "compact", (m, w)
        L, strict = x.sup_values["tau"]
        return L, "soft" if strict else "compact", None
    (va, ka, pa), (vb, kb, pb) = val(a), val(b)
    if ka == "compact" and va == 0:
        return True
    if ka == "compact" and kb == "compact":
        if va == vb:
            # equal state value: equal images at a common stage (injective matrix)
            (m1, w1), (m2, w2) = pa, pb
            k = max(m1, m2)
            return system.gamma_ij(m1, k, w1) == system.gamma_ij(m2, k, w2)
        return va < vb
    if ka == "compact":
        return _lt(va, vb)
    return _le(va, vb)
