"""Positive elements of finite-dimensional algebras ``M_{n_1} + ... + M_{n_k}``.

Order-theoretic work uses :class:`SpectralElement` (eigenvalue data per
block, i.e. the element up to unitary equivalence).  Explicit matrices,
:class:`DenseElement`, are only needed for the Kirchberg-Rordam contraction
in :mod:`cuntz.kr`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .values import encode_value


class BlockMismatchError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("use exact rationals (Fraction, int or str), not floats")
    return Fraction(x)


@dataclass(frozen=True)
class Block:
    """One summand ``M_n``: size ``n`` and nonzero eigenvalues with multiplicities."""

    n: int
    eigen: tuple  # ((lambda, multiplicity), ...) sorted by decreasing lambda

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.eigen)

    def values(self) -> list[Fraction]:
        out = []
        for lam, m in self.eigen:
            out += [lam] * m
        return out + [Fraction(0)] * (self.n - self.rank)


def _canonical_block(n: int, pairs: Iterable) -> Block:
    acc: dict[Fraction, int] = {}
    for lam, m in pairs:
        lam, m = _frac(lam), int(m)
        if lam < 0:
            raise ValueError(f"negative eigenvalue {lam}")
        if m <= 0:
            raise ValueError(f"multiplicity must be positive, got {m}")
        if lam != 0:
            acc[lam] = acc.get(lam, 0) + m
    eigen = tuple(sorted(acc.items(), key=lambda p: -p[0]))
    if sum(m for _, m in eigen) > n:
        raise ValueError(f"multiplicities exceed block size {n}")
    return Block(int(n), eigen)


class SpectralElement:
    """A positive element of ``M_{n_1} + ... + M_{n_k}`` up to unitary equivalence."""

    __slots__ = ("blocks",)

    def __init__(self, blocks: Sequence):
        bl = []
        for b in blocks:
            if isinstance(b, Block):
                bl.append(_canonical_block(b.n, b.eigen))
            else:
                n, pairs = b
                bl.append(_canonical_block(n, pairs))
        if not bl:
            raise ValueError("at least one block is required")
        for b in bl:
            if b.n <= 0:
                raise ValueError("block sizes must be positive")
        self.blocks = tuple(bl)

    @classmethod
    def diag(cls, *values, n: Optional[int] = None) -> SpectralElement:
        """Single block with the given diagonal entries."""
        vals = [_frac(v) for v in values]
        return cls([(n or len(vals), [(v, 1) for v in vals if v != 0])])

    @classmethod
    def from_blocks(cls, *diagonals: Sequence) -> SpectralElement:
        return cls([(len(d), [(_frac(v), 1) for v in d if _frac(v) != 0]) for d in diagonals])

    @classmethod
    def unit(cls, dims: Sequence[int]) -> SpectralElement:
        return cls([(n, [(1, n)]) for n in dims])

    @classmethod
    def zero(cls, dims: Sequence[int]) -> SpectralElement:
        return cls([(n, []) for n in dims])

    @property
    def dims(self) -> tuple:
        return tuple(b.n for b in self.blocks)

    def __eq__(self, other):
        return isinstance(other, SpectralElement) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"SpectralElement({format_spectral(self)!r})"

    def spectrum(self) -> set:
        out = set()
        for b in self.blocks:
            out.update(lam for lam, _ in b.eigen)
            if b.rank < b.n:
                out.add(Fraction(0))
        return out

    def max_eigenvalue(self) -> Fraction:
        return max((b.eigen[0][0] for b in self.blocks if b.eigen), default=Fraction(0))

    def is_zero(self) -> bool:
        return all(not b.eigen for b in self.blocks)

    def is_projection(self) -> bool:
        return all(lam == 1 for b in self.blocks for lam, _ in b.eigen)

    def map(self, f) -> SpectralElement:
        """Functional calculus with ``f(0) = 0``."""
        return SpectralElement([(b.n, [(f(lam), m) for lam, m in b.eigen]) for b in self.blocks])

    def power(self, k: int) -> SpectralElement:
        return self.map(lambda t: t**k)

    def direct_sum(self, other: SpectralElement) -> SpectralElement:
        """``a (+) b`` inside ``M_2`` of the algebra: block sizes and spectra add."""
        _check_blocks(self, other)
        return SpectralElement([(x.n + y.n, list(x.eigen) + list(y.eigen))
                                for x, y in zip(self.blocks, other.blocks)])

    __add__ = direct_sum


def _check_blocks(a: SpectralElement, b: SpectralElement):
    if len(a.blocks) != len(b.blocks):
        raise BlockMismatchError(f"block counts differ: {len(a.blocks)} vs {len(b.blocks)}")


def eps_cut(a: SpectralElement, eps) -> SpectralElement:
    """``(a - eps)_+``: each eigenvalue t becomes max(0, t - eps)."""
    eps = _frac(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return a.map(lambda t: max(Fraction(0), t - eps))


def cuntz_class(a: SpectralElement) -> tuple:
    """The rank vector: the image of a in W(A) = N0^k."""
    return tuple(b.rank for b in a.blocks)


def cuntz_leq(a: SpectralElement, b: SpectralElement) -> bool:
    """``a <~ b``: blockwise rank domination."""
    _check_blocks(a, b)
    return all(x <= y for x, y in zip(cuntz_class(a), cuntz_class(b)))


def cuntz_eq(a: SpectralElement, b: SpectralElement) -> bool:
    return cuntz_class(a) == cuntz_class(b)


def is_projection_class(a: SpectralElement) -> bool:
    """0 is not a limit point of the spectrum: always true for finite spectra."""
    pos = [lam for b in a.blocks for lam, _ in b.eigen]
    return not pos or min(pos) > 0


def proj_complement(p: SpectralElement, a: SpectralElement) -> SpectralElement:
    """A projection b with ``<p> + <b> = <a>``."""
    if not p.is_projection():
        raise ValueError("p must be a projection (eigenvalues in {0, 1})")
    if not cuntz_leq(p, a):
        raise ValueError("p is not Cuntz below a")
    return SpectralElement([(bb.n, [(1, bb.rank - pb.rank)] if bb.rank > pb.rank else [])
                            for pb, bb in zip(p.blocks, a.blocks)])


@dataclass(frozen=True)
class TraceSpec:
    """Trace ``tau = sum_i w_i Tr_i`` on ``M_{n_1} + ... + M_{n_k}``, normalised."""

    weights: tuple
    dims: tuple

    def __post_init__(self):
        w = tuple(_frac(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        if len(w) != len(self.dims):
            raise ValueError("one weight per block is required")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if sum(x * n for x, n in zip(w, self.dims)) != 1:
            raise ValueError("trace is not normalised: sum w_i n_i != 1")

    @property
    def faithful(self) -> bool:
        return all(x > 0 for x in self.weights)

    @classmethod
    def vertices(cls, dims: Sequence[int]) -> list[TraceSpec]:
        """Extreme traces: normalised trace on a single block."""
        out = []
        for i, n in enumerate(dims):
            out.append(cls(tuple(Fraction(1, n) if j == i else Fraction(0) for j in range(len(dims))),
                           tuple(dims)))
        return out

    @classmethod
    def uniform(cls, dims: Sequence[int]) -> TraceSpec:
        k = len(dims)
        return cls(tuple(Fraction(1, k * n) for n in dims), tuple(dims))


def dtau(a: SpectralElement, tau: TraceSpec) -> Fraction:
    """``d_tau(a) = lim tau(a^{1/n})``: the trace of the support projection."""
    if len(tau.weights) != len(a.blocks):
        raise BlockMismatchError("trace and element have different block counts")
    return sum((w * r for w, r in zip(tau.weights, cuntz_class(a))), Fraction(0))


def trace(a: SpectralElement, tau: TraceSpec) -> Fraction:
    return sum((w * lam * m for w, b in zip(tau.weights, a.blocks) for lam, m in b.eigen),
               Fraction(0))


def dtau_limit_sequence(a: SpectralElement, tau: TraceSpec, n: int) -> float:
    """``tau(a^{1/n})`` in floating point, for illustrating the limit formula."""
    return float(sum(float(w) * float(lam) ** (1.0 / n) * m
                     for w, b in zip(tau.weights, a.blocks) for lam, m in b.eigen))


# ------------------------------------------------------------ text / JSON

_BLOCK_RE = re.compile(r"\[\s*n\s*=\s*(\d+)\s*:\s*((?:\([^)]*\)\s*)*)\]")
_PAIR_RE = re.compile(r"\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)")


def parse_spectral(text: str) -> SpectralElement:
    """Parse ``blocks: [n=3: (1,1)(1/2,1)] [n=2: ]``."""
    s = text.strip()
    if s.startswith("blocks:"):
        s = s[len("blocks:"):]
    blocks = []
    pos = 0
    s = s.strip()
    for m in _BLOCK_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise ValueError(f"unexpected text at column {pos}: {s[pos:m.start()]!r}")
        pairs = [(Fraction(x.strip()), int(y)) for x, y in _PAIR_RE.findall(m.group(2))]
        blocks.append((int(m.group(1)), pairs))
        pos = m.end()
    if s[pos:].strip() or not blocks:
        raise ValueError(f"malformed spectral element at column {pos}: {text!r}")
    return SpectralElement(blocks)


def format_spectral(a: SpectralElement) -> str:
    parts = []
    for b in a.blocks:
        pairs = "".join(f"({lam},{m})" for lam, m in b.eigen)
        parts.append(f"[n={b.n}: {pairs}]")
    return "blocks: " + " ".join(parts)


def spectral_to_json(a: SpectralElement) -> dict:
    return {"blocks": [{"n": b.n, "eigen": [[encode_value(l), m] for l, m in b.eigen]}
                       for b in a.blocks]}


def spectral_from_json(obj) -> SpectralElement:
    if isinstance(obj, str):
        return parse_spectral(obj)
    return SpectralElement([(b["n"], [(Fraction(str(l)), m) for l, m in b["eigen"]])
                            for b in obj["blocks"]])


# ------------------------------------------------------------ dense matrices

class DenseElement:
    """Explicit positive semidefinite block matrices with rational entries.

    Entries are real (symmetric matrices); ``rank_tolerance`` bounds how
    negative a numerically computed eigenvalue may be.
    """

    def __init__(self, blocks: Sequence[Sequence[Sequence]], rank_tolerance=Fraction(1, 10**9),
                 check: bool = True):
        bl = []
        for m in blocks:
            rows = [[_frac(x) for x in r] for r in m]
            n = len(rows)
            if n == 0 or any(len(r) != n for r in rows):
                raise ValueError("blocks must be nonempty square matrices")
            for i in range(n):
                for j in range(i):
                    if rows[i][j] != rows[j][i]:
                        raise ValueError("block is not symmetric")
            bl.append(rows)
        self.blocks = bl
        self.rank_tolerance = _frac(rank_tolerance)
        if check:
            for i, m in enumerate(self.blocks):
                if _min_eigenvalue(m) < -float(self.rank_tolerance):
                    raise ValueError(f"block {i} is not positive semidefinite")

    @property
    def dims(self) -> tuple:
        return tuple(len(m) for m in self.blocks)

    @classmethod
    def diag(cls, *diagonals: Sequence) -> DenseElement:
        return cls([[[_frac(d[i]) if i == j else Fraction(0) for j in range(len(d))]
                     for i in range(len(d))] for d in diagonals])

    def to_json(self) -> dict:
        return {"blocks": [[[encode_value(x) for x in r] for r in m] for m in self.blocks],
                "rank_tolerance": str(self.rank_tolerance)}

    @classmethod
    def from_json(cls, obj) -> DenseElement:
        return cls([[[Fraction(str(x)) for x in r] for r in m] for m in obj["blocks"]],
                   Fraction(str(obj.get("rank_tolerance", "1/1000000000"))))

    def __repr__(self):
        return f"DenseElement(dims={self.dims})"


def _min_eigenvalue(m) -> float:
    import mpmath
    a = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r] for r in m])
    ev = mpmath.eigsy(a, eigvals_only=True)
    return float(min(ev[i] for i in range(len(m))))


def is_positive_definite(m: Sequence[Sequence]) -> bool:
    """Exact test via symmetric Gaussian elimination (all pivots positive)."""
    a = [[_frac(x) for x in r] for r in m]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return True


def norm_less_than(a: DenseElement, b: DenseElement, eps) -> bool:
    """Exact decision of ``||a - b|| < eps`` (operator norm, blockwise)."""
    eps = _frac(eps)
    if a.dims != b.dims:
        raise BlockMismatchError(f"block shapes differ: {a.dims} vs {b.dims}")
    for x, y in zip(a.blocks, b.blocks):
        n = len(x)
        diff = [[x[i][j] - y[i][j] for j in range(n)] for i in range(n)]
        up = [[(eps if i == j else 0) - diff[i][j] for j in range(n)] for i in range(n)]
        lo = [[(eps if i == j else 0) + diff[i][j] for j in range(n)] for i in range(n)]
        if not (is_positive_definite(up) and is_positive_definite(lo)):
            return False
    return True


def spectral_of_dense(a: DenseElement, tol: Optional[Fraction] = None) -> list[list[float]]:
    """Numerical eigenvalues per block (floats, descending)."""
    import mpmath
    out = []
    for m in a.blocks:
        mm = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r] for r in m])
        ev = mpmath.eigsy(mm, eigvals_only=True)
        out.append(sorted((float(ev[i]) for i in range(len(m))), reverse=True))
    return out
