"""Constructive Kirchberg-Rordam lemma in finite dimensions.

Given positive ``a, b`` with ``||a - b|| < eps``, build a contraction ``d``
with ``d b d* = (a - eps)_+`` by running the proof: pick ``r > 1`` with
``||a - g_r(b)|| = eps1 < eps``, set ``b0 = g_r(b)``, ``e = e(a)``,
``x = b0^{1/2} e`` with polar part ``v``, ``y = v (a - eps)_+^{1/2}``, and
take the limit of ``d_n = y* (1/n + b^r)^{-1/2} b^{(r-1)/2}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .matrix import DenseElement, norm_less_than


class DomainError(ValueError):
    """The precondition ``||a - b|| < eps`` (or positivity) fails."""


class ConvergenceError(ArithmeticError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual})")
        self.residual = residual


@dataclass
class KRResult:
    d: list  # one mpmath matrix per block
    residual: float  # max_i ||d_i b_i d_i* - (a_i - eps)_+||
    norm: float  # max_i ||d_i||
    r: float
    eps1: float
    iterations: int
    dps: int

    def d_float(self) -> list[list[list[float]]]:
        return [[[float(m[i, j]) for j in range(m.cols)] for i in range(m.rows)] for m in self.d]


def _mp(m, ctx):
    return ctx.matrix([[ctx.mpf(x.numerator) / x.denominator for x in r] for r in m])


def _eig(m, ctx):
    e, q = ctx.eigsy(m)
    return [e[i] for i in range(m.rows)], q


def _fcalc(vals, q, f, ctx):
    d = ctx.diag([f(v) for v in vals])
    return q * d * q.T


def _opnorm_sym(m, ctx):
    e = ctx.eigsy(m, eigvals_only=True)
    return max(abs(e[i]) for i in range(m.rows))


def _opnorm(m, ctx):
    return ctx.sqrt(max(_opnorm_sym(m.T * m, ctx), ctx.mpf(0)))


def kr_contraction(a: DenseElement, b: DenseElement, eps, *, tol: float = 1e-6,
                   dps: int = 40, max_iter: int = 10_000) -> KRResult:
    """Contraction ``d`` with ``||d b d* - (a - eps)_+|| <= tol`` and ``||d|| <= 1 + tol``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    if a.dims != b.dims:
        raise DomainError(f"block shapes differ: {a.dims} vs {b.dims}")
    if not norm_less_than(a, b, eps):
        raise DomainError("precondition ||a - b|| < eps fails")
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return _run(a, b, eps, tol, max_iter, ctx)


def _run(a, b, eps_q, tol, max_iter, ctx):
    eps = ctx.mpf(eps_q.numerator) / eps_q.denominator
    zero = ctx.mpf(0)
    A = [_mp(m, ctx) for m in a.blocks]
    B = [_mp(m, ctx) for m in b.blocks]
    Aeig = [_eig(m, ctx) for m in A]
    Beig = []
    for m in B:
        vals, q = _eig(m, ctx)
        Beig.append(([max(v, zero) for v in vals], q))

    # choose r in (1, 2] by halving the distance to 1
    r = None
    for k in range(0, 200):
        rr = 1 + ctx.mpf(2) ** (-k)
        e1 = zero
        eb = zero
        for Am, (bv, bq), Bm in zip(A, Beig, B):
            g = _fcalc(bv, bq, lambda t: min(t, t**rr) if t > 0 else zero, ctx)
            e1 = max(e1, _opnorm_sym(Am - g, ctx))
            eb = max(eb, _opnorm_sym(Bm - g, ctx))
        if e1 < eps and eb < eps:
            r, eps1 = rr, e1
            break
    if r is None:
        raise ConvergenceError("no admissible exponent r found", float("nan"))

    blocks_y = []
    targets = []
    thr = ctx.mpf(10) ** (-(3 * ctx.dps) // 4)
    for (av, aq), (bv, bq) in zip(Aeig, Beig):
        e = _fcalc(av, aq, lambda t: ctx.sqrt((t - eps) / (t - eps1)) if t >= eps else zero, ctx)
        cut = _fcalc(av, aq, lambda t: max(t - eps, zero), ctx)
        cut_half = _fcalc(av, aq, lambda t: ctx.sqrt(max(t - eps, zero)), ctx)
        b0_half = _fcalc(bv, bq, lambda t: ctx.sqrt(min(t, t**r)) if t > 0 else zero, ctx)
        x = b0_half * e
        xtx = x.T * x
        mv, mq = _eig((xtx + xtx.T) / 2, ctx)
        absx_pinv = _fcalc(mv, mq, lambda t: 1 / ctx.sqrt(t) if t > thr else zero, ctx)
        v = x * absx_pinv
        blocks_y.append(v * cut_half)
        targets.append(cut)

    def d_n(n):
        out = []
        for y, (bv, bq) in zip(blocks_y, Beig):
            f = _fcalc(bv, bq, lambda t: (1 / ctx.sqrt(1 / n + t**r)) * t ** ((r - 1) / 2)
                       if t > 0 else zero, ctx)
            out.append(y.T * f)
        return out

    def measure(ds):
        res = zero
        nrm = zero
        for dm, Bm, tgt in zip(ds, B, targets):
            res = max(res, _opnorm_sym(dm * Bm * dm.T - tgt, ctx))
            nrm = max(nrm, _opnorm(dm, ctx))
        return res, nrm

    prev = None
    res = None
    for it in range(1, max_iter + 1):
        n = ctx.mpf(2) ** it
        ds = d_n(n)
        if prev is not None:
            step = max(_opnorm(x - y, ctx) for x, y in zip(ds, prev))
            if step < tol / 100:
                res, nrm = measure(ds)
                if res <= tol and nrm <= 1 + tol:
                    return KRResult(ds, float(res), float(nrm), float(r), float(eps1), it, ctx.dps)
        prev = ds
        if 2 ** min(it, 4000) > 10 ** (ctx.dps - 2) and it > 8:
            # beyond this point 1/n is below working precision
            break
    res, nrm = measure(prev)
    if res <= tol and nrm <= 1 + tol:
        return KRResult(prev, float(res), float(nrm), float(r), float(eps1), it, ctx.dps)
    raise ConvergenceError("iteration did not converge", float(res))
