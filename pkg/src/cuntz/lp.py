"""Exact linear algebra and linear programming over ordered fields.

Entries may be ``Fraction`` or ``QuadraticNumber`` (one radicand at a
time); every routine uses only field operations and comparisons, so the
results are exact.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional, Sequence

Vector = list
Matrix = list


def _f(x):
    return Fraction(x) if isinstance(x, int) else x


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[_f(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                k = m[i][c]
                m[i] = [a - k * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> list[Vector]:
    """Basis of ``{x : rows x = 0}``."""
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(rows[0])
    red, piv = rref(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """Unique solution of the square system ``a x = b`` or None if singular."""
    n = len(a)
    aug = [list(r) + [b[i]] for i, r in enumerate(a)]
    red, piv = rref(aug)
    if len(piv) != n or (piv and piv[-1] == n):
        return None
    return [red[i][n] for i in range(n)]


def dot(u: Sequence, v: Sequence):
    s = Fraction(0)
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            s = s + a * b
    return s


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return [dot(r, v) for r in m]


# ------------------------------------------------------------ vertices

def enumerate_vertices(eq_rows: Sequence[Sequence], eq_rhs: Sequence,
                       ge_rows: Sequence[Sequence], ge_rhs: Sequence,
                       max_combinations: int = 2_000_000) -> list[Vector]:
    """Vertices of ``{x : eq_rows x = eq_rhs, ge_rows x >= ge_rhs}`` by brute force.

    A point is a vertex when it satisfies every constraint and the active
    constraints have full rank.  Duplicate inequality rows are removed first.
    """
    seen = set()
    rows, rhs = [], []
    for r, b in zip(ge_rows, ge_rhs):
        key = (tuple(r), b)
        if key not in seen:
            seen.add(key)
            rows.append(list(r))
            rhs.append(b)
    d = len(eq_rows[0]) if eq_rows else (len(rows[0]) if rows else 0)
    if d == 0:
        return []
    eq_red, _ = rref([list(r) + [b] for r, b in zip(eq_rows, eq_rhs)])
    if any(all(x == 0 for x in r[:-1]) and r[-1] != 0 for r in eq_red):
        return []
    eq_rows = [r[:-1] for r in eq_red]
    eq_rhs = [r[-1] for r in eq_red]
    need = d - len(eq_rows)
    if need < 0:
        return []
    from math import comb
    if comb(len(rows), need) > max_combinations:
        raise ValueError("too many constraint combinations for brute-force vertex enumeration")
    out = []
    keys = set()
    for combo in itertools.combinations(range(len(rows)), need):
        a = eq_rows + [rows[i] for i in combo]
        b = eq_rhs + [rhs[i] for i in combo]
        x = solve(a, b)
        if x is None:
            continue
        if all(dot(r, x) >= c for r, c in zip(rows, rhs)):
            k = tuple(x)
            if k not in keys:
                keys.add(k)
                out.append(x)
    return out


# ------------------------------------------------------------ simplex

class LPResult:
    def __init__(self, status: str, value=None, x=None):
        self.status = status  # "optimal", "infeasible", "unbounded"
        self.value = value
        self.x = x

    def __repr__(self):
        return f"LPResult({self.status}, value={self.value})"


def _pivot(tab, basis, r, c):
    piv = tab[r][c]
    tab[r] = [x / piv for x in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            k = tab[i][c]
            tab[i] = [a - k * b for a, b in zip(tab[i], tab[r])]
    basis[r] = c


def _simplex(tab, basis, ncols, allowed):
    """Minimise the objective stored in the last row (reduced costs); Bland's rule."""
    while True:
        obj = tab[-1]
        c = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if c is None:
            return "optimal"
        best, r = None, None
        for i in range(len(tab) - 1):
            if tab[i][c] > 0:
                ratio = tab[i][-1] / tab[i][c]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r is None:
            return "unbounded"
        _pivot(tab, basis, r, c)


def minimize(c: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             a_eq: Sequence[Sequence] = (), b_eq: Sequence = (), free: bool = False) -> LPResult:
    """Exact two-phase simplex: minimise ``c x`` s.t. ``a_ub x <= b_ub``,
    ``a_eq x = b_eq`` and ``x >= 0`` (or x free when ``free``)."""
    n0 = len(c)
    if free:
        c = list(c) + [-x for x in c]
        a_ub = [list(r) + [-x for x in r] for r in a_ub]
        a_eq = [list(r) + [-x for x in r] for r in a_eq]
    n = len(c)
    rows, rhs = [], []
    nslack = len(a_ub)
    for i, (r, b) in enumerate(zip(a_ub, b_ub)):
        rows.append([_f(x) for x in r] + [Fraction(int(i == j)) for j in range(nslack)])
        rhs.append(_f(b))
    for r, b in zip(a_eq, b_eq):
        rows.append([_f(x) for x in r] + [Fraction(0)] * nslack)
        rhs.append(_f(b))
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    ncols = n + nslack + m
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + nslack + i for i in range(m)]
    # phase one objective: sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        obj = [a - b for a, b in zip(obj, tab[i])]
    for j in range(n + nslack, ncols):
        obj[j] = Fraction(0)
    tab.append(obj)
    _simplex(tab, basis, ncols, [True] * ncols)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n + nslack:
            c_in = next((j for j in range(n + nslack) if tab[i][j] != 0), None)
            if c_in is not None:
                _pivot(tab, basis, i, c_in)
    allowed = [j < n + nslack for j in range(ncols)]
    cost = [_f(x) for x in c] + [Fraction(0)] * (ncols - n)
    obj = cost + [Fraction(0)]
    for i in range(m):
        b = basis[i]
        if cost[b] != 0:
            k = cost[b]
            obj = [a - k * t for a, t in zip(obj, tab[i])]
    tab[-1] = obj
    status = _simplex(tab, basis, ncols, allowed)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * ncols
    for i in range(m):
        x[basis[i]] = tab[i][-1]
    xs = x[:n]
    if free:
        xs = [xs[i] - xs[i + n0] for i in range(n0)]
    return LPResult("optimal", -tab[-1][-1], xs)


def min_max_affine_on_simplex(pieces: Sequence[Sequence]) -> tuple:
    """Minimum over the standard simplex of ``max_j pieces[j](lambda)``.

    Each piece is given by its vertex values; returns (value, barycentric point).
    """
    k = len(pieces[0])
    # variables: lambda_1..lambda_k >= 0 and t = t_plus - t_minus
    c = [Fraction(0)] * k + [Fraction(1), Fraction(-1)]
    a_ub = [[_f(v) for v in p] + [Fraction(-1), Fraction(1)] for p in pieces]
    b_ub = [Fraction(0)] * len(pieces)
    a_eq = [[Fraction(1)] * k + [Fraction(0), Fraction(0)]]
    res = minimize(c, a_ub, b_ub, a_eq, [Fraction(1)])
    if res.status != "optimal":
        raise ArithmeticError(f"unexpected LP status {res.status}")
    return res.value, res.x[:k]


def cone_constraints(functionals: Sequence[Sequence], dim: int) -> tuple[list, list]:
    """Rays and lineality basis of the closed cone ``{v : phi(v) >= 0}``.

    A linear form is nonnegative on the cone iff it is nonnegative on every
    returned ray and vanishes on every lineality vector.
    """
    phis = [list(map(_f, p)) for p in functionals]
    lineal = nullspace(phis, dim) if phis else nullspace([], dim)
    if not phis:
        return [], lineal
    k = dim - len(lineal)
    rays = []
    orth = [list(v) for v in lineal]
    for combo in itertools.combinations(range(len(phis)), max(k - 1, 0)):
        rows = orth + [phis[i] for i in combo]
        ns = nullspace(rows, dim) if rows else nullspace([], dim)
        if len(ns) != 1:
            continue
        v = ns[0]
        for cand in (v, [-x for x in v]):
            if all(dot(p, cand) >= 0 for p in phis):
                if not any(_parallel(cand, r) for r in rays):
                    rays.append(cand)
    return rays, lineal


def _parallel(u, v) -> bool:
    i = next((j for j, x in enumerate(u) if x != 0), None)
    if i is None or v[i] == 0:
        return False
    t = v[i] / u[i]
    return t > 0 and all(b == t * a for a, b in zip(u, v))
