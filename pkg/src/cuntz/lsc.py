"""The Cu-object L([0,1]) of lower semicontinuous step functions with values
in N0 u {inf}, and support comparison of piecewise-linear functions in C([0,1])+.

The way-below rule used here is a reconstruction (levelwise compact
containment): ``f << g`` iff f is finite valued and, for every level n,
the closure of ``{f >= n}`` lies inside the open set ``{g >= n}``.  It is
validated in the tests against the canonical approximating sequences
produced by :func:`approximations`.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .core import CuModel, IncreasingSequence
from .values import INF, ext_add, extnat

ZERO, ONE = Fraction(0), Fraction(1)


def _ext_le(x, y) -> bool:
    return y is INF or (x is not INF and x <= y)


def _ext_min(x, y):
    return x if _ext_le(x, y) else y


def _enc(v):
    return "inf" if v is INF else v


class StepLsc:
    """Step function on [0,1]: value ``intervals[i]`` on ``(t_i, t_{i+1})`` and
    ``points[j]`` at ``t_j``.  Point values must not exceed adjacent interval
    values (lower semicontinuity).  Instances are kept in canonical form.
    """

    __slots__ = ("breaks", "intervals", "points")

    def __init__(self, breaks: Sequence, intervals: Sequence, points: Optional[Sequence] = None):
        br = tuple(Fraction(b) for b in breaks)
        if len(br) < 2 or br[0] != 0 or br[-1] != 1 or any(a >= b for a, b in zip(br, br[1:])):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        iv = tuple(extnat(v) for v in intervals)
        if len(iv) != len(br) - 1:
            raise ValueError("need one interval value per piece")
        if points is None:
            pts = [iv[0]] + [_ext_min(a, b) for a, b in zip(iv, iv[1:])] + [iv[-1]]
        else:
            pts = [extnat(v) for v in points]
            if len(pts) != len(br):
                raise ValueError("need one point value per breakpoint")
        for j, p in enumerate(pts):
            adj = [iv[i] for i in (j - 1, j) if 0 <= i < len(iv)]
            if not all(_ext_le(p, a) for a in adj):
                raise ValueError(f"not lower semicontinuous at t={br[j]}: point value {p} "
                                 f"exceeds an adjacent value {adj}")
        # canonical form: drop breakpoints that carry no information
        nb, ni, npt = [br[0]], [], [pts[0]]
        for j in range(1, len(br)):
            if j < len(br) - 1 and iv[j - 1] == iv[j] == pts[j]:
                continue
            ni.append(iv[j - 1])
            nb.append(br[j])
            npt.append(pts[j])
        self.breaks, self.intervals, self.points = tuple(nb), tuple(ni), tuple(npt)

    @classmethod
    def constant(cls, v) -> StepLsc:
        return cls([0, 1], [v])

    @classmethod
    def indicator(cls, a, b, v=1, closed_left=False, closed_right=False) -> StepLsc:
        """``v`` times the indicator of (a, b); the closed flags add an endpoint
        (only meaningful at 0 or 1, where the result stays lower semicontinuous)."""
        a, b = Fraction(a), Fraction(b)
        br = sorted({ZERO, a, b, ONE})
        iv = [v if (a <= x and y <= b) else 0 for x, y in zip(br, br[1:])]
        pts = []
        for t in br:
            inside = a < t < b or (t == a and closed_left) or (t == b and closed_right)
            pts.append(v if inside else 0)
        return cls(br, iv, pts)

    def value(self, x) -> object:
        x = Fraction(x)
        for j, t in enumerate(self.breaks):
            if x == t:
                return self.points[j]
            if x < t:
                return self.intervals[j - 1]
        raise ValueError("point outside [0,1]")

    def atoms(self, grid: Sequence[Fraction]) -> list:
        """Values on the atoms of ``grid``: (point, value) and ((s, t), value)."""
        out = []
        for j, t in enumerate(grid):
            out.append((t, self.value(t)))
            if j + 1 < len(grid):
                out.append(((t, grid[j + 1]), self.value((t + grid[j + 1]) / 2)))
        return out

    def max_value(self):
        m = 0
        for v in self.intervals + self.points:
            if v is INF:
                return INF
            m = max(m, v)
        return m

    def is_finite(self) -> bool:
        return all(v is not INF for v in self.intervals)

    def __eq__(self, other):
        return (isinstance(other, StepLsc) and self.breaks == other.breaks
                and self.intervals == other.intervals and self.points == other.points)

    def __hash__(self):
        return hash((self.breaks, self.intervals, self.points))

    def __repr__(self):
        return f"StepLsc({format_step(self)!r})"

    def to_json(self) -> dict:
        return {"breaks": [str(b) for b in self.breaks],
                "intervals": [_enc(v) for v in self.intervals],
                "points": [_enc(v) for v in self.points]}

    @classmethod
    def from_json(cls, obj) -> StepLsc:
        if isinstance(obj, str):
            return parse_step(obj)
        return cls([Fraction(b) for b in obj["breaks"]], obj["intervals"], obj.get("points"))


def common_grid(*fs) -> list[Fraction]:
    return sorted(set().union(*[set(f.breaks) for f in fs]))


def _from_atoms(grid, atom_values) -> StepLsc:
    pts = atom_values[0::2]
    ivs = atom_values[1::2]
    return StepLsc(grid, ivs, pts)


def lsc_add(f: StepLsc, g: StepLsc) -> StepLsc:
    grid = common_grid(f, g)
    vals = [ext_add(a[1], b[1]) for a, b in zip(f.atoms(grid), g.atoms(grid))]
    return _from_atoms(grid, vals)


def lsc_leq(f: StepLsc, g: StepLsc) -> bool:
    grid = common_grid(f, g)
    return all(_ext_le(a[1], b[1]) for a, b in zip(f.atoms(grid), g.atoms(grid)))


def _level_atoms(f: StepLsc, grid, n) -> list[bool]:
    return [_ext_le(n, v) for _, v in f.atoms(grid)]


def _closure(mask: list[bool]) -> list[bool]:
    out = list(mask)
    for i in range(1, len(mask), 2):  # interval atoms sit at odd positions
        if mask[i]:
            out[i - 1] = out[i + 1] = True
    return out


def lsc_way_below(f: StepLsc, g: StepLsc) -> bool:
    """Levelwise compact containment, see the module docstring."""
    if not f.is_finite() or any(v is INF for v in f.points):
        return False
    grid = common_grid(f, g)
    top = f.max_value()
    for n in range(1, top + 1):
        cl = _closure(_level_atoms(f, grid, n))
        gl = _level_atoms(g, grid, n)
        if any(c and not h for c, h in zip(cl, gl)):
            return False
    return True


def _components(grid, mask):
    """Maximal runs of atoms: list of (left, left_closed, right, right_closed)."""
    out = []
    i = 0
    n = len(mask)
    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and mask[j + 1]:
            j += 1
        left = grid[i // 2]
        right = grid[(j + 1) // 2]
        out.append((left, i % 2 == 0, right, j % 2 == 0))
        i = j + 1
    return out


def _shrink(components, k):
    """Points at distance > 1/k from the complement, per component."""
    h = Fraction(1, k)
    out = []
    for left, lc, right, rc in components:
        # an end is free when the component reaches the boundary of [0,1] there
        lfree = lc and left == 0
        rfree = rc and right == 1
        a = left if lfree else left + h
        b = right if rfree else right - h
        if a < b or (a == b and lfree and rfree):
            out.append((a, lfree, b, rfree))
    return out


def approximations(g: StepLsc, k: int) -> StepLsc:
    """Canonical approximation g_k: level sets shrunk by 1/k, values capped at k."""
    grid = common_grid(g)
    finite = [v for v in g.intervals + g.points if v is not INF]
    fmax = max(finite, default=0)
    pieces = []  # (multiplicity, shrunk components)
    for n in range(1, min(k, fmax + 1) + 1):
        mask = _level_atoms(g, grid, n)
        if not any(mask):
            break
        # levels above the largest finite value all equal {g = inf}
        mult = k - fmax if n == fmax + 1 else 1
        pieces.append((mult, _shrink(_components(grid, mask), k)))
    pts = {ZERO, ONE}
    for _, comps in pieces:
        for a, _, b, _ in comps:
            pts.update((a, b))
    newgrid = sorted(p for p in pts if 0 <= p <= 1)

    def inside(x, comps, is_point):
        for a, ac, b, bc in comps:
            if is_point:
                if (a < x < b) or (x == a and ac) or (x == b and bc):
                    return True
            else:
                s, t = x
                if a <= s and t <= b:
                    return True
        return False

    vals = []
    for j, t in enumerate(newgrid):
        vals.append(sum(m for m, c in pieces if inside(t, c, True)))
        if j + 1 < len(newgrid):
            vals.append(sum(m for m, c in pieces if inside((t, newgrid[j + 1]), c, False)))
    return _from_atoms(newgrid, vals)


def way_below_oracle(f: StepLsc, g: StepLsc, kmax: int = 256) -> bool:
    """``exists k <= kmax: f <= g_k`` (the sequence definition of <<)."""
    return any(lsc_leq(f, approximations(g, k)) for k in range(1, kmax + 1))


def is_projection_class_lsc(f: StepLsc) -> bool:
    """Step functions have finite range, so 0 is always isolated."""
    return True


class LscModel(CuModel):
    """L([0,1]) restricted to step functions with rational breakpoints."""

    name = "lsc"

    def __init__(self, values: Sequence = (0, 1, 2, INF), max_depth: int = 4):
        self.values = tuple(values)
        self.max_depth = max_depth

    @property
    def zero(self):
        return StepLsc.constant(0)

    def add(self, x, y):
        return lsc_add(x, y)

    def leq(self, x, y):
        return lsc_leq(x, y)

    def way_below(self, x, y):
        return lsc_way_below(x, y)

    def eq(self, x, y):
        return x == y

    def basis(self) -> Iterator[StepLsc]:
        seen = set()
        for depth in range(0, self.max_depth + 1):
            m = 2**depth
            grid = [Fraction(i, m) for i in range(m + 1)]
            for iv in itertools.product(self.values, repeat=m):
                f = StepLsc(grid, iv)
                if f not in seen:
                    seen.add(f)
                    yield f
                # a variant dipping to 0 at an interior breakpoint
                if m > 1 and iv[m // 2 - 1] != 0 and iv[m // 2] != 0:
                    pts = list(f.value(t) for t in grid)
                    pts[m // 2] = 0
                    h = StepLsc(grid, iv, pts)
                    if h not in seen:
                        seen.add(h)
                        yield h

    def rapid_sequence(self, x):
        return IncreasingSequence([approximations(x, 1)], lambda i: approximations(x, i + 1), limit=x)

    def way_below_witnesses(self, x, k=8):
        return [approximations(x, j) for j in range(1, k + 1)] + \
            [approximations(x, 2**j) for j in range(4, 12)] + ([x] if self.way_below(x, x) else [])

    def encode(self, x):
        return x.to_json()

    def decode(self, obj):
        return StepLsc.from_json(obj)

    def format(self, x):
        return format_step(x)

    def parse(self, text):
        return parse_step(text)


# ------------------------------------------------------------ text format

_TOKEN = re.compile(r"\s*(?:(\[)\s*([^\]]+?)\s*\]|(\{)\s*([^}]+?)\s*\}|([0-9/]+))")


def parse_step(text: str) -> StepLsc:
    """Parse ``0 [a] 1/4 [b] 1`` with optional point values ``t {v}``."""
    breaks, ivs, pts = [], [], []
    pos = 0
    s = text.strip()
    expect = "break"
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at column {pos}: {s[pos:]!r}")
        if m.group(5) is not None:
            if expect != "break":
                raise ValueError(f"expected an interval value at column {pos}")
            breaks.append(Fraction(m.group(5)))
            pts.append(None)
            expect = "after_break"
        elif m.group(3):
            if expect != "after_break" or pts[-1] is not None:
                raise ValueError(f"misplaced point value at column {pos}")
            pts[-1] = extnat(m.group(4))
        else:
            if expect != "after_break":
                raise ValueError(f"misplaced interval value at column {pos}")
            ivs.append(extnat(m.group(2)))
            expect = "break"
        pos = m.end()
    if expect != "after_break":
        raise ValueError("step function must end with the breakpoint 1")
    if all(p is None for p in pts):
        return StepLsc(breaks, ivs)
    full = []
    for j, p in enumerate(pts):
        if p is None:
            adj = [ivs[i] for i in (j - 1, j) if 0 <= i < len(ivs)]
            p = adj[0] if len(adj) == 1 else _ext_min(*adj)
        full.append(p)
    return StepLsc(breaks, ivs, full)


def format_step(f: StepLsc) -> str:
    out = []
    for j, t in enumerate(f.breaks):
        adj = [f.intervals[i] for i in (j - 1, j) if 0 <= i < len(f.intervals)]
        canon = adj[0] if len(adj) == 1 else _ext_min(*adj)
        out.append(str(t) if f.points[j] == canon else f"{t} {{{_fmt(f.points[j])}}}")
        if j < len(f.intervals):
            out.append(f"[{_fmt(f.intervals[j])}]")
    return " ".join(out)


def _fmt(v):
    return "inf" if v is INF else str(v)


# ------------------------------------------------------------ C([0,1])+

class PLContinuous:
    """Continuous piecewise-linear ``f >= 0`` on [0,1] with rational data."""

    __slots__ = ("breaks", "values")

    def __init__(self, breaks: Sequence, values: Sequence):
        br = tuple(Fraction(b) for b in breaks)
        vs = tuple(Fraction(v) for v in values)
        if len(br) < 2 or br[0] != 0 or br[-1] != 1 or any(a >= b for a, b in zip(br, br[1:])):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if len(vs) != len(br):
            raise ValueError("need one value per breakpoint")
        if any(v < 0 for v in vs):
            raise ValueError("values must be nonnegative")
        self.breaks, self.values = br, vs

    @classmethod
    def tent(cls, a, peak, b, height=1) -> PLContinuous:
        """Zero outside (a, b), linear up to ``height`` at ``peak``."""
        pts = sorted({ZERO, Fraction(a), Fraction(peak), Fraction(b), ONE})
        vals = [Fraction(height) if t == Fraction(peak) else ZERO for t in pts]
        return cls(pts, vals)

    def __call__(self, x):
        x = Fraction(x)
        for (s, fs), (t, ft) in zip(zip(self.breaks, self.values), zip(self.breaks[1:], self.values[1:])):
            if s <= x <= t:
                return fs + (ft - fs) * (x - s) / (t - s)
        raise ValueError("point outside [0,1]")

    def __repr__(self):
        return f"PLContinuous({list(map(str, self.breaks))}, {list(map(str, self.values))})"

    def scale(self, c) -> PLContinuous:
        return PLContinuous(self.breaks, [Fraction(c) * v for v in self.values])

    def eps_cut(self, eps) -> PLContinuous:
        """``(f - eps)_+`` with the crossing points inserted exactly."""
        eps = Fraction(eps)
        br, vs = [self.breaks[0]], [max(ZERO, self.values[0] - eps)]
        for (s, fs), (t, ft) in zip(zip(self.breaks, self.values), zip(self.breaks[1:], self.values[1:])):
            if (fs - eps) * (ft - eps) < 0:
                c = s + (eps - fs) * (t - s) / (ft - fs)
                br.append(c)
                vs.append(ZERO)
            br.append(t)
            vs.append(max(ZERO, ft - eps))
        return PLContinuous(br, vs)

    def to_json(self):
        return {"breaks": [str(b) for b in self.breaks], "values": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj):
        return cls([Fraction(b) for b in obj["breaks"]], [Fraction(v) for v in obj["values"]])


def support_mask(h: Callable, grid: Sequence[Fraction]) -> list[bool]:
    """Atoms of ``grid`` on which ``h > 0``.

    Valid when, on each open grid interval, ``h`` is either identically zero
    or positive throughout (true for PL functions and their powers when the
    grid contains the breakpoints); positivity is read off at the midpoint.
    """
    out = []
    for j, t in enumerate(grid):
        out.append(h(t) > 0)
        if j + 1 < len(grid):
            out.append(h((t + grid[j + 1]) / 2) > 0)
    return out


def _grid(*fs):
    return sorted(set().union(*[set(f.breaks) for f in fs]))


def support(f: PLContinuous) -> list[tuple]:
    """Open support as components ``(left, left_closed, right, right_closed)``."""
    g = _grid(f)
    return _components(g, support_mask(f, g))


def supp_compare(f, g) -> bool:
    """``f <~ g`` in C([0,1]): supp f contained in supp g."""
    grid = _grid(f, g)
    return all(b or not a for a, b in zip(support_mask(f, grid), support_mask(g, grid)))


def supp_closure_inside(f: PLContinuous, g: PLContinuous) -> bool:
    """closure(supp f) contained in supp g."""
    grid = _grid(f, g)
    cl = _closure(support_mask(f, grid))
    return all(b or not a for a, b in zip(cl, support_mask(g, grid)))


def is_projection_class_pl(f: PLContinuous) -> bool:
    """0 is isolated in the range of f: f = 0 or f > 0 on the closure of its support."""
    grid = _grid(f)
    mask = support_mask(f, grid)
    if not any(mask):
        return True
    cl = _closure(mask)
    return all(f(t) > 0 for t, c in zip(grid, cl[0::2]) if c)


class PowerPL:
    """``f**n`` for a PL function (used to compare f with its powers)."""

    def __init__(self, f: PLContinuous, n: int):
        self.f, self.n, self.breaks = f, n, f.breaks

    def __call__(self, x):
        return self.f(x) ** self.n
