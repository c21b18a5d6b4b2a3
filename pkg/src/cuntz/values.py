"""Extended value domains.

``ExtNat`` values are plain ``int`` objects together with the singleton
:data:`INF`.  ``ExtNonnegScalar`` values are ``Fraction`` objects,
:class:`QuadraticNumber` objects ``a + b*sqrt(d)``, or :data:`INF`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import isqrt
from numbers import Rational
from typing import Union


class Infinity:
    """The absorbing top element shared by every extended domain."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "∞"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self):
        return hash("cuntz.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        # 0 * x = 0 is the semigroup convention for n-fold sums.
        if other == 0:
            return 0
        return self

    __rmul__ = __mul__


INF = Infinity()


def is_inf(x) -> bool:
    return x is INF


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _coerce(x):
    if isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Fraction(x)
    return None


@total_ordering
class QuadraticNumber:
    """Exact element ``a + b*sqrt(d)`` of the real field Q(sqrt d).

    Arithmetic with rationals is closed; arithmetic between numbers with
    different radicands raises ``ValueError``.  Results with ``b == 0``
    collapse to ``Fraction``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if not _squarefree(d):
            raise ValueError(f"radicand must be square-free and > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    @classmethod
    def sqrt(cls, d: int) -> QuadraticNumber:
        return cls(0, 1, d)

    @staticmethod
    def _make(a, b, d):
        if b == 0:
            return Fraction(a)
        return QuadraticNumber(a, b, d)

    def _pair(self, other):
        o = _coerce(other)
        if o is None:
            return None
        if isinstance(o, Fraction):
            return o, Fraction(0)
        if o.d != self.d:
            raise ValueError(f"mixed radicals sqrt({self.d}) and sqrt({o.d})")
        return o.a, o.b

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.a == 0:
            return f"{self.b}√{self.d}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}√{self.d}"

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __eq__(self, other):
        if other is INF:
            return False
        try:
            p = self._pair(other)
        except ValueError:
            return False
        if p is None:
            return NotImplemented
        return self.a == p[0] and self.b == p[1]

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        if a >= 0 and b >= 0:
            return 0 if (a == 0 and b == 0) else 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with d*b^2
        lhs, rhs = a * a, d * b * b
        if a > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def __lt__(self, other):
        if other is INF:
            return True
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return QuadraticNumber(self.a - p[0], self.b - p[1], self.d).sign() < 0

    def __add__(self, other):
        if other is INF:
            return INF
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return self._make(self.a + p[0], self.b + p[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return self._make(self.a - p[0], self.b - p[1], self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if other is INF:
            return INF if self.sign() > 0 else 0
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b = p
        return self._make(self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, Fraction):
            if o == 0:
                raise ZeroDivisionError("division by zero")
            return self._make(self.a / o, self.b / o, self.d)
        if o.d != self.d:
            raise ValueError(f"mixed radicals sqrt({self.d}) and sqrt({o.d})")
        n = o.norm()
        num = self * o.conjugate()
        if isinstance(num, Fraction):
            return num / n
        return self._make(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(o, 0, self.d) / self if isinstance(o, Fraction) else o / self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5


Scalar = Union[Fraction, QuadraticNumber]
ExtScalar = Union[Fraction, QuadraticNumber, Infinity]
ExtNat = Union[int, Infinity]


def scalar(x) -> ExtScalar:
    """Coerce ``x`` (int, Fraction, str like "3/4" or "inf", QuadraticNumber) to an ExtScalar."""
    if x is INF or isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "∞", "infinity"):
            return INF
        return Fraction(s)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return Fraction(x)


def extnat(x) -> ExtNat:
    if x is INF:
        return INF
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "∞", "infinity"):
            return INF
        x = int(s)
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ValueError(f"not a nonnegative integer or INF: {x!r}")
    return x


def ext_add(x, y):
    if x is INF or y is INF:
        return INF
    return x + y


def ext_mul(n: int, x):
    """n-fold sum of ``x`` (``n`` a nonnegative integer)."""
    if n == 0:
        return 0
    if x is INF:
        return INF
    return n * x


def ext_min(*xs):
    return min(xs)


def sqrt_exact(x: Fraction):
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def encode_value(x) -> object:
    """JSON encoding of an extended value."""
    if x is INF:
        return "inf"
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, QuadraticNumber):
        return {"a": str(x.a), "b": str(x.b), "d": x.d}
    raise TypeError(f"cannot encode {x!r}")


def decode_value(obj) -> object:
    if obj == "inf":
        return INF
    if isinstance(obj, dict):
        return QuadraticNumber._make(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"]))
    if isinstance(obj, int):
        return obj
    return Fraction(obj)


def format_value(x) -> str:
    if x is INF:
        return "∞"
    return str(x)
