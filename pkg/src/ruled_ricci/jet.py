"""Order-3 Taylor jets: a value together with its first three derivatives.

Every primitive is lifted through the order-3 Faa di Bruno formula, so
derivatives come out exact up to rounding.  Jets with ``nan`` in a high slot
(e.g. the third derivative of a quantity built from ``alpha'``) propagate the
``nan`` only into that slot and never contaminate lower orders.
"""

from __future__ import annotations

import math
from typing import Union

from .errors import DomainError

Number = Union[int, float]


class Jet3:
    """Value and derivatives ``(d0, d1, d2, d3)`` of a scalar function of ``t``."""

    __slots__ = ("d0", "d1", "d2", "d3")

    def __init__(self, d0: float, d1: float = 0.0, d2: float = 0.0, d3: float = 0.0):
        self.d0 = float(d0)
        self.d1 = float(d1)
        self.d2 = float(d2)
        self.d3 = float(d3)

    @classmethod
    def variable(cls, t: float) -> "Jet3":
        return cls(t, 1.0, 0.0, 0.0)

    @classmethod
    def constant(cls, c: float) -> "Jet3":
        return cls(c, 0.0, 0.0, 0.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.d0, self.d1, self.d2, self.d3)

    def __iter__(self):
        return iter(self.as_tuple())

    def __repr__(self) -> str:
        return f"Jet3({self.d0!r}, {self.d1!r}, {self.d2!r}, {self.d3!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Jet3):
            return self.as_tuple() == other.as_tuple()
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # ------------------------------------------------------------------ ring
    @staticmethod
    def lift(x: "Jet3 | Number") -> "Jet3":
        return x if isinstance(x, Jet3) else Jet3(x)

    def __neg__(self) -> "Jet3":
        return Jet3(-self.d0, -self.d1, -self.d2, -self.d3)

    def __pos__(self) -> "Jet3":
        return self

    def __add__(self, other: "Jet3 | Number") -> "Jet3":
        if not isinstance(other, Jet3):
            return Jet3(self.d0 + other, self.d1, self.d2, self.d3)
        return Jet3(self.d0 + other.d0, self.d1 + other.d1, self.d2 + other.d2, self.d3 + other.d3)

    __radd__ = __add__

    def __sub__(self, other: "Jet3 | Number") -> "Jet3":
        if not isinstance(other, Jet3):
            return Jet3(self.d0 - other, self.d1, self.d2, self.d3)
        return Jet3(self.d0 - other.d0, self.d1 - other.d1, self.d2 - other.d2, self.d3 - other.d3)

    def __rsub__(self, other: Number) -> "Jet3":
        return Jet3(other - self.d0, -self.d1, -self.d2, -self.d3)

    def __mul__(self, other: "Jet3 | Number") -> "Jet3":
        if not isinstance(other, Jet3):
            return Jet3(self.d0 * other, self.d1 * other, self.d2 * other, self.d3 * other)
        f0, f1, f2, f3 = self.d0, self.d1, self.d2, self.d3
        g0, g1, g2, g3 = other.d0, other.d1, other.d2, other.d3
        return Jet3(
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * (f2 * g1 + f1 * g2) + f0 * g3,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet3":
        x = self.d0
        if x == 0.0:
            raise ZeroDivisionError("jet division by zero")
        r = 1.0 / x
        return self._compose(r, -r * r, 2.0 * r ** 3, -6.0 * r ** 4)

    def __truediv__(self, other: "Jet3 | Number") -> "Jet3":
        if not isinstance(other, Jet3):
            if other == 0:
                raise ZeroDivisionError("jet division by zero")
            inv = 1.0 / other
            return self * inv
        return self * other.reciprocal()

    def __rtruediv__(self, other: Number) -> "Jet3":
        return self.reciprocal() * other

    def __pow__(self, exponent: "Jet3 | Number") -> "Jet3":
        if isinstance(exponent, Jet3):
            if exponent.d1 == exponent.d2 == exponent.d3 == 0.0:
                return self ** exponent.d0
            return exp(exponent * log(self))
        if float(exponent).is_integer():
            return _int_power(self, int(exponent))
        return exp(log(self) * float(exponent))

    def __rpow__(self, base: Number) -> "Jet3":
        return Jet3(base) ** self

    # ------------------------------------------------------------ composition
    def _compose(self, g0: float, g1: float, g2: float, g3: float) -> "Jet3":
        """Chain rule for ``g(self)`` given ``g`` and its derivatives at ``self.d0``."""
        f1, f2, f3 = self.d1, self.d2, self.d3
        return Jet3(
            g0,
            g1 * f1,
            g2 * f1 * f1 + g1 * f2,
            g3 * f1 ** 3 + 3.0 * g2 * f1 * f2 + g1 * f3,
        )


def _int_power(x: Jet3, n: int) -> Jet3:
    if n < 0:
        return _int_power(x, -n).reciprocal()
    result = Jet3(1.0)
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


# ---------------------------------------------------------------- primitives
def sin(x: Jet3) -> Jet3:
    s, c = math.sin(x.d0), math.cos(x.d0)
    return x._compose(s, c, -s, -c)


def cos(x: Jet3) -> Jet3:
    s, c = math.sin(x.d0), math.cos(x.d0)
    return x._compose(c, -s, -c, s)


def tan(x: Jet3) -> Jet3:
    c = math.cos(x.d0)
    if c == 0.0:
        raise DomainError(f"tan undefined at {x.d0!r}")
    t = math.tan(x.d0)
    p = 1.0 + t * t
    return x._compose(t, p, 2.0 * t * p, 2.0 * p * (1.0 + 3.0 * t * t))


def tanh(x: Jet3) -> Jet3:
    th = math.tanh(x.d0)
    q = 1.0 - th * th
    return x._compose(th, q, -2.0 * th * q, q * (6.0 * th * th - 2.0))


def sech(x: Jet3) -> Jet3:
    # 1/cosh overflows to 0 gracefully; cosh alone would overflow first
    a = abs(x.d0)
    s = 2.0 * math.exp(-a) / (1.0 + math.exp(-2.0 * a))
    th = math.tanh(x.d0)
    return x._compose(s, -s * th, s * (2.0 * th * th - 1.0), s * th * (5.0 - 6.0 * th * th))


def exp(x: Jet3) -> Jet3:
    try:
        e = math.exp(x.d0)
    except OverflowError:
        raise DomainError(f"exp overflow at {x.d0!r}") from None
    return x._compose(e, e, e, e)


def log(x: Jet3) -> Jet3:
    v = x.d0
    if v <= 0.0:
        raise DomainError(f"log of non-positive value {v!r}")
    r = 1.0 / v
    return x._compose(math.log(v), r, -r * r, 2.0 * r ** 3)


def sqrt(x: Jet3) -> Jet3:
    v = x.d0
    if v < 0.0:
        raise DomainError(f"sqrt of negative value {v!r}")
    if v == 0.0:
        if x.d1 == x.d2 == x.d3 == 0.0:
            return Jet3(0.0)
        raise DomainError("sqrt is not differentiable at 0")
    r = math.sqrt(v)
    return x._compose(r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v))


def asin(x: Jet3) -> Jet3:
    v = x.d0
    if not -1.0 < v < 1.0:
        if abs(v) == 1.0 and x.d1 == x.d2 == x.d3 == 0.0:
            return Jet3(math.asin(v))
        raise DomainError(f"asin argument {v!r} outside (-1, 1)")
    q = 1.0 / math.sqrt(1.0 - v * v)
    q3 = q ** 3
    return x._compose(math.asin(v), q, v * q3, (1.0 + 2.0 * v * v) * q3 * q * q)


def atan(x: Jet3) -> Jet3:
    v = x.d0
    p = 1.0 / (1.0 + v * v)
    return x._compose(math.atan(v), p, -2.0 * v * p * p, (6.0 * v * v - 2.0) * p ** 3)


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "tanh": tanh,
    "sech": sech,
    "sqrt": sqrt,
    "asin": asin,
    "atan": atan,
    "exp": exp,
    "log": log,
}
