"""Exact scalars: rationals (``fractions.Fraction``) and the field Q(sqrt 21).

Every weight and coefficient in the package is one of these two types. The
linear algebra only needs ``+ - * /`` and comparison with zero, so it runs
unchanged over either.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Rational = Fraction

_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_QUAD_RE = re.compile(r"^(?P<a>[+-]?\d+(?:/\d+)?)(?P<b>[+-]+\d+(?:/\d+)?)\*sqrt21$")


def rat(num: int, den: int = 1) -> Fraction:
    """Canonical reduced rational ``num/den``; raises ``ZeroDivisionError`` for ``den == 0``."""
    if den == 0:
        raise ZeroDivisionError(f"rat({num}, 0): zero denominator")
    return Fraction(int(num), int(den))


class QuadExt:
    """Element ``a + b*sqrt(21)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")
    D = 21

    def __init__(self, a=0, b=0):
        a = a if isinstance(a, Fraction) else Fraction(a)
        b = b if isinstance(b, Fraction) else Fraction(b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @staticmethod
    def _coerce(other) -> QuadExt | None:
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0)
        return None

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadExt(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, QuadExt]

SQRT21 = QuadExt(0, 1)


def format_scalar(x: Scalar) -> str:
    """``"p/q"`` for rationals, ``"p/q+r/s*sqrt21"`` for extension elements."""
    if isinstance(x, QuadExt):
        if x.b == 0:
            return str(x.a)
        b = str(x.b)
        sign = "" if b.startswith("-") else "+"
        return f"{x.a}{sign}{b}*sqrt21"
    return str(Fraction(x))


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`. Decimal strings are rejected."""
    s = text.strip().replace(" ", "")
    if _RAT_RE.match(s):
        return Fraction(s)
    m = _QUAD_RE.match(s)
    if m:
        bpart = m.group("b")
        sign = -1 if bpart.count("-") % 2 else 1
        return QuadExt(Fraction(m.group("a")), sign * Fraction(bpart.lstrip("+-")))
    raise ValueError(f"not an exact scalar: {text!r}")


def kappa(sign: int) -> QuadExt:
    """The weight ``-(9 + sign*sqrt21)/12`` of the order-5 Feigin-Fuchs operators."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return QuadExt(Fraction(-9, 12), Fraction(-sign, 12))


def is_rational(x: Scalar) -> bool:
    return not isinstance(x, QuadExt) or x.is_rational()
