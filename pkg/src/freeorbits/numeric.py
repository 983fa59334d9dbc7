"""Exact arithmetic in the real quadratic field Q(sqrt 2).

A :class:`Scalar` is stored as three integers ``(a, b, d)`` meaning
``(a + b*sqrt2) / d`` with ``d > 0`` and ``gcd(a, b, d) == 1``.  The rational
coordinates ``r = a/d`` and ``s = b/d`` are exposed as :class:`Fraction`
properties; because sqrt 2 is irrational the representation is unique and
equality is plain tuple equality.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt, sqrt
from numbers import Rational

from .errors import InvalidInput

__all__ = ["Scalar", "parse_scalar", "ZERO", "ONE", "SQRT2", "scalar_sign", "scalar_arith", "as_scalar"]

_SQRT2_FLOAT = sqrt(2.0)


def _sign_of(a: int, b: int) -> int:
    # sign of a + b*sqrt2; mixed-sign case compares a^2 with 2 b^2
    if a >= 0 and b >= 0:
        return 0 if (a == 0 and b == 0) else 1
    if a <= 0 and b <= 0:
        return -1
    if a > 0:
        return 1 if a * a > 2 * b * b else -1
    return 1 if 2 * b * b > a * a else -1


def _floor_sqrt2_multiple(b: int) -> int:
    """floor(b * sqrt2) for an integer b."""
    if b == 0:
        return 0
    r = isqrt(2 * b * b)
    return r if b > 0 else -r - 1


class Scalar:
    """An element ``r + s*sqrt2`` of Q(sqrt 2) with rational ``r`` and ``s``."""

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __new__(cls, r=0, s=0):
        if isinstance(r, Scalar) and s == 0:
            return r
        if isinstance(r, str) and s == 0 and "sqrt" in r:
            return parse_scalar(r)
        fr = _to_fraction(r)
        fs = _to_fraction(s)
        d = fr.denominator * fs.denominator // gcd(fr.denominator, fs.denominator)
        return _make(fr.numerator * (d // fr.denominator), fs.numerator * (d // fs.denominator), d)

    # construction -----------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"p/q+u/v*sqrt2"``; either term may be omitted."""
        return parse_scalar(text)

    @property
    def r(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def s(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    def parts(self) -> tuple[int, int, int]:
        return self._a, self._b, self._d

    def conjugate(self) -> "Scalar":
        return _make(self._a, -self._b, self._d)

    def sign(self) -> int:
        return _sign_of(self._a, self._b)

    def floor(self) -> int:
        a, b, d = self._a, self._b, self._d
        if b == 0:
            return a // d
        # floor(x / d) == floor(floor(x) / d) for a positive integer d
        return (a + _floor_sqrt2_multiple(b)) // d

    def frac(self) -> "Scalar":
        """The representative in [0, 1)."""
        k = self.floor()
        return self if k == 0 else self - k

    def __float__(self) -> float:
        a, b, d = self._a, self._b, self._d
        if b == 0:
            return a / d
        return float(Fraction(a, d)) + float(Fraction(b, d)) * _SQRT2_FLOAT

    # text -------------------------------------------------------------

    def __str__(self) -> str:
        r, s = self.r, self.s
        if s == 0:
            return f"{r.numerator}/{r.denominator}"
        tail = f"{abs(s.numerator)}/{s.denominator}*sqrt2"
        if r == 0:
            return ("-" if s < 0 else "") + tail
        return f"{r.numerator}/{r.denominator}{'-' if s < 0 else '+'}{tail}"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    # comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Rational)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(Fraction(self._a, self._d)) if self._b == 0 else hash((self._a, self._b, self._d))
            self._hash = h
            return h

    def _cmp(self, other) -> int:
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        d1, d2 = self._d, other._d
        if self._b == 0 and other._b == 0:
            lhs, rhs = self._a * d2, other._a * d1
            return (lhs > rhs) - (lhs < rhs)
        return _sign_of(self._a * d2 - other._a * d1, self._b * d2 - other._b * d1)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self._a != 0 or self._b != 0

    # arithmetic -------------------------------------------------------

    def __neg__(self):
        return _make_reduced(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self
            return _make_reduced(self._a + other * self._d, self._b, self._d)
        if not isinstance(other, Scalar):
            if isinstance(other, Rational):
                other = Scalar(other)
            else:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return _make(self._a + other._a, self._b + other._b, d1)
        return _make(self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self
            return _make_reduced(self._a - other * self._d, self._b, self._d)
        if not isinstance(other, Scalar):
            if isinstance(other, Rational):
                other = Scalar(other)
            else:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return _make(self._a - other._a, self._b - other._b, d1)
        return _make(self._a * d2 - other._a * d1, self._b * d2 - other._b * d1, d1 * d2)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            return _make(self._a * other, self._b * other, self._d)
        if not isinstance(other, Scalar):
            if isinstance(other, Rational):
                other = Scalar(other)
            else:
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return _make(a1 * a2, 0, self._d * other._d)
        return _make(a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise InvalidInput("division by zero")
            return _make(self._a, self._b, self._d * other)
        if not isinstance(other, Scalar):
            if isinstance(other, Rational):
                other = Scalar(other)
            else:
                return NotImplemented
        a2, b2, d2 = other._a, other._b, other._d
        if a2 == 0 and b2 == 0:
            raise InvalidInput("division by zero")
        a1, b1, d1 = self._a, self._b, self._d
        if b2 == 0:
            return _make(a1 * d2, b1 * d2, d1 * a2)
        # multiply through by the conjugate a2 - b2*sqrt2
        norm = a2 * a2 - 2 * b2 * b2
        return _make((a1 * a2 - 2 * b1 * b2) * d2, (b1 * a2 - a1 * b2) * d2, d1 * norm)

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __reduce__(self):
        return (_make_reduced, (self._a, self._b, self._d))


def _make_reduced(a: int, b: int, d: int) -> Scalar:
    obj = object.__new__(Scalar)
    obj._a = a
    obj._b = b
    obj._d = d
    return obj


def _make(a: int, b: int, d: int) -> Scalar:
    if d < 0:
        a, b, d = -a, -b, -d
    if d != 1:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
    return _make_reduced(a, b, d)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    raise InvalidInput(f"not an exact rational: {x!r}")


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x)


_RAT = r"[+-]?\d+(?:/\d+)?"
_TERM_RE = re.compile(
    rf"^\s*(?:(?P<r>{_RAT})(?!\s*\*?\s*sqrt))?\s*"
    rf"(?:(?P<s>[+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*sqrt\(?2\)?)?\s*$"
)


def parse_scalar(text: str) -> Scalar:
    if not isinstance(text, str):
        raise InvalidInput(f"scalar must be a string, got {type(text).__name__}")
    m = _TERM_RE.match(text)
    if m is None or (m.group("r") is None and m.group("s") is None):
        raise InvalidInput(f"malformed scalar: {text!r}")
    r = Fraction(m.group("r")) if m.group("r") is not None else Fraction(0)
    s = Fraction(0)
    if m.group("s") is not None:
        coeff = m.group("s").replace(" ", "")
        if coeff in ("", "+"):
            s = Fraction(1)
        elif coeff == "-":
            s = Fraction(-1)
        else:
            if m.group("r") is not None and coeff[0] not in "+-":
                raise InvalidInput(f"malformed scalar: {text!r}")
            s = Fraction(coeff)
    return Scalar(r, s)


def scalar_sign(x: Scalar) -> int:
    return x.sign()


def scalar_arith(x: Scalar, y: Scalar, op: str) -> Scalar:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise InvalidInput(f"unknown operation {op!r}")


ZERO = Scalar(0)
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)
