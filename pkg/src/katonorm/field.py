"""Exact arithmetic in the number field Q(i, sqrt 2).

An element is stored as four rationals ``(a, b, c, d)`` standing for
``a + b*r2 + c*i + d*i*r2`` where ``r2 = sqrt(2)``.  This is the smallest
field that contains both the factors ``i*(omega, m - n)`` of the unperturbed
Liouvillian and the ``1/sqrt(2)`` of the complex canonical chart, so both
charts stay exact.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpq

__all__ = ["FieldElement", "as_rational", "format_rational", "ZERO", "ONE", "I", "SQRT2"]

_ZQ = mpq(0)


def as_rational(value) -> mpq:
    """Convert ints, Fractions, mpq and strings like ``'-3/8'`` to ``mpq``."""
    if isinstance(value, type(_ZQ)):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, type(gmpy2.mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"not a rational literal: {value!r}")
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(int(num), int(den) if den else 1)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(q: mpq) -> str:
    """Lowest-terms ``num/den`` text, ``num`` alone when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class FieldElement:
    """Immutable element ``a + b*r2 + c*i + d*i*r2`` of Q(i, sqrt 2)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", as_rational(a))
        object.__setattr__(self, "b", as_rational(b))
        object.__setattr__(self, "c", as_rational(c))
        object.__setattr__(self, "d", as_rational(d))

    @classmethod
    def _raw(cls, a, b, c, d) -> "FieldElement":
        # trusted constructor: all four arguments are already mpq
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "c", c)
        object.__setattr__(obj, "d", d)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @classmethod
    def coerce(cls, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex numbers are not exact")
        return cls._raw(as_rational(value), _ZQ, _ZQ, _ZQ)

    # -- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b) or bool(self.c) or bool(self.d)

    def is_zero(self) -> bool:
        return not self

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def components(self) -> tuple[mpq, mpq, mpq, mpq]:
        return (self.a, self.b, self.c, self.d)

    def to_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return FieldElement._raw(self.a + other.a, self.b + other.b,
                                 self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return FieldElement._raw(self.a - other.a, self.b - other.b,
                                 self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            try:
                q = as_rational(other)
            except TypeError:
                return NotImplemented
            return self.scale(q)
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        if not (f or g or h):
            return FieldElement._raw(a * e, b * e, c * e, d * e)
        if not (b or c or d):
            return FieldElement._raw(a * e, a * f, a * g, a * h)
        # r2^2 = 2, i^2 = -1
        return FieldElement._raw(
            a * e + 2 * b * f - c * g - 2 * d * h,
            a * f + b * e - c * h - d * g,
            a * g + c * e + 2 * b * h + 2 * d * f,
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def scale(self, q) -> "FieldElement":
        """Multiply by a rational."""
        return FieldElement._raw(self.a * q, self.b * q, self.c * q, self.d * q)

    def mul_i(self) -> "FieldElement":
        """Multiply by the imaginary unit."""
        return FieldElement._raw(-self.c, -self.d, self.a, self.b)

    def conjugate(self) -> "FieldElement":
        """Complex conjugation ``i -> -i``."""
        return FieldElement._raw(self.a, self.b, -self.c, -self.d)

    def sqrt2_conjugate(self) -> "FieldElement":
        """The automorphism ``r2 -> -r2``."""
        return FieldElement._raw(self.a, -self.b, self.c, -self.d)

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(i, sqrt 2)")
        # x * conj(x) lies in Q(sqrt 2); its r2-norm lies in Q
        w = self * self.conjugate()
        norm = w.a * w.a - 2 * w.b * w.b
        return (self.conjugate() * w.sqrt2_conjugate()).scale(1 / norm)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            try:
                q = as_rational(other)
            except TypeError:
                return NotImplemented
            if not q:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / q)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElement.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(int(self.a.numerator), int(self.a.denominator)))
        return hash((self.a, self.b, self.c, self.d))

    # -- text -------------------------------------------------------------
    def __str__(self):
        parts = []
        for value, suffix in ((self.a, ""), (self.b, "*r2"), (self.c, "*i"), (self.d, "*i*r2")):
            if not value:
                continue
            text = format_rational(abs(value)) + suffix
            if not parts:
                parts.append(("-" if value < 0 else "") + text)
            else:
                parts.append(("- " if value < 0 else "+ ") + text)
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FieldElement({self})"

    def __reduce__(self):
        return (FieldElement, (self.a, self.b, self.c, self.d))

    _TERM = re.compile(
        r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(\*?\s*(?:i\s*\*\s*r2|r2\s*\*\s*i|r2|i))?\s*")

    @classmethod
    def parse(cls, text: str) -> "FieldElement":
        """Parse the output layout, e.g. ``'1/2 - 3/4*i*r2'``."""
        src = text.strip()
        if src.startswith("(") and src.endswith(")"):
            src = src[1:-1]
        if not src.strip():
            raise ValueError("empty field element")
        pos, comps, first = 0, [_ZQ, _ZQ, _ZQ, _ZQ], True
        while pos < len(src):
            m = cls._TERM.match(src, pos)
            if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"malformed field element {text!r} at column {pos + 1}")
            if not first and m.group(1) is None:
                raise ValueError(f"missing sign in {text!r} at column {pos + 1}")
            first = False
            value = as_rational(m.group(2)) if m.group(2) else mpq(1)
            if m.group(1) == "-":
                value = -value
            unit = (m.group(3) or "").replace("*", "").replace(" ", "")
            slot = {"": 0, "r2": 1, "i": 2, "ir2": 3, "r2i": 3}[unit]
            if unit and m.group(2) and "*" not in m.group(3):
                raise ValueError(f"missing '*' before {unit!r} in {text!r}")
            comps[slot] += value
            pos = m.end()
        return cls._raw(*comps)


ZERO = FieldElement()
ONE = FieldElement(1)
I = FieldElement(0, 0, 1)
SQRT2 = FieldElement(0, 1)
