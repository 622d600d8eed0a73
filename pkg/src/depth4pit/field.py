"""Exact arithmetic in a quadratic extension Q(sqrt(d)) of the rationals.

Elements are ``a + b*w`` with ``w = sqrt(d)``.  The square-free integer ``d``
lives in a context variable so that a whole run (a parsed file, a CLI call)
shares one extension; elements themselves only carry ``(a, b)``.

The default ``d = -3`` contains the primitive cube root of unity
``omega = (-1 + w) / 2``; ``d = -1`` gives ``i``.
"""

from __future__ import annotations

import contextlib
import contextvars
from typing import Iterator, Union

from gmpy2 import mpq

DEFAULT_EXT = -3

_ext: contextvars.ContextVar[int] = contextvars.ContextVar("ext", default=DEFAULT_EXT)

Rational = mpq
Scalar = Union["FieldElem", int, mpq]


def _is_squarefree(d: int) -> bool:
    m = abs(d)
    f = 2
    while f * f <= m:
        if m % (f * f) == 0:
            return False
        f += 1
    return True


def check_ext(d: int) -> int:
    d = int(d)
    if d in (0, 1) or not _is_squarefree(d):
        raise ValueError(f"extension parameter must be square-free and not 0 or 1, got {d}")
    return d


def get_ext() -> int:
    return _ext.get()


def set_ext(d: int) -> contextvars.Token:
    return _ext.set(check_ext(d))


@contextlib.contextmanager
def extension(d: int | None) -> Iterator[int]:
    """Temporarily switch the active extension (``None`` keeps the current one)."""
    if d is None:
        yield get_ext()
        return
    token = set_ext(d)
    try:
        yield d
    finally:
        _ext.reset(token)


class FieldElem:
    """An element ``a + b*sqrt(d)`` with exact rational parts."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a if type(a) is mpq else mpq(a)
        self.b = b if type(b) is mpq else mpq(b)

    @classmethod
    def coerce(cls, x: Scalar) -> "FieldElem":
        if type(x) is cls:
            return x
        if isinstance(x, FieldElem):
            return x
        return cls(x)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.a == other.a and self.b == other.b
        try:
            return self.b == 0 and self.a == other
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __add__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, mpq)):
                return FieldElem(self.a + other, self.b)
            return NotImplemented
        return FieldElem(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem(-self.a, -self.b)

    def __sub__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, mpq)):
                return FieldElem(self.a - other, self.b)
            return NotImplemented
        return FieldElem(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, mpq)):
                return FieldElem(self.a * other, self.b * other)
            return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if b1 == 0:
            return FieldElem(a1 * a2, a1 * b2)
        if b2 == 0:
            return FieldElem(a1 * a2, b1 * a2)
        return FieldElem(a1 * a2 + _ext.get() * b1 * b2, a1 * b2 + a2 * b1)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElem":
        return FieldElem(self.a, -self.b)

    def norm(self) -> mpq:
        """Field norm ``a^2 - d*b^2``; zero only for the zero element."""
        return self.a * self.a - _ext.get() * self.b * self.b

    def inverse(self) -> "FieldElem":
        if self.b == 0:
            if self.a == 0:
                raise ZeroDivisionError("inverse of zero field element")
            return FieldElem(1 / self.a, 0)
        nm = self.norm()
        return FieldElem(self.a / nm, -self.b / nm)

    def __truediv__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, mpq)):
                if other == 0:
                    raise ZeroDivisionError("division by zero")
                return FieldElem(self.a / other, self.b / other)
            return NotImplemented
        if other.b == 0:
            if other.a == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElem(self.a / other.a, self.b / other.a)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElem.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self) -> str:
        return f"FieldElem({format_coeff(self)})"

    def __str__(self) -> str:
        return format_coeff(self)


ZERO = FieldElem(0)
ONE = FieldElem(1)


def sqrt_ext() -> FieldElem:
    """The generator ``w = sqrt(d)`` of the active extension."""
    return FieldElem(0, 1)


def omega() -> FieldElem:
    """Primitive cube root of unity ``(-1 + sqrt(-3)) / 2``; needs ``d = -3``."""
    if get_ext() != -3:
        raise ValueError("omega requires the extension d = -3")
    return FieldElem(mpq(-1, 2), mpq(1, 2))


def _format_rat(q: mpq) -> str:
    return str(q)


def format_coeff(c: FieldElem) -> str:
    """Render in the file grammar: ``a``, ``a+bw`` or ``a-bw``."""
    if c.b == 0:
        return _format_rat(c.a)
    sign = "+" if c.b > 0 else "-"
    return f"{_format_rat(c.a)}{sign}{_format_rat(abs(c.b))}w"
