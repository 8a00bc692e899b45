"""Exact scalars in Q, Q(i) and Q(omega).

Every element is stored as ``a + b*zeta`` with rational ``a`` and ``b``.
For Q(i) the generator satisfies ``zeta**2 = -1``; for Q(omega) it is a
primitive cube root of unity with ``zeta**2 = -1 - zeta``.  Plain rational
elements carry ``b = 0``.

Elements of different fields never combine silently.  Python ``int`` and
``Fraction`` operands are accepted and read as rationals of the other
operand's field; moving a whole element from Q into an extension goes
through :func:`widen`.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

__all__ = [
    "Field",
    "FieldElem",
    "FieldTagError",
    "Scalar",
    "I",
    "OMEGA",
    "elem",
    "zero",
    "one",
    "widen",
    "common_field",
    "conjugate",
    "arith",
]


class Field(str, Enum):
    Q = "Q"
    Q_I = "Q_I"
    Q_OMEGA = "Q_OMEGA"

    @property
    def zeta_name(self) -> str:
        return _ZETA_NAMES[self]


_ZETA_NAMES = {Field.Q: "one", Field.Q_I: "i", Field.Q_OMEGA: "omega"}


class FieldTagError(ValueError):
    """Raised when elements of two different fields are combined."""


Scalar = Union["FieldElem", int, Fraction]


class FieldElem:
    """Immutable element ``a + b*zeta`` of one of the three supported fields."""

    __slots__ = ("_a", "_b", "_field")

    def __init__(self, a=0, b=0, field: Field = Field.Q) -> None:
        field = Field(field)
        a = Fraction(a)
        b = Fraction(b)
        if field is Field.Q and b != 0:
            raise FieldTagError("a rational element cannot have a zeta component")
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)
        object.__setattr__(self, "_field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def __reduce__(self):
        return (FieldElem, (self._a, self._b, self._field))

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def field(self) -> Field:
        return self._field

    def __repr__(self) -> str:
        return f"FieldElem({self._a!s}, {self._b!s}, {self._field.value})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        z = self._field.zeta_name
        mag = abs(self._b)
        zpart = z if mag == 1 else f"{mag}*{z}"
        if self._a == 0:
            return ("-" if self._b < 0 else "") + zpart
        sign = "-" if self._b < 0 else "+"
        return f"{self._a} {sign} {zpart}"

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other._field is not self._field:
                raise FieldTagError(
                    f"cannot combine {self._field.value} with {other._field.value}"
                )
            return other
        if isinstance(other, (int, _RationalABC)):
            return FieldElem(other, 0, self._field)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return (
                self._field is other._field
                and self._a == other._a
                and self._b == other._b
            )
        if isinstance(other, (int, _RationalABC)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._field))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def is_zero(self) -> bool:
        return not self

    def is_rational(self) -> bool:
        return self._b == 0

    def __neg__(self) -> FieldElem:
        return FieldElem(-self._a, -self._b, self._field)

    def __pos__(self) -> FieldElem:
        return self

    def __add__(self, other) -> FieldElem:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElem(self._a + o._a, self._b + o._b, self._field)

    __radd__ = __add__

    def __sub__(self, other) -> FieldElem:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElem(self._a - o._a, self._b - o._b, self._field)

    def __rsub__(self, other) -> FieldElem:
        return -self + other

    def __mul__(self, other) -> FieldElem:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self._a, self._b, o._a, o._b
        if self._field is Field.Q:
            return FieldElem(a * c, 0, Field.Q)
        if self._field is Field.Q_I:
            return FieldElem(a * c - b * d, a * d + b * c, Field.Q_I)
        # omega**2 = -1 - omega
        return FieldElem(a * c - b * d, a * d + b * c - b * d, Field.Q_OMEGA)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``x * conjugate(x)``, a non-negative rational."""
        a, b = self._a, self._b
        if self._field is Field.Q_OMEGA:
            return a * a - a * b + b * b
        return a * a + b * b

    def conjugate(self) -> FieldElem:
        if self._field is Field.Q_OMEGA:
            # conj(omega) = omega**2 = -1 - omega
            return FieldElem(self._a - self._b, -self._b, Field.Q_OMEGA)
        return FieldElem(self._a, -self._b, self._field)

    def inverse(self) -> FieldElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in " + self._field.value)
        c = self.conjugate()
        return FieldElem(c._a / n, c._b / n, self._field)

    def __truediv__(self, other) -> FieldElem:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> FieldElem:
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> FieldElem:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElem(1, 0, self._field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def widen(self, field: Field) -> FieldElem:
        return widen(self, field)


I = FieldElem(0, 1, Field.Q_I)
OMEGA = FieldElem(0, 1, Field.Q_OMEGA)


def elem(x: Scalar, field: Field = Field.Q) -> FieldElem:
    """Read ``x`` as an element of ``field``.

    Rational inputs are placed in ``field``; a :class:`FieldElem` must already
    live there (use :func:`widen` to change fields).
    """
    field = Field(field)
    if isinstance(x, FieldElem):
        if x.field is not field:
            raise FieldTagError(f"expected {field.value}, got {x.field.value}")
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not field elements")
    if isinstance(x, (int, _RationalABC)):
        return FieldElem(x, 0, field)
    raise TypeError(f"cannot interpret {x!r} as a field element")


def zero(field: Field = Field.Q) -> FieldElem:
    return FieldElem(0, 0, field)


def one(field: Field = Field.Q) -> FieldElem:
    return FieldElem(1, 0, field)


def widen(x: Scalar, field: Field) -> FieldElem:
    """Embed a rational element into ``field``; identity if already there."""
    field = Field(field)
    if not isinstance(x, FieldElem):
        return elem(x, field)
    if x.field is field:
        return x
    if x.field is not Field.Q:
        raise FieldTagError(f"cannot widen {x.field.value} to {field.value}")
    return FieldElem(x.a, 0, field)


def common_field(values) -> Field:
    """The single extension field used by ``values`` (Q if all are rational).

    Raises :class:`FieldTagError` if both Q(i) and Q(omega) appear.
    """
    found = Field.Q
    for v in values:
        if isinstance(v, FieldElem) and v.field is not Field.Q:
            if found is not Field.Q and found is not v.field:
                raise FieldTagError("Q(i) and Q(omega) elements cannot be mixed")
            found = v.field
    return found


def conjugate(x: FieldElem) -> FieldElem:
    return x.conjugate()


_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def arith(x: FieldElem, y: FieldElem, op: str) -> FieldElem:
    """Apply ``op`` (add, sub, mul or div) to two elements of the same field."""
    if x.field is not y.field:
        raise FieldTagError(f"cannot combine {x.field.value} with {y.field.value}")
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(x, y)
