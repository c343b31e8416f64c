"""Concrete idempotent semirings with exact arithmetic.

Four semirings are provided, all stored exactly (no floating point):

``Bool``
    the boolean semiring {0, 1} with or/and.
``TropExp``
    the rank-1 tropical semiring (R>=0, max, *) restricted to the powers
    ``e^-r`` with ``r`` rational.  Values are stored by their order ``r`` (the
    ``-log`` of the element), so ``*`` adds orders and ``+`` keeps the smaller
    order.  The zero element has no order.
``PosRat``
    nonnegative rationals under (max, *).
``Rank2``
    lexicographically ordered pairs ``(e^-r, q)`` with componentwise product.

``+`` and ``*`` on values are the semiring operations; ``<=`` is the canonical
order ``a <= b  iff  a + b == b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import ClassVar, Iterable, Sequence

from .errors import ParseError, SemiringTagError

__all__ = [
    "SemiringValue",
    "Bool",
    "TropExp",
    "PosRat",
    "Rank2",
    "SEMIRINGS",
    "add",
    "mul",
    "leq",
    "power",
    "total",
    "trop_vanishes",
    "parse_value",
    "format_fraction",
    "parse_fraction",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_fraction(text: str) -> Fraction:
    m = _FRACTION_RE.match(text)
    if not m:
        raise ParseError("malformed rational literal", text, 0)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", text, text.index("/"))
    return Fraction(num, den)


class SemiringValue:
    """Common behaviour of the concrete semiring values."""

    tag: ClassVar[str]

    @classmethod
    def zero(cls):
        raise NotImplementedError

    @classmethod
    def one(cls):
        raise NotImplementedError

    def zero_like(self):
        return type(self).zero()

    def one_like(self):
        return type(self).one()

    @property
    def is_zero(self) -> bool:
        return self == self.zero_like()

    @property
    def is_one(self) -> bool:
        return self == self.one_like()

    def _check(self, other):
        if type(other) is not type(self):
            raise SemiringTagError(
                f"cannot combine {self.tag} value {self} with "
                f"{getattr(other, 'tag', type(other).__name__)} value {other}"
            )

    def __add__(self, other):
        self._check(other)
        return self._add(other)

    def __mul__(self, other):
        self._check(other)
        return self._mul(other)

    def __le__(self, other):
        return leq(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def sort_key(self):
        """Total preorder key used for canonical sorting (not the semiring order)."""
        raise NotImplementedError

    def __str__(self):
        return self.to_literal()

    def to_literal(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Bool(SemiringValue):
    bit: int

    tag: ClassVar[str] = "B"

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise ValueError(f"boolean value must be 0 or 1, got {self.bit!r}")
        object.__setattr__(self, "bit", int(self.bit))

    @classmethod
    def zero(cls):
        return cls(0)

    @classmethod
    def one(cls):
        return cls(1)

    def _add(self, other):
        return Bool(self.bit | other.bit)

    def _mul(self, other):
        return Bool(self.bit & other.bit)

    def sort_key(self):
        return (self.bit,)

    def to_literal(self):
        return str(self.bit)


@dataclass(frozen=True)
class TropExp(SemiringValue):
    """The element ``e^-order``; ``order=None`` is the tropical zero."""

    order: Fraction | None

    tag: ClassVar[str] = "T"

    def __post_init__(self):
        if self.order is not None:
            object.__setattr__(self, "order", _frac(self.order))

    @classmethod
    def zero(cls):
        return cls(None)

    @classmethod
    def one(cls):
        return cls(0)

    @property
    def is_zero(self):
        return self.order is None

    def _add(self, other):
        if self.order is None:
            return other
        if other.order is None:
            return self
        return self if self.order <= other.order else other

    def _mul(self, other):
        if self.order is None or other.order is None:
            return TropExp(None)
        return TropExp(self.order + other.order)

    def sort_key(self):
        return (0,) if self.order is None else (1, -self.order)

    def to_literal(self):
        if self.order is None:
            return "0"
        if self.order == 0:
            return "1"
        return f"e^{format_fraction(-self.order)}"


@dataclass(frozen=True)
class PosRat(SemiringValue):
    value: Fraction

    tag: ClassVar[str] = "Q+"

    def __post_init__(self):
        v = _frac(self.value)
        if v < 0:
            raise ValueError(f"PosRat value must be nonnegative, got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def zero(cls):
        return cls(0)

    @classmethod
    def one(cls):
        return cls(1)

    @property
    def is_zero(self):
        return self.value == 0

    def _add(self, other):
        return self if self.value >= other.value else other

    def _mul(self, other):
        return PosRat(self.value * other.value)

    def sort_key(self):
        return (self.value,)

    def to_literal(self):
        return format_fraction(self.value)


@dataclass(frozen=True)
class Rank2(SemiringValue):
    """A pair ``(e^-r, q)``; either both components are zero or neither is."""

    first: TropExp
    second: PosRat

    tag: ClassVar[str] = "T2"

    def __post_init__(self):
        first = self.first if isinstance(self.first, TropExp) else TropExp(self.first)
        second = self.second if isinstance(self.second, PosRat) else PosRat(self.second)
        if first.is_zero != second.is_zero:
            raise ValueError(f"Rank2 components must be both zero or both nonzero: ({first}, {second})")
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @classmethod
    def of(cls, order, coeff):
        """Build ``(e^-order, coeff)`` from plain numbers."""
        return cls(TropExp(order), PosRat(coeff))

    @classmethod
    def zero(cls):
        return cls(TropExp(None), PosRat(0))

    @classmethod
    def one(cls):
        return cls(TropExp(0), PosRat(1))

    @property
    def is_zero(self):
        return self.first.is_zero

    @property
    def order(self):
        return self.first.order

    def _add(self, other):
        return self if self.sort_key() >= other.sort_key() else other

    def _mul(self, other):
        if self.is_zero or other.is_zero:
            return Rank2.zero()
        return Rank2(self.first * other.first, self.second * other.second)

    def sort_key(self):
        if self.is_zero:
            return (0,)
        return (1, -self.first.order, self.second.value)

    def to_literal(self):
        if self.is_zero:
            return "0"
        return f"({self.first.to_literal()}, {self.second.to_literal()})"


SEMIRINGS: dict[str, type[SemiringValue]] = {
    cls.tag: cls for cls in (Bool, TropExp, PosRat, Rank2)
}


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def leq(a, b) -> bool:
    """Canonical order: ``a <= b`` iff ``a + b == b``."""
    return (a + b) == b


def power(a, k: int):
    if k < 0:
        raise ValueError("negative powers are not defined in a semiring")
    result = a.one_like()
    for _ in range(k):
        result = result * a
    return result


def total(values: Iterable, zero=None):
    """``+``-sum of ``values``; ``zero`` is returned for an empty iterable."""
    values = list(values)
    if not values:
        if zero is None:
            raise ValueError("empty sum needs an explicit zero")
        return zero
    return reduce(lambda x, y: x + y, values)


def trop_vanishes(terms: Sequence) -> bool:
    """Pointwise bend test: removing any one term leaves the sum unchanged.

    Works for any idempotent semiring whose values support ``+``, ``==`` and
    ``is_zero`` (including truncated series brought to a common truncation).
    """
    terms = list(terms)
    if not terms:
        raise ValueError("trop_vanishes needs at least one term")
    if len(terms) == 1:
        return terms[0].is_zero
    full = total(terms)
    for j in range(len(terms)):
        rest = total(terms[:j] + terms[j + 1:])
        if rest != full:
            return False
    return True


_TROP_RE = re.compile(r"^e\^\(?\s*([+-]?\d+(?:\s*/\s*\d+)?)\s*\)?$")


def _parse_tropexp(text: str, whole: str, offset: int) -> TropExp:
    s = text.strip()
    if s == "0":
        return TropExp(None)
    if s == "1":
        return TropExp(0)
    m = _TROP_RE.match(s)
    if not m:
        raise ParseError("malformed tropical literal (expected e^-r, 1 or 0)", whole, offset)
    return TropExp(-parse_fraction(m.group(1)))


def parse_value(text: str, tag: str) -> SemiringValue:
    """Parse a semiring literal of the semiring named ``tag``.

    >>> parse_value("(e^-4, 1)", "T2")
    Rank2(first=TropExp(order=Fraction(4, 1)), second=PosRat(value=Fraction(1, 1)))
    """
    s = text.strip()
    if tag == "B":
        if s not in ("0", "1"):
            raise ParseError("boolean literal must be 0 or 1", text, 0)
        return Bool(int(s))
    if tag == "T":
        return _parse_tropexp(s, text, 0)
    if tag == "Q+":
        try:
            return PosRat(parse_fraction(s))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), text, 0) from None
    if tag == "T2":
        if s == "0":
            return Rank2.zero()
        if s == "1":
            return Rank2.one()
        if not (s.startswith("(") and s.endswith(")")) or s.count(",") != 1:
            raise ParseError("rank-2 literal must look like (e^-r, q)", text, 0)
        left, right = s[1:-1].split(",")
        first = _parse_tropexp(left, text, 1)
        try:
            second = PosRat(parse_fraction(right))
        except ParseError:
            raise ParseError("malformed rational in rank-2 literal", text, s.index(",") + 1) from None
        try:
            return Rank2(first, second)
        except ValueError as exc:
            raise ParseError(str(exc), text, 0) from None
    raise ValueError(f"unknown semiring tag {tag!r}")
