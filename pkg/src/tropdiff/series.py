"""Truncated power series over an idempotent semiring, tropical differentials
on them, and the projections that turn them into tropical pairs.

A :class:`TruncSeries` knows its coefficients up to ``trunc_deg``; anything
above is *unknown*, not zero.  ``trunc_deg=None`` marks an exactly known
polynomial.  Operations propagate the smallest truncation of their inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple

from ._text import split_top, strip_parens
from .errors import ParseError, SemiringTagError, TruncationExhausted
from .padic import degenerate_padic_norm, padic_norm
from .semiring import (
    Bool,
    PosRat,
    Rank2,
    SemiringValue,
    TropExp,
    parse_value,
    trop_vanishes,
)

DEFAULT_TRUNC = 16


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class TruncSeries:
    """``sum(c_n t^n) + O(t^(trunc_deg+1))`` with nonzero stored coefficients."""

    kind: type
    terms: tuple = ()
    trunc_deg: int | None = DEFAULT_TRUNC

    def __post_init__(self):
        if self.trunc_deg is not None and self.trunc_deg < 0:
            raise ValueError("trunc_deg must be nonnegative")
        cleaned = {}
        for n, c in self.terms:
            if type(c) is not self.kind:
                raise SemiringTagError(f"coefficient {c!r} is not a {self.kind.__name__}")
            if n < 0:
                raise ValueError("negative exponent")
            if self.trunc_deg is not None and n > self.trunc_deg:
                continue
            if not c.is_zero:
                cleaned[n] = cleaned[n] + c if n in cleaned else c
        object.__setattr__(self, "terms", tuple(sorted(cleaned.items())))

    # construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, kind, coeffs: Mapping[int, object], trunc_deg=DEFAULT_TRUNC):
        return cls(kind, tuple((n, _coerce(kind, c)) for n, c in coeffs.items()), trunc_deg)

    @classmethod
    def from_support(cls, support: Iterable[int], trunc_deg=DEFAULT_TRUNC):
        """Boolean series whose exponents are ``support``."""
        return cls(Bool, tuple((n, Bool(1)) for n in support), trunc_deg)

    @classmethod
    def zero(cls, kind, trunc_deg=None):
        return cls(kind, (), trunc_deg)

    @classmethod
    def constant(cls, value: SemiringValue, trunc_deg=None):
        return cls(type(value), ((0, value),), trunc_deg)

    def zero_like(self):
        return TruncSeries(self.kind, (), None)

    def one_like(self):
        return TruncSeries(self.kind, ((0, self.kind.one()),), None)

    # access -------------------------------------------------------------

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    @property
    def support(self) -> tuple:
        return tuple(n for n, _ in self.terms)

    def coeff(self, n: int):
        if self.trunc_deg is not None and n > self.trunc_deg:
            raise TruncationExhausted(f"coefficient of t^{n} is beyond truncation O(t^{self.trunc_deg + 1})")
        return self.coeffs.get(n, self.kind.zero())

    @property
    def is_zero(self) -> bool:
        """No nonzero coefficient is known (the series may still be nonzero beyond truncation)."""
        return not self.terms

    @property
    def is_one(self) -> bool:
        return self.terms == ((0, self.kind.one()),)

    @property
    def is_exact(self) -> bool:
        return self.trunc_deg is None

    def leading(self):
        """``(degree, coefficient)`` of the lowest nonzero term, or ``None``."""
        return self.terms[0] if self.terms else None

    def truncate(self, deg: int | None):
        return TruncSeries(self.kind, self.terms, _min_trunc(self.trunc_deg, deg))

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality of all coefficients known to both series."""
        if self.kind is not other.kind:
            raise SemiringTagError("series over different coefficient semirings")
        deg = _min_trunc(self.trunc_deg, other.trunc_deg)
        return self.truncate(deg).terms == other.truncate(deg).terms

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, TruncSeries) or other.kind is not self.kind:
            raise SemiringTagError("series operands must share a coefficient semiring")

    def __add__(self, other):
        self._check(other)
        deg = _min_trunc(self.trunc_deg, other.trunc_deg)
        return TruncSeries(self.kind, self.terms + other.terms, deg)

    def __mul__(self, other):
        self._check(other)
        deg = _min_trunc(self.trunc_deg, other.trunc_deg)
        acc: dict = {}
        for n, a in self.terms:
            if deg is not None and n > deg:
                break
            for m, b in other.terms:
                k = n + m
                if deg is not None and k > deg:
                    break
                c = a * b
                acc[k] = acc[k] + c if k in acc else c
        return TruncSeries(self.kind, tuple(acc.items()), deg)

    def __pow__(self, k: int):
        result = self.one_like()
        for _ in range(k):
            result = result * self
        return result

    # text ---------------------------------------------------------------

    def sort_key(self):
        return (self.kind.tag, -1 if self.trunc_deg is None else self.trunc_deg,
                tuple((n, c.sort_key()) for n, c in self.terms))

    def to_literal(self) -> str:
        parts = []
        for n, c in self.terms:
            parts.append(_format_term(c, n))
        if self.trunc_deg is not None:
            parts.append(f"O(t^{self.trunc_deg + 1})")
        return " + ".join(parts) if parts else "0"

    def to_support_literal(self) -> str:
        if self.kind is not Bool:
            raise TypeError("support-set literals are only defined for boolean series")
        body = "{" + ",".join(str(n) for n in self.support) + "}"
        if self.trunc_deg is not None:
            body += f" + O(t^{self.trunc_deg + 1})"
        return body

    def __str__(self):
        return self.to_literal()


def _coerce(kind, value):
    if isinstance(value, kind):
        return value
    if isinstance(value, SemiringValue):
        raise SemiringTagError(f"{value!r} is not a {kind.__name__}")
    if kind is Bool:
        return Bool(int(value))
    if kind is PosRat:
        return PosRat(Fraction(value))
    if kind is TropExp:
        return TropExp(value)
    raise TypeError(f"cannot coerce {value!r} into {kind.__name__}")


def _format_coeff(c: SemiringValue) -> str:
    s = c.to_literal()
    if isinstance(c, PosRat) and c.value.denominator == 1:
        return s
    return f"({s})"


def _format_term(c: SemiringValue, n: int) -> str:
    mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
    if n == 0:
        return c.to_literal()
    if c.is_one:
        return mono
    return _format_coeff(c) + mono


_MONO_RE = re.compile(r"\*?\s*t(?:\s*\^\s*(\d+))?\s*$")
_BIG_O_RE = re.compile(r"^O\(\s*t(?:\s*\^\s*(\d+))?\s*\)$")


def parse_series(text: str, kind=PosRat, trunc_deg=DEFAULT_TRUNC) -> TruncSeries:
    """Parse ``1 + (1/2)t^2 + 8t^5 + O(t^17)`` or, for booleans, ``{0,2,5}``.

    An explicit ``O(t^k)`` term sets the truncation to ``k - 1``; otherwise
    ``trunc_deg`` is used (``None`` for an exact polynomial).
    """
    s = text.strip()
    if s.startswith("{"):
        if kind is not Bool:
            raise ParseError("support-set literal needs boolean coefficients", text, 0)
        close = s.find("}")
        if close < 0:
            raise ParseError("unterminated support set", text, len(s))
        body = s[1:close].strip()
        rest = s[close + 1:].strip()
        if rest:
            if not rest.startswith("+"):
                raise ParseError("unexpected text after support set", text, close + 1)
            m = _BIG_O_RE.match(rest[1:].strip())
            if not m:
                raise ParseError("expected O(t^k) after support set", text, close + 1)
            trunc_deg = int(m.group(1) or 1) - 1
        try:
            support = [int(x) for x in body.split(",")] if body else []
        except ValueError:
            raise ParseError("support set must contain integers", text, 1) from None
        if any(n < 0 for n in support):
            raise ParseError("negative exponent in support set", text, 1)
        return TruncSeries.from_support(support, trunc_deg)

    coeffs: dict[int, SemiringValue] = {}
    for sep, piece, pos in split_top(s, "+"):
        piece = piece.strip()
        if not piece:
            raise ParseError("empty term", text, pos)
        m = _BIG_O_RE.match(piece)
        if m:
            trunc_deg = int(m.group(1) or 1) - 1
            continue
        if piece == "0":
            continue
        n, coeff_text = _split_monomial(piece)
        coeff = kind.one() if coeff_text is None else parse_value(strip_parens(coeff_text), kind.tag)
        if n in coeffs:
            coeff = coeffs[n] + coeff
        coeffs[n] = coeff
    return TruncSeries(kind, tuple(coeffs.items()), trunc_deg)


def _split_monomial(piece: str):
    """Return ``(degree, coefficient text or None)`` for one series term."""
    m = _MONO_RE.search(piece)
    if m is None:
        return 0, piece
    n = 1 if m.group(1) is None else int(m.group(1))
    coeff = piece[: m.start()].strip()
    return n, (coeff or None)


# differentials -----------------------------------------------------------


@dataclass(frozen=True)
class StrictShift:
    """``t^n -> t^(n-1)``, constants to zero."""

    name: str = "strict_shift"

    def weight(self, n: int) -> PosRat:
        return PosRat(1)


@dataclass(frozen=True)
class Weighted:
    """``t^n -> v(n) t^(n-1)`` for a seminorm ``v`` on the naturals."""

    name: str
    norm: Callable[[int], PosRat] = field(compare=False, repr=False)

    def weight(self, n: int) -> PosRat:
        return self.norm(n)


STRICT_SHIFT = StrictShift()


@lru_cache(maxsize=None)
def padic_differential(p: int) -> Weighted:
    """``d(t^n) = |n|_p t^(n-1)``."""
    return Weighted(f"padic({p})", lambda n: padic_norm(n, p))


@lru_cache(maxsize=None)
def degenerate_differential(p: int) -> Weighted:
    """``d(t^n) = t^(n-1)`` unless ``p`` divides ``n``, in which case 0."""
    return Weighted(f"degenerate({p})", lambda n: degenerate_padic_norm(n, p))


def embed_weight(kind, w: PosRat) -> SemiringValue:
    if kind is PosRat:
        return w
    if w.value == 0:
        return kind.zero()
    if w.value == 1:
        return kind.one()
    raise ValueError(f"weight {w} has no image in {kind.__name__}")


def differentiate(a: TruncSeries, d=STRICT_SHIFT) -> TruncSeries:
    if a.trunc_deg == 0:
        raise TruncationExhausted("cannot differentiate a series known only up to degree 0")
    terms = []
    for n, c in a.terms:
        if n == 0:
            continue
        c2 = c * embed_weight(a.kind, d.weight(n))
        if not c2.is_zero:
            terms.append((n - 1, c2))
    deg = None if a.trunc_deg is None else a.trunc_deg - 1
    return TruncSeries(a.kind, tuple(terms), deg)


def iterate_derivative(a: TruncSeries, d, j: int) -> TruncSeries:
    for _ in range(j):
        a = differentiate(a, d)
    return a


def series_trop_vanishes(terms) -> bool:
    """Bend test on series, compared on the degrees known for every term."""
    terms = list(terms)
    deg = None
    for s in terms:
        deg = _min_trunc(deg, s.trunc_deg)
    return trop_vanishes([s.truncate(deg) for s in terms])


# pairs -------------------------------------------------------------------

BOOLEAN_LEADING_EXPONENT = "boolean_leading_exponent"
RANK2_LEADING_TERM = "rank2_leading_term"


@dataclass(frozen=True)
class PairDescriptor:
    """A tropical pair: series semiring with differential, target semiring and projection."""

    coeff_kind: type
    differential: object
    s0: type
    pi: str
    name: str = ""

    def __post_init__(self):
        if self.pi == BOOLEAN_LEADING_EXPONENT:
            ok = self.coeff_kind is Bool and self.s0 is TropExp
        elif self.pi == RANK2_LEADING_TERM:
            ok = self.coeff_kind is PosRat and self.s0 is Rank2
        else:
            raise ValueError(f"unknown projection {self.pi!r}")
        if not ok:
            raise ValueError(f"projection {self.pi} does not map {self.coeff_kind.__name__}[[t]] to {self.s0.__name__}")

    def d(self, a: TruncSeries) -> TruncSeries:
        return differentiate(a, self.differential)

    def project(self, a: TruncSeries) -> SemiringValue:
        return project(a, self)


def boolean_pair(differential=STRICT_SHIFT) -> PairDescriptor:
    """``B[[t]] -> T``, ``t^n -> e^-n`` (the Grigoriev pair with the default differential)."""
    return PairDescriptor(Bool, differential, TropExp, BOOLEAN_LEADING_EXPONENT, "B")


def rank2_pair(p: int | None = 2, differential=None) -> PairDescriptor:
    """``T[[t]] -> T2``, leading term ``a t^n -> (e^-n, a)``; default differential ``d(t^n) = |n|_p t^(n-1)``."""
    if differential is None:
        differential = padic_differential(p) if p is not None else STRICT_SHIFT
    return PairDescriptor(PosRat, differential, Rank2, RANK2_LEADING_TERM, "T2")


class Projection(NamedTuple):
    """Projected value plus, when the series vanishes within truncation, a lower
    bound on the t-order its true projection could have (``None`` if exact)."""

    value: SemiringValue
    order_bound: int | None


def project_bounded(a: TruncSeries, pair: PairDescriptor) -> Projection:
    if a.kind is not pair.coeff_kind:
        raise SemiringTagError(f"{a.kind.__name__}[[t]] series does not belong to pair {pair.name}")
    lead = a.leading()
    if lead is None:
        bound = None if a.trunc_deg is None else a.trunc_deg + 1
        return Projection(pair.s0.zero(), bound)
    n, c = lead
    if pair.pi == BOOLEAN_LEADING_EXPONENT:
        return Projection(TropExp(n), None)
    return Projection(Rank2(TropExp(n), c), None)


def project(a: TruncSeries, pair: PairDescriptor) -> SemiringValue:
    """Leading-order data of ``a``; an empty truncated series projects to zero."""
    return project_bounded(a, pair).value


def separating_derivative_order(a: TruncSeries, b: TruncSeries, pair: PairDescriptor) -> int | None:
    """Least ``n`` with ``project(d^n a) != project(d^n b)`` within truncation."""
    if a.kind is not b.kind:
        raise SemiringTagError("series over different coefficient semirings")
    deg = _min_trunc(a.trunc_deg, b.trunc_deg)
    if deg is None:
        if a == b:
            return None
        limit = max(a.support + b.support, default=0) + 1
    else:
        limit = deg
    for n in range(limit + 1):
        pa, pb = project_bounded(a, pair), project_bounded(b, pair)
        both_unknown = pa.order_bound is not None and pb.order_bound is not None
        if not both_unknown and pa.value != pb.value:
            return n
        if n == limit or a.trunc_deg == 0 or b.trunc_deg == 0:
            break
        a, b = pair.d(a), pair.d(b)
    return None

