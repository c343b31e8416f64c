"""Classical side: exact truncated Q[[t]] arithmetic, p-adic and t-adic
seminorms, their differential enhancements, and tropicalization of points and
equations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Mapping, Sequence

from ._text import split_top, strip_parens
from .diffpoly import DiffMonomial, DiffPoly, parse_polynomial_terms
from .errors import ParseError, TruncationExhausted, TruncationWarning, UnsupportedEquation
from .padic import degenerate_padic_norm, padic_norm, padic_valuation
from .semiring import PosRat, Rank2, TropExp, format_fraction, parse_fraction
from .series import (
    DEFAULT_TRUNC,
    PairDescriptor,
    TruncSeries,
    _min_trunc,
    boolean_pair,
    rank2_pair,
)

__all__ = [
    "RatSeries",
    "RatDiffPoly",
    "EnhancedSeminorm",
    "grigoriev",
    "padic_rank2",
    "padic_norm",
    "padic_valuation",
    "degenerate_padic_norm",
    "rat_add",
    "rat_mul",
    "rat_ddt",
    "enhance",
    "value",
    "check_seminorm_axioms",
    "check_enhancement_commutes",
    "check_norm_on_naturals",
    "AxiomReport",
    "trop_point",
    "trop_equation",
    "solve_linear_ode",
    "linear_coefficients",
    "parse_rat_series",
    "parse_rat_diffpoly",
]


@dataclass(frozen=True)
class RatSeries:
    """Truncated series with exact rational coefficients; ``trunc_deg=None`` is exact."""

    terms: tuple = ()
    trunc_deg: int | None = DEFAULT_TRUNC

    def __post_init__(self):
        if self.trunc_deg is not None and self.trunc_deg < 0:
            raise ValueError("trunc_deg must be nonnegative")
        merged: dict = {}
        for n, c in self.terms:
            if n < 0:
                raise ValueError("negative exponent")
            if self.trunc_deg is not None and n > self.trunc_deg:
                continue
            merged[n] = merged.get(n, 0) + Fraction(c)
        object.__setattr__(self, "terms", tuple(sorted((n, c) for n, c in merged.items() if c != 0)))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, object], trunc_deg=DEFAULT_TRUNC):
        return cls(tuple(coeffs.items()), trunc_deg)

    @classmethod
    def constant(cls, q, trunc_deg=None):
        return cls(((0, Fraction(q)),), trunc_deg)

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def coeff(self, n: int) -> Fraction:
        if self.trunc_deg is not None and n > self.trunc_deg:
            raise TruncationExhausted(f"coefficient of t^{n} is beyond truncation")
        return self.coeffs.get(n, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def leading(self):
        return self.terms[0] if self.terms else None

    def truncate(self, deg):
        return RatSeries(self.terms, _min_trunc(self.trunc_deg, deg))

    def agrees_with(self, other: "RatSeries") -> bool:
        deg = _min_trunc(self.trunc_deg, other.trunc_deg)
        return self.truncate(deg).terms == other.truncate(deg).terms

    def __add__(self, other):
        other = _as_rat(other)
        return RatSeries(self.terms + other.terms, _min_trunc(self.trunc_deg, other.trunc_deg))

    __radd__ = __add__

    def __neg__(self):
        return RatSeries(tuple((n, -c) for n, c in self.terms), self.trunc_deg)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) - self

    def __mul__(self, other):
        other = _as_rat(other)
        deg = _min_trunc(self.trunc_deg, other.trunc_deg)
        acc: dict = {}
        for n, a in self.terms:
            for m, b in other.terms:
                if deg is not None and n + m > deg:
                    break
                acc[n + m] = acc.get(n + m, 0) + a * b
        return RatSeries(tuple(acc.items()), deg)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RatSeries.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def ddt(self) -> "RatSeries":
        return rat_ddt(self)

    def to_literal(self) -> str:
        out = ""
        for n, c in self.terms:
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if n == 0:
                body = format_fraction(a)
            else:
                mono = "t" if n == 1 else f"t^{n}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a.numerator}{mono}"
                else:
                    body = f"({format_fraction(a)}){mono}"
            if not out:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        if self.trunc_deg is not None:
            big_o = f"O(t^{self.trunc_deg + 1})"
            out = f"{out} + {big_o}" if out else big_o
        return out or "0"

    def __str__(self):
        return self.to_literal()


def _as_rat(x) -> RatSeries:
    if isinstance(x, RatSeries):
        return x
    return RatSeries.constant(Fraction(x))


def rat_add(a: RatSeries, b: RatSeries) -> RatSeries:
    return a + b


def rat_mul(a: RatSeries, b: RatSeries) -> RatSeries:
    return a * b


def rat_ddt(a: RatSeries) -> RatSeries:
    """``d/dt``: coefficient of ``t^n`` becomes ``n a_n`` at degree ``n-1``."""
    if a.trunc_deg == 0:
        raise TruncationExhausted("cannot differentiate a series known only up to degree 0")
    deg = None if a.trunc_deg is None else a.trunc_deg - 1
    return RatSeries(tuple((n - 1, n * c) for n, c in a.terms if n > 0), deg)


def parse_rat_series(text: str, trunc_deg=DEFAULT_TRUNC) -> RatSeries:
    """Parse ``1 + 2t - (1/2)t^2 + O(t^13)``."""
    from .series import _BIG_O_RE, _split_monomial

    coeffs: dict = {}
    s = text.strip()
    if not s:
        raise ParseError("empty series literal", text, 0)
    for sep, piece, pos in split_top(s, "+-"):
        p = piece.strip()
        neg = sep == "-"
        if p.startswith("-"):
            neg, p = not neg, p[1:].strip()
        if not p:
            raise ParseError("empty term", text, pos)
        m = _BIG_O_RE.match(p)
        if m:
            trunc_deg = int(m.group(1) or 1) - 1
            continue
        n, ctext = _split_monomial(p)
        try:
            c = Fraction(1) if ctext is None else parse_fraction(strip_parens(ctext))
        except ParseError:
            raise ParseError(f"malformed rational coefficient {ctext!r}", text, pos) from None
        coeffs[n] = coeffs.get(n, 0) + (-c if neg else c)
    return RatSeries(tuple(coeffs.items()), trunc_deg)


# differential polynomials with rational-series coefficients -------------------


@dataclass(frozen=True)
class RatDiffPoly:
    terms: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for m, c in self.terms:
            c = _as_rat(c)
            merged[m] = merged[m] + c if m in merged else c
        object.__setattr__(
            self, "terms",
            tuple(sorted(((m, c) for m, c in merged.items() if not (c.is_zero and c.trunc_deg is None)),
                         key=lambda mc: mc[0].exponents)),
        )

    @classmethod
    def from_terms(cls, terms):
        return cls(tuple(terms))

    @classmethod
    def linear(cls, coeffs: Sequence, var: int = 0):
        """``sum_i coeffs[i] * x^(i)``."""
        return cls(tuple((DiffMonomial.var(var, i), c) for i, c in enumerate(coeffs)))

    def evaluate(self, X: Sequence[RatSeries]) -> RatSeries:
        derivs: dict = {}

        def deriv(i, j):
            if (i, j) not in derivs:
                derivs[(i, j)] = X[i] if j == 0 else rat_ddt(deriv(i, j - 1))
            return derivs[(i, j)]

        out = RatSeries((), None)
        for m, c in self.terms:
            prod = c
            for (i, j), k in m.exponents:
                prod = prod * deriv(i, j) ** k
            out = out + prod
        return out

    def to_literal(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if c.trunc_deg is None and len(c.terms) == 1 and c.terms[0][0] == 0:
                q = c.terms[0][1]
                ctext = format_fraction(q)
                if m.is_one:
                    parts.append(ctext)
                elif q == 1:
                    parts.append(m.to_literal())
                elif q == -1:
                    parts.append("-" + m.to_literal())
                else:
                    parts.append(f"{ctext}*{m.to_literal()}")
            else:
                lit = c.to_literal()
                parts.append(f"({lit})" if m.is_one else f"({lit})*{m.to_literal()}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.to_literal()


def parse_rat_diffpoly(text: str, trunc_deg=None) -> RatDiffPoly:
    """Parse e.g. ``x1'' - x1`` or ``(1 + t)*x1' + 4*x1``."""

    def coeff(ftxt, pos):
        try:
            return RatSeries.constant(parse_fraction(ftxt))
        except ParseError:
            pass
        if ftxt.startswith("("):
            try:
                return parse_rat_series(strip_parens(ftxt), trunc_deg)
            except ParseError as exc:
                raise ParseError(f"malformed series coefficient: {exc}", text, pos) from None
        if ftxt.startswith("t"):
            try:
                return parse_rat_series(ftxt, trunc_deg)
            except ParseError:
                pass
        raise ParseError(f"malformed coefficient {ftxt!r}", text, pos)

    terms = []
    for negated, coeffs, mono in parse_polynomial_terms(text, coeff, allow_minus=True):
        c = RatSeries.constant(-1 if negated else 1)
        for x in coeffs:
            c = c * x
        terms.append((mono, c))
    return RatDiffPoly(tuple(terms))


# enhanced seminorms ------------------------------------------------------------

GRIGORIEV = "grigoriev"
PADIC_RANK2 = "padic_rank2"


@dataclass(frozen=True)
class EnhancedSeminorm:
    """A seminorm on Q[[t]] together with its lift into the series side of a pair.

    ``grigoriev``: t-adic norm into ``T`` lifted to supports in ``B[[t]]``.
    ``padic_rank2``: ``(e^-n0, |a_n0|_p)`` into ``T2`` lifted coefficientwise
    to ``T[[t]]`` with the ``|.|_p``-weighted differential.
    """

    kind: str
    prime: int | None = None
    pair: PairDescriptor = field(init=False, compare=False)

    def __post_init__(self):
        if self.kind == GRIGORIEV:
            pair = boolean_pair()
        elif self.kind == PADIC_RANK2:
            if self.prime is None:
                raise ValueError("padic_rank2 needs a prime")
            padic_norm(1, self.prime)  # validates the prime
            pair = rank2_pair(self.prime)
        else:
            raise ValueError(f"unknown enhancement kind {self.kind!r}")
        object.__setattr__(self, "pair", pair)

    def enhance(self, a) -> TruncSeries:
        return enhance(a, self)

    def value(self, a):
        return value(a, self)

    @property
    def label(self) -> str:
        return self.kind if self.kind == GRIGORIEV else f"{self.kind}(p={self.prime})"


def grigoriev() -> EnhancedSeminorm:
    return EnhancedSeminorm(GRIGORIEV)


def padic_rank2(p: int = 2) -> EnhancedSeminorm:
    return EnhancedSeminorm(PADIC_RANK2, p)


def enhance(a, e: EnhancedSeminorm) -> TruncSeries:
    """Lift ``a`` into the series semiring of the pair (support or coefficientwise ``|.|_p``)."""
    a = _as_rat(a)
    if e.kind == GRIGORIEV:
        return TruncSeries.from_support(a.coeffs.keys(), a.trunc_deg)
    return TruncSeries(PosRat, tuple((n, padic_norm(c, e.prime)) for n, c in a.terms), a.trunc_deg)


def value(a, e: EnhancedSeminorm):
    """The seminorm itself: leading exponent, or ``(e^-n0, |a_n0|_p)``.

    Warns with :class:`TruncationWarning` when ``a`` vanishes within its truncation.
    """
    a = _as_rat(a)
    lead = a.leading()
    if lead is None:
        if a.trunc_deg is not None:
            warnings.warn(f"{a} vanishes within truncation; value reported as 0", TruncationWarning, stacklevel=2)
        return e.pair.s0.zero()
    n, c = lead
    if e.kind == GRIGORIEV:
        return TropExp(n)
    return Rank2(TropExp(n), padic_norm(c, e.prime))


def trop_point(point: Sequence, e: EnhancedSeminorm) -> list:
    return [enhance(p, e) for p in point]


def trop_equation(f: RatDiffPoly, e: EnhancedSeminorm) -> DiffPoly:
    """Apply the seminorm to every coefficient; monomials are kept."""
    terms = []
    for m, c in f.terms:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TruncationWarning)
            v = value(c, e)
        for w in caught:
            warnings.warn(f"coefficient of {m}: {w.message}", TruncationWarning, stacklevel=2)
        if not v.is_zero:
            terms.append((m, v))
    return DiffPoly(e.pair.s0, tuple(terms))


# axiom checks ---------------------------------------------------------------


@dataclass
class AxiomReport:
    passed: bool = True
    checked: int = 0
    skipped: int = 0
    counterexample: str | None = None

    def fail(self, msg: str):
        if self.passed:
            self.passed = False
            self.counterexample = msg

    def __bool__(self):
        return self.passed


def _same(x, y) -> bool:
    if isinstance(x, (TruncSeries, RatSeries)):
        return x.agrees_with(y)
    return x == y


def _unreliable(a) -> bool:
    return isinstance(a, RatSeries) and a.is_zero and a.trunc_deg is not None


def check_seminorm_axioms(v, samples: Sequence) -> AxiomReport:
    """Check the four generalized-seminorm axioms of ``v`` on ``samples``.

    ``v`` is an :class:`EnhancedSeminorm` (its ``value`` map is checked) or any
    callable.  Pairs whose sum or product vanishes within truncation are
    skipped, since their value is not determined.
    """
    fn: Callable = v.value if isinstance(v, EnhancedSeminorm) else v
    rep = AxiomReport()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        zero, one, minus_one = RatSeries((), None), RatSeries.constant(1), RatSeries.constant(-1)
        if not fn(zero).is_zero:
            rep.fail("v(0) != 0")
        v1 = fn(one)
        if not v1.is_one or not _same(fn(minus_one), v1):
            rep.fail("v(1) = v(-1) = 1 fails")
        rep.checked += 2
        samples = [_as_rat(s) for s in samples]
        for a, b in combinations_with_replacement(samples, 2):
            if _unreliable(a) or _unreliable(b):
                rep.skipped += 1
                continue
            va, vb = fn(a), fn(b)
            prod, s = a * b, a + b
            if _unreliable(prod):
                rep.skipped += 1
            else:
                rep.checked += 1
                if not _same(fn(prod), va * vb):
                    rep.fail(f"v(ab) != v(a)v(b) for a={a}, b={b}")
            if _unreliable(s):
                rep.skipped += 1
            else:
                rep.checked += 1
                if not _same(fn(s) + va + vb, va + vb):
                    rep.fail(f"ultrametric identity fails for a={a}, b={b}")
    return rep


def check_enhancement_commutes(e: EnhancedSeminorm, samples: Sequence) -> AxiomReport:
    """``enhance(d/dt a)`` agrees with ``d(enhance(a))`` within truncation."""
    rep = AxiomReport()
    for a in samples:
        a = _as_rat(a)
        if a.trunc_deg == 0:
            rep.skipped += 1
            continue
        rep.checked += 1
        lhs = enhance(rat_ddt(a), e)
        rhs = e.pair.d(enhance(a, e))
        if not lhs.agrees_with(rhs):
            rep.fail(f"enhance(d/dt a) = {lhs} but d(enhance a) = {rhs} for a = {a}")
    return rep


def check_norm_on_naturals(norm: Callable[[int], PosRat], upto: int = 64) -> AxiomReport:
    """Seminorm axioms of a map ``N -> PosRat`` on ``0..upto`` (those not involving -1)."""
    rep = AxiomReport()
    if not norm(0).is_zero:
        rep.fail("v(0) != 0")
    if not norm(1).is_one:
        rep.fail("v(1) != 1")
    for a in range(upto + 1):
        for b in range(a, upto + 1):
            rep.checked += 2
            if norm(a * b) != norm(a) * norm(b):
                rep.fail(f"v({a}*{b}) != v({a})v({b})")
            if norm(a + b) + norm(a) + norm(b) != norm(a) + norm(b):
                rep.fail(f"ultrametric identity fails at {a}, {b}")
    return rep


# classical oracle ------------------------------------------------------------


def solve_linear_ode(coeffs: Sequence, init: Sequence, deg: int) -> RatSeries:
    """Series solution of ``sum_i coeffs[i](t) x^(i) = 0`` up to ``t^deg``.

    ``coeffs[-1]`` must have a nonzero constant term; ``init`` gives
    ``x(0), x'(0), ...`` (one value per order below the leading one).
    """
    cs = [_as_rat(c) for c in coeffs]
    while cs and cs[-1].is_zero and cs[-1].trunc_deg is None:
        cs.pop()
    if not cs:
        raise UnsupportedEquation("the zero equation has no unique solution")
    order = len(cs) - 1
    lead = cs[-1].coeffs.get(0, Fraction(0))
    if lead == 0:
        raise UnsupportedEquation("leading coefficient vanishes at t = 0 (singular equation)")
    if len(init) != order:
        raise ValueError(f"expected {order} initial values, got {len(init)}")
    a = [Fraction(x) / math.factorial(i) for i, x in enumerate(init)]
    out_deg = deg
    for c in cs:
        if c.trunc_deg is not None:
            out_deg = min(out_deg, c.trunc_deg + order)
    for n in range(0, out_deg - order + 1):
        acc = Fraction(0)
        for i, c in enumerate(cs):
            for k, ck in c.terms:
                if k > n:
                    break
                idx = n - k + i
                if i == order and k == 0:
                    continue
                acc += ck * a[idx] * _falling(idx, i)
        a.append(-acc / (lead * _falling(n + order, order)))
    return RatSeries(tuple(enumerate(a[: out_deg + 1])), out_deg)


def linear_coefficients(f: RatDiffPoly) -> list:
    """``[c_0, ..., c_r]`` for a homogeneous linear ``f = sum_i c_i x1^(i)``."""
    out: dict = {}
    for m, c in f.terms:
        if len(m.exponents) != 1 or m.exponents[0][1] != 1 or m.exponents[0][0][0] != 0:
            raise UnsupportedEquation(f"term {m.to_literal()} is not linear in x1")
        out[m.exponents[0][0][1]] = c
    if not out:
        raise UnsupportedEquation("the zero equation has no unique solution")
    zero = RatSeries((), None)
    return [out.get(i, zero) for i in range(max(out) + 1)]


def _falling(n: int, i: int) -> int:
    return math.perm(n, i)
