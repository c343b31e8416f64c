"""Basic differential polynomials, their evaluation through a tropical pair,
and the solution-membership test.

A differential monomial is a product of factors ``x_i^(j)`` (the ``j``-th
derivative of variable ``i``, variables indexed from 0 and written ``x1``,
``x2``, ... in literals).  Evaluating ``f = sum f_a x^a`` at a point ``C`` of
series means projecting every ``d^j C_i`` to the target semiring and
multiplying there; ``C`` solves ``f`` when the resulting list of terms
tropically vanishes.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Sequence

from ._text import split_top, strip_parens
from .errors import ParseError, SemiringTagError, TruncationExhausted
from .semiring import SEMIRINGS, Bool, Rank2, SemiringValue, TropExp, parse_value, total, trop_vanishes
from .series import (
    BOOLEAN_LEADING_EXPONENT,
    PairDescriptor,
    Projection,
    TruncSeries,
    differentiate,
    iterate_derivative,
    project,
    project_bounded,
)

__all__ = [
    "DiffMonomial",
    "DiffPoly",
    "Verdict",
    "EvalResult",
    "eval_monomial",
    "eval_poly",
    "eval_terms_bounded",
    "is_solution",
    "is_solution_of_all",
    "grigoriev_val",
    "parse_diffpoly",
    "parse_polynomial_terms",
    "format_factor",
]


@dataclass(frozen=True)
class DiffMonomial:
    """Product of ``x_i^(j)`` factors stored as sorted ``((i, j), k)`` pairs."""

    exponents: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for (i, j), k in self.exponents:
            if i < 0 or j < 0 or k < 0:
                raise ValueError("variable index, derivative order and multiplicity must be nonnegative")
            if k:
                merged[(i, j)] = merged.get((i, j), 0) + k
        object.__setattr__(self, "exponents", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, mapping: Mapping[tuple, int]):
        return cls(tuple(mapping.items()))

    @classmethod
    def var(cls, i: int = 0, j: int = 0, k: int = 1):
        return cls((((i, j), k),))

    def __mul__(self, other: "DiffMonomial") -> "DiffMonomial":
        return DiffMonomial(self.exponents + other.exponents)

    @property
    def is_one(self) -> bool:
        return not self.exponents

    @property
    def max_var(self) -> int:
        return max((i for (i, _), _ in self.exponents), default=-1)

    @property
    def max_order(self) -> int:
        return max((j for (_, j), _ in self.exponents), default=0)

    def to_literal(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for (i, j), k in self.exponents:
            f = format_factor(i, j)
            parts.append(f if k == 1 else f"{f}^{k}")
        return "*".join(parts)

    def __str__(self):
        return self.to_literal()


def format_factor(i: int, j: int) -> str:
    name = f"x{i + 1}"
    if j <= 2:
        return name + "'" * j
    return f"{name}^({j})"


@dataclass(frozen=True)
class DiffPoly:
    """``sum f_a x^a`` with nonzero coefficients in one semiring ``kind``."""

    kind: type
    terms: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for m, c in self.terms:
            if type(c) is not self.kind:
                raise SemiringTagError(f"coefficient {c!r} is not a {self.kind.__name__}")
            merged[m] = merged[m] + c if m in merged else c
        cleaned = [(m, c) for m, c in merged.items() if not c.is_zero]
        object.__setattr__(self, "terms", tuple(sorted(cleaned, key=lambda mc: mc[0].exponents)))

    @classmethod
    def from_terms(cls, kind, terms):
        return cls(kind, tuple(terms))

    @classmethod
    def zero(cls, kind):
        return cls(kind, ())

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        if other.kind is not self.kind:
            raise SemiringTagError("polynomials over different semirings")
        return DiffPoly(self.kind, self.terms + other.terms)

    def scale(self, c: SemiringValue) -> "DiffPoly":
        return DiffPoly(self.kind, tuple((m, c * v) for m, v in self.terms))

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    @property
    def monomials(self) -> tuple:
        return tuple(m for m, _ in self.terms)

    @property
    def nvars(self) -> int:
        return max((m.max_var for m in self.monomials), default=-1) + 1

    def to_literal(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if m.is_one:
                parts.append(c.to_literal())
            elif c.is_one:
                parts.append(m.to_literal())
            else:
                parts.append(f"{c.to_literal()}*{m.to_literal()}")
        return " + ".join(parts)

    def __str__(self):
        return self.to_literal()


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class EvalResult(NamedTuple):
    value: SemiringValue
    terms: list


def _order(v: SemiringValue):
    if isinstance(v, TropExp):
        return v.order
    if isinstance(v, Rank2):
        return v.order
    if isinstance(v, Bool):
        return None if v.is_zero else 0
    raise TypeError(f"no t-order for {type(v).__name__} values")


def _factor(C: Sequence[TruncSeries], i: int, j: int, pair: PairDescriptor, cache: dict) -> Projection:
    key = (i, j)
    if key in cache:
        return cache[key]
    if i >= len(C):
        raise IndexError(f"variable x{i + 1} has no assigned series (got {len(C)})")
    if j == 0:
        series = C[i]
    else:
        prev = _factor_series(C, i, j - 1, pair, cache)
        if prev is None or prev.trunc_deg == 0:
            series = None
        else:
            series = differentiate(prev, pair.differential)
        cache[("s", i, j)] = series
    if series is None:
        res = Projection(pair.s0.zero(), 0)
    else:
        res = project_bounded(series, pair)
    cache[key] = res
    return res


def _factor_series(C, i, j, pair, cache):
    if j == 0:
        return C[i]
    key = ("s", i, j)
    if key not in cache:
        _factor(C, i, j, pair, cache)
    return cache[key]


def _term_bounded(coeff, m: DiffMonomial, C, pair, cache) -> Projection:
    value = coeff
    bound = _order(coeff)
    caveat = False
    exact_zero = False
    for (i, j), k in m.exponents:
        p = _factor(C, i, j, pair, cache)
        if p.order_bound is not None:
            caveat = True
            bound += p.order_bound * k
        elif p.value.is_zero:
            exact_zero = True
        else:
            value = value * p.value ** k
            bound += _order(p.value) * k
    if exact_zero:
        return Projection(pair.s0.zero(), None)
    if caveat:
        return Projection(pair.s0.zero(), bound)
    return Projection(value, None)


def eval_terms_bounded(f: DiffPoly, C: Sequence[TruncSeries], pair: PairDescriptor) -> list:
    """Per-term :class:`Projection` values; truncation caveats carry an order bound."""
    if f.terms and f.kind is not pair.s0:
        raise SemiringTagError(f"polynomial coefficients are {f.kind.__name__}, pair target is {pair.s0.__name__}")
    cache: dict = {}
    return [_term_bounded(c, m, C, pair, cache) for m, c in f.terms]


def eval_monomial(m: DiffMonomial, C: Sequence[TruncSeries], pair: PairDescriptor) -> SemiringValue:
    """``prod pi(d^j C_i)^k`` computed in the target semiring."""
    p = _term_bounded(pair.s0.one(), m, C, pair, {})
    if p.order_bound is not None:
        raise TruncationExhausted(f"a derivative in {m} vanishes within truncation; its leading term is unknown")
    return p.value


def eval_poly(f: DiffPoly, C: Sequence[TruncSeries], pair: PairDescriptor) -> EvalResult:
    terms = []
    for (m, _), p in zip(f.terms, eval_terms_bounded(f, C, pair)):
        if p.order_bound is not None:
            raise TruncationExhausted(f"a derivative in {m} vanishes within truncation; its leading term is unknown")
        terms.append(p.value)
    return EvalResult(total(terms, pair.s0.zero()), terms)


def verdict_from_bounded(bounded: Sequence[Projection], zero: SemiringValue) -> Verdict:
    """Vanishing verdict over a totally ordered target when some terms are only bounded."""
    known = [p.value for p in bounded if p.order_bound is None]
    bounds = [p.order_bound for p in bounded if p.order_bound is not None]
    if not known and not bounds:
        return Verdict.YES
    top = total(known, zero)
    if bounds:
        if top.is_zero:
            return Verdict.UNKNOWN
        top_order = _order(top)
        if any(b <= top_order for b in bounds):
            return Verdict.UNKNOWN
    return Verdict.YES if trop_vanishes(known) else Verdict.NO


def is_solution(f: DiffPoly, C: Sequence[TruncSeries], pair: PairDescriptor) -> Verdict:
    """Does the term list of ``f(C)`` tropically vanish?

    Terms whose leading data is lost to truncation are bounded from above by
    their t-order; the verdict is ``UNKNOWN`` whenever such a term could reach
    the maximum of the known terms.
    """
    return verdict_from_bounded(eval_terms_bounded(f, C, pair), pair.s0.zero())


def is_solution_of_all(fs: Sequence[DiffPoly], C, pair) -> Verdict:
    """Membership in the intersection of the solution sets of ``fs``."""
    verdicts = [is_solution(f, C, pair) for f in fs]
    if Verdict.NO in verdicts:
        return Verdict.NO
    if Verdict.UNKNOWN in verdicts:
        return Verdict.UNKNOWN
    return Verdict.YES


def grigoriev_val(W: TruncSeries, j: int, pair: PairDescriptor) -> SemiringValue:
    """``pi(d^j W)`` for a boolean series ``W``."""
    if pair.pi != BOOLEAN_LEADING_EXPONENT:
        raise ValueError("grigoriev_val needs the boolean pair")
    if W.trunc_deg is not None and j > W.trunc_deg:
        raise TruncationExhausted(f"d^{j} needs more than the {W.trunc_deg} known degrees")
    return project(iterate_derivative(W, pair.differential, j), pair)


# parsing -----------------------------------------------------------------

_VAR_RE = re.compile(r"^x(\d*)((?:')*|\^\(\s*(\d+)\s*\))(?:\^(\d+))?$")


def _parse_variable(text: str):
    m = _VAR_RE.match(text.replace(" ", ""))
    if not m:
        return None
    idx = int(m.group(1)) if m.group(1) else 1
    if idx < 1:
        return None
    if m.group(3) is not None:
        j = int(m.group(3))
    else:
        j = len(m.group(2))
    k = int(m.group(4)) if m.group(4) else 1
    return DiffMonomial.var(idx - 1, j, k)


def parse_polynomial_terms(text: str, parse_coeff: Callable[[str, int], object], allow_minus=False):
    """Split a polynomial literal into ``(negated, coefficient or None, monomial)`` triples.

    ``parse_coeff(text, position)`` turns a non-variable factor into a
    coefficient; products of several coefficient factors are returned as a list.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", text, 0)
    out = []
    seps = "+-" if allow_minus else "+"
    for sep, piece, pos in split_top(text, seps):
        stripped = piece.strip()
        if not stripped:
            raise ParseError("empty term", text, pos)
        lead = pos + (len(piece) - len(piece.lstrip()))
        negated = sep == "-"
        if allow_minus and stripped.startswith("-"):
            negated = not negated
            stripped = stripped[1:].strip()
            lead += 1
        if stripped == "0":
            continue
        mono = DiffMonomial()
        coeffs = []
        for _, fac, fpos in split_top(stripped, "*", lead):
            ftxt = fac.strip()
            if not ftxt:
                raise ParseError("empty factor", text, fpos)
            var = _parse_variable(ftxt) if ftxt.startswith("x") else None
            if var is not None:
                mono = mono * var
            elif ftxt.startswith("x"):
                raise ParseError(f"malformed variable {ftxt!r}", text, fpos)
            else:
                coeffs.append(parse_coeff(ftxt, fpos))
        out.append((negated, coeffs, mono))
    return out


def parse_diffpoly(text: str, tag: str = "T2") -> DiffPoly:
    """Parse e.g. ``(e^-4,1)*x1 + (1,8)*x1' + (e^-1,8)*x1''`` over the semiring ``tag``."""
    kind = SEMIRINGS[tag]

    def coeff(ftxt, pos):
        if tag != "T2" and ftxt.startswith("(") and ftxt.endswith(")"):
            ftxt = strip_parens(ftxt)
        try:
            return parse_value(ftxt, tag)
        except ParseError as exc:
            raise ParseError(f"malformed coefficient {ftxt!r}: {exc}", text, pos) from None

    terms = []
    for negated, coeffs, mono in parse_polynomial_terms(text, coeff):
        c = kind.one()
        for x in coeffs:
            c = c * x
        terms.append((mono, c))
    return DiffPoly(kind, tuple(terms))
