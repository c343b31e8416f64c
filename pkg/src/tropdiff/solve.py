"""Solution search.

Two solvers live here:

* :func:`enumerate_boolean_solutions` runs through every support set
  ``S`` of ``{0..max_deg}`` and keeps the boolean polynomials that solve a
  tropical equation over ``B[[t]] -> T``.
* :func:`solve_leading_coefficient` handles a rank-2 template
  ``x = p(t) + c t^m + (unknown higher terms)`` with one positive unknown
  ``c``.  Every term of ``f(x)`` becomes ``(e^-order, a c^k)``; the terms of
  smallest order compete and the set of ``c > 0`` where the maximum is
  attained twice is computed exactly, including irrational crossing points
  ``c = q^(1/e)``.  :func:`scan_template` runs it slot by slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Mapping

from sympy import integer_nthroot

from .diffpoly import DiffPoly, Verdict, is_solution
from .errors import ResourceLimitExceeded, UnsupportedTemplate
from .semiring import PosRat, Rank2, TropExp, format_fraction
from .series import (
    BOOLEAN_LEADING_EXPONENT,
    RANK2_LEADING_TERM,
    PairDescriptor,
    TruncSeries,
    boolean_pair,
)

__all__ = [
    "SupportPattern",
    "EnumerationResult",
    "enumerate_boolean_solutions",
    "CoeffTemplate",
    "SymTerm",
    "VerdictKind",
    "SolveVerdict",
    "template_terms",
    "solve_leading_coefficient",
    "scan_template",
]

DEFAULT_BUDGET = 1 << 16


@dataclass(frozen=True)
class SupportPattern:
    support: tuple

    def series(self, trunc_deg=None) -> TruncSeries:
        return TruncSeries.from_support(self.support, trunc_deg)

    def __iter__(self):
        return iter(self.support)


@dataclass
class EnumerationResult:
    solutions: list
    unknown: list
    checked: int

    def supports(self):
        return [set(p.support) for p in self.solutions]


def enumerate_boolean_solutions(f: DiffPoly, max_deg: int, pair: PairDescriptor | None = None,
                                budget: int = DEFAULT_BUDGET) -> EnumerationResult:
    """All ``S`` in ``{0..max_deg}`` whose polynomial ``sum_{n in S} t^n`` solves ``f``.

    Supports are visited by cardinality, then lexicographically.
    """
    pair = pair or boolean_pair()
    if pair.pi != BOOLEAN_LEADING_EXPONENT:
        raise ValueError("boolean enumeration needs the boolean pair")
    if max_deg < 0:
        raise ValueError("max_deg must be nonnegative")
    count = 1 << (max_deg + 1)
    if count > budget:
        raise ResourceLimitExceeded(f"{count} supports exceed the budget of {budget}")
    nvars = max(f.nvars, 1)
    if nvars != 1:
        raise UnsupportedTemplate("boolean enumeration handles one variable")
    sols, unknown = [], []
    degrees = range(max_deg + 1)
    for r in range(max_deg + 2):
        for support in combinations(degrees, r):
            v = is_solution(f, [TruncSeries.from_support(support, None)], pair)
            if v is Verdict.YES:
                sols.append(SupportPattern(support))
            elif v is Verdict.UNKNOWN:
                unknown.append(SupportPattern(support))
    return EnumerationResult(sols, unknown, count)


# rank-2 leading-coefficient solver ----------------------------------------------


@dataclass(frozen=True)
class CoeffTemplate:
    """``x = sum_{n < slot} prefix[n] t^n + c t^slot + (unknown terms of degree > slot)``."""

    slot: int
    prefix: tuple = ((0, Fraction(1)),)

    def __post_init__(self):
        if self.slot < 0:
            raise ValueError("slot must be nonnegative")
        cleaned = []
        for n, a in dict(self.prefix).items():
            a = Fraction(a)
            if a < 0:
                raise ValueError("template coefficients must be nonnegative")
            if n >= self.slot:
                raise ValueError(f"prefix degree {n} is not below the unknown slot {self.slot}")
            if a:
                cleaned.append((n, a))
        object.__setattr__(self, "prefix", tuple(sorted(cleaned)))

    @classmethod
    def of(cls, slot: int, prefix: Mapping[int, object] | None = None):
        prefix = {0: 1} if prefix is None else prefix
        return cls(slot, tuple((n, Fraction(a)) for n, a in prefix.items() if n < slot))

    def series(self, c) -> TruncSeries:
        """Concrete truncated series for a given ``c``; higher terms stay unknown."""
        coeffs = dict(self.prefix)
        coeffs[self.slot] = Fraction(c)
        return TruncSeries.from_dict(PosRat, coeffs, self.slot)


@dataclass(frozen=True)
class SymTerm:
    """``(e^-order, coeff * c^power)``, or only an order lower bound when ``bounded``."""

    order: Fraction
    coeff: Fraction = Fraction(1)
    power: int = 0
    bounded: bool = False

    def at(self, c) -> Rank2:
        if self.bounded:
            raise ValueError("a bounded term has no value")
        return Rank2(TropExp(self.order), PosRat(self.coeff * Fraction(c) ** self.power))

    def to_literal(self, name: str = "c") -> str:
        first = TropExp(self.order).to_literal()
        if self.bounded:
            return f"(<= {first}, ?)"
        return f"({first}, {_mono(self.coeff, self.power, name)})"

    def __str__(self):
        return self.to_literal()


def _mono(a: Fraction, k: int, name: str = "c") -> str:
    if k == 0:
        return format_fraction(a)
    var = name if k == 1 else f"{name}^{k}"
    if a == 1:
        return var
    if a.denominator == 1:
        return f"{a.numerator}{var}"
    return f"({format_fraction(a)}){var}"


def _derivative_leads(tmpl: CoeffTemplate, differential, max_order: int):
    """Leading ``(degree, coeff, power)`` of each ``d^j x``, or ``("bound", b)``."""
    known = [(n, a, 0) for n, a in tmpl.prefix] + [(tmpl.slot, Fraction(1), 1)]
    tail = tmpl.slot + 1
    leads = []
    for j in range(max_order + 1):
        if j:
            nxt = []
            for n, a, k in known:
                if n == 0:
                    continue
                w = differential.weight(n).value
                if w:
                    nxt.append((n - 1, a * w, k))
            known = nxt
            tail -= 1
        if known:
            leads.append(min(known))
        else:
            leads.append(("bound", max(0, tail)))
    return leads


def template_terms(f: DiffPoly, tmpl: CoeffTemplate, pair: PairDescriptor) -> list:
    """Symbolic per-term values of ``f`` at the template, one :class:`SymTerm` per term."""
    if pair.pi != RANK2_LEADING_TERM:
        raise UnsupportedTemplate("the leading-coefficient solver needs the rank-2 pair")
    if f.terms and f.kind is not Rank2:
        raise UnsupportedTemplate("polynomial coefficients must be rank-2 values")
    if f.nvars > 1:
        raise UnsupportedTemplate("templates carry a single variable")
    max_order = max((m.max_order for m in f.monomials), default=0)
    leads = _derivative_leads(tmpl, pair.differential, max_order)
    out = []
    for m, coef in f.terms:
        order, a, k, bounded = coef.order, coef.second.value, 0, False
        for (_, j), mult in m.exponents:
            lead = leads[j]
            if lead[0] == "bound":
                bounded = True
                order += lead[1] * mult
            else:
                n, la, lk = lead
                order += n * mult
                a *= la ** mult
                k += lk * mult
        out.append(SymTerm(order, Fraction(1), 0, True) if bounded else SymTerm(order, a, k))
    return out


class VerdictKind(str, enum.Enum):
    ALL_POSITIVE_C = "all_positive_c"
    SINGLE_VALUE = "single_value"
    NONE = "none"
    UNRESOLVED = "unresolved"


@dataclass
class SolveVerdict:
    kind: VerdictKind
    c: Fraction | None = None
    equations: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    slot: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "slot": self.slot,
            "verdict": self.kind.value,
            "c": None if self.c is None else format_fraction(self.c),
            "witness_terms": [t.to_literal() for t in self.terms],
        }
        if self.equations:
            out["equations"] = list(self.equations)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class _Root:
    """The positive real ``q^(1/e)``."""

    q: Fraction
    e: int

    def cmp(self, other: "_Root") -> int:
        lhs, rhs = self.q ** other.e, other.q ** self.e
        return (lhs > rhs) - (lhs < rhs)

    def rational(self) -> Fraction | None:
        if self.e == 1:
            return self.q
        num, exact_n = integer_nthroot(self.q.numerator, self.e)
        den, exact_d = integer_nthroot(self.q.denominator, self.e)
        return Fraction(int(num), int(den)) if exact_n and exact_d else None

    def scaled(self, a: Fraction, k: int) -> Fraction:
        """``(a c^k)^e`` at this root, exact and monotone in ``a c^k``."""
        return a ** self.e * self.q ** k


def _tie_set(monos: dict):
    """Exact description of ``{c > 0 : max_i a_i c^k_i attained at least twice}``.

    ``monos`` maps ``(a, k)`` to a multiplicity.  Returns ``(intervals_in,
    points_in, n_intervals, roots)``: membership flags for the open intervals
    between consecutive crossing points and the crossing points themselves.
    """
    keys = list(monos)
    roots: list[_Root] = []
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            (a1, k1), (a2, k2) = keys[i], keys[j]
            if k1 == k2:
                continue
            r = _Root(a2 / a1, k1 - k2) if k1 > k2 else _Root(a1 / a2, k2 - k1)
            if not any(r.cmp(s) == 0 for s in roots):
                roots.append(r)
    roots.sort(key=cmp_to_key(lambda x, y: x.cmp(y)))

    def dominant_after(root):
        if root is None:
            return min(keys, key=lambda ak: (ak[1], -ak[0]))
        return max(keys, key=lambda ak: (root.scaled(*ak), ak[1]))

    intervals = [monos[dominant_after(None)] >= 2]
    points = []
    for r in roots:
        vals = [r.scaled(a, k) for a, k in keys]
        top = max(vals)
        points.append(sum(monos[ak] for ak, v in zip(keys, vals) if v == top) >= 2)
        intervals.append(monos[dominant_after(r)] >= 2)
    return intervals, points, roots


def _equation(a1, k1, a2, k2) -> str:
    return f"{_mono(a1, k1)} = {_mono(a2, k2)}"


def solve_leading_coefficient(f: DiffPoly, tmpl: CoeffTemplate, pair: PairDescriptor | None = None) -> SolveVerdict:
    """Positive values of the template's unknown for which the template solves ``f``."""
    from .series import rank2_pair

    pair = pair or rank2_pair(2)
    terms = template_terms(f, tmpl, pair)
    verdict = SolveVerdict(VerdictKind.NONE, terms=terms, slot=tmpl.slot)
    determined = [t for t in terms if not t.bounded]
    bounds = [t.order for t in terms if t.bounded]
    if not terms:
        verdict.kind = VerdictKind.ALL_POSITIVE_C
        return verdict
    if not determined:
        verdict.kind = VerdictKind.UNRESOLVED
        verdict.note = "every term depends on unknown higher coefficients"
        return verdict
    top_order = min(t.order for t in determined)
    if any(b <= top_order for b in bounds):
        verdict.kind = VerdictKind.UNRESOLVED
        verdict.note = "a term depending on unknown higher coefficients may reach the maximum"
        return verdict
    monos: dict = {}
    for t in determined:
        if t.order == top_order:
            monos[(t.coeff, t.power)] = monos.get((t.coeff, t.power), 0) + 1
    intervals, points, roots = _tie_set(monos)
    if all(intervals) and all(points):
        verdict.kind = VerdictKind.ALL_POSITIVE_C
        return verdict
    if not any(intervals) and not any(points):
        verdict.kind = VerdictKind.NONE
        return verdict
    hits = [r for r, ok in zip(roots, points) if ok]
    keys = list(monos)
    for r in hits:
        vals = [r.scaled(a, k) for a, k in keys]
        top = max(vals)
        tied = [ak for ak, v in zip(keys, vals) if v == top]
        verdict.equations.extend(_equation(*tied[i], *tied[i + 1]) for i in range(len(tied) - 1))
    if not any(intervals) and len(hits) == 1:
        c = hits[0].rational()
        if c is not None:
            verdict.kind = VerdictKind.SINGLE_VALUE
            verdict.c = c
            return verdict
        verdict.kind = VerdictKind.UNRESOLVED
        verdict.note = "the only tie value is irrational"
        return verdict
    verdict.kind = VerdictKind.UNRESOLVED
    verdict.note = _describe(intervals, points, roots)
    return verdict


def _root_text(r: _Root) -> str:
    q = r.rational()
    if q is not None:
        return format_fraction(q)
    return f"({format_fraction(r.q)})^(1/{r.e})"


def _describe(intervals, points, roots) -> str:
    edges = ["0"] + [_root_text(r) for r in roots] + ["inf"]
    parts = [f"({edges[i]}, {edges[i + 1]})" for i, ok in enumerate(intervals) if ok]
    parts += [f"{{{_root_text(r)}}}" for r, ok in zip(roots, points) if ok]
    return "solutions for c in " + " U ".join(parts)


def scan_template(f: DiffPoly, max_slot: int, pair: PairDescriptor | None = None,
                  prefix: Mapping[int, object] | None = None) -> dict:
    """Solve slot ``m = 1..max_slot`` in turn, all free slots below ``m`` set to zero."""
    prefix = {0: 1} if prefix is None else dict(prefix)
    return {m: solve_leading_coefficient(f, CoeffTemplate.of(m, prefix), pair) for m in range(1, max_slot + 1)}
