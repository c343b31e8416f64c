"""Labelled forests as differential expressions.

A tree is an unlabelled root whose children are factors of a product.  A
child is either a leaf (a coefficient or a variable) or an internal vertex,
which stands for ``d`` applied to the product of *its* children.  A forest is
a ``+``-sum of trees.  So ``r1 * x1 * d(d(x2)) * d(r2 * x1 * d(x2))`` is one
tree with four root children.

Products glue roots together, ``forest_d`` puts a new root under every tree,
and :func:`normalize` applies the five rewrite rules (zero leaves kill a tree,
unit leaves disappear, sibling coefficients multiply, a coefficient alone
under an edge becomes its derivative, and root-grafted coefficients of equal
trees add).  :func:`eval_forest` evaluates into any concrete differential
semiring, which is how the tropical Leibniz relations are checked: they hold
in every evaluation target rather than being imposed syntactically.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Callable

from ._text import split_top, strip_parens
from .diffpoly import DiffPoly, _parse_variable
from .errors import ParseError
from .semiring import SEMIRINGS, parse_value, total
from .series import STRICT_SHIFT, TruncSeries, differentiate, parse_series

__all__ = [
    "Var",
    "Leaf",
    "Node",
    "ForestExpr",
    "SeriesTarget",
    "ScalarTarget",
    "Assignment",
    "leaf",
    "var",
    "forest_sum",
    "forest_mul",
    "forest_d",
    "normalize",
    "eval_forest",
    "from_diffpoly",
    "parse_forest",
]


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Leaf:
    label: object  # Var, SemiringValue or TruncSeries

    @property
    def is_var(self) -> bool:
        return isinstance(self.label, Var)


@dataclass(frozen=True)
class Node:
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(sorted(self.children, key=_key)))


def _key(x) -> str:
    if isinstance(x, Leaf):
        if x.is_var:
            return f"0v{x.label.index:06d}"
        lab = x.label
        return f"1c{type(lab).__name__}:{lab.to_literal()}"
    return "2(" + ",".join(_key(c) for c in x.children) + ")"


@dataclass(frozen=True)
class ForestExpr:
    trees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(sorted(self.trees, key=_key)))

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((Node(()),))

    def __add__(self, other):
        return forest_sum(self, other)

    def __mul__(self, other):
        return forest_mul(self, other)

    @property
    def is_empty(self) -> bool:
        return not self.trees

    def to_literal(self) -> str:
        if not self.trees:
            return "0"
        return " + ".join(_product_literal(t.children) for t in self.trees)

    def __str__(self):
        return self.to_literal()


def _child_literal(c) -> str:
    if isinstance(c, Leaf):
        if c.is_var:
            return f"x{c.label.index + 1}"
        if isinstance(c.label, TruncSeries):
            return f"[{c.label.to_literal()}]"
        return c.label.to_literal()
    return f"d({_product_literal(c.children)})"


def _product_literal(children) -> str:
    if not children:
        return "1"
    return " * ".join(_child_literal(c) for c in children)


def leaf(label) -> ForestExpr:
    """Forest with one tree: a root carrying a single leaf."""
    return ForestExpr((Node((Leaf(label),)),))


def var(i: int) -> ForestExpr:
    return leaf(Var(i))


def forest_sum(a: ForestExpr, b: ForestExpr) -> ForestExpr:
    return ForestExpr(a.trees + b.trees)


def forest_mul(a: ForestExpr, b: ForestExpr) -> ForestExpr:
    return ForestExpr(tuple(Node(s.children + t.children) for s in a.trees for t in b.trees))


def forest_d(a: ForestExpr) -> ForestExpr:
    """Insert an edge below every root.

    A bare root (the unit) is dropped: ``d(1) = 0`` in every target used here.
    """
    return ForestExpr(tuple(Node((t,)) for t in a.trees if t.children))


# rewriting ----------------------------------------------------------------

_ZERO = object()


def _is_coeff(c) -> bool:
    return isinstance(c, Leaf) and not c.is_var


def _lift(a, b):
    """Bring a scalar and a series coefficient into the series semiring."""
    if isinstance(a, TruncSeries) and not isinstance(b, TruncSeries):
        return a, TruncSeries.constant(b)
    if isinstance(b, TruncSeries) and not isinstance(a, TruncSeries):
        return TruncSeries.constant(a), b
    return a, b


def _coeff_mul(a, b):
    a, b = _lift(a, b)
    return a * b


def _coeff_add(a, b):
    a, b = _lift(a, b)
    return a + b


def _merge_children(children, coeff_d, is_root):
    """Normalize a child list; returns a tuple or ``_ZERO``."""
    out = []
    coeff = None
    for c in children:
        if isinstance(c, Node):
            c = _normalize_internal(c, coeff_d)
            if c is _ZERO:
                return _ZERO
        if _is_coeff(c):
            if c.label.is_zero:
                return _ZERO
            coeff = c.label if coeff is None else _coeff_mul(coeff, c.label)
        else:
            out.append(c)
    if coeff is not None:
        if coeff.is_zero:
            return _ZERO
        # a unit leaf may go unless it is the only child of a non-root vertex
        if not coeff.is_one or (not out and not is_root):
            out.append(Leaf(coeff))
    return tuple(out)


def _normalize_internal(node: Node, coeff_d):
    children = _merge_children(node.children, coeff_d, is_root=False)
    if children is _ZERO or not children:
        return _ZERO
    if len(children) == 1 and _is_coeff(children[0]):
        r = coeff_d(children[0].label)
        return _ZERO if r.is_zero else Leaf(r)
    return Node(children)


def _zero_derivative(label):
    return label.zero_like()


def normalize(a: ForestExpr, coeff_d: Callable | None = None, max_steps: int = 64) -> ForestExpr:
    """Rewrite to a fixed point.

    ``coeff_d`` is the differential of the coefficient semiring (used when a
    coefficient sits alone under an edge); by default coefficients are
    constants and differentiate to zero.
    """
    coeff_d = coeff_d or _zero_derivative
    current = a
    for _ in range(max_steps):
        nxt = _normalize_once(current, coeff_d)
        if nxt == current:
            return nxt
        current = nxt
    raise RuntimeError(f"normalization did not reach a fixed point in {max_steps} steps")


def _normalize_once(a: ForestExpr, coeff_d) -> ForestExpr:
    groups: dict = {}
    order = []
    for t in a.trees:
        children = _merge_children(t.children, coeff_d, is_root=True)
        if children is _ZERO:
            continue
        coeffs = [c.label for c in children if _is_coeff(c)]
        rest = tuple(sorted((c for c in children if not _is_coeff(c)), key=_key))
        coeff = coeffs[0] if coeffs else None
        if rest not in groups:
            groups[rest] = []
            order.append(rest)
        groups[rest].append(coeff)
    trees = []
    for rest in order:
        cs = groups[rest]
        explicit = [c for c in cs if c is not None]
        if not explicit:
            trees.append(Node(rest))
            continue
        one = explicit[0].one_like()
        c = functools.reduce(_coeff_add, [one if x is None else x for x in cs])
        if c.is_zero:
            continue
        trees.append(Node(rest if c.is_one else rest + (Leaf(c),)))
    return ForestExpr(tuple(trees))


# evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTarget:
    """A truncated-series semiring with a chosen differential."""

    kind: type
    differential: object = STRICT_SHIFT

    def zero(self):
        return TruncSeries.zero(self.kind)

    def one(self):
        return TruncSeries.constant(self.kind.one())

    def d(self, x: TruncSeries) -> TruncSeries:
        return differentiate(x, self.differential)

    def coeff_d(self, label):
        """Derivative of a forest coefficient; scalars are constants."""
        if isinstance(label, TruncSeries):
            return self.d(label)
        return label.zero_like()

    def embed(self, label):
        if isinstance(label, TruncSeries):
            return label
        return TruncSeries.constant(label)


@dataclass(frozen=True)
class ScalarTarget:
    """A plain semiring with the zero differential."""

    kind: type

    def zero(self):
        return self.kind.zero()

    def one(self):
        return self.kind.one()

    def d(self, x):
        return self.kind.zero()

    def coeff_d(self, label):
        return label.zero_like()

    def embed(self, label):
        return label


@dataclass(frozen=True)
class Assignment:
    target: object
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))


def eval_forest(a: ForestExpr, asg: Assignment):
    """The image of ``a`` under the homomorphism sending ``x_i`` to ``asg.values[i]``."""
    tgt = asg.target

    def child(c):
        if isinstance(c, Leaf):
            if c.is_var:
                return asg.values[c.label.index]
            return tgt.embed(c.label)
        return tgt.d(product(c.children))

    def product(children):
        out = tgt.one()
        for c in children:
            out = out * child(c)
        return out

    return total((product(t.children) for t in a.trees), tgt.zero())


def from_diffpoly(f: DiffPoly) -> ForestExpr:
    """Embed a basic differential polynomial: ``x_i^(j)`` becomes ``j`` nested edges over ``x_i``."""
    trees = []
    for m, c in f.terms:
        children = [] if c.is_one else [Leaf(c)]
        for (i, j), k in m.exponents:
            chain = Leaf(Var(i))
            for _ in range(j):
                chain = Node((chain,))
            children.extend([chain] * k)
        trees.append(Node(tuple(children)))
    return ForestExpr(tuple(trees))


# parsing --------------------------------------------------------------------

_D_RE = re.compile(r"^d\s*\(")


def parse_forest(text: str, tag: str = "Q+") -> ForestExpr:
    """Parse ``c * x1 * d(x1 * d(x2)) + ...``.

    Coefficients are literals of the semiring ``tag``; ``[...]`` encloses a
    series coefficient over that semiring.  ``x1'`` and ``x1^(j)`` are
    shorthand for nested ``d``.
    """
    kind = SEMIRINGS[tag]

    def parse_sum(s: str, offset: int) -> ForestExpr:
        out = ForestExpr.empty()
        for _, piece, pos in split_top(s, "+", offset):
            p = piece.strip()
            if not p:
                raise ParseError("empty term", text, pos)
            if p == "0":
                continue
            out = out + parse_product(p, pos)
        return out

    def parse_product(s: str, offset: int) -> ForestExpr:
        out = ForestExpr.one()
        for _, fac, pos in split_top(s, "*", offset):
            out = out * parse_factor(fac.strip(), pos)
        return out

    def parse_factor(s: str, pos: int) -> ForestExpr:
        if not s:
            raise ParseError("empty factor", text, pos)
        if _D_RE.match(s) and s.endswith(")"):
            inner = s[s.index("(") + 1: -1]
            return forest_d(parse_sum(inner, pos + s.index("(") + 1))
        if s.startswith("x"):
            mono = _parse_variable(s)
            if mono is None:
                raise ParseError(f"malformed variable {s!r}", text, pos)
            out = ForestExpr.one()
            for (i, j), k in mono.exponents:
                f = var(i)
                for _ in range(j):
                    f = forest_d(f)
                for _ in range(k):
                    out = out * f
            return out
        if s.startswith("[") and s.endswith("]"):
            try:
                return leaf(parse_series(s[1:-1], kind))
            except ParseError as exc:
                raise ParseError(f"malformed series coefficient: {exc}", text, pos) from None
        try:
            return leaf(parse_value(s, tag))
        except ParseError:
            if s.startswith("("):
                return parse_sum(strip_parens(s), pos + 1)
            raise ParseError(f"malformed coefficient {s!r}", text, pos) from None

    return parse_sum(text, 0)
