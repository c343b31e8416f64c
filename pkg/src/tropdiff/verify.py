"""Random samplers and property suites used by ``tropdiff verify`` and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .forest import Assignment, ForestExpr, Leaf, Node, SeriesTarget, Var, eval_forest, forest_d, normalize
from .semiring import Bool, PosRat, Rank2, TropExp, leq, trop_vanishes
from .series import (
    PairDescriptor,
    TruncSeries,
    boolean_pair,
    degenerate_differential,
    differentiate,
    padic_differential,
    project,
    project_bounded,
    rank2_pair,
    separating_derivative_order,
    series_trop_vanishes,
    STRICT_SHIFT,
)
from .seminorms import (
    RatSeries,
    check_enhancement_commutes,
    check_seminorm_axioms,
    enhance,
    grigoriev,
    padic_rank2,
)

# samplers -------------------------------------------------------------------


def random_fraction(rng: random.Random, lo=1, hi=24, dens=(1, 2, 3, 4, 8, 9)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def random_value(rng: random.Random, kind, p_zero=0.1):
    if kind is Bool:
        return Bool(rng.randint(0, 1))
    if rng.random() < p_zero:
        return kind.zero()
    if kind is TropExp:
        return TropExp(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))))
    if kind is PosRat:
        return PosRat(random_fraction(rng))
    if kind is Rank2:
        return Rank2(TropExp(Fraction(rng.randint(-4, 6), rng.choice((1, 2)))), PosRat(random_fraction(rng)))
    raise TypeError(kind)


def random_series(rng: random.Random, kind=PosRat, trunc_deg=12, density=0.4, low=0) -> TruncSeries:
    coeffs = {}
    for n in range(low, trunc_deg + 1):
        if rng.random() < density:
            coeffs[n] = Bool(1) if kind is Bool else random_value(rng, kind, p_zero=0)
    return TruncSeries(kind, tuple(coeffs.items()), trunc_deg)


def random_rat_series(rng: random.Random, trunc_deg=12, density=0.5) -> RatSeries:
    coeffs = {}
    for n in range(trunc_deg + 1):
        if rng.random() < density:
            num = rng.choice((1, -1)) * rng.randint(1, 48)
            coeffs[n] = Fraction(num, rng.choice((1, 2, 3, 4, 6, 8, 9, 27)))
    return RatSeries(tuple(coeffs.items()), trunc_deg)


def random_tree_child(rng, depth, budget, nvars, coeff):
    """A non-root vertex: a leaf, or an internal vertex with 1-3 children."""
    if depth <= 1 or budget[0] <= 1 or rng.random() < 0.45:
        budget[0] -= 1
        if rng.random() < 0.6:
            return Leaf(Var(rng.randrange(nvars)))
        return Leaf(coeff(rng))
    kids = []
    for _ in range(rng.randint(1, 3)):
        if budget[0] <= 0:
            break
        kids.append(random_tree_child(rng, depth - 1, budget, nvars, coeff))
    return Node(tuple(kids)) if kids else Leaf(Var(rng.randrange(nvars)))


def random_forest(rng, max_depth=4, max_leaves=6, nvars=2, coeff=None, max_trees=3) -> ForestExpr:
    """Forest whose trees have depth <= ``max_depth`` and <= ``max_leaves`` leaves in total."""
    coeff = coeff or (lambda r: random_value(r, PosRat, p_zero=0.05))
    budget = [max_leaves]
    trees = []
    for _ in range(rng.randint(1, max_trees)):
        if budget[0] <= 0:
            break
        kids = [random_tree_child(rng, max_depth - 1, budget, nvars, coeff)
                for _ in range(rng.randint(1, 3)) if budget[0] > 0]
        trees.append(Node(tuple(kids)))
    return ForestExpr(tuple(trees))


# suites -----------------------------------------------------------------------


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, msg):
        self.checked += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(msg() if callable(msg) else msg)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "counterexample": self.failures[0] if self.failures else None,
        }


def semiring_laws(rng: random.Random, kind, cases: int) -> SuiteReport:
    rep = SuiteReport(f"semiring-laws[{kind.tag}]")
    zero, one = kind.zero(), kind.one()
    for _ in range(cases):
        a, b, c = (random_value(rng, kind) for _ in range(3))
        rep.check(a + a == a, lambda: f"idempotency fails for {a}")
        rep.check(a + zero == a and a * one == a, lambda: f"units fail for {a}")
        rep.check(a * zero == zero and zero * a == zero, lambda: f"absorption fails for {a}")
        rep.check(a + b == b + a and a * b == b * a, lambda: f"commutativity fails for {a}, {b}")
        rep.check((a + b) + c == a + (b + c), lambda: f"+ associativity fails for {a}, {b}, {c}")
        rep.check((a * b) * c == a * (b * c), lambda: f"* associativity fails for {a}, {b}, {c}")
        rep.check(a * (b + c) == a * b + a * c, lambda: f"distributivity fails for {a}, {b}, {c}")
        rep.check(leq(zero, a) and leq(a, a + b), lambda: f"order fails for {a}, {b}")
    return rep


def leibniz(rng: random.Random, differential, cases: int, kind=PosRat, trunc_deg=12, triple=False) -> SuiteReport:
    rep = SuiteReport(f"{'triple-' if triple else ''}leibniz[{differential.name}]")
    d = lambda s: differentiate(s, differential)  # noqa: E731
    for _ in range(cases):
        if triple:
            a, b, c = (random_series(rng, kind, trunc_deg) for _ in range(3))
            terms = [d(a * b * c), d(a) * b * c, a * d(b) * c, a * b * d(c)]
            rep.check(series_trop_vanishes(terms), lambda: f"a={a}, b={b}, c={c}")
        else:
            a, b = random_series(rng, kind, trunc_deg), random_series(rng, kind, trunc_deg)
            terms = [d(a * b), a * d(b), b * d(a)]
            rep.check(series_trop_vanishes(terms), lambda: f"a={a}, b={b}")
    return rep


def homomorphism(rng: random.Random, pair: PairDescriptor, cases: int, trunc_deg=12) -> SuiteReport:
    rep = SuiteReport(f"pi-homomorphism[{pair.name}]")
    for _ in range(cases):
        a = random_series(rng, pair.coeff_kind, trunc_deg, density=0.5, low=rng.randint(0, 5))
        b = random_series(rng, pair.coeff_kind, trunc_deg, density=0.5, low=rng.randint(0, 5))
        s, m = a + b, a * b
        if any(project_bounded(x, pair).order_bound is not None for x in (a, b, s, m)):
            rep.skipped += 1
            continue
        pa, pb = project(a, pair), project(b, pair)
        rep.check(project(s, pair) == pa + pb, lambda: f"pi(a+b) != pi(a)+pi(b) for a={a}, b={b}")
        rep.check(project(m, pair) == pa * pb, lambda: f"pi(ab) != pi(a)pi(b) for a={a}, b={b}")
    return rep


def enhancement(rng: random.Random, e, cases: int, trunc_deg=12) -> SuiteReport:
    rep = SuiteReport(f"enhancement-commutes[{e.label}]")
    samples = [random_rat_series(rng, trunc_deg) for _ in range(cases)]
    r = check_enhancement_commutes(e, samples)
    rep.checked, rep.skipped = r.checked, r.skipped
    if not r.passed:
        rep.failures.append(r.counterexample)
    return rep


def seminorm_axioms(rng: random.Random, e, cases: int, trunc_deg=12) -> SuiteReport:
    rep = SuiteReport(f"seminorm-axioms[{e.label}]")
    samples = [random_rat_series(rng, trunc_deg) for _ in range(cases)]
    r = check_seminorm_axioms(e, samples)
    rep.checked, rep.skipped = r.checked, r.skipped
    if not r.passed:
        rep.failures.append(r.counterexample)
    return rep


def forest_soundness(rng: random.Random, cases: int, p=2, trunc_deg=12) -> SuiteReport:
    rep = SuiteReport(f"forest-soundness[padic({p})]")
    target = SeriesTarget(PosRat, padic_differential(p))

    def coeff(r):
        if r.random() < 0.5:
            return random_value(r, PosRat, p_zero=0.05)
        return random_series(r, PosRat, trunc_deg, density=0.3)

    for _ in range(cases):
        a, b = random_forest(rng, coeff=coeff), random_forest(rng, coeff=coeff)
        asg = Assignment(target, [random_series(rng, PosRat, trunc_deg) for _ in range(2)])
        ev = lambda f: eval_forest(f, asg)  # noqa: E731
        ea, eb = ev(a), ev(b)
        rep.check(ev(normalize(a, target.coeff_d)).agrees_with(ea), lambda: f"normalize changes value of {a}")
        rep.check(ev(a + b).agrees_with(ea + eb), lambda: f"sum not respected for {a}, {b}")
        rep.check(ev(a * b).agrees_with(ea * eb), lambda: f"product not respected for {a}, {b}")
        rep.check(ev(forest_d(a)).agrees_with(target.d(ea)), lambda: f"d not respected for {a}")
        terms = [ev(forest_d(a * b)), ea * ev(forest_d(b)), eb * ev(forest_d(a))]
        rep.check(series_trop_vanishes(terms), lambda: f"Leibniz bend fails for {a}, {b}")
    return rep


def reducedness(rng: random.Random, cases: int, trunc_deg=10) -> SuiteReport:
    rep = SuiteReport("reducedness[B]")
    pair = boolean_pair()
    for _ in range(cases):
        a = random_series(rng, Bool, trunc_deg)
        b = random_series(rng, Bool, trunc_deg)
        if a == b:
            rep.skipped += 1
            continue
        n = separating_derivative_order(a, b, pair)
        ok = n is not None
        if ok:
            da, db = a, b
            for _ in range(n):
                da, db = pair.d(da), pair.d(db)
            ok = project(da, pair) != project(db, pair)
        rep.check(ok, lambda: f"no separating derivative for {a.to_support_literal()}, {b.to_support_literal()}")
    return rep


SUITES = ("axioms", "leibniz", "homomorphism", "enhancement", "forest", "reducedness")


def run_suite(name: str, cases: int = 200, seed: int = 0, prime: int = 2) -> list:
    """Run one named suite (or ``all``) and return its reports."""
    rng = random.Random(seed)
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, cases, seed, prime)]
    if name == "axioms":
        reps = [semiring_laws(rng, k, cases) for k in (Bool, TropExp, PosRat, Rank2)]
        small = max(2, min(cases, 40))
        reps += [seminorm_axioms(rng, e, small) for e in (grigoriev(), padic_rank2(prime))]
        return reps
    if name == "leibniz":
        diffs = [padic_differential(prime), degenerate_differential(prime), STRICT_SHIFT]
        reps = [leibniz(rng, d, cases) for d in diffs]
        reps.append(leibniz(rng, padic_differential(prime), max(1, cases // 2), triple=True))
        return reps
    if name == "homomorphism":
        return [homomorphism(rng, pr, cases) for pr in (boolean_pair(), rank2_pair(prime))]
    if name == "enhancement":
        return [enhancement(rng, e, cases) for e in (grigoriev(), padic_rank2(prime))]
    if name == "forest":
        return [forest_soundness(rng, cases, prime)]
    if name == "reducedness":
        return [reducedness(rng, cases)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")


def vanishing_table(values) -> list:
    """All sublists of a small value list with their vanishing verdict (for demos)."""
    out = []
    for mask in iproduct((0, 1), repeat=len(values)):
        chosen = [v for v, m in zip(values, mask) if m]
        if chosen:
            out.append((chosen, trop_vanishes(chosen)))
    return out
