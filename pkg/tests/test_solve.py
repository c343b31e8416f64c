from fractions import Fraction as F
from itertools import combinations

import pytest

from oracles import brute_boolean_solutions as _brute
from tropdiff import (
    CoeffTemplate,
    DiffPoly,
    Rank2,
    ResourceLimitExceeded,
    TruncSeries,
    UnsupportedTemplate,
    Verdict,
    VerdictKind,
    boolean_pair,
    enumerate_boolean_solutions,
    is_solution,
    parse_diffpoly,
    rank2_pair,
    scan_template,
    solve_leading_coefficient,
)

CASCADE = parse_diffpoly("(e^-4,1)*x1 + (1,8)*x1' + (e^-1,8)*x1''")
PAIR = rank2_pair(2)
SAMPLES = [F(1, 64), F(1, 9), F(1, 8), F(1, 5), F(1, 2), F(1), F(3, 2), F(7), F(40)]


def kinds(table):
    return [table[m].kind.value for m in sorted(table)]


def test_cascade_verdicts():
    table = scan_template(CASCADE, 5, PAIR)
    assert kinds(table) == ["none", "all_positive_c", "none", "all_positive_c", "single_value"]
    assert table[5].c == F(1, 8)
    assert table[5].equations == ["1 = 8c"]


@pytest.mark.parametrize("slot,terms", [
    (1, ["(e^-4, 1)", "(1, 8c)", "(<= e^-1, ?)"]),
    (2, ["(e^-4, 1)", "(e^-1, 4c)", "(e^-1, 4c)"]),
    (3, ["(e^-4, 1)", "(e^-2, 8c)", "(e^-2, 4c)"]),
    (4, ["(e^-4, 1)", "(e^-3, 2c)", "(e^-3, 2c)"]),
    (5, ["(e^-4, 1)", "(e^-4, 8c)", "(e^-4, 2c)"]),
])
def test_cascade_witness_terms(slot, terms):
    v = solve_leading_coefficient(CASCADE, CoeffTemplate.of(slot), PAIR)
    assert [t.to_literal() for t in v.terms] == terms


@pytest.mark.parametrize("slot", range(1, 6))
def test_verdicts_agree_with_concrete_membership(slot):
    v = solve_leading_coefficient(CASCADE, CoeffTemplate.of(slot), PAIR)
    tmpl = CoeffTemplate.of(slot)
    for c in SAMPLES:
        got = is_solution(CASCADE, [tmpl.series(c)], PAIR)
        if v.kind is VerdictKind.ALL_POSITIVE_C:
            assert got is Verdict.YES
        elif v.kind is VerdictKind.SINGLE_VALUE:
            assert got is (Verdict.YES if c == v.c else Verdict.NO)
        elif v.kind is VerdictKind.NONE:
            assert got is not Verdict.YES


def test_zero_polynomial_accepts_everything():
    table = scan_template(DiffPoly.zero(Rank2), 4, PAIR)
    assert set(kinds(table)) == {"all_positive_c"}


def test_lone_constant_term_is_never_cancelled():
    f = parse_diffpoly("(1,1)*x1")
    table = scan_template(f, 6, PAIR)
    assert set(kinds(table)) == {"none"}
    for m in table:
        for c in SAMPLES:
            assert is_solution(f, [CoeffTemplate.of(m).series(c)], PAIR) is Verdict.NO


def test_irrational_tie_is_unresolved():
    # x = 1 + c t: (1,1) x  against (1,2) x'^2 gives 1 = 2c^2
    f = parse_diffpoly("(1,1)*x1 + (1,2)*x1'^2")
    v = solve_leading_coefficient(f, CoeffTemplate.of(1), PAIR)
    assert v.kind is VerdictKind.UNRESOLVED
    assert v.equations == ["1 = 2c^2"]
    assert "irrational" in v.note


def test_rational_square_root_tie():
    f = parse_diffpoly("(1,1)*x1 + (1,4)*x1'^2")
    v = solve_leading_coefficient(f, CoeffTemplate.of(1), PAIR)
    assert (v.kind, v.c) == (VerdictKind.SINGLE_VALUE, F(1, 2))


def test_interval_of_solutions_is_reported():
    # two copies of c against one 1: ties for every c >= 1
    f = parse_diffpoly("(1,1)*x1 + (1,1)*x1'*x1 + (1,1)*x1'")
    v = solve_leading_coefficient(f, CoeffTemplate.of(1), PAIR)
    assert v.kind is VerdictKind.UNRESOLVED
    assert v.note == "solutions for c in (1, inf) U {1}"


def test_json_shape():
    v = solve_leading_coefficient(CASCADE, CoeffTemplate.of(5), PAIR)
    assert v.to_json() == {
        "slot": 5,
        "verdict": "single_value",
        "c": "1/8",
        "witness_terms": ["(e^-4, 1)", "(e^-4, 8c)", "(e^-4, 2c)"],
        "equations": ["1 = 8c"],
    }


def test_template_validation():
    with pytest.raises(ValueError):
        CoeffTemplate(2, ((3, F(1)),))
    with pytest.raises(UnsupportedTemplate):
        solve_leading_coefficient(parse_diffpoly("x1 + x1'", "T"), CoeffTemplate.of(1), PAIR)
    with pytest.raises(UnsupportedTemplate):
        solve_leading_coefficient(parse_diffpoly("(1,1)*x1*x2"), CoeffTemplate.of(1), PAIR)


# boolean enumeration ------------------------------------------------------------


def test_enumeration_of_x_plus_dx():
    f = parse_diffpoly("x + x'", "T")
    res = enumerate_boolean_solutions(f, 5)
    expected = [set()] + [s for s in _brute(f, 5) if s]
    assert res.supports() == expected
    assert {frozenset(s) for s in expected} == {frozenset()} | {
        frozenset(s) for r in range(7) for s in combinations(range(6), r) if {0, 1} <= set(s)}
    assert res.unknown == []


def test_enumeration_small_cases():
    assert enumerate_boolean_solutions(parse_diffpoly("x", "T"), 4).supports() == [set()]
    assert enumerate_boolean_solutions(parse_diffpoly("x'", "T"), 4).supports() == [set(), {0}]


@pytest.mark.parametrize("text", ["x + e^-1*x'' + x'^2", "e^-2*x + x*x'", "x'' + e^-1*x' + e^-3*x"])
def test_enumeration_agrees_with_independent_oracle(text):
    f = parse_diffpoly(text, "T")
    got = enumerate_boolean_solutions(f, 6)
    assert got.unknown == []
    assert sorted(map(sorted, got.supports())) == sorted(map(sorted, _brute(f, 6)))


def test_enumeration_budget():
    with pytest.raises(ResourceLimitExceeded):
        enumerate_boolean_solutions(parse_diffpoly("x", "T"), 20, budget=1000)


def test_enumeration_needs_boolean_pair():
    with pytest.raises(ValueError):
        enumerate_boolean_solutions(parse_diffpoly("x", "T"), 3, PAIR)


def test_solution_series_are_exact():
    res = enumerate_boolean_solutions(parse_diffpoly("x + x'", "T"), 3)
    assert all(p.series() == TruncSeries.from_support(p.support, None) for p in res.solutions)
    assert is_solution(parse_diffpoly("x + x'", "T"), [res.solutions[1].series()], boolean_pair()) is Verdict.YES
