from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tropdiff import (
    DiffMonomial,
    DiffPoly,
    ParseError,
    PosRat,
    Rank2,
    TropExp,
    TruncSeries,
    TruncationExhausted,
    Verdict,
    boolean_pair,
    eval_monomial,
    eval_poly,
    grigoriev_val,
    is_solution,
    is_solution_of_all,
    parse_diffpoly,
    rank2_pair,
)

CASCADE = "(e^-4,1)*x1 + (1,8)*x1' + (e^-1,8)*x1''"
PAIR = rank2_pair(2)
positive = st.fractions(min_value=0, max_value=40, max_denominator=9).filter(lambda q: q > 0)


@pytest.fixture(scope="module")
def f():
    return parse_diffpoly(CASCADE)


def qs(coeffs, trunc=16):
    return TruncSeries.from_dict(PosRat, coeffs, trunc)


def r2(order, q):
    return Rank2.of(order, q)


@given(positive)
def test_second_derivative_projection(be):
    assert eval_monomial(DiffMonomial.var(0, 2), [qs({0: 1, 2: be})], PAIR) == r2(0, be / 2)


def test_empty_monomial_is_one():
    assert eval_monomial(DiffMonomial.of({}), [qs({0: 1})], PAIR) == Rank2.one()


def test_monomial_product_matches_separate_projections():
    x = qs({0: 1, 2: 1})
    m = DiffMonomial.var(0, 0) * DiffMonomial.var(0, 1)
    px = eval_monomial(DiffMonomial.var(0, 0), [x], PAIR)
    pdx = eval_monomial(DiffMonomial.var(0, 1), [x], PAIR)
    assert (px, pdx) == (r2(0, 1), r2(1, F(1, 2)))
    assert eval_monomial(m, [x], PAIR) == px * pdx == r2(1, F(1, 2))


@given(positive, positive)
def test_first_cascade_case_terms(al, be):
    res = eval_poly(parse_diffpoly(CASCADE), [qs({0: 1, 1: al, 2: be})], PAIR)
    assert res.terms == [r2(4, 1), r2(0, 8 * al), r2(1, 4 * be)]
    assert res.value == r2(0, 8 * al)


@given(positive)
def test_second_cascade_case_terms(be):
    res = eval_poly(parse_diffpoly(CASCADE), [qs({0: 1, 2: be})], PAIR)
    assert res.terms == [r2(4, 1), r2(1, 4 * be), r2(1, 4 * be)]


def test_zero_polynomial():
    res = eval_poly(DiffPoly.zero(Rank2), [qs({0: 1})], PAIR)
    assert res.value == Rank2.zero() and res.terms == []


def test_eval_poly_raises_when_a_derivative_is_lost(f):
    with pytest.raises(TruncationExhausted):
        eval_poly(f, [qs({0: 1, 1: 1}, 1)], PAIR)


@pytest.mark.parametrize("coeffs,expected", [
    ({0: 1, 2: 1}, Verdict.YES),
    ({0: 1, 3: 1}, Verdict.NO),
    ({0: 1, 4: 1}, Verdict.YES),
    ({0: 1, 5: F(1, 8)}, Verdict.YES),
    ({0: 1, 5: F(1, 4)}, Verdict.NO),
])
def test_cascade_membership(f, coeffs, expected):
    assert is_solution(f, [qs(coeffs)], PAIR) is expected


def test_truncation_caveat_gives_unknown():
    # x' + x'' at a constant known only to degree 1: x'' carries no information
    g = parse_diffpoly("(1,1)*x1' + (1,1)*x1''")
    assert is_solution(g, [qs({0: 1}, 1)], PAIR) is Verdict.UNKNOWN
    # known to degree 10, x'' has t-order at least 9, far below the x term
    h = parse_diffpoly("(1,1)*x1 + (1,1)*x1''")
    assert is_solution(h, [qs({0: 1}, 10)], PAIR) is Verdict.NO


def test_intersection_of_solution_sets(f):
    g = parse_diffpoly("(1,1)*x1 + (1,1)*x1'")
    x = [qs({0: 1, 2: 1})]
    assert is_solution(f, x, PAIR) is Verdict.YES
    assert is_solution(g, x, PAIR) is Verdict.NO
    assert is_solution_of_all([f, g], x, PAIR) is Verdict.NO
    assert is_solution_of_all([f], x, PAIR) is Verdict.YES


def test_grigoriev_values():
    pair = boolean_pair()
    assert grigoriev_val(TruncSeries.from_support([0, 2], None), 1, pair) == TropExp(1)
    assert grigoriev_val(TruncSeries.from_support([0], None), 1, pair).is_zero
    assert grigoriev_val(TruncSeries.from_support([5], None), 0, pair) == TropExp(5)


def test_polynomial_merges_equal_monomials_by_sum():
    g = parse_diffpoly("(e^-1,2)*x1 + (1,1)*x1")
    assert g.terms == ((DiffMonomial.var(0, 0), r2(0, 1)),)


def test_parse_variables():
    g = parse_diffpoly("x1^(3) + x2'^2 + (1,2)*x1*x2", "T2")
    assert set(g.monomials) == {
        DiffMonomial.var(0, 3),
        DiffMonomial.var(1, 1, 2),
        DiffMonomial.var(0, 0) * DiffMonomial.var(1, 0),
    }
    assert g.nvars == 2
    assert parse_diffpoly("x + x'", "T").monomials == (DiffMonomial.var(0, 0), DiffMonomial.var(0, 1))


@pytest.mark.parametrize("text", ["(e^-4,1)*y1", "(1,8)*", "x1 + + x1'", "(1,0)*x1", "x1^(a)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_diffpoly(text)


def test_literal_round_trip(f):
    assert parse_diffpoly(f.to_literal()) == f
    g = parse_diffpoly("x1^(3)*x2 + (e^-1/2, 3/7)*x2''^2 + (1,1)", "T2")
    assert parse_diffpoly(g.to_literal()) == g
