from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropdiff import (
    Bool,
    ParseError,
    PosRat,
    Rank2,
    SemiringTagError,
    TropExp,
    leq,
    parse_fraction,
    parse_value,
    total,
    trop_vanishes,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
positive = st.fractions(min_value=0, max_value=50, max_denominator=12).filter(lambda q: q > 0)

bools = st.integers(0, 1).map(Bool)
trops = st.one_of(st.just(TropExp.zero()), fractions.map(TropExp))
posrats = st.one_of(st.just(PosRat.zero()), positive.map(PosRat))
rank2s = st.one_of(st.just(Rank2.zero()), st.builds(Rank2.of, fractions, positive))
any_kind = st.sampled_from([bools, trops, posrats, rank2s])


def triples(s):
    return st.tuples(s, s, s)


@pytest.fixture
def r2():
    return lambda text: parse_value(text, "T2")


# worked values from the rank-2 cascade


def test_rank2_sum_keeps_dominant_order(r2):
    assert r2("(e^-1, 4)") + r2("(e^-4, 1)") == r2("(e^-1, 4)")


def test_rank2_product_multiplies_componentwise(r2):
    assert r2("(e^-1, 8)") * r2("(1, 1/2)") == r2("(e^-1, 4)")


def test_rank2_order_is_lexicographic(r2):
    assert leq(r2("(e^-4, 1)"), r2("(e^-1, 4)"))
    assert not leq(r2("(e^-1, 4)"), r2("(e^-4, 1)"))
    assert leq(r2("(e^-1, 3)"), r2("(e^-1, 4)"))


def test_posrat_sum_is_max():
    assert PosRat(Fraction(3, 4)) + PosRat(Fraction(2, 3)) == PosRat(Fraction(3, 4))


def test_trop_product_adds_orders():
    assert TropExp(3) * TropExp(2) == TropExp(5)


def test_posrat_order_reflexive():
    assert leq(PosRat(Fraction(1, 8)), PosRat(Fraction(1, 8)))


def test_vanishing_examples(r2):
    assert trop_vanishes([r2("(e^-4,1)"), r2("(e^-1,4)"), r2("(e^-1,4)")])
    assert not trop_vanishes([r2("(e^-4,1)"), r2("(1,8)"), r2("(e^-1,4)")])
    assert trop_vanishes([Rank2.zero()] * 3)


def _removal_oracle(terms):
    # direct: the full sum survives deleting any single term
    full = max(terms, key=lambda v: v.sort_key())
    if len(terms) == 1:
        return full.is_zero
    for j in range(len(terms)):
        rest = terms[:j] + terms[j + 1:]
        if max(rest, key=lambda v: v.sort_key()) != full:
            return False
    return True


def test_vanishing_with_tied_leading_pair(r2):
    terms = [r2("(e^-4,1)"), r2("(e^-4,1)"), r2("(e^-4,1/2)")]
    assert _removal_oracle(terms) is True
    assert trop_vanishes(terms)


def test_vanishing_single_term_and_empty():
    assert trop_vanishes([TropExp.zero()])
    assert not trop_vanishes([TropExp(0)])
    with pytest.raises(ValueError):
        trop_vanishes([])


@given(st.lists(rank2s, min_size=1, max_size=6))
def test_vanishing_matches_removal_oracle(terms):
    assert trop_vanishes(terms) == _removal_oracle(terms)


def test_tag_mismatch_is_rejected():
    with pytest.raises(SemiringTagError):
        TropExp(1) + PosRat(1)
    with pytest.raises(TypeError):
        Rank2.one() * Bool(1)


def test_rank2_components_zero_together():
    with pytest.raises(ValueError):
        Rank2(TropExp(None), PosRat(3))
    with pytest.raises(ValueError):
        Rank2(TropExp(2), PosRat(0))


def test_posrat_rejects_negative_and_float():
    with pytest.raises(ValueError):
        PosRat(-1)
    with pytest.raises(TypeError):
        PosRat(0.5)


def test_total_needs_zero_for_empty():
    assert total([], TropExp.zero()) == TropExp.zero()
    assert total([TropExp(2), TropExp(1)]) == TropExp(1)


@pytest.mark.parametrize("text,tag,expected", [
    ("e^-4", "T", TropExp(4)),
    ("e^3/2", "T", TropExp(Fraction(-3, 2))),
    ("1", "T", TropExp(0)),
    ("0", "T", TropExp.zero()),
    ("(e^-4, 1)", "T2", Rank2.of(4, 1)),
    ("(1, 8)", "T2", Rank2.of(0, 8)),
    ("(e^-1,1/8)", "T2", Rank2.of(1, Fraction(1, 8))),
    ("3/4", "Q+", PosRat(Fraction(3, 4))),
    ("1", "B", Bool(1)),
])
def test_parse_value(text, tag, expected):
    assert parse_value(text, tag) == expected


@pytest.mark.parametrize("text,tag", [("e^-", "T"), ("(1, 0)", "T2"), ("-1", "Q+"), ("2", "B"), ("1/0", "Q+")])
def test_parse_value_rejects(text, tag):
    with pytest.raises(ParseError):
        parse_value(text, tag)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_fraction("3/x")
    assert info.value.position == 0
    assert "position" in str(info.value)


@given(st.one_of(bools, trops, posrats, rank2s))
def test_literal_round_trip(a):
    assert parse_value(a.to_literal(), a.tag) == a


# laws ---------------------------------------------------------------------------


@given(any_kind.flatmap(triples))
def test_semiring_laws(abc):
    a, b, c = abc
    zero, one = a.zero_like(), a.one_like()
    assert a + a == a
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a and a * zero == zero


@given(any_kind.flatmap(triples))
def test_canonical_order_is_partial_order(abc):
    a, b, c = abc
    assert leq(a.zero_like(), a)
    assert leq(a, a + b) and leq(b, a + b)
    if leq(a, b) and leq(b, a):
        assert a == b
    if leq(a, b) and leq(b, c):
        assert leq(a, c)


@given(rank2s, st.integers(0, 5))
def test_power_is_repeated_product(a, k):
    expected = a.one_like()
    for _ in range(k):
        expected = expected * a
    assert a ** k == expected
