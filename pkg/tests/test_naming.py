import pytest
from hypothesis import given, strategies as st

from src.engine.derived import Summand
from src.engine.errors import ObjectSyntaxError
from src.engine.naming import format_summand, parse_list, parse_summand, split_list
from src.engine.repcore import Interval


@pytest.mark.parametrize("text", ["P4[1]", "P4@1", "M[1,4]@1", "P_4[1]", "M[1, 4][1]", "P4[2][-1]"])
def test_equivalent_spellings(text):
    assert parse_summand(text, 4) == Summand(1, Interval(1, 4))


def test_aliases():
    assert parse_summand("I2", 4) == Summand(0, Interval(2, 4))
    assert parse_summand("S3", 4) == Summand(0, Interval(3, 3))
    assert parse_summand("E", 4) == Summand(0, Interval(2, 3))


@pytest.mark.parametrize("text,n", [("E", 5), ("Q3", 4), ("P5", 4), ("M[3,2]", 4), ("P2@", 4), ("", 3)])
def test_rejects_bad_names(text, n):
    with pytest.raises(ObjectSyntaxError):
        parse_summand(text, n)


def test_split_ignores_commas_inside_brackets():
    assert split_list("M[1,2]@1, P3 ,S2[1]") == ["M[1,2]@1", "P3", "S2[1]"]
    assert split_list("") == []


def test_canonical_names_prefer_aliases():
    assert format_summand(Summand(0, Interval(1, 1)), 4) == "P1"
    assert format_summand(Summand(2, Interval(2, 4)), 4) == "I2[2]"
    assert format_summand(Summand(0, Interval(2, 3)), 4) == "E"
    assert format_summand(Summand(0, Interval(2, 3)), 5) == "M[2,3]"
    assert format_summand(Summand(-1, Interval(3, 3)), 5) == "S3[-1]"


def test_last_simple_is_named_as_simple():
    assert format_summand(Summand(0, Interval(3, 3)), 3) == "S3"
    assert format_summand(Summand(1, Interval(4, 4)), 4) == "S4[1]"
    assert parse_summand("I4", 4) == parse_summand("S4", 4)


@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(1, n), st.integers(-3, 3))).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.integers(t[1], t[0]).map(lambda b: Interval(t[1], b)), st.just(t[2]))))
def test_canonical_name_parses_back(case):
    n, iv, shift = case
    s = Summand(shift, iv)
    assert parse_summand(format_summand(s, n), n) == s


def test_parse_list_keeps_order():
    assert parse_list("S2,P1", 3) == [Summand(0, Interval(2, 2)), Summand(0, Interval(1, 1))]
