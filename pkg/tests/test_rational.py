from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymlin import INF, InputError, parse_rational
from asymlin._rational import fmt, primitive, rank


@pytest.mark.parametrize(
    "token, value",
    [("3", 3), ("-1/2", Fraction(-1, 2)), (" 4/6 ", Fraction(2, 3)), (7, 7)],
)
def test_parse(token, value):
    assert parse_rational(token) == value


@pytest.mark.parametrize("token", ["", "1/0", "0.25", "abc", "1e400x", "nan"])
def test_parse_rejects(token):
    with pytest.raises(InputError):
        parse_rational(token)


@given(st.fractions())
def test_fmt_round_trip(x):
    assert parse_rational(fmt(x)) == x


def test_fmt_inf():
    assert fmt(INF) == "inf"


def test_rank_and_primitive():
    assert rank([(1, 2), (2, 4)]) == 1
    assert rank([(1, 0), (0, 1), (1, 1)]) == 2
    assert primitive((Fraction(2, 3), Fraction(4, 3))) == (1, 2)
