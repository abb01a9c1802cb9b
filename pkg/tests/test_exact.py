from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from robust_search.exact import MAX_DENOMINATOR, as_fraction, format_number


@pytest.mark.parametrize("raw, expected", [
    ("0.3", Fraction(3, 10)),
    (0.3, Fraction(3, 10)),
    ("4/15", Fraction(4, 15)),
    (" 1e-3 ", Fraction(1, 1000)),
    (2, Fraction(2)),
    (Fraction(1, 7), Fraction(1, 7)),
])
def test_as_fraction_reads_exactly(raw, expected):
    assert as_fraction(raw) == expected


def test_as_fraction_rejects_junk():
    with pytest.raises(ValueError):
        as_fraction("~0.333333333333")
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(ValueError):
        as_fraction(float("nan"))
    with pytest.raises(ValueError):
        as_fraction("abc")


def test_denominator_is_bounded():
    q = as_fraction(Fraction(1, 3 * 2**40 + 1).__float__())
    assert q.denominator <= MAX_DENOMINATOR


@pytest.mark.parametrize("q, exact, text", [
    (Fraction(1, 16), True, "0.0625"),
    (Fraction(3, 5), True, "0.6"),
    (Fraction(-3, 10), True, "-0.3"),
    (Fraction(2), True, "2"),
    (Fraction(11, 15), True, "11/15"),
    (Fraction(11, 15), False, "~0.733333333333"),
    (Fraction(0), False, "0"),
])
def test_format_number(q, exact, text):
    assert format_number(q, exact) == text


@given(st.fractions(max_denominator=10**6))
def test_exact_format_round_trips(q):
    assert as_fraction(format_number(q)) == q
