from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shulga.errors import DigitUnavailable, PrecisionExhausted
from shulga.rational import (
    CFExpansion,
    ConvergentTable,
    DigitStream,
    QuadraticIrrational,
    cf_expand,
    cf_value,
    compare,
    convergents,
    format_real,
    leading_digits,
    parse_real,
    partial_quotient,
    qi_expand,
    sub_rational,
)

fractions01 = st.builds(lambda q, k: F(k % (q + 1), q), st.integers(1, 10**12), st.integers(0, 10**13))


# --- expansions ----------------------------------------------------------

@pytest.mark.parametrize("r, expected", [
    (F(107, 247), "[0;2,3,4,8]"),
    (F(1, 2), "[0;2]"),
    (F(0), "[0;]"),
    (F(29, 871), "[0;30,29]"),
    (F(1), "[0;1]"),
    (F(-7, 3), "[-3;1,2]"),
])
def test_cf_expand_examples(r, expected):
    assert str(cf_expand(r)) == expected


@pytest.mark.parametrize("digits, value", [
    ((2, 2, 3, 5), F(37, 90)),
    ((), F(0)),
    ((2, 3, 4, 8), F(107, 247)),
])
def test_cf_value_examples(digits, value):
    assert cf_value(digits) == value


def test_cf_value_truncation_and_range():
    e = CFExpansion(0, (2, 3, 4, 8))
    assert cf_value(e, 2) == F(3, 7)
    with pytest.raises(DigitUnavailable):
        cf_value(e, 5)


def test_expansion_parse_round_trip():
    e = CFExpansion.parse("[1; 2, 2, 3]")
    assert e == CFExpansion(1, (2, 2, 3)) and str(e) == "[1;2,2,3]"
    with pytest.raises(ValueError):
        CFExpansion.parse("1;2")
    with pytest.raises(ValueError):
        CFExpansion(0, (2, 0))


@given(fractions01)
def test_round_trip_and_canonical(r):
    e = cf_expand(r)
    assert e.is_canonical()
    assert cf_value(e) == r


@given(st.fractions(min_value=-50, max_value=50))
def test_round_trip_any_sign(r):
    assert cf_value(cf_expand(r)) == r


def test_noncanonical_detected():
    assert not CFExpansion(0, (2, 1)).is_canonical()
    assert cf_value(CFExpansion(0, (2, 1))) == cf_value((3,))


# --- convergents ---------------------------------------------------------

def test_convergent_examples():
    t = convergents((2, 3, 4, 8))
    assert [t.q_(n) for n in range(1, 5)] == [2, 7, 30, 247]
    assert t.q_(2) * t.p_(1) - t.p_(2) * t.q_(1) == 1
    assert F(t.q_(4), t.q_(3)) == cf_value(CFExpansion(8, (4, 3, 2)))
    assert t.rows()[0] == (0, 0, 1)
    with pytest.raises(DigitUnavailable):
        convergents((2, 3), 3)


@given(st.integers(0, 5), st.lists(st.integers(1, 10**6), min_size=1, max_size=25))
def test_determinant_and_ratio_identities(a0, digits):
    t = ConvergentTable.build(a0, digits)
    for n in range(1, len(digits) + 1):
        assert t.q_(n) * t.p_(n - 1) - t.p_(n) * t.q_(n - 1) == (-1) ** n
        assert F(t.q_(n), t.q_(n - 1)) == cf_value(CFExpansion(digits[n - 1], tuple(reversed(digits[:n - 1]))))
        assert gcd(t.p_(n), t.q_(n)) == 1


def test_extend_matches_build():
    t = ConvergentTable.build(0, ())
    for d in (2, 3, 4, 8):
        t = t.extend(d)
    assert t == ConvergentTable.build(0, (2, 3, 4, 8))
    assert t.value() == F(107, 247)


# --- partial quotients ---------------------------------------------------

def test_partial_quotient_examples():
    assert partial_quotient(F(107, 247), 4) == 8
    assert partial_quotient(F(1, 2), 2) is None
    assert partial_quotient(QuadraticIrrational.of(-1, 2, 1), 5) == 2
    assert partial_quotient(F(1), 1) == 1
    with pytest.raises(ValueError):
        partial_quotient(F(1, 2), 0)


@given(fractions01)
def test_partial_quotient_matches_gauss_map(r):
    x, k = r, 1
    while x:
        x = 1 / x
        a = x.numerator // x.denominator
        x -= a
        if r != 1:
            assert partial_quotient(r, k) == a
        k += 1
    assert partial_quotient(r, k) is None or r == 1


def test_leading_digits_variants():
    assert leading_digits(F(107, 247), 6) == [2, 3, 4, 8, None, None]
    assert leading_digits(QuadraticIrrational.of(0, 7, 1) - 2, 5) == [1, 1, 1, 4, 1]


# --- quadratic irrationals -----------------------------------------------

@pytest.mark.parametrize("P, D, Q, a0, head, period", [
    (0, 2, 1, 1, (2, 2, 2, 2), (2,)),
    (1, 5, 2, 1, (1, 1, 1, 1), (1,)),
    (0, 7, 1, 2, (1, 1, 1, 4, 1, 1, 1, 4), (1, 1, 1, 4)),
])
def test_qi_expand_examples(P, D, Q, a0, head, period):
    got_a0, digits, got_period = qi_expand(QuadraticIrrational.of(P, D, Q), len(head))
    assert (got_a0, digits, got_period) == (a0, head, period)


def test_qi_validation_and_normalization():
    with pytest.raises(ValueError):
        QuadraticIrrational(0, 4, 1)
    with pytest.raises(ValueError):
        QuadraticIrrational(1, 5, 3)
    x = QuadraticIrrational.of(1, 5, 3)
    assert (x.D - x.P ** 2) % x.Q == 0
    assert abs(float(x) - (1 + 5 ** 0.5) / 3) < 1e-12


def test_qi_sub_rational_example():
    y = sub_rational(QuadraticIrrational.of(0, 2, 1), F(1, 2))
    assert isinstance(y, QuadraticIrrational)
    assert (y.D - y.P ** 2) % y.Q == 0
    # same number as (-1 + sqrt 8)/2
    assert y.P * 2 == -1 * y.Q and y.D * 4 == 8 * y.Q ** 2
    assert sub_rational(QuadraticIrrational.of(0, 2, 1), 0) == QuadraticIrrational.of(0, 2, 1)


def test_qi_compare_exact():
    r2 = QuadraticIrrational.of(0, 2, 1)
    assert compare(r2, F(141421356, 10**8)) == 1
    assert compare(r2, F(141421357, 10**8)) == -1
    neg = QuadraticIrrational.of(1, 5, -2)  # (-1 - sqrt5)/2
    assert compare(neg, -1) == -1 and neg.floor() == -2


@given(st.integers(-30, 30), st.integers(2, 500), st.integers(1, 30).flatmap(lambda q: st.sampled_from([q, -q])))
def test_qi_floor_matches_float(P, D, Q):
    from math import isqrt
    if isqrt(D) ** 2 == D:
        return
    x = QuadraticIrrational.of(P, D, Q)
    a = x.floor()
    assert compare(x, a) >= 0 and compare(x, a + 1) < 0


# --- rational arithmetic and streams -------------------------------------

def test_sub_rational_example():
    assert sub_rational(F(18769, 22230), F(7, 17)) == F(163463, 377910)
    assert sub_rational(F(3, 7), 0) == F(3, 7)


def test_stream_exact_and_enclosure():
    s = DigitStream(0, (2, 3, 4, 8))
    assert s.exact_value() == F(107, 247)
    assert partial_quotient(s, 3) == 4
    sqrt2 = DigitStream(1, lambda i: 2, budget=40)
    lo, hi = sqrt2.enclosure(10)
    assert lo < F(141421356237, 10**11) < hi
    assert partial_quotient(sub_rational(sqrt2, 1), 7) == 2


def test_stream_precision_exhausted():
    # the golden ratio conjugate: six source digits cannot pin digit 30
    s = DigitStream(0, lambda i: 1, budget=6)
    with pytest.raises(PrecisionExhausted):
        partial_quotient(sub_rational(s, F(1, 2)), 30)
    assert str(sub_rational(s, F(1, 2))).endswith("-1/2")


@pytest.mark.parametrize("text, value", [
    ("28244/141973", F(28244, 141973)),
    ("3", F(3)),
    ("[0;2,3,4,8]", F(107, 247)),
    ("sqrt(2)", QuadraticIrrational.of(0, 2, 1)),
    ("(1+sqrt(5))/2", QuadraticIrrational.of(1, 5, 2)),
    ("(1-sqrt(5))/2", QuadraticIrrational.of(-1, 5, -2)),
])
def test_parse_real(text, value):
    assert parse_real(text) == value


def test_parse_rejects_garbage():
    for bad in ("abc", "sqrt(4)", "1/", "[0;a]"):
        with pytest.raises(ValueError):
            parse_real(bad)


def test_format_real():
    assert format_real(F(3, 4)) == "3/4"
    assert format_real(F(5)) == "5"
    assert format_real(QuadraticIrrational.of(0, 2, 1)) == "(0+sqrt(2))/1"
