from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ineqcert.exact_numeric import (
    DEFAULT_SCHEDULE,
    Const,
    DomainError,
    Pow,
    RigorInterval,
    TriOrder,
    compare_monomials,
    coprime_basis,
    exact_pow,
    format_rational,
    interval_pow,
    monomial_value,
    parse_rational,
    rat_pow_int,
    refine_until_ordered,
    rigorous_compare,
)
from oracles import monomial_sign_by_clearing
from strategies import rationals


# --- rationals -------------------------------------------------------------

@pytest.mark.parametrize("x, e, want", [(F(2, 3), 2, F(4, 9)), (F(5), 0, F(1)), (F(3, 2), -2, F(4, 9))])
def test_rat_pow_int_examples(x, e, want):
    assert rat_pow_int(x, e) == want


def test_rat_pow_int_zero_negative():
    with pytest.raises(DomainError):
        rat_pow_int(F(0), -1)


def test_serialization():
    assert format_rational(F(-3, 7)) == "-3/7"
    assert format_rational(F(6, 3)) == "2"
    assert parse_rational("-6/14") == F(-3, 7)
    assert parse_rational("5") == 5
    with pytest.raises((TypeError, ValueError)):
        parse_rational(0.5)
    with pytest.raises((TypeError, ValueError)):
        parse_rational(True)


@given(rationals())
def test_serialization_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_exact_pow():
    assert exact_pow(F(4, 9), F(1, 2)) == F(2, 3)
    assert exact_pow(F(8), F(2, 3)) == 4
    assert exact_pow(F(2), F(1, 2)) is None


# --- intervals -------------------------------------------------------------

def test_interval_pow_perfect_square():
    for prec in DEFAULT_SCHEDULE:
        r = interval_pow(RigorInterval.from_rational(4, prec), F(1, 2))
        assert r.contains(2)
        assert r.width() <= F(2, 2 ** prec) * 2


def test_interval_pow_sqrt2_against_mpmath():
    r = interval_pow(RigorInterval.from_rational(2, 64), F(1, 2))
    assert r.lo_q ** 2 <= 2 <= r.hi_q ** 2
    with mpmath.workdps(60):
        s = mpmath.sqrt(2)
        assert mpmath.mpf(r.lo_q.numerator) / r.lo_q.denominator <= s
        assert s <= mpmath.mpf(r.hi_q.numerator) / r.hi_q.denominator
    assert r.hi_q < F(3, 2)


def test_interval_pow_zero_base():
    r = interval_pow(RigorInterval.from_rational(0, 64), 3)
    assert r.lo_q == 0 and r.hi_q == 0


def test_interval_pow_domain():
    with pytest.raises(DomainError):
        interval_pow(RigorInterval.from_bounds(-1, 1, 64), F(1, 2))


def test_division_by_interval_with_zero():
    with pytest.raises(DomainError):
        RigorInterval.from_rational(1, 64) / RigorInterval.from_bounds(-1, 1, 64)


@pytest.mark.parametrize("a, b, want", [
    ((1, 1), (2, 2), TriOrder.CERTAINLY_LE),
    ((0, 3), (2, 5), TriOrder.OVERLAP),
    ((5, 6), (1, 2), TriOrder.CERTAINLY_GT),
])
def test_rigorous_compare_examples(a, b, want):
    assert rigorous_compare(RigorInterval.from_bounds(*a, 64), RigorInterval.from_bounds(*b, 64)) is want


def test_refine_sqrt125_vs_11():
    order, _ = refine_until_ordered(Pow(Const(F(125)), F(1, 2)), Const(F(11)), [64])
    assert order is TriOrder.CERTAINLY_GT


def test_refine_equal_constants():
    order, gap = refine_until_ordered(Const(F(2)), Const(F(2)), [64, 128])
    assert order is TriOrder.OVERLAP
    assert gap <= F(1, 2 ** 60)


def test_refine_radical_identity():
    half = F(1, 2)
    lhs = Pow(Const(F(2)), half) + Pow(Const(F(3)), half)
    rhs = Pow(Const(F(5)) + 2 * Pow(Const(F(6)), half), half)
    order, gap = refine_until_ordered(lhs, rhs, DEFAULT_SCHEDULE)
    assert order is TriOrder.OVERLAP
    assert gap < F(1, 2 ** 1000)


def test_refine_schedule_validation():
    with pytest.raises(ValueError):
        refine_until_ordered(Const(F(1)), Const(F(2)), [])
    with pytest.raises(ValueError):
        refine_until_ordered(Const(F(1)), Const(F(2)), [128, 64])


# --- properties ------------------------------------------------------------

precisions = st.sampled_from([8, 24, 53, 64, 128, 256])


@given(rationals(), rationals(), precisions)
def test_outward_soundness_field_ops(x, y, prec):
    a, b = RigorInterval.from_rational(x, prec), RigorInterval.from_rational(y, prec)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    if not b.contains(0):
        assert (a / b).contains(x / y)


@given(rationals(), st.integers(-6, 6), precisions)
def test_outward_soundness_integer_power(x, e, prec):
    assume(not (x == 0 and e < 0))
    r = interval_pow(RigorInterval.from_rational(x, prec), e)
    assert r.contains(x ** e)


@given(rationals(nonneg=True), st.integers(1, 9), st.integers(2, 7), precisions)
def test_outward_soundness_fractional_power(x, a, b, prec):
    # t = x^(a/b) is checked without roots: lo^b <= x^a <= hi^b
    r = interval_pow(RigorInterval.from_rational(x, prec), F(a, b))
    assert r.lo_q >= 0
    assert r.lo_q ** b <= x ** a <= r.hi_q ** b


@given(rationals(nonneg=True), st.integers(1, 9), st.integers(2, 7))
def test_refinement_never_widens(x, a, b):
    widths = [interval_pow(RigorInterval.from_rational(x, p), F(a, b)).width() for p in DEFAULT_SCHEDULE]
    assert all(w2 <= w1 for w1, w2 in zip(widths, widths[1:]))


@given(rationals(), rationals(), precisions)
def test_comparison_soundness(x, y, prec):
    a, b = min(x, y), max(x, y)
    order = rigorous_compare(RigorInterval.from_rational(a, prec), RigorInterval.from_rational(b, prec))
    assert order is not TriOrder.CERTAINLY_GT


# --- exact monomials -------------------------------------------------------

def test_coprime_basis():
    assert coprime_basis([12, 18]) == [2, 3]
    assert coprime_basis([6, 10, 15]) == [2, 3, 5]
    assert coprime_basis([1, 0, 7]) == [7]


def test_compare_monomials_examples():
    h = F(1, 2)
    assert compare_monomials([(F(2), h), (F(3), h)], [(F(6), h)]) == 0
    assert compare_monomials([(F(2), h)], [(F(3), F(1, 3))]) == -1
    assert compare_monomials([(F(125), h)], [(F(11), F(1))]) == 1
    assert compare_monomials([(F(0), F(1))], [(F(0), F(2))]) == 0


small_pos = st.builds(F, st.integers(1, 60), st.integers(1, 12))
monomials = st.lists(st.tuples(small_pos, st.builds(F, st.integers(-4, 4), st.integers(1, 4))),
                     min_size=1, max_size=3)


@given(monomials, monomials, st.sampled_from([None, 64]))
def test_compare_monomials_matches_clearing(lhs, rhs, prefilter):
    assert compare_monomials(lhs, rhs, prefilter_bits=prefilter) == monomial_sign_by_clearing(lhs, rhs)


def test_monomial_value():
    h = F(1, 2)
    assert monomial_value([(F(2), h), (F(2), h)]) == 2
    assert monomial_value([(F(2), h), (F(3), h)]) is None
    assert monomial_value([(F(8), F(2, 3)), (F(9, 4), -h)]) == F(8, 3)
    assert monomial_value([(F(0), F(3))]) == 0
    with pytest.raises(DomainError):
        monomial_value([(F(0), -h)])


@given(monomials)
def test_monomial_value_is_exact(terms):
    v = monomial_value(terms)
    if v is not None:
        assert monomial_sign_by_clearing(terms, [(v, F(1))]) == 0
