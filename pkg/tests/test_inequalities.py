from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ineqcert.exact_numeric import RigorInterval, monomial_value
from ineqcert.generate import enumerate_integer_conjugate_tuples
from ineqcert.inequalities import (
    CheckConfig,
    ExponentVector,
    InvalidInstance,
    Mode,
    NonNegMatrix,
    Outcome,
    SortedMatrix,
    UnsortedColumn,
    UnsupportedMode,
    Verdict,
    check_application,
    check_cbs,
    check_chebyshev,
    check_cube_square_bound,
    check_holder,
    check_minkowski,
    check_square_cube_bound,
    holder_cleared_slack,
    holder_sides,
    is_holder_equality_case,
    mixed_term_bound,
    slack_ratio,
)
from oracles import chebyshev_sign, holder_lcm_sign, minkowski_difference
from strategies import nonneg_columns, rationals

EXACT = CheckConfig()
INTERVAL = CheckConfig(mode=Mode.INTERVAL_ONLY)
HOLDS, EQ, VIOL, UND = Outcome.HOLDS, Outcome.EQUALITY, Outcome.VIOLATED, Outcome.UNDETERMINED


def cols(*c):
    return NonNegMatrix.from_columns(c)


def P(*p):
    return ExponentVector(tuple(p))


# --- instance types --------------------------------------------------------

def test_matrix_validation():
    with pytest.raises(InvalidInstance):
        NonNegMatrix(((1, -1),))
    with pytest.raises(InvalidInstance):
        NonNegMatrix(((1, 2), (3,)))
    with pytest.raises(InvalidInstance):
        NonNegMatrix(())


def test_exponent_validation():
    with pytest.raises(InvalidInstance):
        P(1, 2)
    assert P(2, 3, 6).conjugacy_defect == 0
    assert P(2, 2, 2).conjugacy_defect == F(1, 2)


def test_sorted_matrix_reports_offending_cell():
    with pytest.raises(UnsortedColumn) as exc:
        SortedMatrix.from_columns([(3, 2, 1), (1, 2, 1)])
    assert (exc.value.i, exc.value.k) == (0, 1)


def test_verdict_json_round_trip():
    v = Verdict(UND, F(1, 3), {"why": "test"})
    assert Verdict.from_json(v.to_json()) == v


# --- Hölder ----------------------------------------------------------------

def test_holder_sides_examples():
    lhs, rhs = holder_sides(cols((1, 1), (1, 1)), P(2, 2))
    assert lhs.exact() == 2
    assert monomial_value(rhs.monomial()) == 2
    lhs, rhs = holder_sides(cols((1, 2), (3, 4)), P(2, 2))
    assert lhs.exact() == 11
    assert rhs.enclose(128).lo_q ** 2 <= 125 <= rhs.enclose(128).hi_q ** 2
    lhs, rhs = holder_sides(cols((1, 2), (1, 1), (1, 1)), P(2, 3, 6))
    assert lhs.exact() == 3
    enc = rhs.enclose(128)
    assert enc.lo_q ** 2 <= 10 <= enc.hi_q ** 2


def test_holder_preconditions():
    with pytest.raises(InvalidInstance):
        check_holder(cols((1, 2), (3, 4)), P(2, 3))
    with pytest.raises(InvalidInstance):
        check_holder(cols((1, 2), (3, 4)), P(2, 3, 6))
    with pytest.raises(InvalidInstance):
        check_holder(cols((1, 2)), ExponentVector((F(2),)))


def test_check_holder_examples():
    assert check_holder(cols((1, 1), (1, 1)), P(2, 2), EXACT).outcome is EQ
    assert check_holder(cols((1, 2), (3, 4)), P(2, 2), EXACT).outcome is HOLDS
    assert check_holder(cols((1, 2), (3, 4)), P(2, 2), INTERVAL).outcome is HOLDS
    assert check_holder(cols((1, 2), (1, 1), (1, 1)), P(2, 3, 6), EXACT).outcome is HOLDS


def test_holder_equality_in_interval_mode_is_undetermined():
    # sqrt of a non-square sum: the equality cannot be separated by enclosures
    v = check_holder(cols((1, 1), (1, 1)), P(2, 2), INTERVAL)
    assert v.outcome is UND
    w = check_holder(cols((1, 2), (1, 2)), P(2, 2), INTERVAL)
    assert w.outcome is UND and w.gap_bound is not None


def test_holder_zero_instances():
    assert check_holder(cols((0, 0), (0, 0)), P(2, 2)).outcome is EQ
    assert check_holder(cols((0, 0), (3, 5)), P(2, 2)).outcome is EQ


def test_holder_rational_exponents():
    v = check_holder(cols((1, 2), (3, 1), (2, 2)), P(F(7, 2), F(7, 3), F(7, 2)))
    assert v.outcome is HOLDS


@given(nonneg_columns(m_max=4), st.data())
def test_holder_matches_lcm_oracle(columns, data):
    p = data.draw(st.sampled_from(enumerate_integer_conjugate_tuples(len(columns))))
    v = check_holder(NonNegMatrix.from_columns(columns), ExponentVector(p), EXACT)
    sign = holder_lcm_sign(columns, p)
    assert sign <= 0
    assert v.outcome is (EQ if sign == 0 else HOLDS)


@given(nonneg_columns(m_max=3, max_num=50, max_den=5), st.data())
def test_equality_predictor(columns, data):
    p = data.draw(st.sampled_from(enumerate_integer_conjugate_tuples(len(columns))))
    M, E = NonNegMatrix.from_columns(columns), ExponentVector(p)
    predicted = is_holder_equality_case(M, E)
    assert check_holder(M, E, EXACT).outcome is (EQ if predicted else HOLDS)


def test_equality_predictor_examples():
    assert is_holder_equality_case(cols((1, 1), (1, 1)), P(2, 2))
    assert not is_holder_equality_case(cols((1, 2), (1, 4)), P(2, 2))
    assert is_holder_equality_case(cols((1, 2), (1, 2)), P(2, 2))
    with pytest.raises(UnsupportedMode):
        is_holder_equality_case(cols((1, 2), (1, 2)), P(F(3, 2), 3))


@given(nonneg_columns(m_max=3), st.data())
def test_mode_agreement(columns, data):
    p = data.draw(st.sampled_from(enumerate_integer_conjugate_tuples(len(columns))))
    M, E = NonNegMatrix.from_columns(columns), ExponentVector(p)
    exact, interval = check_holder(M, E, EXACT), check_holder(M, E, INTERVAL)
    if interval.outcome is not UND:
        assert interval.outcome is exact.outcome


@given(nonneg_columns(m_max=3), st.randoms(use_true_random=False))
def test_row_permutation_invariance(columns, rnd):
    M = NonNegMatrix.from_columns(columns)
    order = list(range(M.n))
    rnd.shuffle(order)
    Mp = NonNegMatrix(tuple(M.entries[i] for i in order))
    p = enumerate_integer_conjugate_tuples(M.m)[0]
    E = ExponentVector(p)
    assert check_holder(M, E).outcome is check_holder(Mp, E).outcome
    assert check_minkowski(M, 2).outcome is check_minkowski(Mp, 2).outcome
    if M.m <= 4:
        assert check_cbs(M).outcome is check_cbs(Mp).outcome
    try:
        base = holder_cleared_slack(M, E)
    except ZeroDivisionError:
        return
    assert holder_cleared_slack(Mp, E) == base


@given(nonneg_columns(m_max=3), st.integers(0, 2), rationals(100, 20, nonneg=True))
def test_column_scaling_invariance(columns, k, lam):
    if lam == 0:
        return
    k = k % len(columns)
    M = NonNegMatrix.from_columns(columns)
    E = ExponentVector(enumerate_integer_conjugate_tuples(M.m)[-1])
    scaled = [list(c) for c in columns]
    scaled[k] = [lam * x for x in scaled[k]]
    try:
        base = holder_cleared_slack(M, E)
    except ZeroDivisionError:
        return
    assert holder_cleared_slack(NonNegMatrix.from_columns(scaled), E) == base


# --- CBS -------------------------------------------------------------------

def test_check_cbs_examples():
    assert check_cbs(cols((1, 2), (3, 4))).outcome is HOLDS
    assert check_cbs(cols((1, 2), (1, 1), (1, 1))).outcome is HOLDS
    assert check_cbs(cols((1, 2), (2, 4))).outcome is EQ
    with pytest.raises(InvalidInstance):
        check_cbs(cols((1, 2)))


@given(nonneg_columns(m_max=4, max_num=200, max_den=10))
def test_cbs_agrees_with_holder(columns):
    M = NonNegMatrix.from_columns(columns)
    m = M.m
    assert check_cbs(M).outcome is check_holder(M, ExponentVector((m,) * m)).outcome


# --- Minkowski -------------------------------------------------------------

def test_check_minkowski_examples():
    assert check_minkowski(cols((3, 0), (0, 4)), 2).outcome is HOLDS
    assert check_minkowski(cols((3, 0), (0, 4)), 1).outcome is EQ
    assert check_minkowski(cols((1, 2), (2, 4)), 2).outcome is EQ
    assert check_minkowski(cols((1, 2)), 3).outcome is EQ
    with pytest.raises(InvalidInstance):
        check_minkowski(cols((1, 2)), F(1, 2))


@given(nonneg_columns(m_min=1, m_max=4, max_num=100, max_den=10),
       st.sampled_from([F(1), F(3, 2), F(2), F(3)]))
def test_minkowski_against_high_precision(columns, p):
    v = check_minkowski(NonNegMatrix.from_columns(columns), p, INTERVAL)
    assert v.outcome is not VIOL
    diff = minkowski_difference(columns, p)
    if v.outcome is HOLDS:
        assert diff > 0
    if diff > mpmath.mpf(10) ** -40:
        assert v.outcome is HOLDS


# --- Chebyshev -------------------------------------------------------------

def test_check_chebyshev_examples():
    assert check_chebyshev(SortedMatrix.from_columns([(2, 1), (2, 1)])).outcome is HOLDS
    assert check_chebyshev(SortedMatrix.from_columns([(2, 1)] * 3)).outcome is HOLDS
    assert check_chebyshev(SortedMatrix.from_columns([(3, 3, 3), (1, 1, 1)])).outcome is EQ
    assert check_chebyshev(SortedMatrix.from_columns([(5, 1)])).outcome is EQ
    with pytest.raises(UnsortedColumn):
        check_chebyshev(cols((1, 2), (2, 1)))


sorted_columns = nonneg_columns(m_max=4, max_num=100, max_den=10).map(
    lambda cs: [sorted(c, reverse=True) for c in cs])


@given(sorted_columns)
def test_chebyshev_matches_oracle(columns):
    v = check_chebyshev(SortedMatrix.from_columns(columns))
    sign = chebyshev_sign(columns)
    assert sign >= 0
    assert v.outcome is (EQ if sign == 0 else HOLDS)


# --- application -----------------------------------------------------------

def test_check_application_examples():
    assert check_application((1, 1), (1, 1), (1, 1)).outcome is EQ
    assert check_application((1, 2), (1, 1), (1, 1)).outcome is HOLDS
    assert check_application((1, 0), (1, 0), (1, 0)).outcome is HOLDS
    with pytest.raises(InvalidInstance):
        check_application((1, -1), (1, 1), (1, 1))


pairs = st.tuples(rationals(1000, 30, nonneg=True), rationals(1000, 30, nonneg=True))


@given(pairs, pairs, pairs)
def test_application_and_helpers(a, b, c):
    assert check_application(a, b, c).outcome is not VIOL
    assert check_cube_square_bound(b).outcome is not VIOL
    assert check_square_cube_bound(a).outcome is not VIOL
    assert mixed_term_bound(a)


# --- slack -----------------------------------------------------------------

def test_slack_examples():
    assert slack_ratio("holder", (cols((1, 1), (1, 1)), P(2, 2))) == 1
    r = slack_ratio("holder", (cols((1, 2), (3, 4)), P(2, 2)))
    if isinstance(r, RigorInterval):
        assert r.lo_q ** 2 <= F(121, 125) <= r.hi_q ** 2
    else:
        assert r ** 2 == F(121, 125)
    assert holder_cleared_slack(cols((1, 2), (3, 4)), P(2, 2)) == (F(121, 125), 2)
    assert slack_ratio("chebyshev", (SortedMatrix.from_columns([(2, 1), (2, 1)]),)) == F(9, 10)


def test_slack_zero_side():
    with pytest.raises(ZeroDivisionError):
        slack_ratio("holder", (cols((0, 0), (0, 0)), P(2, 2)))


@given(sorted_columns)
def test_slack_at_most_one(columns):
    S = SortedMatrix.from_columns(columns)
    try:
        r = slack_ratio("chebyshev", (S,))
    except ZeroDivisionError:
        return
    assert (r if isinstance(r, F) else r.lo_q) <= 1
