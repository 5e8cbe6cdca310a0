from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polycubeflow.cf import (
    GOLDEN,
    NAMED_VALUES,
    SQRT2_MINUS_1,
    SQRT3_MINUS_1,
    ContinuedFraction,
    as_fraction,
    cf_expand,
    frac_multiple,
    nearest_int_dist_exact,
)
from polycubeflow.errors import IndexOutOfRange, PrecisionExhausted


def test_golden_denominators_are_fibonacci():
    assert GOLDEN.denominators(9) == [1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_sqrt2_denominators_are_pell():
    assert SQRT2_MINUS_1.denominators(9) == [2, 5, 12, 29, 70, 169, 408, 985, 2378]


def test_sqrt3_periodic_tail_alternates():
    assert SQRT3_MINUS_1.head(6) == [1, 2, 1, 2, 1, 2]


def test_convergent_zero_is_floor():
    c = GOLDEN.convergent(0)
    assert (c.p, c.q) == (0, 1)
    with pytest.raises(IndexOutOfRange):
        GOLDEN.convergent(-1)


def test_quotient_index_validation():
    with pytest.raises(IndexOutOfRange):
        GOLDEN.quotient(0)
    finite = ContinuedFraction(0, (2, 3), exact_rational=True)
    with pytest.raises(PrecisionExhausted):
        finite.quotient(3)


def test_constructor_rejects_bad_quotients():
    with pytest.raises(ValueError):
        ContinuedFraction(-1, (1,))
    with pytest.raises(ValueError):
        ContinuedFraction(0, (1, 0))
    with pytest.raises(ValueError):
        ContinuedFraction(0, (1,), (2,), exact_rational=True)


def test_expand_fraction_terminates_exactly():
    cf = cf_expand(Fraction(5, 13), 10)
    assert cf.exact_rational
    last = cf.convergents(len(cf.quotients))[-1]
    assert Fraction(last.p, last.q) == Fraction(5, 13)


def test_expand_float_stops_before_noise():
    cf = cf_expand(0.6180339887498949, 12)
    assert cf.head(8) == [1] * 8
    with pytest.raises(PrecisionExhausted):
        cf_expand(0.6180339887498949, 40)


def test_expand_rejects_nonpositive():
    with pytest.raises(ValueError):
        cf_expand(0.0, 3)
    with pytest.raises(ValueError):
        cf_expand(GOLDEN, 0)


def test_as_fraction_passthrough_and_depth():
    assert as_fraction(Fraction(2, 7)) == Fraction(2, 7)
    deep = as_fraction(GOLDEN)
    assert deep.denominator >= 1 << 160
    assert abs(float(deep) - 0.6180339887498949) < 1e-15


def test_named_values_cover_cli_inputs():
    assert set(NAMED_VALUES) == {"golden", "sqrt2", "sqrt3", "e", "pi"}
    for v in NAMED_VALUES.values():
        assert 0 < float(v) < 1


def test_nearest_int_dist_golden():
    # |q alpha - p| for Fibonacci q drops like powers of alpha
    d1 = nearest_int_dist_exact(1, GOLDEN)
    d2 = nearest_int_dist_exact(2, GOLDEN)
    assert abs(float(d1) - 0.3819660112501051) < 1e-12
    assert abs(float(d2) - 0.2360679774997897) < 1e-12
    assert d2 < d1


@given(st.fractions(min_value="1/1000", max_value="999/1000", max_denominator=1000))
def test_expand_fraction_round_trip(x):
    cf = cf_expand(x, 60)
    assert cf.exact_rational
    depth = len(cf.quotients)
    last = cf.convergents(depth)[-1]
    assert Fraction(last.p, last.q) == x
    # canonical form: the final quotient of a terminating expansion is >= 2
    if depth > 1:
        assert cf.quotients[-1] >= 2


@given(st.fractions(min_value="1/1000", max_value="999/1000", max_denominator=1000),
       st.integers(min_value=-50, max_value=50))
def test_frac_multiple_matches_mod_one(x, ell):
    assert frac_multiple(x, ell) == (ell * x) % 1
