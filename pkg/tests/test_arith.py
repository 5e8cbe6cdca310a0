from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from polycubeflow.arith import (
    Direction,
    IntervalOnTorus,
    _q_pair,
    circle_partition,
    gap_spectrum_exact,
    special_interval,
)
from polycubeflow.cf import (
    E_MINUS_2,
    GOLDEN,
    PI_MINUS_3,
    SQRT2_MINUS_1,
    SQRT3_MINUS_1,
    as_fraction,
    frac_multiple,
)
from polycubeflow.circle import IntervalUnion
from polycubeflow.errors import IndexOutOfRange, PrecisionExhausted

# levels are capped per base so no family outgrows a few hundred members
# (one huge partial quotient makes the next denominator explode)
BASE_LEVELS = [
    (GOLDEN, 6), (SQRT2_MINUS_1, 5), (SQRT3_MINUS_1, 5),
    (E_MINUS_2, 4), (PI_MINUS_3, 2),
]
TESTED_PAIRS = [(alpha, level)
                for alpha, top in BASE_LEVELS
                for level in range(1, top + 1)]


def test_direction_validates_open_interval():
    with pytest.raises(ValueError):
        Direction(0.0, 0.5)
    with pytest.raises(ValueError):
        Direction(0.5, 1.0)
    d = Direction(GOLDEN, SQRT2_MINUS_1)
    assert 0 < d.alpha_float < 1
    assert d.alpha_fraction == as_fraction(GOLDEN)


def test_q_pair_frozen_values():
    assert _q_pair(GOLDEN, 1) == (1, 2)
    assert _q_pair(GOLDEN, 2) == (2, 3)
    assert _q_pair(GOLDEN, 8) == (34, 55)
    assert _q_pair(SQRT2_MINUS_1, 3) == (12, 29)
    assert _q_pair(SQRT2_MINUS_1, 6) == (169, 408)
    with pytest.raises(IndexOutOfRange):
        _q_pair(GOLDEN, 0)


def sort_oracle(alpha, level):
    """Gap multiset of {0, a, ..., (q_{k+1}-1) a} by brute-force sorting."""
    _, q_k1 = _q_pair(alpha, level)
    pts = sorted(frac_multiple(alpha, ell) for ell in range(q_k1))
    gaps = [hi - lo for lo, hi in zip(pts, pts[1:])]
    gaps.append(1 + pts[0] - pts[-1])
    return dict(Counter(gaps))


def aggregate(spectrum):
    out = Counter()
    for length, count in spectrum:
        out[length] += count
    return dict(out)


@pytest.mark.parametrize("alpha,level",
                         [(a, k) for a, top in BASE_LEVELS
                          for k in range(1, min(top, 4) + 1)])
def test_gap_spectrum_matches_sort_oracle(alpha, level):
    assert aggregate(gap_spectrum_exact(alpha, level)) == sort_oracle(alpha, level)


def test_gap_spectrum_counts_come_from_denominators():
    for level in range(1, 7):
        q_k, q_k1 = _q_pair(GOLDEN, level)
        spectrum = gap_spectrum_exact(GOLDEN, level)
        assert [count for _, count in spectrum] == [q_k1 - q_k, q_k]


def test_gap_spectrum_golden_level_two_values():
    (short, n_short), (long, n_long) = gap_spectrum_exact(GOLDEN, 2)
    assert (n_short, n_long) == (1, 2)
    assert abs(float(short) - 0.2360679774997897) < 1e-12
    assert abs(float(long) - 0.3819660112501051) < 1e-12


def test_circle_partition_is_sorted_and_complete():
    pts = circle_partition(GOLDEN, 4)
    assert len(pts) == 8
    assert [p for p, _ in pts] == sorted(p for p, _ in pts)
    assert sorted(ell for _, ell in pts) == list(range(8))


def test_interval_on_torus_basics():
    iv = IntervalOnTorus(Fraction(1, 4), Fraction(3, 4))
    assert iv.length == Fraction(1, 2)
    assert iv.midpoint == Fraction(1, 2)
    assert iv.contains(Fraction(1, 2))
    assert not iv.contains(Fraction(1, 4))
    assert iv.contains(Fraction(1, 4), closed=True)


# ----------------------------------------------------- special intervals


def short_family(alpha, level):
    _, q_k1 = _q_pair(alpha, level)
    return [special_interval(alpha, level, i) for i in range(1, q_k1)]


@pytest.mark.parametrize("alpha,level", TESTED_PAIRS)
def test_short_intervals_disjoint_centred_long(alpha, level):
    family = short_family(alpha, level)
    # (i) pairwise disjoint: the union loses no mass when merged mod 1
    union = IntervalUnion.from_pairs([(iv.lo % 1, iv.hi % 1) for iv in family])
    total = sum(iv.length for iv in family)
    assert union.measure == total
    # (ii) each interval is centred on its orbit point
    for i, iv in enumerate(family, start=1):
        assert iv.midpoint % 1 == frac_multiple(alpha, i)
        assert iv.lo < iv.midpoint < iv.hi
    # (iii) together they cover more than a third of the circle
    assert total > Fraction(1, 3)


def test_short_interval_signed_indices_mirror():
    plus = special_interval(GOLDEN, 3, 2)
    minus = special_interval(GOLDEN, 3, -2)
    assert plus.length == minus.length
    assert (plus.midpoint + minus.midpoint) % 1 == 0


def test_short_interval_index_range_errors():
    _, q_k1 = _q_pair(GOLDEN, 3)
    for bad in (0, q_k1, -q_k1):
        with pytest.raises(IndexOutOfRange):
            special_interval(GOLDEN, 3, bad)


def test_extended_intervals_tile_all_but_gap_at_zero():
    _, q_k1 = _q_pair(GOLDEN, 4)
    cells = [special_interval(GOLDEN, 4, i, variant="extended")
             for i in range(1, q_k1)]
    total = sum(c.length for c in cells)
    short, long = sorted(dict(gap_spectrum_exact(GOLDEN, 4)))
    # missing mass is half of each gap flanking the excluded point 0
    assert 1 - total in {short, long, (short + long) / 2}


def test_extended_interval_index_validation():
    with pytest.raises(IndexOutOfRange):
        special_interval(GOLDEN, 4, -1, variant="extended")
    with pytest.raises(ValueError):
        special_interval(GOLDEN, 4, 1, variant="medium")


@settings(max_examples=40)
@given(st.fractions(min_value="1/30", max_value="29/30", max_denominator=500),
       st.integers(min_value=1, max_value=3))
def test_gap_spectrum_tiles_circle_for_rationals(alpha, level):
    try:
        spectrum = gap_spectrum_exact(alpha, level)
    except PrecisionExhausted:
        assume(False)
    assert sum(length * count for length, count in spectrum) == 1
    assert aggregate(spectrum) == sort_oracle(alpha, level)
