"""Arithmetic of circle rotations: gap spectra, special intervals,
rational-relation scans and return-time statistics.

Everything that feeds a pass/fail decision is computed on exact rational
stand-ins (see cf.as_fraction); floats only appear in reported summaries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .cf import (
    as_fraction,
    cf_expand,
    frac_multiple,
    nearest_int_dist_exact,
)
from .errors import IndexOutOfRange, SearchBudgetExceeded

# --------------------------------------------------------------- directions


@dataclass(frozen=True)
class Direction:
    """A flow direction (alpha, 1, beta) with both slopes in (0, 1).

    ``alpha`` and ``beta`` may be ContinuedFraction instances, Fractions
    or floats; exact stand-ins are derived once and cached.
    """

    alpha: object
    beta: object

    def __post_init__(self):
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            fv = float(as_fraction(v))
            if not 0.0 < fv < 1.0:
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {fv}")

    @cached_property
    def alpha_fraction(self) -> Fraction:
        return as_fraction(self.alpha)

    @cached_property
    def beta_fraction(self) -> Fraction:
        return as_fraction(self.beta)

    @property
    def alpha_float(self) -> float:
        return float(self.alpha_fraction)

    @property
    def beta_float(self) -> float:
        return float(self.beta_fraction)


# ---------------------------------------------------------------- intervals


@dataclass(frozen=True)
class IntervalOnTorus:
    """An open subinterval (lo, hi) of the unit circle, not wrapping 0."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (0 <= self.lo < self.hi <= 1):
            raise ValueError(f"bad interval ({self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x, closed: bool = False) -> bool:
        xf = as_fraction(x)
        xf -= xf.numerator // xf.denominator
        if closed:
            return self.lo <= xf <= self.hi
        return self.lo < xf < self.hi

    def as_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)


# ------------------------------------------------------------- gap spectrum


def _q_pair(alpha, level: int) -> tuple[int, int]:
    """(q_level, q_{level+1}) for alpha's expansion."""
    if level < 1:
        raise IndexOutOfRange(f"level {level} < 1")
    expansion = cf_expand(alpha, level + 1)
    convs = expansion.convergents(level + 1)
    return convs[level - 1].q, convs[level].q


def gap_spectrum_exact(alpha, level: int) -> list[tuple[Fraction, int]]:
    """Gap lengths, with multiplicities, of {0, a, 2a, ...} at depth ``level``.

    The partition of the circle by the points {l*alpha}, l = 0..q_{level+1}-1,
    has exactly two gap lengths.  They are returned as (length, count) pairs,
    shorter first.
    """
    q_k, q_k1 = _q_pair(alpha, level)
    short = nearest_int_dist_exact(q_k, alpha)
    long = short + nearest_int_dist_exact(q_k1, alpha)
    spectrum = [(short, q_k1 - q_k), (long, q_k)]
    total = sum(length * count for length, count in spectrum)
    assert total == 1, f"gap lengths fail to tile the circle: {total}"
    return spectrum


def gap_spectrum(alpha, level: int) -> list[tuple[float, int]]:
    return [(float(v), c) for v, c in gap_spectrum_exact(alpha, level)]


@lru_cache(maxsize=64)
def circle_partition(alpha, level: int) -> tuple[tuple[Fraction, int], ...]:
    """The points {l*alpha}, l = 0..q_{level+1}-1, sorted around the circle.

    Each entry is (position, l).  Cached because neighbouring-cell lookups
    tend to come in bursts for a fixed (alpha, level).
    """
    _, q_k1 = _q_pair(alpha, level)
    pts = [(frac_multiple(alpha, ell), ell) for ell in range(q_k1)]
    pts.sort()
    return tuple(pts)


def special_interval(alpha, level: int, index: int, variant: str = "short") -> IntervalOnTorus:
    """A distinguished interval around the orbit point {index * alpha}.

    variant "short": the symmetric interval of half-width |q_level*alpha|/2
    (distance to nearest integer) centred at {index*alpha}.  The index is
    signed and its magnitude must be in 1..q_{level+1}-1; over any fixed
    sign these intervals are pairwise disjoint.

    variant "extended": the cell around {index*alpha} reaching halfway to
    its circle-partition neighbours, for index in 1..q_{level+1}-1.  The
    cells over that index range tile the circle up to the two half-gaps
    flanking the excluded point 0.
    """
    q_k, q_k1 = _q_pair(alpha, level)
    if variant == "short":
        if index == 0 or abs(index) >= q_k1:
            raise IndexOutOfRange(
                f"short-interval index {index} outside +-(1..{q_k1 - 1})"
            )
        half = nearest_int_dist_exact(q_k, alpha) / 2
        centre = frac_multiple(alpha, index)
        return IntervalOnTorus(centre - half, centre + half)
    if variant == "extended":
        if not 1 <= index < q_k1:
            raise IndexOutOfRange(
                f"extended-interval index {index} outside 1..{q_k1 - 1}"
            )
        pts = circle_partition(alpha, level)
        rank = next(r for r, (_, ell) in enumerate(pts) if ell == index)
        pos = pts[rank][0]
        left = pts[rank - 1][0] if rank > 0 else pts[-1][0] - 1
        right = pts[rank + 1][0] if rank + 1 < len(pts) else pts[0][0] + 1
        return IntervalOnTorus((left + pos) / 2, (pos + right) / 2)
    raise ValueError(f"unknown variant {variant!r}")


# ------------------------------------------------------- rational relations


def kronecker_check(alpha, beta, bound: int):
    """Search for a small integer relation m*alpha + n*beta + k = 0.

    Scans pairs (m, n) with max(|m|, |n|) growing from 1 to ``bound`` and
    returns the first relation found, sign-normalised so the leading
    nonzero of (m, n) is positive, or None.  Binary floats are taken at
    face value, so 0.5 admits (2, 0, -1) but 0.7 is not exactly 7/10.
    """
    af, bf = as_fraction(alpha), as_fraction(beta)
    tol = Fraction(1, 1 << 80)
    for radius in range(1, bound + 1):
        for m in range(-radius, radius + 1):
            for n in range(-radius, radius + 1):
                if max(abs(m), abs(n)) != radius:
                    continue
                value = m * af + n * bf
                k = round(-value)
                if abs(value + k) < tol:
                    if m < 0 or (m == 0 and n < 0):
                        m, n, k = -m, -n, -k
                    return (m, n, k)
    return None


# ------------------------------------------------------------- return times


@dataclass(frozen=True)
class ReturnTimeReport:
    """Indices m with {m*alpha} within eps of 0, and the spread of the
    companion points {m*beta}."""

    times: tuple[int, ...]
    beta_points: tuple[float, ...]
    star_discrepancy: float


def star_discrepancy_1d(points) -> float:
    """Star discrepancy of a finite point set in [0, 1)."""
    xs = sorted(float(p) for p in points)
    n = len(xs)
    if n == 0:
        raise ValueError("empty point set")
    worst = 0.0
    for i, x in enumerate(xs, start=1):
        worst = max(worst, x - (i - 1) / n, i / n - x)
    return worst


def shift_return_times(alpha, beta, eps1: float, count: int = 20,
                       budget: int = 10**7) -> ReturnTimeReport:
    """First ``count`` indices m >= 1 with |m*alpha| (mod 1) closer than
    ``eps1`` to an integer, plus the star discrepancy of {m*beta} over them.

    Raises SearchBudgetExceeded once ``budget`` candidate indices have been
    scanned without completing the list.
    """
    if eps1 <= 0:
        raise ValueError("eps1 must be positive")
    af = as_fraction(alpha)
    eps = Fraction(eps1)
    p_num, q_den = af.numerator % af.denominator, af.denominator
    # Track m*p mod q incrementally; compare min(r, q-r)/q < eps in integers.
    rhs = eps.numerator * q_den
    times: list[int] = []
    residue = 0
    m = 0
    while len(times) < count:
        m += 1
        if m > budget:
            raise SearchBudgetExceeded(
                f"found {len(times)}/{count} return times within budget {budget}"
            )
        residue += p_num
        if residue >= q_den:
            residue -= q_den
        if min(residue, q_den - residue) * eps.denominator < rhs:
            times.append(m)
    beta_points = tuple(float(frac_multiple(beta, t)) for t in times)
    return ReturnTimeReport(
        times=tuple(times),
        beta_points=beta_points,
        star_discrepancy=star_discrepancy_1d(beta_points),
    )
