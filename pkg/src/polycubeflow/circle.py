"""Exact arc arithmetic on the unit circle.

Arc unions are kept as sorted disjoint half-open intervals with Fraction
endpoints, so boolean operations, measures and translations are exact.
On top of that sit the indicator Fourier sums and the translate-separation
sweep used by the ergodic lab.
"""
from __future__ import annotations

import cmath
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cf import as_fraction
from .errors import DegenerateU1

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class IntervalUnion:
    """A finite union of half-open arcs [lo, hi) on the circle [0, 1).

    ``arcs`` is the normalized form: sorted, pairwise disjoint, contained
    in [0, 1].  An arc crossing 0 is stored as its two chart pieces.
    """

    arcs: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalUnion":
        """Build from (lo, hi) pairs; hi <= lo means the arc wraps past 0."""
        raw = []
        for lo, hi in pairs:
            lo = _mod1(as_fraction(lo))
            hi = as_fraction(hi)
            if hi != 1:
                hi = _mod1(hi)
            if lo < hi:
                raw.append((lo, hi))
            elif hi < lo:
                raw.append((lo, _ONE))
                if hi > 0:
                    raw.append((_ZERO, hi))
            # lo == hi contributes nothing (empty arc)
        return cls(cls._normalize(raw))

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @classmethod
    def full(cls) -> "IntervalUnion":
        return cls(((_ZERO, _ONE),))

    @staticmethod
    def _normalize(raw) -> tuple:
        raw = sorted((lo, hi) for lo, hi in raw if lo < hi)
        merged: list[tuple[Fraction, Fraction]] = []
        for lo, hi in raw:
            if merged and lo <= merged[-1][1]:
                last_lo, last_hi = merged.pop()
                merged.append((last_lo, max(last_hi, hi)))
            else:
                merged.append((lo, hi))
        return tuple(merged)

    def __post_init__(self):
        for lo, hi in self.arcs:
            if not (_ZERO <= lo < hi <= _ONE):
                raise ValueError(f"arc ({lo}, {hi}) outside the unit circle")

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.arcs), _ZERO)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    def contains(self, x) -> bool:
        xf = _mod1(as_fraction(x))
        i = bisect_right(self.arcs, (xf, _ONE + 1))
        return i > 0 and self.arcs[i - 1][0] <= xf < self.arcs[i - 1][1]

    def _breakpoints(self) -> list[Fraction]:
        pts = {_ZERO, _ONE}
        for lo, hi in self.arcs:
            pts.add(lo)
            pts.add(hi)
        return sorted(pts)

    def _combine(self, other: "IntervalUnion", keep) -> "IntervalUnion":
        pts = sorted(set(self._breakpoints()) | set(other._breakpoints()))
        out = []
        for lo, hi in zip(pts, pts[1:]):
            mid = (lo + hi) / 2
            if keep(self.contains(mid), other.contains(mid)):
                out.append((lo, hi))
        return IntervalUnion(self._normalize(out))

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self._combine(other, lambda a, b: a and not b)

    def symmetric_difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self._combine(other, lambda a, b: a != b)

    def complement(self) -> "IntervalUnion":
        return IntervalUnion.full().difference(self)

    def translate(self, shift) -> "IntervalUnion":
        s = _mod1(as_fraction(shift))
        moved = []
        for lo, hi in self.arcs:
            lo2 = lo + s
            hi2 = hi + s
            if hi2 <= 1:
                moved.append((lo2, hi2))
            elif lo2 >= 1:
                moved.append((lo2 - 1, hi2 - 1))
            else:
                moved.append((lo2, _ONE))
                moved.append((_ZERO, hi2 - 1))
        return IntervalUnion(self._normalize(moved))

    def as_float_pairs(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in self.arcs]


def translate(u: IntervalUnion, shift) -> IntervalUnion:
    return u.translate(shift)


def symm_diff_measure(u: IntervalUnion, w: IntervalUnion) -> Fraction:
    """Exact measure of the symmetric difference of two arc unions."""
    return u.symmetric_difference(w).measure


# ------------------------------------------------------------------ fourier


def indicator_coefficient(u: IntervalUnion, n: int) -> complex:
    """n-th Fourier coefficient of the arc union's indicator function."""
    if n == 0:
        return complex(u.measure)
    total = 0j
    for lo, hi in u.arcs:
        total += (cmath.exp(-2j * math.pi * n * float(lo))
                  - cmath.exp(-2j * math.pi * n * float(hi)))
    return total / (2j * math.pi * n)


def _coefficient_table(u: IntervalUnion, n_max: int) -> np.ndarray:
    """Coefficients for n = 1..n_max as a complex vector."""
    ns = np.arange(1, n_max + 1, dtype=np.float64)[:, None]
    out = np.zeros(n_max, dtype=np.complex128)
    if u.arcs:
        ends = np.array([[float(lo), float(hi)] for lo, hi in u.arcs])
        phase = np.exp(-2j * np.pi * ns * ends.reshape(1, -1))
        phase = phase.reshape(n_max, -1, 2)
        out = (phase[:, :, 0] - phase[:, :, 1]).sum(axis=1)
        out /= 2j * np.pi * ns[:, 0]
    return out


@dataclass(frozen=True)
class ParsevalReport:
    lhs: float
    lhs_exact: Fraction
    rhs: float
    tail_bound: float
    n_max: int

    @property
    def within(self) -> bool:
        return abs(self.lhs - self.rhs) <= self.tail_bound

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tail_bound": self.tail_bound,
            "n_max": self.n_max,
            "within": self.within,
        }


def fourier_parseval_check(u_sigma: IntervalUnion, u1: IntervalUnion,
                           shift, n_max: int) -> ParsevalReport:
    """Compare an exact symmetric-difference measure with its spectral sum.

    The left side is the exact measure of u_sigma against the shifted u1.
    The right side truncates the frequency expansion at |n| <= n_max; the
    indicators are real, so the negative frequencies mirror the positive
    ones and the sum is the n = 0 term plus twice the positive tail.  The
    discarded part is bounded through |a_n| <= arcs / (pi n).
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    s = as_fraction(shift)
    lhs = symm_diff_measure(u_sigma, u1.translate(s))
    a_sig = _coefficient_table(u_sigma, n_max)
    a_one = _coefficient_table(u1, n_max)
    ns = np.arange(1, n_max + 1)
    twist = np.exp(-2j * np.pi * ns * float(s))
    diff = a_sig - twist * a_one
    rhs = float(u_sigma.measure - u1.measure) ** 2
    rhs += 2.0 * float(np.sum(np.abs(diff) ** 2))
    arcs = u_sigma.arc_count + u1.arc_count
    tail = (arcs ** 2) * 2.0 / (math.pi ** 2 * n_max)
    return ParsevalReport(float(lhs), lhs, rhs, tail, n_max)


# --------------------------------------------------------------- separation


@dataclass(frozen=True)
class SeparationReport:
    """Sweep result for the simultaneous translate-separation bound."""

    measure: float
    threshold: Fraction
    samples: int
    hits: int
    band: float
    d: int

    @property
    def passes(self) -> bool:
        return self.measure >= 0.5 - self.band

    def as_dict(self) -> dict:
        return {
            "measure": self.measure,
            "threshold": float(self.threshold),
            "samples": self.samples,
            "hits": self.hits,
            "band": self.band,
            "d": self.d,
            "passes": self.passes,
        }


def shift_separation_measure(u_list, samples: int) -> SeparationReport:
    """Fraction of shifts keeping every set far from the shifted first set.

    A shift u0 counts when the symmetric difference of each set in
    ``u_list`` against (u0 + first set) has measure at least
    m(1 - m) / (32 d^2), where m is the first set's measure.  Shifts are
    stratified midpoints t/samples + 1/(2 samples), so the sweep is
    deterministic; the reported band is a three-sigma binomial width.
    """
    u_list = list(u_list)
    d = len(u_list)
    if d < 1:
        raise ValueError("need at least one arc union")
    u1 = u_list[0]
    m = u1.measure
    if m == 0 or m == 1:
        raise DegenerateU1(f"first set has measure {m}")
    threshold = m * (1 - m) / (32 * d * d)
    hits = 0
    for t in range(samples):
        u0 = Fraction(2 * t + 1, 2 * samples)
        moved = u1.translate(u0)
        if all(symm_diff_measure(u, moved) >= threshold for u in u_list):
            hits += 1
    p = hits / samples
    band = 3.0 * math.sqrt(max(p * (1 - p), 1e-12) / samples)
    return SeparationReport(p, threshold, samples, hits, band, d)
