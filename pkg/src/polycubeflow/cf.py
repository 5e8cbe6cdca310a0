"""Continued fractions, convergents and best-approximation distances.

The direction parameters of the flow are handled through their continued
fraction expansions.  A quadratic irrational is stored with its periodic
tail, so arbitrarily deep convergents are available; a float input is
expanded only as far as the float itself can certify.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import IndexOutOfRange, PrecisionExhausted

# Denominator floor used when a number is flattened to a single fraction.
# Deep enough that fractional parts of multiples up to 1e8 keep far more
# than 64 fractional bits of accuracy.
DEFAULT_MIN_DENOMINATOR = 1 << 160


@dataclass(frozen=True)
class Convergent:
    """The k-th convergent p/q of a continued fraction."""

    p: int
    q: int
    k: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class ContinuedFraction:
    """A simple continued fraction  a0 + 1/(a1 + 1/(a2 + ...)).

    ``quotients`` holds the explicitly listed partial quotients a1, a2, ...
    and ``periodic`` an optional tail that repeats forever after them.
    ``exact_rational`` marks expansions that terminated, i.e. the value is
    exactly the finite continued fraction.
    """

    a0: int = 0
    quotients: tuple[int, ...] = ()
    periodic: tuple[int, ...] = ()
    exact_rational: bool = False

    def __post_init__(self):
        if self.a0 < 0:
            raise ValueError("a0 must be non-negative")
        for a in tuple(self.quotients) + tuple(self.periodic):
            if a < 1:
                raise ValueError("partial quotients must be >= 1")
        if self.exact_rational and self.periodic:
            raise ValueError("a terminating expansion cannot have a periodic tail")

    # ------------------------------------------------------------ quotients

    @property
    def depth_available(self) -> int | None:
        """Number of partial quotients on hand, or None if unbounded."""
        return None if self.periodic else len(self.quotients)

    def quotient(self, k: int) -> int:
        """Partial quotient a_k for k >= 1."""
        if k < 1:
            raise IndexOutOfRange(f"partial quotient index {k} < 1")
        if k <= len(self.quotients):
            return self.quotients[k - 1]
        if self.periodic:
            return self.periodic[(k - 1 - len(self.quotients)) % len(self.periodic)]
        raise PrecisionExhausted(
            f"only {len(self.quotients)} partial quotients are certified"
        )

    def head(self, depth: int) -> list[int]:
        return [self.quotient(k) for k in range(1, depth + 1)]

    # ---------------------------------------------------------- convergents

    def convergents(self, k_max: int) -> list[Convergent]:
        """Convergents p_k/q_k for k = 1..k_max via the standard recurrence."""
        out = []
        p_prev, p = 1, self.a0
        q_prev, q = 0, 1
        for k in range(1, k_max + 1):
            a = self.quotient(k)
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            out.append(Convergent(p, q, k))
        return out

    def convergent(self, k: int) -> Convergent:
        if k < 0:
            raise IndexOutOfRange(f"convergent index {k} < 0")
        if k == 0:
            return Convergent(self.a0, 1, 0)
        return self.convergents(k)[-1]

    def denominators(self, k_max: int) -> list[int]:
        return [c.q for c in self.convergents(k_max)]

    # --------------------------------------------------------------- values

    def fraction(self, min_denominator: int = DEFAULT_MIN_DENOMINATOR) -> Fraction:
        """A single fraction standing in for the value.

        For rationals this is exact.  Otherwise the first convergent whose
        denominator reaches ``min_denominator`` is returned, or the deepest
        certified convergent for a finite expansion (raising only if that
        is too shallow to be useful at all).
        """
        p_prev, p = 1, self.a0
        q_prev, q = 0, 1
        k = 0
        while q < min_denominator:
            k += 1
            try:
                a = self.quotient(k)
            except PrecisionExhausted:
                if self.exact_rational or q >= 10**6:
                    break
                raise
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
        return Fraction(p, q)

    @cached_property
    def _deep_fraction(self) -> Fraction:
        return self.fraction()

    @property
    def value(self) -> float:
        return float(self._deep_fraction)

    def __float__(self) -> float:
        return self.value


# ------------------------------------------------------------------ parsing


def cf_expand(x, depth: int) -> ContinuedFraction:
    """Expand ``x`` into ``depth`` partial quotients.

    ``x`` may already be a ContinuedFraction (validated and passed through),
    a Fraction, or a float.  A float is expanded through its exact binary
    rational; the expansion stops with ``exact_rational`` set when it
    terminates, and PrecisionExhausted is raised when quotients beyond the
    float's certification range are requested.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if isinstance(x, ContinuedFraction):
        x.quotient(depth)  # raises PrecisionExhausted if too shallow
        return x
    if isinstance(x, Fraction):
        frac = x
        exact_input = True
    else:
        xf = float(x)
        if not 0.0 < xf:
            raise ValueError("expansion requires a positive input")
        frac = Fraction(xf)
        exact_input = False

    a0 = int(frac)
    rem = frac - a0
    quotients: list[int] = []
    q_prev, q = 0, 1
    while len(quotients) < depth:
        if rem == 0:
            return ContinuedFraction(a0, tuple(quotients), exact_rational=exact_input)
        inv = 1 / rem
        a = int(inv)
        rem = inv - a
        q_prev, q = q, a * q + q_prev
        if not exact_input and q > 10**7:
            # Deeper quotients would resolve structure below the float's
            # own resolution; refuse rather than emit noise.
            raise PrecisionExhausted(
                f"float input certifies only {len(quotients)} partial quotients"
            )
        quotients.append(a)
    return ContinuedFraction(a0, tuple(quotients))


# ------------------------------------------------- best approximation sizes


def as_fraction(x, min_denominator: int = DEFAULT_MIN_DENOMINATOR) -> Fraction:
    """Canonical exact-arithmetic stand-in for a direction component."""
    if isinstance(x, ContinuedFraction):
        if min_denominator == DEFAULT_MIN_DENOMINATOR:
            return x._deep_fraction
        return x.fraction(min_denominator)
    if isinstance(x, Fraction):
        return x
    return Fraction(float(x))


def frac_part(x) -> Fraction:
    """Fractional part of an exact stand-in, in [0, 1)."""
    f = as_fraction(x)
    return f - (f.numerator // f.denominator)


def frac_multiple(x, ell: int) -> Fraction:
    """{ell * x} computed exactly on the canonical stand-in."""
    f = as_fraction(x) * ell
    return f - (f.numerator // f.denominator)


def nearest_int_dist(q: int, alpha) -> float:
    """Distance from q*alpha to the nearest integer."""
    return float(nearest_int_dist_exact(q, alpha))


def nearest_int_dist_exact(q: int, alpha) -> Fraction:
    r = frac_multiple(alpha, q)
    return min(r, 1 - r)


# -------------------------------------------------------------- named bases

GOLDEN = ContinuedFraction(0, (), (1,))            # (sqrt 5 - 1) / 2
SQRT2_MINUS_1 = ContinuedFraction(0, (), (2,))     # sqrt 2 - 1
SQRT3_MINUS_1 = ContinuedFraction(0, (), (1, 2))   # sqrt 3 - 1
E_MINUS_2 = ContinuedFraction(
    0, (1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1, 1, 10, 1, 1, 12, 1, 1, 14, 1, 1, 16, 1)
)
PI_MINUS_3 = ContinuedFraction(
    0, (7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1)
)

NAMED_VALUES = {
    "golden": GOLDEN,
    "sqrt2": SQRT2_MINUS_1,
    "sqrt3": SQRT3_MINUS_1,
    "e": E_MINUS_2,
    "pi": PI_MINUS_3,
}
