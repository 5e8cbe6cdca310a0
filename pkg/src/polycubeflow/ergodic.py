"""Statistical checks for the first-return dynamics.

Covers grid-box discrepancy and Birkhoff averages of discrete y-face
orbits, the autocorrelation identity for planar rectangle unions, the
translated special-rectangle chains with their splitting-free and
defective-census bookkeeping, and the half-strip disjunction scan.

Counting conventions for the census: a chain member is *bad* when it
touches the frame of one of the reference region's rectangles or when
the symmetric-difference density inside it reaches the threshold; a
chain is *defective* when every member is bad.  The frame count and the
density count are tallied independently, so their sum bounds the member
count of defective chains; that inequality is asserted on every run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import Direction, _q_pair, special_interval
from .cf import frac_multiple, nearest_int_dist_exact
from .errors import IndexOutOfRange, InsufficientSamples
from .geodesic import y_face_orbit
from .manifold import Manifold
from .regions import RectangleUnionRegion
from .splitting import SingularSegment, SplitRectangle, singular_preimages

# ------------------------------------------------------------- y orbits


@dataclass(frozen=True)
class YOrbit:
    """A discrete first-return orbit as parallel arrays."""

    faces: np.ndarray
    xs: np.ndarray
    zs: np.ndarray
    n_faces: int

    def __len__(self) -> int:
        return len(self.faces)

    def head(self, n: int) -> "YOrbit":
        return YOrbit(self.faces[:n], self.xs[:n], self.zs[:n], self.n_faces)


def collect_y_orbit(m: Manifold, cube: int, x: float, z: float,
                    direction: Direction, n_steps: int) -> YOrbit:
    faces = np.empty(n_steps, dtype=np.int64)
    xs = np.empty(n_steps, dtype=np.float64)
    zs = np.empty(n_steps, dtype=np.float64)
    for i, (c, xv, zv) in enumerate(y_face_orbit(m, cube, x, z, direction,
                                                 n_steps)):
        faces[i] = c
        xs[i] = xv
        zs[i] = zv
    return YOrbit(faces, xs, zs, m.size)


@dataclass(frozen=True)
class DiscrepancyReport:
    value: float
    per_face: tuple[float, ...]
    samples: int
    grid: int
    n_faces: int

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "per_face": list(self.per_face),
            "samples": self.samples,
            "grid": self.grid,
            "n_faces": self.n_faces,
        }


def box_discrepancy(orbit: YOrbit, grid_resolution: int) -> DiscrepancyReport:
    """Worst anchored grid-box deviation from the uniform measure.

    For each face the boxes [0, a/g) x [0, b/g), a, b = 1..g, are compared
    against their normalized volume (a b) / (g^2 d); the report carries the
    per-face maxima and their overall maximum.
    """
    g = int(grid_resolution)
    n = len(orbit)
    if n < g * g * 100:
        raise InsufficientSamples(
            f"{n} samples for a {g}x{g} grid; need at least {g * g * 100}")
    d = orbit.n_faces
    ix = np.minimum((orbit.xs * g).astype(np.int64), g - 1)
    iz = np.minimum((orbit.zs * g).astype(np.int64), g - 1)
    flat = (orbit.faces * g + ix) * g + iz
    counts = np.bincount(flat, minlength=d * g * g).reshape(d, g, g)
    cum = counts.cumsum(axis=1).cumsum(axis=2) / n
    a = np.arange(1, g + 1)
    volume = (a[:, None] * a[None, :]) / (g * g * d)
    dev = np.abs(cum - volume[None, :, :])
    per_face = tuple(float(v) for v in dev.max(axis=(1, 2)))
    return DiscrepancyReport(float(dev.max()), per_face, n, g, d)


def birkhoff_average(orbit: YOrbit, region: RectangleUnionRegion) -> float:
    """Fraction of the orbit's samples lying in the region."""
    if len(orbit) == 0:
        raise ValueError("empty orbit")
    return float(region.contains_points(orbit.faces, orbit.xs,
                                        orbit.zs).mean())


# ------------------------------------------------- planar overlap identity


@dataclass(frozen=True)
class OverlapReport:
    lhs: float
    rhs: float
    std_error: float
    samples: int

    @property
    def within(self) -> bool:
        return abs(self.lhs - self.rhs) <= 3.0 * self.std_error + 1e-12

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "std_error": self.std_error,
            "samples": self.samples,
            "within": self.within,
        }


def _disjoint_rects(region: RectangleUnionRegion, face: int) -> np.ndarray:
    """The face's normalized columns flattened to disjoint float rects."""
    breaks, cols = region._columns[face]
    out = []
    for lo, hi, col in zip(breaks, breaks[1:], cols):
        for z_lo, z_hi in col.arcs:
            out.append((float(lo), float(hi), float(z_lo), float(z_hi)))
    return np.array(out, dtype=np.float64).reshape(-1, 4)


def _shifted_overlap(rects: np.ndarray, t: np.ndarray) -> np.ndarray:
    """lambda2(A intersect (A + t)) for each torus shift t, vectorised."""
    n = len(rects)
    totals = np.zeros(len(t))
    for i in range(n):
        a_lo, a_hi, c_lo, c_hi = rects[i]
        for j in range(n):
            b_lo, b_hi, d_lo, d_hi = rects[j]
            ox = np.zeros(len(t))
            oz = np.zeros(len(t))
            for k in (-1.0, 0.0, 1.0):
                ox += np.maximum(
                    0.0, np.minimum(a_hi, b_hi + t[:, 0] + k)
                    - np.maximum(a_lo, b_lo + t[:, 0] + k))
                oz += np.maximum(
                    0.0, np.minimum(c_hi, d_hi + t[:, 1] + k)
                    - np.maximum(c_lo, d_lo + t[:, 1] + k))
            totals += ox * oz
    return totals


def overlap_identity_check(region: RectangleUnionRegion, resolution: int = 64,
                           seed: int = 0) -> OverlapReport:
    """Mean shifted-self-overlap of a planar set against its squared area.

    The set is a rectangle union on one face chart, read as a subset of
    the unit torus square.  resolution^2 shifts are drawn uniformly from
    the seeded generator; each overlap area is evaluated in closed form,
    so the only error is sampling error, reported as a standard error.
    """
    if region.n_faces != 1:
        raise ValueError("the overlap identity runs on a single-face region")
    area = region.area
    rects = _disjoint_rects(region, 0)
    n = int(resolution) ** 2
    rng = np.random.default_rng(seed)
    t = rng.random((n, 2))
    values = _shifted_overlap(rects, t) if len(rects) else np.zeros(n)
    lhs = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return OverlapReport(lhs, float(area) ** 2, se, n)


# ------------------------------------------------------------ power chains


def _require_product(m: Manifold):
    ident = np.arange(m.size)
    if not ((m.hop[2, 0] == ident).all() and (m.hop[2, 1] == ident).all()):
        raise ValueError(
            f"{m.name} is not of product type (z-hops must be trivial)")


def _face_sequence(m: Manifold, direction: Direction, sigma: int,
                   count: int, orientation: int) -> list[int]:
    """Faces visited by the chain members, from exact centre positions."""
    hx, hy = m.hop[0, 1], m.hop[1, 1]
    inv_hx = np.argsort(hx)
    inv_hy = np.argsort(hy)
    a = direction.alpha
    faces = [sigma]
    c = sigma
    for i in range(count - 1):
        if orientation == 1:
            wrapped = frac_multiple(a, i + 2) < frac_multiple(a, i + 1)
            c = int(hy[hx[c]]) if wrapped else int(hy[c])
        else:
            wrapped = frac_multiple(a, -(i + 1)) < frac_multiple(a, -(i + 2))
            c = int(inv_hx[inv_hy[c]]) if wrapped else int(inv_hy[c])
        faces.append(c)
    return faces


def _member_split(member: SplitRectangle,
                  segments: list[list[SingularSegment]]) -> bool:
    x_lo, x_hi = member.x_interval.lo, member.x_interval.hi
    z_lo, z_hi = member.z_interval.lo, member.z_interval.hi
    for seg in segments[member.face]:
        if x_lo < seg.x_position < x_hi:
            if min(z_hi, seg.z_hi) > max(z_lo, seg.z_lo):
                return True
    return False


@dataclass(frozen=True)
class PowerChain:
    """The translated copies of one small special rectangle."""

    sigma: int
    j: int
    k: int
    h: int
    orientation: int
    q: int
    q_prime: int
    members: tuple[SplitRectangle, ...]
    split_indices: tuple[int, ...]

    @property
    def splitting_free(self) -> bool:
        return not self.split_indices

    @property
    def member_area(self) -> Fraction:
        return self.members[0].area


def power_chain(m: Manifold, direction: Direction, sigma: int, k: int,
                h: int, j: int, orientation: int = 1,
                segments=None) -> PowerChain:
    """Build the q_{k+1}-1 translated rectangles over the pair (sigma, j).

    Forward chains start from the x-interval of index 1 and the
    z-interval of index j, with j up to the denominator difference;
    backward chains use negative x-indices and run j down from above.
    Each member is checked against the singular preimage lines of its
    face; straddling any of them marks the chain as splitting.
    """
    _require_product(m)
    if not 0 <= sigma < m.size:
        raise IndexOutOfRange(f"face {sigma} outside 0..{m.size - 1}")
    if orientation not in (1, -1):
        raise ValueError(f"orientation must be +1 or -1, got {orientation}")
    _, q = _q_pair(direction.alpha, k)
    _, q_prime = _q_pair(direction.beta, h)
    if orientation == 1:
        if not 1 <= j <= q_prime - q:
            raise IndexOutOfRange(
                f"forward j = {j} outside 1..{q_prime - q}")
    else:
        if not q + 1 <= j <= q_prime:
            raise IndexOutOfRange(
                f"backward j = {j} outside {q + 1}..{q_prime}")
    if segments is None:
        segments = singular_preimages(m, direction, orientation)
    faces = _face_sequence(m, direction, sigma, q - 1, orientation)
    members = []
    split_at = []
    for i in range(q - 1):
        if orientation == 1:
            x_idx, z_idx = 1 + i, j + i
        else:
            x_idx, z_idx = -(1 + i), j - 2 - i
        member = SplitRectangle(
            faces[i],
            special_interval(direction.alpha, k, x_idx),
            special_interval(direction.beta, h, z_idx))
        members.append(member)
        if _member_split(member, segments):
            split_at.append(i)
    return PowerChain(sigma, j, k, h, orientation, q, q_prime,
                      tuple(members), tuple(split_at))


# ---------------------------------------------------------------- census


@dataclass(frozen=True)
class OrientationTally:
    """Member-level counts for one flow orientation."""

    orientation: int
    delta: int
    lam: int
    omega: int
    chains: int
    defective: tuple[tuple[int, int], ...]

    @property
    def proportion(self) -> float:
        return self.delta / self.chains if self.chains else 0.0

    def bound(self, q: int, q_prime: int, d: int, epsilon: float) -> float:
        """Defective-chain proportion bound with the measured frame rate.

        The frame constant is read off as lam / (q + q'), which turns the
        abstract inequality into a concrete number for this run.
        """
        c1 = self.lam / (q + q_prime)
        first = c1 * (q + q_prime) / (d * (q_prime - q) * (q - 1))
        second = math.sqrt(epsilon) * (q_prime - 1) / (d * (q_prime - q))
        return first + second


@dataclass(frozen=True)
class CensusReport:
    q: int
    q_prime: int
    d: int
    epsilon: float
    threshold: float
    forward: OrientationTally
    backward: OrientationTally
    good_j: tuple[int, ...]

    @property
    def delta(self) -> int:
        return self.forward.delta + self.backward.delta

    @property
    def lam(self) -> int:
        return self.forward.lam + self.backward.lam

    @property
    def omega(self) -> int:
        return self.forward.omega + self.backward.omega

    def as_dict(self) -> dict:
        def tally(t: OrientationTally) -> dict:
            return {
                "delta": t.delta,
                "lambda": t.lam,
                "omega": t.omega,
                "chains": t.chains,
                "proportion": t.proportion,
                "bound": t.bound(self.q, self.q_prime, self.d, self.epsilon),
            }
        return {
            "q": self.q,
            "q_prime": self.q_prime,
            "faces": self.d,
            "epsilon": self.epsilon,
            "threshold": self.threshold,
            "forward": tally(self.forward),
            "backward": tally(self.backward),
            "good_j_count": len(self.good_j),
            "good_j_first": list(self.good_j[:10]),
        }


def defective_census(m: Manifold, direction: Direction,
                     w1: RectangleUnionRegion,
                     w_surrogate: RectangleUnionRegion,
                     k: int, h: int, epsilon: float = 1e-4) -> CensusReport:
    """Tally bad members and defective chains over both orientations.

    ``w1`` supplies the rectangle frames; ``w_surrogate`` stands in for
    the invariant set so the symmetric difference is exactly computable.
    The density threshold is 9 sqrt(epsilon).  Chains whose index lies in
    the shared window and which are defect-free on every face in both
    orientations make up ``good_j``.
    """
    _require_product(m)
    d = m.size
    if w1.n_faces != d or w_surrogate.n_faces != d:
        raise ValueError("regions must cover every face of the manifold")
    _, q = _q_pair(direction.alpha, k)
    _, q_prime = _q_pair(direction.beta, h)
    if q_prime <= 2 * q:
        raise ValueError(
            f"need q' > 2q for a nonempty shared window, got {q}, {q_prime}")
    threshold = 9.0 * math.sqrt(epsilon)
    thr = Fraction(threshold)
    sym = w_surrogate.symmetric_difference(w1)
    sym_nonempty = sym.area > 0
    clean: dict[int, set[tuple[int, int]]] = {1: set(), -1: set()}
    tallies = {}
    for orientation in (1, -1):
        segments = singular_preimages(m, direction, orientation)
        j_lo, j_hi = ((1, q_prime - q) if orientation == 1
                      else (q + 1, q_prime))
        lam = omega = delta = 0
        defective = []
        for sigma in range(d):
            faces = _face_sequence(m, direction, sigma, q - 1, orientation)
            for j in range(j_lo, j_hi + 1):
                all_bad = True
                for i in range(q - 1):
                    if orientation == 1:
                        x_idx, z_idx = 1 + i, j + i
                    else:
                        x_idx, z_idx = -(1 + i), j - 2 - i
                    xi = special_interval(direction.alpha, k, x_idx)
                    zi = special_interval(direction.beta, h, z_idx)
                    face = faces[i]
                    touch = w1.touches_frame(face, xi.lo, xi.hi, zi.lo, zi.hi)
                    dense = False
                    if sym_nonempty:
                        hit = sym.area_in_rect(face, xi.lo, xi.hi,
                                               zi.lo, zi.hi)
                        dense = hit >= thr * (xi.length * zi.length)
                    lam += touch
                    omega += dense
                    if not (touch or dense):
                        all_bad = False
                if all_bad:
                    delta += 1
                    defective.append((sigma, j))
                else:
                    clean[orientation].add((sigma, j))
        members = delta * (q - 1)
        assert members <= lam + omega, (
            f"defective-member count {members} exceeds {lam} + {omega}")
        tallies[orientation] = OrientationTally(
            orientation, delta, lam, omega, d * (q_prime - q),
            tuple(defective))
    good = []
    for j in range(q + 1, q_prime - q + 1):
        if all((sigma, j) in clean[1] and (sigma, j) in clean[-1]
               for sigma in range(d)):
            good.append(j)
    return CensusReport(q, q_prime, d, epsilon, threshold,
                        tallies[1], tallies[-1], tuple(good))


def chain_avoiding_region(m: Manifold, direction: Direction, k: int,
                          h: int) -> RectangleUnionRegion:
    """A per-face rectangle whose frame dodges every chain member.

    Edge positions are chosen in the gaps left between the closed member
    intervals of both orientations, so a census against this region (as
    both arguments) reports zero counts across the board.
    """
    def free_positions(value, level, signed):
        _, q_top = _q_pair(value, level)
        if signed:
            idxs = [s * i for i in range(1, q_top) for s in (1, -1)]
        else:
            idxs = list(range(1, q_top - 1))
        used = []
        for idx in idxs:
            iv = special_interval(value, level, idx)
            used.append((iv.lo, iv.hi))
        used.sort()
        gaps = []
        prev = Fraction(0)
        for lo, hi in used:
            if lo > prev:
                gaps.append((prev, lo))
            prev = max(prev, hi)
        if prev < 1:
            gaps.append((prev, Fraction(1)))
        gaps.sort(key=lambda g: g[1] - g[0], reverse=True)
        if len(gaps) < 2:
            raise ValueError("no free room between member intervals")
        a, b = sorted(((g[0] + g[1]) / 2 for g in gaps[:2]))
        return a, b
    x_a, x_b = free_positions(direction.alpha, k, signed=True)
    z_a, z_b = free_positions(direction.beta, h, signed=False)
    return RectangleUnionRegion.uniform(m.size, x_a, x_b, z_a, z_b)


# ------------------------------------------------------------ half strips


@dataclass(frozen=True)
class HalfStripVerdict:
    i: int
    minus_free: bool
    plus_free: bool
    minus_first_split: int | None
    plus_first_split: int | None

    @property
    def disjunction(self) -> bool:
        return self.minus_free or self.plus_free


@dataclass(frozen=True)
class HalfStripReport:
    k: int
    n_steps: int
    q_k: int
    q_k1: int
    verdicts: tuple[HalfStripVerdict, ...]

    @property
    def disjunction_holds(self) -> bool:
        return all(v.disjunction for v in self.verdicts)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "n_steps": self.n_steps,
            "q_k": self.q_k,
            "q_k1": self.q_k1,
            "strips": len(self.verdicts),
            "disjunction_holds": self.disjunction_holds,
            "both_free": sum(v.minus_free and v.plus_free
                             for v in self.verdicts),
        }


def half_strip_chains(direction: Direction, k: int,
                      n_steps: int | None = None) -> HalfStripReport:
    """Split verdicts for the two half-width strip chains at every index.

    The image of a half strip after n more rotation steps is the half
    interval beside the point {(i+n) alpha}; it splits exactly when that
    open interval covers 0 on the circle, which reduces to one exact
    comparison of {(i+n) alpha} against half the strip width.  For every
    i at least one side is expected to stay split-free for n up to the
    step budget, which must sit in [q_k, q_{k+1}).
    """
    a = direction.alpha
    q_k, q_k1 = _q_pair(a, k)
    n = q_k if n_steps is None else int(n_steps)
    if not q_k <= n < q_k1:
        raise IndexOutOfRange(f"step budget {n} outside [{q_k}, {q_k1})")
    half = nearest_int_dist_exact(q_k, a) / 2
    top = (q_k1 - 1) + n
    minus_next = [None] * (top + 2)
    plus_next = [None] * (top + 2)
    for idx in range(top, 0, -1):
        pos = frac_multiple(a, idx)
        minus_next[idx] = idx if pos < half else minus_next[idx + 1]
        plus_next[idx] = idx if 1 - pos < half else plus_next[idx + 1]
    verdicts = []
    for i in range(1, q_k1):
        m_at = minus_next[i + 1]
        p_at = plus_next[i + 1]
        m_first = m_at - i if m_at is not None and m_at <= i + n else None
        p_first = p_at - i if p_at is not None and p_at <= i + n else None
        verdicts.append(HalfStripVerdict(i, m_first is None, p_first is None,
                                         m_first, p_first))
    return HalfStripReport(k, n, q_k, q_k1, tuple(verdicts))
