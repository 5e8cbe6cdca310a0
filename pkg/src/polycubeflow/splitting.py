"""Discontinuity geometry of the squared first-return map.

Each bottom face carries a z-parallel line whose forward flow runs into a
cone edge one level up.  A thin strip round that line is cut by the line
into two halves which land on different faces after two return steps, and
matching left-half landings against right-half landings induces a
permutation of the faces.  Its cycle structure is the combinatorial
invariant this module computes, together with the anchor-coordinate
formulas used on magnified wall arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .arith import Direction, IntervalOnTorus, _q_pair
from .cf import nearest_int_dist_exact
from .errors import AmbiguousPairing, MagnificationTooSmall, SingularHit
from .geodesic import y_face_map
from .manifold import EdgeClass, Manifold, PolysquareSurface

_TEST_DIRECTION = Direction((5 ** 0.5 - 1) / 2, 2 ** 0.5 - 1)


# ------------------------------------------------- singular preimage lines


@dataclass(frozen=True)
class SingularSegment:
    """A z-parallel segment on a bottom face that flows into a cone edge."""

    face: int
    orientation: int
    x_position: Fraction
    z_lo: Fraction
    z_hi: Fraction
    edge: EdgeClass

    @property
    def z_length(self) -> Fraction:
        return self.z_hi - self.z_lo


def _edge_table(m: Manifold) -> dict:
    table = {}
    for cls in m.edge_classes():
        for pt in cls.members:
            table[(cls.axis, pt)] = cls
    return table


def _merge_segments(segs: list[SingularSegment]) -> list[SingularSegment]:
    segs = sorted(segs, key=lambda s: s.z_lo)
    merged: list[SingularSegment] = []
    for seg in segs:
        if merged and merged[-1].z_hi == seg.z_lo and merged[-1].edge == seg.edge:
            prev = merged.pop()
            seg = SingularSegment(prev.face, prev.orientation, prev.x_position,
                                  prev.z_lo, seg.z_hi, prev.edge)
        merged.append(seg)
    return merged


def singular_preimages(m: Manifold, direction: Direction,
                       orientation: int = 1) -> list[list[SingularSegment]]:
    """Per bottom face, the segments taken onto a cone edge by one flow step.

    Forward (orientation +1) the line sits at x = 1 - alpha and meets the
    top-far z-edge of the cell the step ends in; backward (-1) it sits at
    x = alpha and meets the bottom-near z-edge of the cell the reversed
    step ends in.  Edges with a full ring of four quadrants are invisible
    to the return map and their segments are dropped, so a flat torus
    yields empty lists.
    """
    if orientation not in (1, -1):
        raise ValueError(f"orientation must be +1 or -1, got {orientation}")
    a = direction.alpha_fraction
    b = direction.beta_fraction
    table = _edge_table(m)
    hop = m.hop
    out = []
    for c in range(m.size):
        if orientation == 1:
            x_pos = 1 - a
            far = m.cells[int(hop[2, 1, c])]
            parts = [(Fraction(0), 1 - b, m.cells[c]),
                     (1 - b, Fraction(1), far)]
            corner = (1, 1, 0)
        else:
            x_pos = Fraction(a)
            below = int(hop[1, 0, c])
            wrapped = m.cells[int(hop[2, 0, below])]
            parts = [(Fraction(0), Fraction(b), wrapped),
                     (Fraction(b), Fraction(1), m.cells[below])]
            corner = (0, 0, 0)
        segs = []
        for z_lo, z_hi, cell in parts:
            pt = tuple(p + q for p, q in zip(cell, corner))
            cls = table.get((2, pt))
            if cls is None or not cls.is_singular:
                continue
            segs.append(SingularSegment(c, orientation, x_pos, z_lo, z_hi, cls))
        out.append(_merge_segments(segs))
    return out


# ----------------------------------------------------- probes and pairing


_PROBE_OFFSETS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3),
                  Fraction(1, 5), Fraction(2, 5), Fraction(3, 5),
                  Fraction(4, 5), Fraction(1, 7))


def _strip_width(direction: Direction, k: int) -> Fraction:
    a = direction.alpha_fraction
    q_k, _ = _q_pair(a, k)
    return Fraction(2, 5) * nearest_int_dist_exact(q_k, a)


def _z_window(direction: Direction) -> tuple[Fraction, Fraction]:
    """Widest z-arc whose two-step flow never touches a z-face edge."""
    b = direction.beta_fraction
    cuts = sorted({Fraction(0), (1 - b) % 1, (1 - 2 * b) % 1, Fraction(1)})
    return max(zip(cuts, cuts[1:]), key=lambda pair: pair[1] - pair[0])


def _probe_z(direction: Direction, attempt: int) -> Fraction:
    lo, hi = _z_window(direction)
    return lo + (hi - lo) * _PROBE_OFFSETS[attempt]


def _trace_two(m: Manifold, cube: int, x: Fraction, z: Fraction,
               direction: Direction):
    c1, x1, z1 = y_face_map(m, cube, x, z, direction, exact=True)
    return y_face_map(m, c1, x1, z1, direction, exact=True)


def split_halves_image(m: Manifold, direction: Direction, sigma: int,
                       k: int = 3) -> tuple[int, int]:
    """Faces reached by the two halves of face ``sigma``'s strip.

    Sample points are placed a quarter strip-width to either side of the
    discontinuity line and traced through two return steps with exact
    rational arithmetic.  A probe that lands exactly on another
    discontinuity is retried with half the offset and a fresh z position.
    """
    a = direction.alpha_fraction
    x0 = 1 - a
    delta = _strip_width(direction, k) / 4
    last = None
    for attempt in range(len(_PROBE_OFFSETS)):
        z0 = _probe_z(direction, attempt)
        try:
            left, _, _ = _trace_two(m, sigma, x0 - delta, z0, direction)
            right, _, _ = _trace_two(m, sigma, x0 + delta, z0, direction)
            return left, right
        except SingularHit as exc:
            last = exc
            delta = delta / 2
    raise SingularHit(
        f"probe offsets exhausted for face {sigma} of {m.name}") from last


@dataclass
class SplittingPermutation:
    """The face permutation induced by matching half-strip landings.

    ``perm`` maps the label of the face whose left half lands on F to the
    label of the face whose right half lands there, for every face F; the
    corresponding triples (F, left owner, right owner) are in ``pairs``.
    """

    manifold_name: str
    labels: tuple[int, ...]
    perm: dict[int, int]
    pairs: tuple[tuple[int, int, int], ...]
    cycles: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def as_report(self) -> dict:
        structure = cycle_structure(self)
        return {
            "manifold": self.manifold_name,
            "pairs": [list(p) for p in self.pairs],
            "permutation": {str(k): v for k, v in sorted(self.perm.items())},
            "cycles": [list(c) for c in self.cycles],
            "cycle_lengths": list(structure.lengths),
            "single_cycle": structure.is_single_cycle,
            "max_cycle_len": structure.max_cycle_len,
            "majority_cycle": structure.majority_cycle,
        }


def _cycle_decomposition(perm: dict[int, int]) -> tuple[tuple[int, ...], ...]:
    """Cycles of ``perm``, ordered by smallest member.

    Each cycle is written starting from the label whose image is the
    cycle's smallest member, so a 3-cycle sending 3 to 1 to 2 comes out
    as ``(3, 1, 2)``.  That puts the smallest label in second position
    and reads naturally as "3 goes to 1 goes to 2 (goes back to 3)".
    """
    seen = set()
    cycles = []
    for start in sorted(perm):
        if start in seen:
            continue
        members = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            members.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        if len(members) > 1:
            low = members.index(min(members))
            pre = (low - 1) % len(members)
            members = members[pre:] + members[:pre]
        cycles.append(tuple(members))
    return tuple(cycles)


def _face_labels(m: Manifold) -> tuple[int, ...]:
    if m.diagram_labels is not None:
        labels = tuple(int(v) for v in m.diagram_labels)
        if sorted(labels) != list(range(1, m.size + 1)):
            raise ValueError(f"diagram labels of {m.name} are not 1..d")
        return labels
    return tuple(range(1, m.size + 1))


def splitting_permutation(m: Manifold, direction: Direction,
                          k: int = 3) -> SplittingPermutation:
    """Match left-half and right-half landings into a face permutation.

    Requires one discontinuity line per bottom face, which holds for
    products with a circle and their magnified or covering variants
    whenever 0 < alpha < 1.
    """
    d = m.size
    left = []
    right = []
    for sigma in range(d):
        lo, hi = split_halves_image(m, direction, sigma, k=k)
        left.append(lo)
        right.append(hi)
    for name, dest in (("left", left), ("right", right)):
        if sorted(dest) != list(range(d)):
            clash = [f for f in set(dest) if dest.count(f) > 1]
            raise AmbiguousPairing(
                f"two {name} halves of {m.name} land on face(s) {clash}")
    inv_left = {f: s for s, f in enumerate(left)}
    inv_right = {f: s for s, f in enumerate(right)}
    labels = _face_labels(m)
    perm = {}
    pairs = []
    for f in range(d):
        rho_l = inv_left[f]
        rho_r = inv_right[f]
        perm[labels[rho_l]] = labels[rho_r]
        pairs.append((labels[f], labels[rho_l], labels[rho_r]))
    pairs.sort()
    return SplittingPermutation(m.name, labels, perm,
                                tuple(pairs), _cycle_decomposition(perm))


# --------------------------------------------------------- cycle analysis


@dataclass(frozen=True)
class CycleStructure:
    lengths: tuple[int, ...]
    is_single_cycle: bool
    max_cycle_len: int
    majority_cycle: bool


def cycle_structure(sp: SplittingPermutation) -> CycleStructure:
    lengths = tuple(sorted(len(c) for c in sp.cycles))
    longest = max(lengths)
    return CycleStructure(lengths, len(lengths) == 1, longest,
                          2 * longest > sum(lengths))


def render_cycle_string(sp: SplittingPermutation,
                        starts: dict[int, int] | None = None) -> str:
    """Arrow notation, one closed chunk per cycle: "3->1->2->3, 4->4".

    ``starts`` optionally picks the opening label of the cycle containing
    a given label, to mirror an externally published rendering.
    """
    chunks = []
    for cycle in sp.cycles:
        if starts:
            for label, open_at in starts.items():
                if label in cycle and open_at in cycle:
                    i = cycle.index(open_at)
                    cycle = cycle[i:] + cycle[:i]
                    break
        path = list(cycle) + [cycle[0]]
        chunks.append("->".join(str(v) for v in path))
    return ", ".join(chunks)


def parse_cycle_string(text: str) -> dict[int, int]:
    """Inverse of :func:`render_cycle_string`, up to cycle order and start."""
    perm = {}
    for chunk in text.split(","):
        path = [int(v) for v in chunk.replace("→", "->").split("->")]
        if path[0] != path[-1]:
            raise ValueError(f"cycle {chunk!r} does not close")
        for src, dst in zip(path[:-1], path[1:]):
            if src in perm:
                raise ValueError(f"label {src} mapped twice")
            perm[src] = dst
    return perm


@dataclass(frozen=True)
class CriterionReport:
    surface: str
    vertex_classes: int
    single_cycle: bool
    equivalent: bool


def cycle_vertex_equivalence(surface: PolysquareSurface,
                             direction: Direction | None = None,
                             k: int = 3) -> CriterionReport:
    """Single-cycle permutation if and only if one vertex class.

    Runs both computations on the given surface and reports whether the
    verdicts agree.
    """
    direction = direction or _TEST_DIRECTION
    sp = splitting_permutation(surface.product_with_circle(), direction, k=k)
    single = cycle_structure(sp).is_single_cycle
    n_vertices = surface.count_vertex_classes()
    return CriterionReport(surface.name, n_vertices, single,
                           (n_vertices == 1) == single)


# -------------------------------------------------- half-strip rectangles


@dataclass(frozen=True)
class SplitRectangle:
    """An axis-aligned open rectangle in the local chart of one face."""

    face: int
    x_interval: IntervalOnTorus
    z_interval: IntervalOnTorus

    @property
    def area(self) -> Fraction:
        return self.x_interval.length * self.z_interval.length


def base_strip(m: Manifold, direction: Direction, sigma: int,
               k: int = 3) -> SplitRectangle:
    """The thin strip round face ``sigma``'s discontinuity line."""
    a = direction.alpha_fraction
    x0 = 1 - a
    half = _strip_width(direction, k) / 2
    lo, hi = _z_window(direction)
    mid = (lo + hi) / 2
    quarter = (hi - lo) / 4
    return SplitRectangle(sigma, IntervalOnTorus(x0 - half, x0 + half),
                          IntervalOnTorus(mid - quarter, mid + quarter))


def _rigid_image(m: Manifold, direction: Direction, face: int,
                 x_c: Fraction, z_c: Fraction, x_half: Fraction,
                 z_half: Fraction, verify: bool) -> SplitRectangle:
    cube, x_i, z_i = _trace_two(m, face, x_c, z_c, direction)
    if verify:
        for dx, dz in ((x_half / 2, 0), (-x_half / 2, 0),
                       (0, z_half / 2), (0, -z_half / 2)):
            got = _trace_two(m, face, x_c + dx, z_c + dz, direction)
            if got != (cube, x_i + dx, z_i + dz):
                raise SingularHit(
                    f"strip half on face {face} of {m.name} is cut "
                    f"by a discontinuity; shrink the strip (raise k)")
    return SplitRectangle(cube, IntervalOnTorus(x_i - x_half, x_i + x_half),
                          IntervalOnTorus(z_i - z_half, z_i + z_half))


def split_rectangle_images(m: Manifold, direction: Direction, sigma: int,
                           k: int = 3, verify: bool = True
                           ) -> tuple[SplitRectangle, SplitRectangle]:
    """Images of the two strip halves after two return steps.

    Each half moves rigidly, so its image is reconstructed from the traced
    centre; with ``verify`` four more interior points per half are traced
    and checked against the rigid prediction.
    """
    strip = base_strip(m, direction, sigma, k)
    x0 = (strip.x_interval.lo + strip.x_interval.hi) / 2
    quarter = strip.x_interval.length / 4
    z_c = strip.z_interval.midpoint
    z_half = strip.z_interval.length / 2
    left = _rigid_image(m, direction, sigma, x0 - quarter, z_c,
                        quarter, z_half, verify)
    right = _rigid_image(m, direction, sigma, x0 + quarter, z_c,
                         quarter, z_half, verify)
    return left, right


# ------------------------------------------------- magnified array frame


@dataclass(frozen=True)
class FrameSpec:
    """Anchor data for the two face rows of a magnified s x 2 x 1 array.

    ``lower_anchor`` is the bottom-left corner of the face one level below
    the wall top in the first block; ``upper_anchor`` the face two levels
    up that receives the longer piece of the pushed-through unit segment.
    Per-block translates of both appear in ``lower_faces``/``upper_faces``.
    """

    s: int
    n: int
    lower_anchor: tuple[int, int, int]
    upper_anchor: tuple[int, int, int]
    lower_faces: tuple[tuple[int, int, int], ...]
    upper_faces: tuple[tuple[int, int, int], ...]
    lower_segment_x: Fraction
    upper_segment_x: Fraction
    segment_length: Fraction

    def as_report(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "lower_anchor": list(self.lower_anchor),
            "upper_anchor": list(self.upper_anchor),
            "lower_faces": [list(f) for f in self.lower_faces],
            "upper_faces": [list(f) for f in self.upper_faces],
            "lower_segment_x": float(self.lower_segment_x),
            "upper_segment_x": float(self.upper_segment_x),
            "segment_length": float(self.segment_length),
        }


def frame_spec(direction: Direction, s: int, n: int,
               m: Manifold | None = None) -> FrameSpec:
    """Anchor coordinates for the magnified array construction.

    The wall top sits at height n, so the magnification must satisfy
    n > max(alpha, 1 + 2 beta) for the unit segment one level below the
    top to clear the wall and land inside the next block.
    """
    a = direction.alpha_fraction
    b = direction.beta_fraction
    if s < 2:
        raise ValueError(f"need at least two blocks, got s={s}")
    if not n > max(a, 1 + 2 * b):
        raise MagnificationTooSmall(
            f"magnification {n} is not above max(alpha, 1 + 2*beta) "
            f"= {float(max(a, 1 + 2 * b)):.6f}")
    if m is not None and m.size != 2 * s * n ** 3:
        raise ValueError(
            f"{m.name} has {m.size} cells, expected {2 * s * n ** 3} "
            f"for an s={s} array magnified {n}-fold")
    frac2b = 2 * b - floor(2 * b)
    if frac2b == Fraction(1, 2):
        raise ValueError("2*beta is half-integral, the two pieces tie")
    x1 = floor(n - a)
    y1 = n - 1
    z1 = 0
    x2 = floor(n + a) + 1
    y2 = n + 1
    z2 = floor(2 * b) + (1 if frac2b > Fraction(1, 2) else 0)
    lower = tuple((x1 + (sig - 1) * n, y1, z1) for sig in range(1, s + 1))
    upper = tuple((x2 - n + (sig - 1) * n, y2, z2) for sig in range(1, s + 1))
    return FrameSpec(s, n, (x1, y1, z1), (x2, y2, z2), lower, upper,
                     n - a, n + a, max(frac2b, 1 - frac2b))
