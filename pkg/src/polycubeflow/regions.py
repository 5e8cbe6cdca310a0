"""Rectangle unions on bottom faces, and voxel solids for z-fiber fractions.

A region stores, per face, the rectangles it was built from plus a
normalized columnar form: x-breakpoints partitioning [0, 1) into slabs,
each slab carrying an exact arc union of z-values.  Boolean operations,
areas and cross-sections all run on the columns; boundary-touch queries
run on the original rectangles, whose frames are meaningful to the
census even where the point set is unchanged by renormalization.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cf import as_fraction
from .circle import IntervalUnion

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class FaceRect:
    """A chart rectangle (x_lo, x_hi) x (z_lo, z_hi) on one face."""

    face: int
    x_lo: Fraction
    x_hi: Fraction
    z_lo: Fraction
    z_hi: Fraction

    def __post_init__(self):
        if not (_ZERO <= self.x_lo < self.x_hi <= _ONE
                and _ZERO <= self.z_lo < self.z_hi <= _ONE):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def frame(self):
        """The four closed edge segments, as (axis, level, lo, hi)."""
        return (
            ("x", self.x_lo, self.z_lo, self.z_hi),
            ("x", self.x_hi, self.z_lo, self.z_hi),
            ("z", self.z_lo, self.x_lo, self.x_hi),
            ("z", self.z_hi, self.x_lo, self.x_hi),
        )


def _rect(face, x_lo, x_hi, z_lo, z_hi) -> FaceRect:
    return FaceRect(int(face), as_fraction(x_lo), as_fraction(x_hi),
                    as_fraction(z_lo), as_fraction(z_hi))


class RectangleUnionRegion:
    """A finite union of axis-aligned rectangles over the faces 0..d-1."""

    def __init__(self, n_faces: int, rects=()):
        self.n_faces = int(n_faces)
        self.rects: tuple[FaceRect, ...] = tuple(
            r if isinstance(r, FaceRect) else _rect(*r) for r in rects)
        for r in self.rects:
            if not 0 <= r.face < self.n_faces:
                raise ValueError(f"face {r.face} outside 0..{self.n_faces - 1}")
        self._columns = [self._build_columns(f) for f in range(self.n_faces)]
        self._float_cache = None

    # ------------------------------------------------------- construction

    @classmethod
    def empty(cls, n_faces: int) -> "RectangleUnionRegion":
        return cls(n_faces)

    @classmethod
    def full(cls, n_faces: int) -> "RectangleUnionRegion":
        return cls(n_faces, [(f, 0, 1, 0, 1) for f in range(n_faces)])

    @classmethod
    def uniform(cls, n_faces: int, x_lo, x_hi, z_lo=0, z_hi=1
                ) -> "RectangleUnionRegion":
        """The same rectangle on every face."""
        return cls(n_faces, [(f, x_lo, x_hi, z_lo, z_hi)
                             for f in range(n_faces)])

    def _build_columns(self, face: int):
        rects = [r for r in self.rects if r.face == face]
        breaks = sorted({_ZERO, _ONE}
                        | {r.x_lo for r in rects} | {r.x_hi for r in rects})
        cols = []
        for lo, hi in zip(breaks, breaks[1:]):
            mid = (lo + hi) / 2
            arcs = [(r.z_lo, r.z_hi) for r in rects if r.x_lo < mid < r.x_hi]
            cols.append(IntervalUnion.from_pairs(arcs))
        return tuple(breaks), tuple(cols)

    @classmethod
    def _from_columns(cls, n_faces: int, columns) -> "RectangleUnionRegion":
        region = cls.__new__(cls)
        region.n_faces = n_faces
        region.rects = ()
        region._columns = list(columns)
        region._float_cache = None
        return region

    # ------------------------------------------------------------ queries

    def column(self, face: int, x) -> IntervalUnion:
        """The z-set of the slab containing x; x must avoid slab edges."""
        xf = as_fraction(x)
        breaks, cols = self._columns[face]
        if xf in breaks:
            raise ValueError(f"x = {xf} lies on a rectangle edge")
        if not _ZERO < xf < _ONE:
            raise ValueError(f"x = {xf} outside the open face chart")
        return cols[bisect_right(breaks, xf) - 1]

    def contains(self, face: int, x, z) -> bool:
        return self.column(face, x).contains(z)

    @property
    def area(self) -> Fraction:
        total = _ZERO
        for breaks, cols in self._columns:
            for lo, hi, col in zip(breaks, breaks[1:], cols):
                total += (hi - lo) * col.measure
        return total

    def area_in_rect(self, face: int, x_lo, x_hi, z_lo, z_hi) -> Fraction:
        """Exact area of the region inside one chart rectangle."""
        x_lo, x_hi = as_fraction(x_lo), as_fraction(x_hi)
        band = IntervalUnion.from_pairs([(as_fraction(z_lo), as_fraction(z_hi))])
        breaks, cols = self._columns[face]
        total = _ZERO
        for lo, hi, col in zip(breaks, breaks[1:], cols):
            w = min(hi, x_hi) - max(lo, x_lo)
            if w > 0 and not col.is_empty:
                total += w * col.intersect(band).measure
        return total

    def touches_frame(self, face: int, x_lo, x_hi, z_lo, z_hi) -> bool:
        """Does the closed rectangle meet any input rectangle's frame?"""
        x_lo, x_hi = as_fraction(x_lo), as_fraction(x_hi)
        z_lo, z_hi = as_fraction(z_lo), as_fraction(z_hi)
        for r in self.rects:
            if r.face != face:
                continue
            for axis, level, lo, hi in r.frame:
                if axis == "x":
                    if x_lo <= level <= x_hi and z_lo <= hi and lo <= z_hi:
                        return True
                else:
                    if z_lo <= level <= z_hi and x_lo <= hi and lo <= x_hi:
                        return True
        return False

    # ------------------------------------------------------- boolean ops

    def _combine(self, other: "RectangleUnionRegion", op
                 ) -> "RectangleUnionRegion":
        if self.n_faces != other.n_faces:
            raise ValueError("regions live over different face counts")
        columns = []
        for f in range(self.n_faces):
            breaks_a, _ = self._columns[f]
            breaks_b, _ = other._columns[f]
            breaks = tuple(sorted(set(breaks_a) | set(breaks_b)))
            cols = []
            for lo, hi in zip(breaks, breaks[1:]):
                mid = (lo + hi) / 2
                a = self._columns[f][1][bisect_right(breaks_a, mid) - 1]
                b = other._columns[f][1][bisect_right(breaks_b, mid) - 1]
                cols.append(op(a, b))
            columns.append((breaks, tuple(cols)))
        return RectangleUnionRegion._from_columns(self.n_faces, columns)

    def union(self, other):
        return self._combine(other, IntervalUnion.union)

    def intersect(self, other):
        return self._combine(other, IntervalUnion.intersect)

    def symmetric_difference(self, other):
        return self._combine(other, IntervalUnion.symmetric_difference)

    def complement(self) -> "RectangleUnionRegion":
        return RectangleUnionRegion.full(self.n_faces).symmetric_difference(self)

    # --------------------------------------------------- float fast path

    def _floats(self):
        if self._float_cache is None:
            per_face = []
            for breaks, cols in self._columns:
                edges = np.array([float(b) for b in breaks])
                bounds = [np.array([float(v) for arc in col.arcs for v in arc])
                          for col in cols]
                per_face.append((edges, bounds))
            self._float_cache = per_face
        return self._float_cache

    def contains_points(self, faces, xs, zs) -> np.ndarray:
        """Vectorised membership for float orbit samples."""
        faces = np.asarray(faces)
        xs = np.asarray(xs, dtype=np.float64)
        zs = np.asarray(zs, dtype=np.float64)
        out = np.zeros(len(xs), dtype=bool)
        per_face = self._floats()
        for f in range(self.n_faces):
            mask = faces == f
            if not mask.any():
                continue
            edges, bounds = per_face[f]
            col_idx = np.searchsorted(edges, xs[mask], side="right") - 1
            col_idx = np.clip(col_idx, 0, len(bounds) - 1)
            inside = np.zeros(mask.sum(), dtype=bool)
            for c in np.unique(col_idx):
                b = bounds[c]
                if b.size:
                    sel = col_idx == c
                    pos = np.searchsorted(b, zs[mask][sel], side="right")
                    inside[sel] = pos % 2 == 1
            out[mask] = inside
        return out


# -------------------------------------------------------------- sections


def z_cross_section(region: RectangleUnionRegion, face: int, x
                    ) -> IntervalUnion:
    """The z-values over (face, x) that lie in the region, exactly."""
    return region.column(face, x)


def multiplicity_profile(region: RectangleUnionRegion, p) -> int:
    """How many of the d fiber points over a torus point lie in the region.

    On a product-type manifold the fiber over (x, z) has one point per
    face at the same local coordinates, so the count plus the count for
    the complement region is always the face total.
    """
    x, z = p
    return sum(region.contains(f, x, z) for f in range(region.n_faces))


# ------------------------------------------------------------ voxel solid


class VoxelRegion3:
    """A subset of the solid built from an r^3 occupancy grid per cell."""

    def __init__(self, cells, resolution: int, occupancy=None):
        self.cells = tuple(tuple(c) for c in cells)
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.resolution = int(resolution)
        n, r = len(self.cells), self.resolution
        if occupancy is None:
            occupancy = np.zeros((n, r, r, r), dtype=bool)
        self.occupancy = occupancy

    @classmethod
    def lower_z_half(cls, cells, resolution: int) -> "VoxelRegion3":
        region = cls(cells, resolution)
        region.occupancy[:, :, :, : resolution // 2] = True
        return region

    @classmethod
    def single_cell(cls, cells, resolution: int, cell) -> "VoxelRegion3":
        region = cls(cells, resolution)
        region.occupancy[region.index[tuple(cell)]] = True
        return region

    @property
    def volume(self) -> Fraction:
        return Fraction(int(self.occupancy.sum()), self.resolution ** 3)

    def column_fraction(self, x, y) -> Fraction:
        """Occupied fraction of the z-fiber through global point (x, y)."""
        cx, cy = int(np.floor(x)), int(np.floor(y))
        stack = [i for i, c in enumerate(self.cells)
                 if c[0] == cx and c[1] == cy]
        if not stack:
            raise ValueError(f"({x}, {y}) outside the solid's footprint")
        r = self.resolution
        ix = min(int((float(x) - cx) * r), r - 1)
        iy = min(int((float(y) - cy) * r), r - 1)
        occupied = sum(int(self.occupancy[i, ix, iy, :].sum()) for i in stack)
        return Fraction(occupied, len(stack) * r)


@dataclass(frozen=True)
class CrossSection:
    """A z-fiber fraction with the invariant-region band it is tested
    against (face count d gives the band [1/d, (d-1)/d])."""

    value: Fraction
    band_lo: Fraction
    band_hi: Fraction

    @property
    def in_band(self) -> bool:
        return self.band_lo <= self.value <= self.band_hi


def cross_section_fraction(region3: VoxelRegion3, x, y,
                           z_samples: int = 0) -> CrossSection:
    """Fraction of the z-fiber over (x, y) inside the solid region.

    Exact by default (a voxel column count); with ``z_samples`` set the
    fiber is instead sampled at stratified heights, which is useful as an
    independent cross-check of the column count.
    """
    d = len(region3.cells)
    band_lo, band_hi = Fraction(1, d), Fraction(d - 1, d)
    if z_samples:
        cx, cy = int(np.floor(x)), int(np.floor(y))
        stack = [(i, c) for i, c in enumerate(region3.cells)
                 if c[0] == cx and c[1] == cy]
        if not stack:
            raise ValueError(f"({x}, {y}) outside the solid's footprint")
        r = region3.resolution
        ix = min(int((float(x) - cx) * r), r - 1)
        iy = min(int((float(y) - cy) * r), r - 1)
        hits = 0
        for t in range(z_samples):
            zf = (2 * t + 1) / (2 * z_samples) * len(stack)
            i, _ = stack[min(int(zf), len(stack) - 1)]
            iz = min(int((zf % 1) * r), r - 1)
            hits += bool(region3.occupancy[i, ix, iy, iz])
        return CrossSection(Fraction(hits, z_samples), band_lo, band_hi)
    return CrossSection(region3.column_fraction(x, y), band_lo, band_hi)
