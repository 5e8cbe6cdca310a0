"""Cube complexes glued along parallel faces by perpendicular translations.

A solid is a finite set of unit cells on the integer lattice.  Interior
interfaces between adjacent cells are either transparent or blocked by a
wall.  Every remaining free face is glued to a partner face of the same
axis and opposite side whose in-plane coordinates agree, so the gluing is
a pure translation along the face normal.

Pairings come from two sources, applied in this order:

1. explicit overrides, each naming an axis, the cell whose high face is
   used, and the cell whose low face it meets;
2. street wrapping: along each axis, every maximal run of contiguous
   occupied cells (cut at walls) glues its far high face back to its near
   low face, provided neither end was claimed by an override.

Any free face still unpaired after both passes is an error: the complex
must close up into a manifold.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import pi

import numpy as np

from .errors import (
    AmbiguousPairing,
    BadTranslation,
    Disconnected,
    UnpairedFace,
    WallOutsideRange,
)

AXIS_NAMES = "xyz"


@dataclass(frozen=True)
class FaceRef:
    """One face of one cell: ``side`` 0 is the low face, 1 the high face."""

    cube: int
    axis: int
    side: int

    def describe(self, cells) -> str:
        lo_hi = "high" if self.side else "low"
        return f"{lo_hi} {AXIS_NAMES[self.axis]} face of cell {cells[self.cube]}"


class UnionFind:
    def __init__(self):
        self._parent = {}
        self._size = {}

    def find(self, x):
        parent = self._parent
        if x not in parent:
            parent[x] = x
            self._size[x] = 1
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]

    def classes(self) -> list[list]:
        groups = defaultdict(list)
        for x in self._parent:
            groups[self.find(x)].append(x)
        return list(groups.values())


# ---------------------------------------------------------------- assembly


def _as_cells(raw, dim: int) -> tuple[tuple[int, ...], ...]:
    cells = []
    for c in raw:
        cell = tuple(int(v) for v in c)
        if len(cell) != dim:
            raise ValueError(f"cell {c} is not {dim}-dimensional")
        cells.append(cell)
    if not cells:
        raise ValueError("empty cell set")
    if len(set(cells)) != len(cells):
        raise ValueError("duplicate cells")
    return tuple(cells)


def _as_walls(raw, dim: int, occupied) -> frozenset:
    """Walls come flat as [axis, x, y, ...] or nested as (axis, (x, y, ...))."""
    walls = set()
    for w in raw:
        if len(w) == 2 and isinstance(w[1], (tuple, list)):
            axis = int(w[0])
            pos = tuple(int(v) for v in w[1])
        else:
            axis, *rest = (int(v) for v in w)
            pos = tuple(rest)
        if not 0 <= axis < dim or len(pos) != dim:
            raise ValueError(f"malformed wall {w}")
        far = _shift(pos, axis, +1)
        if pos not in occupied or far not in occupied:
            raise WallOutsideRange(
                f"wall {w} is not an interface between two occupied cells"
            )
        walls.add((axis, pos))
    return frozenset(walls)


def _shift(pos, axis: int, delta: int):
    out = list(pos)
    out[axis] += delta
    return tuple(out)


def _check_connected(cells, index, dim: int):
    seen = {0}
    stack = [0]
    while stack:
        c = cells[stack.pop()]
        for axis in range(dim):
            for delta in (-1, 1):
                j = index.get(_shift(c, axis, delta))
                if j is not None and j not in seen:
                    seen.add(j)
                    stack.append(j)
    if len(seen) != len(cells):
        raise Disconnected(f"only {len(seen)} of {len(cells)} cells are reachable")


def _free_faces(cells, index, walls, dim: int) -> list[FaceRef]:
    out = []
    for i, c in enumerate(cells):
        for axis in range(dim):
            for side in (0, 1):
                neighbour = _shift(c, axis, +1 if side else -1)
                interface = (axis, c if side else neighbour)
                if neighbour not in index or interface in walls:
                    out.append(FaceRef(i, axis, side))
    return out


def _street_runs(cells, walls, dim: int, axis: int):
    """Maximal contiguous occupied runs along ``axis``, cut at walls.

    Yields (line_key, positions) with positions ascending and consecutive.
    """
    lines = defaultdict(list)
    for c in cells:
        lines[c[:axis] + c[axis + 1:]].append(c[axis])
    for key in sorted(lines):
        xs = sorted(lines[key])
        run = [xs[0]]
        for x in xs[1:]:
            prev_cell = key[:axis] + (run[-1],) + key[axis:]
            if x == run[-1] + 1 and (axis, prev_cell) not in walls:
                run.append(x)
            else:
                yield key, run
                run = [x]
        yield key, run


def _unproject(key, axis: int, v: int):
    return key[:axis] + (v,) + key[axis:]


def _assemble(cells, dim: int, walls, overrides, index):
    """Pair every free face; returns (gluings, normalised overrides)."""
    gluings: dict[FaceRef, tuple[FaceRef, tuple[int, ...]]] = {}
    taken: set[FaceRef] = set()
    free = set(_free_faces(cells, index, walls, dim))

    def register(face_hi: FaceRef, face_lo: FaceRef, t_axis: int, axis: int):
        for f in (face_hi, face_lo):
            if f in gluings or f in taken:
                raise AmbiguousPairing(f"{f.describe(cells)} is claimed twice")
            if f not in free:
                raise AmbiguousPairing(
                    f"{f.describe(cells)} is an interior face and cannot be glued"
                )
        t = tuple(t_axis if a == axis else 0 for a in range(dim))
        t_back = tuple(-v for v in t)
        gluings[face_hi] = (face_lo, t)
        gluings[face_lo] = (face_hi, t_back)
        taken.update((face_hi, face_lo))

    normalised = []
    for ov in overrides:
        axis, hi_cell, lo_cell = ov
        axis = int(axis)
        hi_cell = tuple(int(v) for v in hi_cell)
        lo_cell = tuple(int(v) for v in lo_cell)
        if hi_cell not in index or lo_cell not in index:
            raise ValueError(f"override {ov} names an unoccupied cell")
        in_plane_hi = hi_cell[:axis] + hi_cell[axis + 1:]
        in_plane_lo = lo_cell[:axis] + lo_cell[axis + 1:]
        if in_plane_hi != in_plane_lo:
            raise BadTranslation(
                f"override {ov} is not a perpendicular translation: "
                f"in-plane coordinates {in_plane_hi} vs {in_plane_lo}"
            )
        register(
            FaceRef(index[hi_cell], axis, 1),
            FaceRef(index[lo_cell], axis, 0),
            lo_cell[axis] - (hi_cell[axis] + 1),
            axis,
        )
        normalised.append((axis, hi_cell, lo_cell))

    for axis in range(dim):
        for key, run in _street_runs(cells, walls, dim, axis):
            lo_cell = _unproject(key, axis, run[0])
            hi_cell = _unproject(key, axis, run[-1])
            face_lo = FaceRef(index[lo_cell], axis, 0)
            face_hi = FaceRef(index[hi_cell], axis, 1)
            if face_lo in taken or face_hi in taken:
                continue
            register(face_hi, face_lo, run[0] - (run[-1] + 1), axis)

    missing = [f for f in free if f not in gluings]
    if missing:
        names = "; ".join(f.describe(cells) for f in sorted(
            missing, key=lambda f: (f.cube, f.axis, f.side))[:4])
        raise UnpairedFace(f"{len(missing)} free faces left unpaired: {names}")
    return gluings, tuple(normalised)


# ------------------------------------------------------------ edge classes


@dataclass(frozen=True)
class EdgeClass:
    """An identification class of unit lattice edges, all parallel."""

    axis: int
    members: tuple[tuple[int, ...], ...]
    quadrant_count: int

    @property
    def is_singular(self) -> bool:
        return self.quadrant_count != 4

    @property
    def cone_angle(self) -> float:
        return self.quadrant_count * (pi / 2)


def _face_edges(face: FaceRef, cells, dim: int):
    """The boundary edges of a face, as (axis, base_point) keys."""
    c = cells[face.cube]
    origin = _shift(c, face.axis, face.side)
    in_plane = [a for a in range(dim) if a != face.axis]
    b, cc = in_plane
    return [
        (b, origin),
        (b, _shift(origin, cc, 1)),
        (cc, origin),
        (cc, _shift(origin, b, 1)),
    ]


def _edge_quadrants(edge, occupied, dim: int) -> int:
    axis, pt = edge
    b, cc = [a for a in range(dim) if a != axis]
    count = 0
    for db, dc in product((0, 1), repeat=2):
        cell = _shift(_shift(pt, b, -db), cc, -dc)
        if cell in occupied:
            count += 1
    return count


# ------------------------------------------------------------- solid types


class Manifold:
    """A closed translation complex of unit cubes, with fast hop tables.

    ``hop[axis, side, i]`` is the index of the cell entered when leaving
    cell ``i`` through that face, whether by plain adjacency or a gluing.
    Local coordinates never need translating: the crossed coordinate
    resets to the entering side and in-plane coordinates carry over.
    """

    dim = 3

    def __init__(self, name, cells, walls, gluings, overrides,
                 block_index=None, diagram_labels=None, notes=""):
        self.name = name
        self.cells = cells
        self.index = {c: i for i, c in enumerate(cells)}
        self.walls = walls
        self.gluings = gluings
        self.overrides = overrides
        self.block_index = block_index
        self.diagram_labels = diagram_labels
        self.notes = notes
        self._edge_classes = None
        self.hop = self._build_hops()

    @property
    def size(self) -> int:
        return len(self.cells)

    def _build_hops(self) -> np.ndarray:
        hop = np.full((self.dim, 2, len(self.cells)), -1, dtype=np.int64)
        for i, c in enumerate(self.cells):
            for axis in range(self.dim):
                for side in (0, 1):
                    neighbour = _shift(c, axis, +1 if side else -1)
                    interface = (axis, c if side else neighbour)
                    j = self.index.get(neighbour)
                    if j is not None and interface not in self.walls:
                        hop[axis, side, i] = j
                    else:
                        partner, _ = self.gluings[FaceRef(i, axis, side)]
                        hop[axis, side, i] = partner.cube
        assert (hop >= 0).all()
        return hop

    def partner(self, face: FaceRef):
        return self.gluings[face]

    def edge_classes(self) -> list[EdgeClass]:
        """All identification classes of edges lying on glued faces."""
        if self._edge_classes is None:
            uf = UnionFind()
            for face, (mate, t) in self.gluings.items():
                for axis, pt in _face_edges(face, self.cells, self.dim):
                    moved = (axis, tuple(p + dt for p, dt in zip(pt, t)))
                    uf.union((axis, pt), moved)
            occupied = set(self.cells)
            classes = []
            for group in uf.classes():
                axis = group[0][0]
                members = tuple(sorted(pt for _, pt in group))
                quads = sum(_edge_quadrants(e, occupied, self.dim) for e in group)
                classes.append(EdgeClass(axis, members, quads))
            classes.sort(key=lambda c: (c.axis, c.members))
            self._edge_classes = classes
        return self._edge_classes

    def singular_edge_classes(self) -> list[EdgeClass]:
        return [c for c in self.edge_classes() if c.is_singular]

    def summary(self) -> dict:
        singular = self.singular_edge_classes()
        return {
            "name": self.name,
            "cells": self.size,
            "walls": len(self.walls),
            "gluing_overrides": len(self.overrides),
            "glued_face_pairs": len(self.gluings) // 2,
            "edge_classes": len(self.edge_classes()),
            "singular_edge_classes": len(singular),
            "singular_quadrant_counts": sorted(c.quadrant_count for c in singular),
        }


def build_manifold(cubes, walls=(), gluing_overrides=(), name="manifold",
                   block_index=None, diagram_labels=None, notes="") -> Manifold:
    cells = _as_cells(cubes, 3)
    index = {c: i for i, c in enumerate(cells)}
    wall_set = _as_walls(walls, 3, index)
    _check_connected(cells, index, 3)
    gluings, overrides = _assemble(cells, 3, wall_set, gluing_overrides, index)
    return Manifold(name, cells, wall_set, gluings, overrides,
                    block_index=block_index, diagram_labels=diagram_labels,
                    notes=notes)


class PolysquareSurface:
    """A closed translation surface of unit squares, the 2-d analogue."""

    dim = 2

    def __init__(self, name, cells, walls, gluings, overrides,
                 diagram_labels=None, notes=""):
        self.name = name
        self.cells = cells
        self.index = {c: i for i, c in enumerate(cells)}
        self.walls = walls
        self.gluings = gluings
        self.overrides = overrides
        self.diagram_labels = diagram_labels
        self.notes = notes

    @property
    def size(self) -> int:
        return len(self.cells)

    def _pairings(self):
        """Every identified pair of edges: gluings plus plain adjacencies."""
        for face, (mate, t) in self.gluings.items():
            if face.side == 1:
                yield face, mate, t
        for i, c in enumerate(self.cells):
            for axis in range(2):
                far = _shift(c, axis, +1)
                j = self.index.get(far)
                if j is not None and (axis, c) not in self.walls:
                    yield FaceRef(i, axis, 1), FaceRef(j, axis, 0), (0, 0)

    def count_vertex_classes(self) -> int:
        """Number of vertex identification classes of the closed surface."""
        uf = UnionFind()
        for i in range(len(self.cells)):
            for corner in product((0, 1), repeat=2):
                uf.find((i, corner))
        for face, mate, t in self._pairings():
            c = self.cells[face.cube]
            origin = _shift(c, face.axis, face.side)
            other_axis = 1 - face.axis
            for end in (origin, _shift(origin, other_axis, 1)):
                image = tuple(p + dt for p, dt in zip(end, t))
                corner_a = tuple(e - p for e, p in zip(end, c))
                corner_b = tuple(e - p for e, p in
                                 zip(image, self.cells[mate.cube]))
                uf.union((face.cube, corner_a), (mate.cube, corner_b))
        return len(uf.classes())

    def product_with_circle(self) -> Manifold:
        """Thicken each square to a cube and close the third direction."""
        cubes = [c + (0,) for c in self.cells]
        walls = [(axis, pos + (0,)) for axis, pos in self.walls]
        overrides = [(axis, hi + (0,), lo + (0,))
                     for axis, hi, lo in self.overrides]
        return build_manifold(cubes, walls, overrides, name=self.name,
                              diagram_labels=self.diagram_labels,
                              notes=self.notes)


def build_surface(squares, walls=(), gluing_overrides=(), name="surface",
                  diagram_labels=None, notes="") -> PolysquareSurface:
    cells = _as_cells(squares, 2)
    index = {c: i for i, c in enumerate(cells)}
    wall_set = _as_walls(walls, 2, index)
    _check_connected(cells, index, 2)
    gluings, overrides = _assemble(cells, 2, wall_set, gluing_overrides, index)
    return PolysquareSurface(name, cells, wall_set, gluings, overrides,
                             diagram_labels=diagram_labels, notes=notes)


# ------------------------------------------------------------ constructions


def split_cover(base: Manifold, fold: int, extra_walls=()) -> Manifold:
    """Unroll ``base`` ``fold`` times along x, then add the given walls.

    Copies are laid side by side at x-offsets of multiples of the base
    width, so the x streets run through all copies and wrap around the
    whole cover.  ``extra_walls`` are interfaces in covered coordinates;
    base walls are replicated into every copy.
    """
    if fold < 1:
        raise ValueError("fold must be >= 1")
    if base.overrides:
        raise ValueError("covering a base with explicit gluing overrides "
                         "is not supported")
    xs = [c[0] for c in base.cells]
    width = max(xs) + 1 - min(xs)
    cubes = []
    block = []
    for j in range(fold):
        for c in base.cells:
            cubes.append((c[0] + j * width, c[1], c[2]))
            block.append(j)
    walls = [(axis, (pos[0] + j * width,) + pos[1:])
             for j in range(fold) for axis, pos in base.walls]
    walls.extend((int(w[0]), tuple(int(v) for v in w[1:]))
                 for w in extra_walls)
    return build_manifold(cubes, walls, name=f"{base.name}_cover{fold}",
                          block_index=tuple(block))


def magnify(m: Manifold, n: int) -> Manifold:
    """Subdivide every cell of ``m`` into n^3 cells.

    Walls and overrides are carried along: each becomes the n^2 interfaces
    or face pairs tiling the original one, and every gluing translation
    scales by n.  Street wrapping then reproduces the refined gluings.
    """
    if n < 1:
        raise ValueError("magnification must be >= 1")
    cubes = []
    block = []
    for parent_idx, c in enumerate(m.cells):
        for off in product(range(n), repeat=3):
            cubes.append(tuple(n * p + o for p, o in zip(c, off)))
            if m.block_index is not None:
                block.append(m.block_index[parent_idx])

    def tile_interface(axis, pos, near_offset):
        b, cc = [a for a in range(3) if a != axis]
        base = _shift(tuple(n * p for p in pos), axis, near_offset)
        for u in range(n):
            for v in range(n):
                yield _shift(_shift(base, b, u), cc, v)

    walls = [(axis, sub) for axis, pos in m.walls
             for sub in tile_interface(axis, pos, n - 1)]
    overrides = []
    for axis, hi_cell, lo_cell in m.overrides:
        his = list(tile_interface(axis, hi_cell, n - 1))
        los = list(tile_interface(axis, lo_cell, 0))
        overrides.extend((axis, h, l) for h, l in zip(his, los))
    return build_manifold(
        cubes, walls, overrides, name=f"{m.name}_x{n}",
        block_index=tuple(block) if m.block_index is not None else None)


# ----------------------------------------------------------- array pattern


def _x_street_of(m: Manifold, cell) -> list:
    """Cells of the wall-cut x run through ``cell``, in ascending x."""
    run = [cell]
    while True:
        c = run[0]
        prev = _shift(c, 0, -1)
        if prev not in m.index or (0, prev) in m.walls:
            break
        run.insert(0, prev)
    while True:
        c = run[-1]
        if (0, c) in m.walls or _shift(c, 0, +1) not in m.index:
            break
        run.append(_shift(c, 0, +1))
    return run


def check_street_wall_array(m: Manifold, s: int):
    """Look for an s x 2 x 1 block of cells in which one y-row is a single
    wrapping x street of length s while every cell of the other y-row has
    an x street of length 1.

    Returns (found, witness); the witness records the block position and
    which row carries the street.
    """
    if s < 1:
        raise ValueError("street length must be >= 1")
    occupied = m.index
    for cell in m.cells:
        x0, y0, z0 = cell
        street = _x_street_of(m, cell)
        if len(street) != s or street[0] != cell:
            continue
        lo_face = FaceRef(m.index[street[0]], 0, 0)
        mate, _ = m.gluings.get(lo_face, (None, None))
        if mate != FaceRef(m.index[street[-1]], 0, 1):
            continue
        for dy, label in ((1, "street_below"), (-1, "street_above")):
            other = [(x0 + i, y0 + dy, z0) for i in range(s)]
            if not all(c in occupied for c in other):
                continue
            if all(len(_x_street_of(m, c)) == 1 for c in other):
                return True, {
                    "x0": x0, "z": z0, "street_y": y0, "wall_y": y0 + dy,
                    "orientation": label, "street_cells": street,
                }
    return False, None
