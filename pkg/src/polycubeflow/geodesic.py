"""Straight-line flow through a cube complex in a fixed direction.

The direction is (alpha, 1, beta) with both slopes in (0, 1), so the
y-coordinate advances at unit speed and can serve as the time parameter.
Local coordinates live in the unit cube of the current cell; crossing any
face resets the crossed coordinate to 0 and keeps the other two, because
every gluing is a perpendicular translation.

Two granularities are provided: ``next_hit``/``trace`` resolve every face
crossing, while the first-return map ``y_face_map`` jumps a full unit of
y at a time and only works out the cell itinerary in between.  The latter
is also available as a vectorised step over numpy arrays.

Arithmetic is type-agnostic: pass floats for speed or Fractions for exact
decisions (ties then raise SingularHit only when genuinely singular).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import Direction
from .errors import NumericalStall, SingularHit
from .manifold import FaceRef, Manifold

_ONE_BELOW = math.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class ManifoldPoint:
    cube: int
    x: object
    y: object
    z: object

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not 0 <= v <= 1:
                raise ValueError(f"local coordinate {v} outside [0, 1]")

    def coords(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class HitEvent:
    """One face crossing: cumulative y-time, the face entered, and the
    point just after entering."""

    time: object
    face: FaceRef
    point: ManifoldPoint


@dataclass
class OrbitTrace:
    events: list
    y_advance: object
    y_hits: int
    terminated_by: str


def _clamp(v):
    """Keep a float coordinate strictly below 1 after rounding noise."""
    if isinstance(v, float) and v >= 1.0:
        return _ONE_BELOW
    return v


def next_hit(m: Manifold, point: ManifoldPoint, direction: Direction,
             exact: bool = False) -> HitEvent:
    """The first face crossing downstream of ``point``.

    With ``exact`` the direction's rational stand-ins are used, so a
    reported corner tie is a true singular hit rather than a rounding
    artefact.
    """
    if exact:
        a, b = direction.alpha_fraction, direction.beta_fraction
    else:
        a, b = direction.alpha_float, direction.beta_float
    x, y, z = point.coords()
    times = [(1 - x) / a, (1 - y), (1 - z) / b]
    t = min(times)
    if t <= 0:
        raise NumericalStall(
            f"no forward progress from {point}; start strictly inside a cell"
        )
    hits = [axis for axis in range(3) if times[axis] == t]
    if len(hits) > 1:
        raise SingularHit(f"orbit meets an edge of {m.name} at {point}")
    axis = hits[0]
    new_cube = int(m.hop[axis, 1, point.cube])
    coords = [x + t * a, y + t, z + t * b]
    for i in range(3):
        coords[i] = 0 if i == axis else _clamp(coords[i])
    entered = ManifoldPoint(new_cube, *coords)
    return HitEvent(t, FaceRef(new_cube, axis, 0), entered)


def trace(m: Manifold, point: ManifoldPoint, direction: Direction,
          y_span=None, max_events: int = 10_000, exact: bool = False) -> OrbitTrace:
    """Follow the orbit, recording every face crossing.

    Stops after advancing ``y_span`` in y (if given), after ``max_events``
    crossings, or at a singular hit; the trace says which.
    """
    events = []
    advanced = 0
    y_hits = 0
    terminated = "budget"
    while len(events) < max_events:
        if y_span is not None and advanced >= y_span:
            terminated = "span"
            break
        try:
            hit = next_hit(m, point, direction, exact=exact)
        except SingularHit:
            terminated = "singular"
            break
        advanced = advanced + hit.time
        hit = HitEvent(advanced, hit.face, hit.point)
        events.append(hit)
        if hit.face.axis == 1:
            y_hits += 1
        point = hit.point
    else:
        terminated = "budget"
    return OrbitTrace(events, advanced, y_hits, terminated)


# ---------------------------------------------------------- first return


def y_face_map(m: Manifold, cube: int, x, z, direction: Direction,
               exact: bool = False):
    """One unit of y-time, starting and ending on a bottom face.

    (cube, x, z) are the cell and in-face coordinates with y = 0; the
    image has coordinates ({x + alpha}, {z + beta}) and the returned cell
    accounts for the up-to-two side crossings, ordered by comparing
    (1 - x) * beta with (1 - z) * alpha, before the final y hop.
    """
    if exact:
        a, b = direction.alpha_fraction, direction.beta_fraction
    else:
        a, b = direction.alpha_float, direction.beta_float
    hop = m.hop
    x2 = x + a
    z2 = z + b
    if exact and (x2 == 1 or z2 == 1):
        raise SingularHit(f"orbit lands exactly on a face edge of {m.name}")
    x_cross = x2 >= 1
    z_cross = z2 >= 1
    if x_cross and z_cross:
        tx = (1 - x) * b
        tz = (1 - z) * a
        if tx == tz:
            raise SingularHit(f"orbit meets a y-parallel edge of {m.name}")
        if tx < tz:
            cube = int(hop[2, 1, int(hop[0, 1, cube])])
        else:
            cube = int(hop[0, 1, int(hop[2, 1, cube])])
    elif x_cross:
        cube = int(hop[0, 1, cube])
    elif z_cross:
        cube = int(hop[2, 1, cube])
    cube = int(hop[1, 1, cube])
    if x_cross:
        x2 = x2 - 1
    if z_cross:
        z2 = z2 - 1
    return cube, _clamp(x2), _clamp(z2)


def y_face_orbit(m: Manifold, cube: int, x: float, z: float,
                 direction: Direction, n_steps: int):
    """Iterate the first-return map, yielding (cube, x, z) after each step.

    Plain-float scalar loop; for long single orbits this outruns the
    vectorised path, which pays numpy overhead per step.
    """
    a, b = direction.alpha_float, direction.beta_float
    hop = m.hop
    hx, hy, hz = hop[0, 1], hop[1, 1], hop[2, 1]
    step = 0
    while step < n_steps:
        step += 1
        x2 = x + a
        z2 = z + b
        if x2 >= 1.0:
            if z2 >= 1.0:
                if (1.0 - x) * b == (1.0 - z) * a:
                    raise SingularHit(
                        f"orbit meets a y-parallel edge of {m.name}", step=step)
                if (1.0 - x) * b < (1.0 - z) * a:
                    cube = hz[hx[cube]]
                else:
                    cube = hx[hz[cube]]
                z2 -= 1.0
            else:
                cube = hx[cube]
            x2 -= 1.0
        elif z2 >= 1.0:
            cube = hz[cube]
            z2 -= 1.0
        cube = int(hy[cube])
        x, z = x2, z2
        yield cube, x, z


def y_face_step_batch(hx, hy, hz, a: float, b: float, cube, x, z):
    """Vectorised first-return step over parallel arrays.

    Ties in the crossing order are resolved arbitrarily (they occur on a
    null set and at worst swap one itinerary entry); coordinates update
    independently of the ordering.
    """
    x2 = x + a
    z2 = z + b
    x_cross = x2 >= 1.0
    z_cross = z2 >= 1.0
    both = x_cross & z_cross
    cx = hx[cube]
    cz = hz[cube]
    x_first = (1.0 - x) * b <= (1.0 - z) * a
    new_cube = np.where(
        both,
        np.where(x_first, hz[cx], hx[cz]),
        np.where(x_cross, cx, np.where(z_cross, cz, cube)),
    )
    cube = hy[new_cube]
    return cube, x2 - x_cross, z2 - z_cross


def y_face_orbit_batch(m: Manifold, cube, x, z, direction: Direction,
                       n_steps: int, record_every: int | None = None):
    """Run many first-return orbits in lockstep.

    Returns (cube, x, z) after ``n_steps``, plus a list of
    (step, cube, x, z) snapshots if ``record_every`` is set.
    """
    a, b = direction.alpha_float, direction.beta_float
    hop = m.hop
    hx, hy, hz = hop[0, 1], hop[1, 1], hop[2, 1]
    cube = np.asarray(cube, dtype=np.int64).copy()
    x = np.asarray(x, dtype=np.float64).copy()
    z = np.asarray(z, dtype=np.float64).copy()
    snapshots = []
    for step in range(1, n_steps + 1):
        cube, x, z = y_face_step_batch(hx, hy, hz, a, b, cube, x, z)
        if record_every and step % record_every == 0:
            snapshots.append((step, cube.copy(), x.copy(), z.copy()))
    if record_every:
        return cube, x, z, snapshots
    return cube, x, z


# -------------------------------------------------------------- projection


def project_torus(point: ManifoldPoint):
    """Image on the unit 3-torus; cells sit at integer offsets, so this is
    just the local coordinate triple."""
    return point.coords()


def fiber_points(m: Manifold, coords) -> list[ManifoldPoint]:
    """All preimages of a torus point, one per cell."""
    x, y, z = coords
    return [ManifoldPoint(i, x, y, z) for i in range(m.size)]
