from fractions import Fraction

import numpy as np
import pytest

from polycubeflow import gallery
from polycubeflow.arith import Direction
from polycubeflow.cf import GOLDEN, SQRT2_MINUS_1
from polycubeflow.errors import NumericalStall, SingularHit
from polycubeflow.geodesic import (
    ManifoldPoint,
    next_hit,
    trace,
    y_face_map,
    y_face_orbit,
    y_face_orbit_batch,
)

RATIONAL = Direction(Fraction(2, 7), Fraction(3, 11))


def test_manifold_point_validates_coordinates():
    with pytest.raises(ValueError):
        ManifoldPoint(0, 1.5, 0.0, 0.0)


def test_next_hit_advances_and_lands_on_face(l_manifold, canonical):
    p = ManifoldPoint(0, 0.3, 0.1, 0.2)
    hit = next_hit(l_manifold, p, canonical)
    assert hit.time > 0
    lands_at_zero = [hit.point.x, hit.point.y, hit.point.z][hit.face.axis]
    assert lands_at_zero == 0


def test_next_hit_stalls_on_face_start(l_manifold, canonical):
    with pytest.raises(NumericalStall):
        next_hit(l_manifold, ManifoldPoint(0, 1.0, 0.5, 0.5), canonical)


def test_exact_corner_tie_is_singular(l_manifold):
    # x and y reach their faces simultaneously
    d = Direction(Fraction(1, 2), Fraction(1, 3))
    p = ManifoldPoint(0, Fraction(1, 2), Fraction(0), Fraction(1, 7))
    with pytest.raises(SingularHit):
        next_hit(l_manifold, p, d, exact=True)


def test_trace_stops_on_y_span(l_manifold, canonical):
    out = trace(l_manifold, ManifoldPoint(0, 0.3, 0.0, 0.2), canonical, y_span=5)
    assert out.terminated_by == "span"
    assert out.y_advance >= 5
    assert out.y_hits == 5
    times = [e.time for e in out.events]
    assert times == sorted(times)


def test_trace_stops_on_budget(l_manifold, canonical):
    out = trace(l_manifold, ManifoldPoint(0, 0.3, 0.0, 0.2), canonical,
                max_events=7)
    assert out.terminated_by == "budget"
    assert len(out.events) == 7


def test_trace_reports_singular_termination(l_manifold):
    # x and z faces are reached together at t = 3/2
    d = Direction(Fraction(1, 2), Fraction(1, 2))
    p = ManifoldPoint(0, Fraction(1, 4), Fraction(0), Fraction(1, 4))
    out = trace(l_manifold, p, d, exact=True, max_events=100)
    assert out.terminated_by == "singular"


def test_y_face_map_exact_matches_float(l_manifold, canonical):
    cube_f, x_f, z_f = 0, 1 / 7, 1 / 11
    cube_e, x_e, z_e = 0, Fraction(1, 7), Fraction(1, 11)
    for _ in range(60):
        cube_f, x_f, z_f = y_face_map(l_manifold, cube_f, x_f, z_f, canonical)
        cube_e, x_e, z_e = y_face_map(l_manifold, cube_e, x_e, z_e, canonical,
                                      exact=True)
        assert cube_f == cube_e
        assert abs(x_f - float(x_e)) < 1e-12
        assert abs(z_f - float(z_e)) < 1e-12


def test_y_face_map_exact_raises_on_edge_landing():
    m = gallery.load_manifold("unit_torus")
    with pytest.raises(SingularHit):
        y_face_map(m, 0, Fraction(5, 7), Fraction(1, 7), RATIONAL, exact=True)


def test_float_orbit_tie_raises_with_step():
    m = gallery.load_manifold("unit_torus")
    d = Direction(0.5, 0.5)
    with pytest.raises(SingularHit) as err:
        for _ in y_face_orbit(m, 0, 0.25, 0.25, d, 10):
            pass
    assert err.value.step == 2


def test_orbit_on_torus_is_a_rotation(canonical):
    m = gallery.load_manifold("unit_torus")
    a, b = canonical.alpha_float, canonical.beta_float
    x, z = 0.2, 0.7
    for n, (cube, xn, zn) in enumerate(y_face_orbit(m, 0, x, z, canonical, 1000),
                                       start=1):
        assert cube == 0
        assert abs(xn - (x + n * a) % 1) < 1e-9
        assert abs(zn - (z + n * b) % 1) < 1e-9


def test_batch_matches_scalar_orbits(l_manifold, canonical):
    rng = np.random.default_rng(7)
    n = 64
    cubes = rng.integers(0, l_manifold.size, n)
    xs = rng.uniform(0.01, 0.99, n)
    zs = rng.uniform(0.01, 0.99, n)
    bc, bx, bz = y_face_orbit_batch(l_manifold, cubes, xs, zs, canonical, 200)
    for i in range(n):
        cube, x, z = cubes[i], xs[i], zs[i]
        for cube, x, z in y_face_orbit(l_manifold, int(cube), float(x), float(z),
                                       canonical, 200):
            pass
        assert bc[i] == cube
        assert bx[i] == pytest.approx(x, abs=1e-12)
        assert bz[i] == pytest.approx(z, abs=1e-12)


def test_batch_snapshots_are_prefix_states(l_manifold, canonical):
    xs = np.array([0.15, 0.35])
    zs = np.array([0.45, 0.65])
    cubes = np.array([0, 1])
    _, _, _, snaps = y_face_orbit_batch(l_manifold, cubes, xs, zs, canonical,
                                        100, record_every=50)
    assert [s[0] for s in snaps] == [50, 100]
    c50, x50, z50 = y_face_orbit_batch(l_manifold, cubes, xs, zs, canonical, 50)
    assert np.array_equal(snaps[0][1], c50)
    assert np.array_equal(snaps[0][2], x50)
    assert np.array_equal(snaps[0][3], z50)
