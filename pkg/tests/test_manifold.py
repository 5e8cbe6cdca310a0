from fractions import Fraction

import numpy as np
import pytest

from polycubeflow import gallery
from polycubeflow.errors import (
    AmbiguousPairing,
    BadTranslation,
    Disconnected,
    UnpairedFace,
    WallOutsideRange,
)
from polycubeflow.manifold import (
    build_manifold,
    build_surface,
    check_street_wall_array,
    magnify,
    split_cover,
)

# the bundled L uses diagram order: top square first, then the bottom row
L_SQUARES = [(0, 1), (0, 0), (1, 0)]


def quadrants(m):
    return sorted(c.quadrant_count for c in m.singular_edge_classes())


def is_product(m):
    ident = np.arange(m.size)
    return np.array_equal(m.hop[2, 0], ident) and np.array_equal(m.hop[2, 1], ident)


def test_l_solid_basic_shape(l_manifold):
    m = l_manifold
    assert m.size == 3
    assert is_product(m)
    assert quadrants(m) == [12]
    [cone] = m.singular_edge_classes()
    assert cone.is_singular
    assert cone.cone_angle == pytest.approx(12 * np.pi / 2)


def test_l_solid_summary_fields(l_manifold):
    s = l_manifold.summary()
    assert s["cells"] == 3
    assert s["singular_edge_classes"] == 1
    assert s["singular_quadrant_counts"] == [12]


def test_direct_build_matches_gallery(l_manifold):
    m = build_surface(L_SQUARES).product_with_circle()
    assert np.array_equal(m.hop, l_manifold.hop)


def test_flat_and_nested_wall_specs_agree():
    cells = [(x, y, 0) for x in range(4) for y in range(2)]
    flat = build_manifold(cells, walls=[(0, 0, 0, 0)])
    nested = build_manifold(cells, walls=[(0, (0, 0, 0))])
    assert np.array_equal(flat.hop, nested.hop)


def test_hops_are_inverse_permutation_pairs():
    for name in gallery.names():
        m = gallery.load_manifold(name)
        ident = np.arange(m.size)
        for axis in range(3):
            lo, hi = m.hop[axis, 0], m.hop[axis, 1]
            assert sorted(hi) == list(range(m.size)), (name, axis)
            assert np.array_equal(lo[hi], ident), (name, axis)


def test_torus_and_blocks_are_smooth():
    for name in ("unit_torus", "tower_1x2", "block_2x2"):
        assert quadrants(gallery.load_manifold(name)) == []


def test_wall_arrays_frozen_singular_structure():
    for name in ("wall_array_4x2", "wall_array_4x2_swapped"):
        assert quadrants(gallery.load_manifold(name)) == [16, 16, 16]


def test_street_wall_array_detection():
    m = gallery.load_manifold("wall_array_4x2")
    found, witness = check_street_wall_array(m, 4)
    assert found
    assert witness["street_y"] == 1
    assert witness["orientation"] == "street_above"

    swapped = gallery.load_manifold("wall_array_4x2_swapped")
    found, witness = check_street_wall_array(swapped, 4)
    assert found
    assert witness["street_y"] == 0
    assert witness["orientation"] == "street_below"

    assert check_street_wall_array(m, 3) == (False, None)
    with pytest.raises(ValueError):
        check_street_wall_array(m, 0)


def test_split_cover_of_l_product(l_manifold):
    cover = split_cover(l_manifold, 4)
    assert cover.size == 12
    assert is_product(cover)
    assert quadrants(cover) == [12, 12, 12, 12]


def test_gallery_cover_has_extra_walls():
    m = gallery.load_manifold("l_cover_4")
    assert m.size == 12
    assert quadrants(m) == [12, 12, 12, 12, 16, 16, 16, 16]


def test_magnify_l_product(l_manifold):
    # magnifying turns the circle factor into one of length n, so the
    # z-hop becomes an order-n shift instead of the identity
    for n, cells, cones in ((2, 24, [12, 12]), (3, 81, [12, 12, 12])):
        mm = magnify(l_manifold, n)
        assert mm.size == cells
        assert quadrants(mm) == cones
        power = np.arange(mm.size)
        for _ in range(n):
            power = mm.hop[2, 1][power]
        assert np.array_equal(power, np.arange(mm.size))
    assert magnify(l_manifold, 1).size == 3
    with pytest.raises(ValueError):
        magnify(l_manifold, 0)


def test_disconnected_cells_rejected():
    with pytest.raises(Disconnected):
        build_surface([(0, 0), (2, 0)])


def test_wall_outside_range_rejected():
    with pytest.raises(WallOutsideRange):
        build_surface([(0, 0), (1, 0)], walls=[(0, 1, 0)])


def test_override_must_be_perpendicular_translation():
    with pytest.raises(BadTranslation):
        build_surface([(0, 0), (0, 1)], gluing_overrides=[(0, (0, 0), (0, 1))])


def test_override_cannot_claim_interior_face():
    with pytest.raises(AmbiguousPairing):
        build_surface([(0, 0), (1, 0)], gluing_overrides=[(0, (0, 0), (1, 0))])


def test_override_cannot_claim_face_twice():
    with pytest.raises(AmbiguousPairing):
        build_surface([(0, 0)], gluing_overrides=[
            (0, (0, 0), (0, 0)), (0, (0, 0), (0, 0))])


def test_unpaired_faces_rejected():
    # gluing across a wall consumes one face of each side street,
    # leaving the two outer partners dangling
    with pytest.raises(UnpairedFace):
        build_surface([(0, 0), (1, 0)], walls=[(0, 0, 0)],
                      gluing_overrides=[(0, (0, 0), (1, 0))])


def test_override_naming_unoccupied_cell():
    with pytest.raises(ValueError):
        build_surface([(0, 0)], gluing_overrides=[(0, (0, 0), (5, 0))])


FROZEN_VERTEX_CLASSES = {
    "unit_torus": 1, "tower_1x2": 2, "block_2x2": 4, "l_tromino": 1,
    "l_tetromino": 2, "plus_pentomino": 3, "staircase5": 1, "staircase7": 1,
    "snake7": 1, "snake9": 1, "steps6": 2, "hole11": 1,
}


def test_vertex_class_counts_frozen():
    for name, expected in FROZEN_VERTEX_CLASSES.items():
        surface = gallery.load_surface(name)
        assert surface.count_vertex_classes() == expected, name


def test_product_with_circle_preserves_face_count():
    for name in gallery.surface_names():
        surface = gallery.load_surface(name)
        m = surface.product_with_circle()
        assert m.size == len(surface.cells)
        assert is_product(m)
