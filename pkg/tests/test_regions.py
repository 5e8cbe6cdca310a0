from fractions import Fraction

import numpy as np
import pytest

from polycubeflow.circle import IntervalUnion
from polycubeflow.regions import (
    CrossSection,
    FaceRect,
    RectangleUnionRegion,
    VoxelRegion3,
    cross_section_fraction,
    multiplicity_profile,
    z_cross_section,
)

F = Fraction


def two_boxes():
    return RectangleUnionRegion(2, (
        FaceRect(0, F(0), F(1, 2), F(0), F(1)),
        FaceRect(1, F(1, 4), F(3, 4), F(1, 4), F(3, 4)),
    ))


def test_face_rect_validation():
    with pytest.raises(ValueError):
        FaceRect(0, F(1, 2), F(1, 2), F(0), F(1))
    with pytest.raises(ValueError):
        FaceRect(0, F(-1, 4), F(1, 2), F(0), F(1))
    with pytest.raises(ValueError):
        FaceRect(0, F(0), F(1), F(1, 2), F(5, 4))


def test_face_rect_frame_segments():
    r = FaceRect(0, F(1, 4), F(1, 2), F(1, 8), F(3, 8))
    frame = r.frame
    assert len(frame) == 4
    assert ("x", F(1, 4), F(1, 8), F(3, 8)) in frame
    assert ("z", F(3, 8), F(1, 4), F(1, 2)) in frame


def test_area_and_membership():
    region = two_boxes()
    assert region.area == F(1, 2) + F(1, 4)
    assert region.contains(0, F(1, 4), F(9, 10))
    assert not region.contains(0, F(3, 4), F(1, 2))
    assert region.contains(1, F(1, 2), F(1, 2))
    assert not region.contains(1, F(1, 8), F(1, 2))


def test_column_rejects_breakpoints():
    region = two_boxes()
    with pytest.raises(ValueError):
        region.column(0, F(1, 2))
    with pytest.raises(ValueError):
        region.column(0, F(0))
    col = region.column(1, F(1, 2))
    assert col.measure == F(1, 2)


def test_area_in_rect_exact():
    region = two_boxes()
    assert region.area_in_rect(0, F(0), F(1), F(0), F(1)) == F(1, 2)
    assert region.area_in_rect(1, F(0), F(1, 2), F(0), F(1)) == F(1, 8)
    assert region.area_in_rect(1, F(3, 4), F(1), F(0), F(1)) == 0


def test_touches_frame_closed_semantics():
    region = two_boxes()
    # touching exactly at the frame line counts
    assert region.touches_frame(1, F(3, 4), F(7, 8), F(1, 4), F(3, 4))
    assert region.touches_frame(1, F(0), F(1, 4), F(0), F(1))
    assert not region.touches_frame(1, F(7, 8), F(15, 16), F(0), F(1))
    # interior rectangles strictly inside one input box touch nothing
    assert not region.touches_frame(1, F(3, 8), F(5, 8), F(3, 8), F(5, 8))


def test_uniform_and_combinations():
    left = RectangleUnionRegion.uniform(2, F(0), F(1, 2))
    right = RectangleUnionRegion.uniform(2, F(1, 2), F(1))
    assert left.area == 1
    union = left.union(right)
    assert union.area == 2
    assert left.intersect(right).area == 0
    sym = left.symmetric_difference(RectangleUnionRegion.full(2))
    assert sym.area == right.area
    assert left.complement().area == right.area


def test_empty_region():
    empty = RectangleUnionRegion.empty(3)
    assert empty.area == 0
    assert not empty.contains(0, F(1, 3), F(1, 3))


def test_contains_points_matches_scalar():
    region = two_boxes()
    rng = np.random.default_rng(3)
    n = 400
    faces = rng.integers(0, 2, n)
    xs = rng.uniform(0.001, 0.999, n)
    zs = rng.uniform(0.001, 0.999, n)
    fast = region.contains_points(faces, xs, zs)
    slow = np.array([region.contains(int(f), F(x).limit_denominator(10**9),
                                     F(z).limit_denominator(10**9))
                     for f, x, z in zip(faces, xs, zs)])
    assert np.array_equal(fast, slow)


def test_z_cross_section_and_multiplicity():
    region = two_boxes()
    col = z_cross_section(region, 1, F(1, 2))
    assert col.arcs == ((F(1, 4), F(3, 4)),)
    assert multiplicity_profile(region, (F(1, 3), F(1, 2))) == 2
    assert multiplicity_profile(region, (F(7, 8), F(1, 2))) == 0
    comp = region.complement()
    p = (F(1, 3), F(2, 3))
    assert multiplicity_profile(region, p) + multiplicity_profile(comp, p) == 2


def test_voxel_region_lower_half():
    cells = [(0, 0, 0), (1, 0, 0)]
    vox = VoxelRegion3.lower_z_half(cells, resolution=4)
    assert vox.volume == F(1, 2) * 2
    assert vox.column_fraction(0.5, 0.5) == F(1, 2)


def test_voxel_single_cell_column():
    cells = [(0, 0, 0), (0, 0, 1)]
    vox = VoxelRegion3.single_cell(cells, 4, (0, 0, 0))
    assert vox.volume == 1
    assert vox.column_fraction(0.5, 0.5) == F(1, 2)


def test_cross_section_fraction_band():
    cells = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
    vox = VoxelRegion3.lower_z_half(cells, resolution=8)
    cs = cross_section_fraction(vox, 0.5, 0.5)
    assert isinstance(cs, CrossSection)
    assert cs.value == F(1, 2)
    assert cs.band_lo == F(1, 3)
    assert cs.band_hi == F(2, 3)
    assert cs.in_band
