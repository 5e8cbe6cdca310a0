from fractions import Fraction

import pytest

from polycubeflow import gallery
from polycubeflow.arith import Direction
from polycubeflow.errors import MagnificationTooSmall
from polycubeflow.splitting import (
    cycle_structure,
    cycle_vertex_equivalence,
    frame_spec,
    render_cycle_string,
    singular_preimages,
    splitting_permutation,
)

# label strings as printed in the bundled diagrams; where the diagram
# opens a cycle somewhere other than our canonical rotation, the second
# entry says which label opens the cycle containing label 1
PUBLISHED_SINGLE = {
    "l_tromino": ("3->1->2->3", None),
    "staircase5": ("4->1->5->2->3->4", None),
    "staircase7": ("4->1->5->6->2->3->7->4", None),
    "snake7": ("3->2->4->6->5->7->1->3", {1: 3}),
    "snake9": ("3->2->4->6->5->9->7->8->1->3", {1: 3}),
    "hole11": ("8->2->5->6->1->7->3->9->11->10->4->8", {1: 8}),
}

PUBLISHED_MULTI = {
    "l_tetromino": ({"4->1->2->4", "3->3"}, None),
    "steps6": ({"3->2->6->3", "4->5->1->4"}, {1: 4}),
}


@pytest.mark.parametrize("name", sorted(PUBLISHED_SINGLE))
def test_published_single_cycle_strings(name, canonical):
    expected, starts = PUBLISHED_SINGLE[name]
    sp = splitting_permutation(gallery.load_manifold(name), canonical)
    assert render_cycle_string(sp, starts=starts) == expected
    assert cycle_structure(sp).is_single_cycle


@pytest.mark.parametrize("name", sorted(PUBLISHED_MULTI))
def test_published_multi_cycle_strings(name, canonical):
    expected, starts = PUBLISHED_MULTI[name]
    sp = splitting_permutation(gallery.load_manifold(name), canonical)
    rendered = set(render_cycle_string(sp, starts=starts).split(", "))
    assert rendered == expected
    assert not cycle_structure(sp).is_single_cycle


def test_l_solid_permutation_details(canonical, l_manifold):
    sp = splitting_permutation(l_manifold, canonical)
    assert sp.labels == (1, 2, 3)
    assert sp.perm == {1: 2, 2: 3, 3: 1}
    assert sp.cycles == ((3, 1, 2),)
    cs = cycle_structure(sp)
    assert cs.lengths == (3,)
    assert cs.majority_cycle


def test_steps6_cycle_type(canonical):
    sp = splitting_permutation(gallery.load_manifold("steps6"), canonical)
    cs = cycle_structure(sp)
    assert cs.lengths == (3, 3)
    assert not cs.majority_cycle


def test_l_tetromino_has_fixed_point(canonical):
    sp = splitting_permutation(gallery.load_manifold("l_tetromino"), canonical)
    assert cycle_structure(sp).lengths == (1, 3)
    assert sp.perm[3] == 3


def test_permutation_stable_across_probe_levels(canonical, l_manifold):
    base = splitting_permutation(l_manifold, canonical, k=3).perm
    for k in (4, 5, 6):
        assert splitting_permutation(l_manifold, canonical, k=k).perm == base


def test_equivalence_over_gallery(canonical):
    for name in gallery.surface_names():
        report = cycle_vertex_equivalence(gallery.load_surface(name), canonical)
        assert report.equivalent, name


def test_singular_preimages_l_solid(canonical, l_manifold):
    a = canonical.alpha_fraction
    for orientation, x_expected in ((1, 1 - a), (-1, a)):
        per_face = singular_preimages(l_manifold, canonical,
                                      orientation=orientation)
        assert len(per_face) == 3
        for face, segments in enumerate(per_face):
            [seg] = segments
            assert seg.face == face
            assert seg.x_position == x_expected
            assert (seg.z_lo, seg.z_hi) == (0, 1)
            assert seg.edge.quadrant_count == 12


def test_singular_preimages_empty_for_smooth(canonical):
    m = gallery.load_manifold("block_2x2")
    assert singular_preimages(m, canonical) == [[], [], [], []]


# ------------------------------------------------------------- frames


def test_frame_anchor_values():
    fs = frame_spec(Direction(0.7, 0.9), 2, 3)
    assert fs.lower_anchor == (2, 2, 0)
    assert fs.upper_anchor == (4, 4, 2)
    assert fs.segment_length > Fraction(1, 2)
    assert float(fs.lower_segment_x) == pytest.approx(2.3)
    assert float(fs.upper_segment_x) == pytest.approx(3.7)
    assert len(fs.lower_faces) == 2
    assert fs.lower_anchor in fs.lower_faces
    assert fs.upper_anchor in fs.upper_faces


def test_frame_magnification_bound_enforced():
    with pytest.raises(MagnificationTooSmall):
        frame_spec(Direction(0.7, 0.9), 2, 2)
    # boundary case: n equal to the bound is still too small
    with pytest.raises(MagnificationTooSmall):
        frame_spec(Direction(0.5, Fraction(1, 2)), 2, 2)


def test_frame_input_validation():
    with pytest.raises(ValueError):
        frame_spec(Direction(0.7, 0.9), 1, 3)
    with pytest.raises(ValueError):
        frame_spec(Direction(0.7, Fraction(1, 4)), 2, 2)
