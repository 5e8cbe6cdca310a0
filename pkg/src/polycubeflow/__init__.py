"""Geodesic flow laboratory for translation complexes of unit cubes."""

__version__ = "0.1.0"

from .arith import (
    Direction,
    IntervalOnTorus,
    gap_spectrum,
    gap_spectrum_exact,
    special_interval,
)
from .cf import (
    GOLDEN,
    NAMED_VALUES,
    SQRT2_MINUS_1,
    SQRT3_MINUS_1,
    ContinuedFraction,
    as_fraction,
    cf_expand,
)
from .circle import (
    IntervalUnion,
    fourier_parseval_check,
    shift_separation_measure,
)
from .errors import PolycubeError, SingularHit
from .ergodic import (
    PowerChain,
    YOrbit,
    birkhoff_average,
    box_discrepancy,
    chain_avoiding_region,
    collect_y_orbit,
    defective_census,
    half_strip_chains,
    overlap_identity_check,
    power_chain,
)
from .geodesic import y_face_map, y_face_orbit, y_face_orbit_batch
from .manifold import (
    Manifold,
    PolysquareSurface,
    build_manifold,
    build_surface,
    check_street_wall_array,
    magnify,
    split_cover,
)
from .regions import FaceRect, RectangleUnionRegion, VoxelRegion3
from .splitting import (
    cycle_structure,
    cycle_vertex_equivalence,
    frame_spec,
    render_cycle_string,
    singular_preimages,
    splitting_permutation,
)

__all__ = [
    "__version__",
    "ContinuedFraction", "GOLDEN", "SQRT2_MINUS_1", "SQRT3_MINUS_1",
    "NAMED_VALUES", "as_fraction", "cf_expand",
    "Direction", "IntervalOnTorus", "gap_spectrum", "gap_spectrum_exact",
    "special_interval",
    "IntervalUnion", "fourier_parseval_check", "shift_separation_measure",
    "PolycubeError", "SingularHit",
    "Manifold", "PolysquareSurface", "build_manifold", "build_surface",
    "check_street_wall_array", "magnify", "split_cover",
    "y_face_map", "y_face_orbit", "y_face_orbit_batch",
    "FaceRect", "RectangleUnionRegion", "VoxelRegion3",
    "cycle_structure", "cycle_vertex_equivalence", "frame_spec",
    "render_cycle_string", "singular_preimages", "splitting_permutation",
    "PowerChain", "YOrbit", "birkhoff_average", "box_discrepancy",
    "chain_avoiding_region", "collect_y_orbit", "defective_census",
    "half_strip_chains", "overlap_identity_check", "power_chain",
]
