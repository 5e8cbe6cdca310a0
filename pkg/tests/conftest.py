import pytest

from polycubeflow import gallery
from polycubeflow.arith import Direction
from polycubeflow.cf import GOLDEN, SQRT2_MINUS_1


@pytest.fixture(scope="session")
def canonical():
    """The direction used by every worked example: (golden, sqrt2-1)."""
    return Direction(GOLDEN, SQRT2_MINUS_1)


@pytest.fixture(scope="session")
def l_manifold():
    return gallery.load_manifold("l_tromino")
