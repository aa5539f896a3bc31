import numpy as np
import pytest

from anosov import (
    Presentation,
    Representation,
    ScaledMatrix,
    SchottkyParams,
    fuchsian_surface_rep,
    schottky_rep,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)


@pytest.fixture(scope="session")
def schottky2():
    """Standard rank-2 Schottky representation, dilation 3."""
    return schottky_rep(SchottkyParams(rank=2, dilation=3.0))


@pytest.fixture(scope="session")
def fuchsian2():
    return fuchsian_surface_rep(2)


@pytest.fixture
def diag_rep():
    """Rank-1 diagonal representation a -> diag(3, 1/3)."""
    return Representation.from_generators(
        Presentation.free(1), [ScaledMatrix.from_array(np.diag([3.0, 1 / 3.0]))]
    )


def random_invertible(rng, d, spread=1.0):
    """Generic invertible matrix with a mild spectrum."""
    while True:
        a = spread * rng.standard_normal((d, d))
        if abs(np.linalg.det(a)) > 1e-6:
            return a
