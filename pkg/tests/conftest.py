import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from minkbvp import LinearPlusCubic, PowerLaw, ProblemSpec


@pytest.fixture
def ball_cubic():
    return ProblemSpec(
        dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(weight=1.0, cubic=1.0)
    )


@pytest.fixture
def ball_linear():
    return ProblemSpec(
        dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(weight=1.0, cubic=0.0)
    )


@pytest.fixture
def annulus_cubic():
    return ProblemSpec(
        dimension=3,
        outer_radius=1.0,
        inner_radius=0.5,
        nonlinearity=LinearPlusCubic(weight=1.0, cubic=1.0),
    )


@pytest.fixture
def sublinear_annulus():
    return ProblemSpec(
        dimension=3, outer_radius=1.0, inner_radius=0.1, nonlinearity=PowerLaw(exponent=0.5)
    )


@pytest.fixture
def superlinear_ball():
    return ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=PowerLaw(exponent=2.0))
