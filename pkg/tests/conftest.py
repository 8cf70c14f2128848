from unittest.mock import Mock

import numpy as np
import pytest
from dotenv import load_dotenv

from app.helpers.curves import circle, ellipse
from app.models.boundary import BoundaryProblem, SmoothingMap

load_dotenv(dotenv_path=".env_testing")


def constant_boundary_problem(curve, q=1.0):
    """u = 1 with hbar(P, v) = v, so gbar = hbar(P, 1) = 1."""
    return BoundaryProblem(
        curve=curve,
        map=SmoothingMap(q=q),
        hbar=lambda points, v: v,
        hbar_v=lambda points, v: np.ones_like(v),
        gbar=lambda points, normals: np.ones(points.shape[1:]),
        name="constant",
    )


@pytest.fixture
def mock_logger():
    logger = Mock()
    logger.keys.return_value.__enter__ = Mock(return_value=logger)
    logger.keys.return_value.__exit__ = Mock(return_value=False)
    logger.timed.return_value.__enter__ = Mock(return_value=logger)
    logger.timed.return_value.__exit__ = Mock(return_value=False)
    return logger


@pytest.fixture
def circle_problem():
    return constant_boundary_problem(circle())


@pytest.fixture
def ellipse_problem():
    return constant_boundary_problem(ellipse(1.0, 2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
