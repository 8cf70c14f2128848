from typing import Callable, Literal, Optional

import numpy as np
from pydantic import Field, model_validator
from scipy.special import beta

from app.exceptions.boundary import GeometryError, InvalidSmoothingExponentError
from app.models.base import NumericModel

SPEED_GRID = 1001
AREA_SAMPLES = 2048


class BoundaryCurve(NumericModel):
    """
    Closed parametric curve x -> (xi(x), eta(x)), x in [-1, 1].

    Each callable maps an array of parameters of shape S to an array of shape
    (2, *S). Construction checks regularity, closure and counter-clockwise
    orientation.
    """

    gamma: Callable
    dgamma: Callable
    ddgamma: Callable
    name: str = "curve"

    @model_validator(mode="after")
    def check_geometry(self):
        grid = np.linspace(-1.0, 1.0, SPEED_GRID)
        speed = np.hypot(*np.asarray(self.dgamma(grid), dtype=float))
        if not np.all(np.isfinite(speed)) or speed.min() <= 0:
            raise GeometryError(f"Curve {self.name} is not regular (|gamma'| = 0)")

        ends = np.asarray(self.gamma(np.array([-1.0, 1.0])), dtype=float)
        scale = max(1.0, float(np.abs(ends).max()))
        if np.abs(ends[:, 0] - ends[:, 1]).max() > 1e-10 * scale:
            raise GeometryError(f"Curve {self.name} is not closed")

        if self.signed_area() <= 0:
            raise GeometryError(f"Curve {self.name} is not counter-clockwise")
        return self

    def signed_area(self, samples: int = AREA_SAMPLES) -> float:
        x = -1.0 + 2.0 * np.arange(samples) / samples
        xi, eta = np.asarray(self.gamma(x), dtype=float)
        return 0.5 * float(np.sum(xi * np.roll(eta, -1) - np.roll(xi, -1) * eta))


class SmoothingMap(NumericModel):
    """
    Smoothing change of variable phi on [-1, 1] with phi(+-1) = +-1.

    kind="integral" is phi(x) = 2 int_{-1}^x (1 - t^2)^(q-1) dt / B - 1;
    kind="piecewise" flattens only the end pieces of width epsilon.
    """

    q: float = 1.0
    kind: Literal["integral", "piecewise"] = "integral"
    epsilon: float = Field(default=0.1, gt=0.0, lt=0.5)

    @model_validator(mode="after")
    def check_exponent(self):
        if not np.isfinite(self.q) or self.q < 1:
            raise InvalidSmoothingExponentError(
                f"Smoothing exponent q={self.q} must be >= 1"
            )
        return self

    @property
    def normalizer(self) -> float:
        """B = int (1 - t^2)^(q-1) dt = sqrt(pi) Gamma(q) / Gamma(q + 1/2)."""
        return float(2.0 ** (2.0 * self.q - 1.0) * beta(self.q, self.q))

    @property
    def is_identity(self) -> bool:
        return self.q == 1


class BoundaryProblem(NumericModel):
    """
    Interior Laplace problem with the nonlinear Neumann condition

        du/dn + hbar(P, u) = gbar(P)   on the curve.

    `hbar(points, v)` receives points of shape (2, n); `gbar(points, normals)`
    also receives the outward unit normals there.
    """

    curve: BoundaryCurve
    map: SmoothingMap = Field(default_factory=SmoothingMap)
    hbar: Callable
    hbar_v: Optional[Callable] = None
    gbar: Callable
    name: str = "bie"
