from enum import Enum
from typing import Callable, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.exceptions.moments import InvalidKernelError
from app.models.base import NumericModel, readonly


def unit(x):
    return np.ones_like(np.asarray(x, dtype=float))


class KernelKind(str, Enum):
    ALGEBRAIC = "algebraic"
    LOGARITHMIC = "logarithmic"


class SingularKernel(NumericModel):
    """
    Weakly singular kernel psi(x) * k*(|x - y|).

    Attributes:
        kind (KernelKind): Algebraic |x - y|^mu or logarithmic log|x - y|.
        mu (Optional[float]): Exponent of the algebraic kernel, mu > -1 and mu != 0.
        psi (Callable): Smooth factor sampled at the quadrature nodes.
    """

    kind: KernelKind
    mu: Optional[float] = None
    psi: Callable = Field(default=unit)

    @model_validator(mode="after")
    def check_kernel(self):
        if self.kind is KernelKind.ALGEBRAIC:
            if self.mu is None or not np.isfinite(self.mu):
                raise InvalidKernelError("Algebraic kernel needs a finite exponent")
            if self.mu <= -1:
                raise InvalidKernelError(
                    f"Exponent mu={self.mu} is not weakly singular (mu must be > -1)"
                )
            if self.mu == 0:
                raise InvalidKernelError(
                    "mu = 0 is reserved for the logarithmic kernel"
                )
        elif self.mu is not None:
            raise InvalidKernelError("Logarithmic kernel takes no exponent")

        probe = np.broadcast_to(
            np.asarray(self.psi(np.linspace(-1.0, 1.0, 101)), dtype=float), (101,)
        )
        if not np.all(np.isfinite(probe)):
            raise InvalidKernelError("psi must be finite on [-1, 1]")
        return self

    @classmethod
    def algebraic(cls, mu: float, psi: Optional[Callable] = None):
        return cls(kind=KernelKind.ALGEBRAIC, mu=mu, psi=psi or unit)

    @classmethod
    def logarithmic(cls, psi: Optional[Callable] = None):
        return cls(kind=KernelKind.LOGARITHMIC, psi=psi or unit)

    def smooth_factor(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.psi(x), dtype=float), x.shape)


class ProductWeights(NumericModel):
    """
    Product-rule weights c_k(y) for one singularity location.

    Attributes:
        y (float): Location of the singularity.
        c (np.ndarray): Weights c_k(y), k = 1..m.
    """

    y: float
    c: np.ndarray

    @field_validator("c", mode="before")
    def as_readonly(cls, value):
        return readonly(value)
