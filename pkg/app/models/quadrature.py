import numpy as np
from pydantic import field_validator, model_validator

from app.models.base import NumericModel, readonly


class QuadratureRule(NumericModel):
    """
    Gauss-Legendre rule of order m on [-1, 1].

    Attributes:
        m (int): Number of nodes.
        nodes (np.ndarray): Zeros of the degree-m Legendre polynomial, increasing.
        weights (np.ndarray): Christoffel numbers, all positive.
    """

    m: int
    nodes: np.ndarray
    weights: np.ndarray

    @field_validator("nodes", "weights", mode="before")
    def as_readonly(cls, value):
        return readonly(value)

    @model_validator(mode="after")
    def check_shapes(self):
        if self.nodes.shape != (self.m,) or self.weights.shape != (self.m,):
            raise ValueError("nodes and weights must both hold m entries")
        return self
