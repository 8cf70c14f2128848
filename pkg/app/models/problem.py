from typing import Any, Callable, Literal, Optional, Union

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.helpers.environment import env
from app.models.base import NumericModel, readonly
from app.models.kernel import SingularKernel
from app.models.quadrature import QuadratureRule

FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


class NemytskiiFunction(NumericModel):
    """
    Superposition h(x, v) of the Hammerstein operator.

    When the partial derivative h_v is not supplied it is replaced by a
    central difference with step eps^(1/3) * max(1, |v|).
    """

    h: Callable
    h_v: Optional[Callable] = None

    def value(self, x, v):
        x, v = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(v, dtype=float)
        )
        return np.broadcast_to(np.asarray(self.h(x, v), dtype=float), x.shape)

    def derivative(self, x, v):
        x, v = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(v, dtype=float)
        )
        if self.h_v is not None:
            return np.broadcast_to(np.asarray(self.h_v(x, v), dtype=float), x.shape)
        step = FD_STEP * np.maximum(1.0, np.abs(v))
        return (self.value(x, v + step) - self.value(x, v - step)) / (2.0 * step)


class SmoothKernel(NumericModel):
    """Continuous second kernel k2(x, y)."""

    tag: Literal["smooth"] = "smooth"
    k2: Callable


class CompositeKernel(NumericModel):
    """Mixed kernel rho(x, y) + psi(x) log|x - y| of the boundary equation."""

    tag: Literal["composite"] = "composite"
    rho: Callable
    psi: Callable


SecondKernel = Union[SmoothKernel, SingularKernel, CompositeKernel]


class HammersteinProblem(NumericModel):
    """
    Second-kind equation

        f(y) - int k1(x, y) f(x) dx - int k2(x, y) h(x, f(x)) dx = g(y),  |y| <= 1.

    Attributes:
        k1 (Optional[Callable]): Linear kernel k1(x, y); None stands for k1 = 0.
        second_kernel (SecondKernel): Kernel in front of the Nemytskii term.
        nemytskii (NemytskiiFunction): The nonlinearity h.
        g (Callable): Right-hand side.
        name (str): Label used in logs and reports.
        initial (Optional[Callable]): Starting guess a0(x) of the Newton
            iteration; None starts from g.
    """

    k1: Optional[Callable] = None
    second_kernel: SecondKernel
    nemytskii: NemytskiiFunction
    g: Callable
    name: str = "problem"
    initial: Optional[Callable] = None


class NewtonOptions(NumericModel):
    """
    Stopping and damping parameters of the nonlinear solve.

    A Newton step is halved only when its residual is not finite or exceeds
    `growth_limit` times the current residual; 1 gives a monotone line search.
    """

    tol: float = Field(default_factory=lambda: env().NEWTON_TOL)
    max_iter: int = Field(default_factory=lambda: env().NEWTON_MAX_ITER)
    max_damping: int = Field(default_factory=lambda: env().NEWTON_MAX_DAMPING)
    growth_limit: float = Field(default_factory=lambda: env().NEWTON_GROWTH_LIMIT)
    method: Literal["newton", "hybr"] = "newton"

    @model_validator(mode="after")
    def check_positive(self):
        if self.tol <= 0 or self.max_iter < 1 or self.max_damping < 0:
            raise ValueError("tol and max_iter must be positive, max_damping >= 0")
        if self.growth_limit < 1:
            raise ValueError("growth_limit must be at least 1")
        return self


class NystromSolution(NumericModel):
    """
    Node values a*_k = f_m(x_k) of a solved problem.

    `system` keeps the assembled operators so that the interpolant reuses the
    rule, the kernel matrices and the product-rule service of the solve.
    """

    rule: QuadratureRule
    a: np.ndarray
    problem: HammersteinProblem
    iterations: int
    residual_norm: float
    system: Any = None

    @field_validator("a", mode="before")
    def as_readonly(cls, value):
        return readonly(value)

    @property
    def m(self) -> int:
        return self.rule.m
