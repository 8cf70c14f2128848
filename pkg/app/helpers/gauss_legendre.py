from functools import lru_cache

import numpy as np

from app.exceptions.quadrature import (
    InvalidRuleOrderError,
    QuadratureEvaluationError,
)
from app.models.quadrature import QuadratureRule
from app.services.logging import StandardLoggerService

MAX_ORDER = 2048
NODE_TOL = 1e-15
NODE_MAX_STEPS = 100

logger = StandardLoggerService()


def _recurrence_coefficient(k):
    return k / np.sqrt(4.0 * k * k - 1.0)


def legendre_table(n: int, x) -> np.ndarray:
    """
    Evaluate the orthonormal Legendre polynomials p_0, ..., p_{n-1}.

    Args:
        n (int): Number of polynomials.
        x (array_like): Evaluation points, any shape S.

    Returns:
        np.ndarray: Array of shape (n, *S) with row i holding p_i(x).
    """
    x = np.asarray(x, dtype=float)
    table = np.empty((n,) + x.shape)
    if n == 0:
        return table
    table[0] = 1.0 / np.sqrt(2.0)
    if n > 1:
        table[1] = x * table[0] / _recurrence_coefficient(1)
    for k in range(1, n - 1):
        table[k + 1] = (
            x * table[k] - _recurrence_coefficient(k) * table[k - 1]
        ) / _recurrence_coefficient(k + 1)
    return table


def legendre_eval(i: int, x):
    """Orthonormal Legendre polynomial p_i(x); p_0 = 1/sqrt(2)."""
    if i < 0:
        raise ValueError(f"Polynomial degree must be non-negative, got {i}")
    values = legendre_table(i + 1, x)[i]
    return float(values) if values.ndim == 0 else values


def classical_legendre(m: int, x):
    """Classical P_m(x) and its derivative, with P_m(1) = 1."""
    x = np.asarray(x, dtype=float)
    previous, current = np.ones_like(x), x.copy()
    if m == 0:
        return previous, np.zeros_like(x)
    for k in range(1, m):
        previous, current = current, ((2 * k + 1) * x * current - k * previous) / (
            k + 1
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        derivative = m * (x * current - previous) / (x * x - 1.0)
    return current, derivative


@lru_cache(maxsize=None)
def _build_rule(m: int) -> QuadratureRule:
    k = np.arange(1, m + 1)
    x = np.cos(np.pi * (4 * k - 1) / (4 * m + 2))
    active = np.ones(m, dtype=bool)
    for steps in range(1, NODE_MAX_STEPS + 1):
        value, derivative = classical_legendre(m, x[active])
        step = value / derivative
        x[active] -= step
        converged = np.abs(step) <= NODE_TOL
        active[np.flatnonzero(active)[converged]] = False
        if not active.any():
            break

    _, derivative = classical_legendre(m, x)
    weights = 2.0 / ((1.0 - x * x) * derivative * derivative)

    order = np.argsort(x)
    x, weights = x[order], weights[order]
    x = 0.5 * (x - x[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights *= 2.0 / weights.sum()
    logger.debug("Gauss-Legendre rule built", m=m, newton_steps=steps)
    return QuadratureRule(m=m, nodes=x, weights=weights)


def check_order(m) -> None:
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= MAX_ORDER:
        raise InvalidRuleOrderError(
            f"Rule order must be an integer in [1, {MAX_ORDER}], got {m}"
        )


def gauss_rule(m: int) -> QuadratureRule:
    """
    Gauss-Legendre rule with m nodes on [-1, 1].

    Nodes come from Newton's method on P_m started at cos(pi(4k-1)/(4m+2)),
    weights from 2 / ((1 - x^2) P_m'(x)^2). Rules are cached and immutable.

    Raises:
        InvalidRuleOrderError: If m is not an integer in [1, 2048].
    """
    check_order(m)
    return _build_rule(int(m))


def integrate(rule: QuadratureRule, f) -> float:
    """Apply the rule: sum_k lambda_k f(x_k)."""
    values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), (rule.m,))
    if not np.all(np.isfinite(values)):
        raise QuadratureEvaluationError(
            f"Integrand is not finite at {int(np.sum(~np.isfinite(values)))} "
            f"of {rule.m} nodes"
        )
    return float(rule.weights @ values)
