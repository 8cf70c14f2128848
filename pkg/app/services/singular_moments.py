from functools import lru_cache
from typing import Iterable, Optional

import numpy as np
from scipy.special import eval_legendre, roots_jacobi, xlogy

from app.exceptions.moments import MomentValidationError
from app.helpers.environment import env
from app.helpers.gauss_legendre import check_order, gauss_rule, legendre_table
from app.models.kernel import KernelKind, ProductWeights, SingularKernel
from app.models.quadrature import QuadratureRule
from app.services.logging import StandardLoggerService

VALIDATION_TOL = 1e-10
ORACLE_BLOCK = 1 << 22


def _normalization(n: int) -> np.ndarray:
    return np.sqrt((2.0 * np.arange(n) + 1.0) / 2.0)


def _logarithmic_moments(n: int, y: np.ndarray) -> np.ndarray:
    """Classical moments int P_i(x) log|x - y| dx, i < n, via Q_i on the cut."""
    moments = np.empty((n, y.size))
    moments[0] = xlogy(1.0 - y, 1.0 - y) + xlogy(1.0 + y, 1.0 + y) - 2.0
    if n == 1:
        return moments

    degrees = np.arange(1, n)
    endpoint = -2.0 / (degrees * (degrees + 1.0))
    inside = np.abs(y) < 1.0
    moments[1:, y >= 1.0] = endpoint[:, None]
    moments[1:, y <= -1.0] = (endpoint * (-1.0) ** degrees)[:, None]

    t = y[inside]
    second_kind = np.empty((n + 1, t.size))
    second_kind[0] = np.arctanh(t)
    second_kind[1] = t * second_kind[0] - 1.0
    for k in range(1, n):
        second_kind[k + 1] = (
            (2 * k + 1) * t * second_kind[k] - k * second_kind[k - 1]
        ) / (k + 1)
    moments[1:, inside] = (
        2.0
        * (second_kind[2:] - second_kind[:-2])
        / (2.0 * degrees[:, None] + 1.0)
    )
    return moments


def _algebraic_moments(n: int, y: np.ndarray, mu: float) -> np.ndarray:
    """Classical moments int P_i(x) |x - y|^mu dx, i < n, by forward recurrence."""
    right, left = 1.0 - y, 1.0 + y
    moments = np.empty((n, y.size))
    moments[0] = (right ** (mu + 1) + left ** (mu + 1)) / (mu + 1)
    if n > 1:
        moments[1] = (right ** (mu + 2) - left ** (mu + 2)) / (mu + 2) + y * moments[
            0
        ]
    for k in range(1, n - 1):
        moments[k + 1] = (
            (2 * k + 1) * y * moments[k] - (k - mu - 1) * moments[k - 1]
        ) / (k + mu + 2)
    return moments


def recurrence_moments(kernel: SingularKernel, m: int, y) -> np.ndarray:
    """Orthonormal moments M_i(y), i < m, without validation. Shape (m, ny)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if kernel.kind is KernelKind.LOGARITHMIC:
        classical = _logarithmic_moments(m, y)
    else:
        classical = _algebraic_moments(m, y, kernel.mu)
    return _normalization(m)[:, None] * classical


@lru_cache(maxsize=64)
def _log_weight_rule(n_nodes: int):
    """
    Gauss-Legendre nodes with the weights of int F(t) dt and of the
    interpolatory rule for int F(t) log(1 + t) dt, exact for degree < n_nodes.
    """
    rule = gauss_rule(n_nodes)
    degrees = np.arange(1, n_nodes)
    classical = np.empty(n_nodes)
    classical[0] = 2.0 * np.log(2.0) - 2.0
    classical[1:] = (-1.0) ** degrees * (-2.0 / (degrees * (degrees + 1.0)))
    log_moments = _normalization(n_nodes) * classical
    log_weights = rule.weights * (legendre_table(n_nodes, rule.nodes).T @ log_moments)
    return rule.nodes, rule.weights, log_weights


@lru_cache(maxsize=64)
def _jacobi_rule(n_nodes: int, mu: float):
    nodes, weights = roots_jacobi(n_nodes, 0.0, mu)
    return nodes, weights


def _reference_rule(kernel: SingularKernel, degree: int):
    """Nodes of the half-interval rule exact for polynomials of `degree`."""
    if kernel.kind is KernelKind.LOGARITHMIC:
        return _log_weight_rule(degree + 1)
    return _jacobi_rule(degree // 2 + 1, float(kernel.mu))


def _half_weights(kernel: SingularKernel, reference, length: np.ndarray):
    """Weights of int_0^{2h} F(s) k*(s) ds on the mapped nodes, shape (ny, N)."""
    length = length[:, None]
    if kernel.kind is KernelKind.LOGARITHMIC:
        _, plain, logarithmic = reference
        return xlogy(length, length) * plain + length * logarithmic
    _, weights = reference
    return length ** (kernel.mu + 1.0) * weights


def _split_quadrature(kernel, reference, y, evaluate, rows=1):
    """Integrate evaluate(x) * k*(|x - y|) with the domain split at x = y."""
    t = reference[0]
    results = []
    block = max(1, ORACLE_BLOCK // (t.size * rows))
    for start in range(0, y.size, block):
        chunk = y[start : start + block]
        right, left = (1.0 - chunk) / 2.0, (1.0 + chunk) / 2.0
        x_right = chunk[:, None] + right[:, None] * (1.0 + t)
        x_left = chunk[:, None] - left[:, None] * (1.0 + t)
        results.append(
            np.sum(_half_weights(kernel, reference, right) * evaluate(x_right), -1)
            + np.sum(_half_weights(kernel, reference, left) * evaluate(x_left), -1)
        )
    return np.concatenate(results, axis=-1)


def moment_oracle(
    kernel: SingularKernel, m: int, y, indices: Optional[Iterable[int]] = None
) -> np.ndarray:
    """
    Moments M_i(y) by quadrature split at the singularity.

    The halves [-1, y] and [y, 1] are mapped to [-1, 1] with the singularity
    at t = -1 and integrated by Gauss-Jacobi (algebraic kernels) or by a
    log-weighted product rule (logarithmic kernels); both are exact for the
    polynomial degrees involved.

    Returns:
        np.ndarray: Shape (len(indices), ny); all indices i < m when None.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if indices is None:
        reference = _reference_rule(kernel, m - 1)
        return _split_quadrature(
            kernel, reference, y, lambda x: legendre_table(m, x), rows=m
        )

    rows = []
    for index in indices:
        scale = np.sqrt((2.0 * index + 1.0) / 2.0)
        reference = _reference_rule(kernel, index)
        rows.append(
            _split_quadrature(
                kernel,
                reference,
                y,
                lambda x, i=index, s=scale: s * eval_legendre(i, x),
            )
        )
    return np.array(rows)


def validation_indices(m: int):
    return sorted({0, 1, m // 2, m - 1} & set(range(m)))


def modified_moments(
    kernel: SingularKernel, m: int, y, validate: Optional[bool] = None
) -> np.ndarray:
    """
    Modified moments M_i(y) = int p_i(x) k*(|x - y|) dx for i = 0..m-1.

    Moments exclude psi. Returns shape (m,) for scalar y and (m, ny) otherwise.
    """
    return ModifiedMomentService(kernel, validate=validate).moments(m, y)


class ModifiedMomentService:
    """
    Computes modified moments by recurrence and checks every vector against
    the split quadrature oracle at a few degrees. Columns failing the check
    are recomputed entirely by the oracle and counted in `fallbacks`.
    """

    def __init__(self, kernel: SingularKernel, validate=None, logger=None):
        self.kernel = kernel
        self.validate = env().MOMENT_VALIDATION if validate is None else validate
        self.logger = logger or StandardLoggerService()
        self.fallbacks = 0

    def moments(self, m: int, y) -> np.ndarray:
        check_order(m)
        scalar = np.ndim(y) == 0
        points = np.atleast_1d(np.asarray(y, dtype=float))
        moments = recurrence_moments(self.kernel, m, points)
        if self.validate:
            moments = self._validated(m, points, moments)
        return moments[:, 0] if scalar else moments

    def _validated(self, m, points, moments):
        indices = validation_indices(m)
        oracle = moment_oracle(self.kernel, m, points, indices)
        deviation = np.abs(moments[indices] - oracle) > VALIDATION_TOL * (
            1.0 + np.abs(oracle)
        )
        deviation |= ~np.isfinite(moments[indices])
        for column in np.flatnonzero(deviation.any(axis=0)):
            index = indices[int(np.argmax(deviation[:, column]))]
            self.fallbacks += 1
            self.logger.warning(
                "Moment recurrence failed validation, using oracle",
                y=float(points[column]),
                index=index,
                m=m,
                kernel=self.kernel.kind.value,
            )
            moments[:, column] = moment_oracle(self.kernel, m, points[column])[:, 0]
            if not np.all(np.isfinite(moments[:, column])):
                raise MomentValidationError(
                    f"Moments at y={points[column]} are not finite",
                    y=float(points[column]),
                    index=index,
                )
        return moments


class ProductQuadratureService:
    """
    Product rule sum_k c_k(y) psi(x_k) f(x_k) for int psi(x) k*(|x - y|) f(x) dx.

    The basis matrix [p_i(x_k)] is built once per rule and reused for every
    singularity location.
    """

    def __init__(
        self,
        rule: QuadratureRule,
        kernel: SingularKernel,
        validate: Optional[bool] = None,
        logger=None,
    ):
        self.rule = rule
        self.kernel = kernel
        self.moment_service = ModifiedMomentService(
            kernel, validate=validate, logger=logger
        )
        self.basis = legendre_table(rule.m, rule.nodes)
        self.psi = kernel.smooth_factor(rule.nodes)

    @property
    def fallbacks(self) -> int:
        return self.moment_service.fallbacks

    def moments(self, y) -> np.ndarray:
        return self.moment_service.moments(self.rule.m, y)

    def weight_matrix(self, y) -> np.ndarray:
        """Rows c_k(y_j) for every y_j, shape (ny, m); psi not applied."""
        moments = np.atleast_2d(self.moments(np.atleast_1d(y)))
        return (self.basis.T @ moments).T * self.rule.weights

    def weights(self, y: float) -> ProductWeights:
        return ProductWeights(y=float(y), c=self.weight_matrix(float(y))[0])

    def integrate(self, f, y):
        values = np.broadcast_to(
            np.asarray(f(self.rule.nodes), dtype=float), (self.rule.m,)
        )
        result = self.weight_matrix(y) @ (self.psi * values)
        return float(result[0]) if np.ndim(y) == 0 else result


def product_weights(
    rule: QuadratureRule, kernel: SingularKernel, y: float
) -> ProductWeights:
    """c_k(y) = lambda_k sum_{i<m} p_i(x_k) M_i(y)."""
    return ProductQuadratureService(rule, kernel).weights(y)


def singular_integral(rule: QuadratureRule, kernel: SingularKernel, f, y) -> float:
    """I_m(f, y) = sum_k c_k(y) psi(x_k) f(x_k)."""
    return ProductQuadratureService(rule, kernel).integrate(f, y)
