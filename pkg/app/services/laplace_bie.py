from typing import Optional, Tuple

import numpy as np
from scipy.special import betainc, comb

from app.exceptions.boundary import (
    DomainError,
    GeometryError,
    InvalidSmoothingExponentError,
)
from app.helpers.environment import env
from app.helpers.gauss_legendre import gauss_rule
from app.models.boundary import BoundaryProblem, SmoothingMap
from app.models.kernel import SingularKernel
from app.models.problem import (
    CompositeKernel,
    HammersteinProblem,
    NemytskiiFunction,
    NewtonOptions,
    NystromSolution,
)
from app.services.logging import StandardLoggerService
from app.services.nystrom import NystromService
from app.services.singular_moments import ProductQuadratureService

NEAR_DIAGONAL = 1e-5
MACHINE_EPS = np.finfo(float).eps
POLYGON_SEGMENTS = 2048


def _integer_exponent(q: float) -> bool:
    return float(q).is_integer()


def _piecewise_coefficients(smoothing: SmoothingMap):
    """Odd cubic alpha x + beta x^3 joining the end pieces at |x| = 1 - eps in C^1."""
    q, eps = smoothing.q, smoothing.epsilon
    joint = 1.0 - eps
    value, slope = 1.0 - eps**q, q * eps ** (q - 1.0)
    beta = (slope * joint - value) / (2.0 * joint**3)
    alpha = slope - 3.0 * beta * joint**2
    if alpha <= 0 or alpha + 3.0 * beta * joint**2 <= 0:
        raise InvalidSmoothingExponentError(
            f"Piecewise map with q={q}, eps={eps} is not increasing"
        )
    return alpha, beta


def _piecewise_map(smoothing: SmoothingMap, x):
    q, joint = smoothing.q, 1.0 - smoothing.epsilon
    alpha, beta = _piecewise_coefficients(smoothing)
    distance = 1.0 - np.abs(x)
    sign = np.sign(x)
    end = np.abs(x) > joint
    with np.errstate(invalid="ignore", divide="ignore"):
        phi = np.where(end, sign * (1.0 - distance**q), alpha * x + beta * x**3)
        first = np.where(end, q * distance ** (q - 1.0), alpha + 3.0 * beta * x**2)
        second = np.where(
            end,
            -sign * q * (q - 1.0) * distance ** (q - 2.0) if q != 1 else 0.0,
            6.0 * beta * x,
        )
    return phi, first, np.where(np.isfinite(second), second, 0.0)


def _integral_map(smoothing: SmoothingMap, x):
    q = smoothing.q
    if _integer_exponent(q):
        degree = int(q) - 1
        j = np.arange(degree + 1)
        coefficients = comb(degree, j) * (-1.0) ** j / (2 * j + 1)
        normalizer = 2.0 * coefficients.sum()
        powers = np.power.outer(x, 2 * j + 1)
        antiderivative = (powers + 1.0) @ coefficients
        phi = 2.0 * antiderivative / normalizer - 1.0
    else:
        normalizer = smoothing.normalizer
        phi = 2.0 * betainc(q, q, (x + 1.0) / 2.0) - 1.0

    base = 1.0 - x * x
    first = 2.0 * base ** (q - 1.0) / normalizer
    if q < 2:
        with np.errstate(divide="ignore", invalid="ignore"):
            second = -4.0 * (q - 1.0) * x * base ** (q - 2.0) / normalizer
        second = np.where(base > 0, second, 0.0)
    else:
        second = -4.0 * (q - 1.0) * x * base ** (q - 2.0) / normalizer
    return phi, first, second


def smoothing_derivatives(smoothing: SmoothingMap, x):
    """phi(x), phi'(x) and phi''(x); the identity for q = 1."""
    x = np.asarray(x, dtype=float)
    if smoothing.is_identity:
        return x, np.ones_like(x), np.zeros_like(x)
    if smoothing.kind == "piecewise":
        return _piecewise_map(smoothing, x)
    return _integral_map(smoothing, x)


def smoothing_map(smoothing: SmoothingMap, x) -> Tuple[np.ndarray, np.ndarray]:
    """phi(x) = 2 int_{-1}^x (1 - t^2)^(q-1) dt / B - 1 and phi'(x)."""
    phi, first, _ = smoothing_derivatives(smoothing, x)
    return phi, first


def curve_eval(problem: BoundaryProblem, x):
    """gamma_bar = gamma(phi) with its first two derivatives, each (2, *x.shape)."""
    phi, first, second = smoothing_derivatives(problem.map, x)
    curve = problem.curve
    tangent = np.asarray(curve.dgamma(phi), dtype=float)
    point = np.asarray(curve.gamma(phi), dtype=float)
    return (
        point,
        tangent * first,
        np.asarray(curve.ddgamma(phi), dtype=float) * first**2 + tangent * second,
    )


def _at_endpoint(x):
    return np.isclose(np.abs(x), 1.0, rtol=0.0, atol=MACHINE_EPS)


class LaplaceBIEService:
    """
    Boundary integral reformulation of the interior Laplace problem with a
    nonlinear Neumann condition, solved by the mixed Nystrom scheme.
    """

    def __init__(
        self,
        problem: BoundaryProblem,
        options: Optional[NewtonOptions] = None,
        rhs_nodes: Optional[int] = None,
        logger=None,
    ):
        self.problem = problem
        self.rhs_nodes = rhs_nodes or env().BIE_RHS_NODES
        self.logger = logger or StandardLoggerService()
        self.nystrom = NystromService(options, logger=self.logger)

    def speed(self, x):
        _, tangent, _ = curve_eval(self.problem, x)
        return np.hypot(*tangent)

    def boundary_data(self, x):
        """Points gamma_bar(x) and outward unit normals (eta', -xi') / |gamma'|."""
        point, _, _ = curve_eval(self.problem, x)
        phi, _ = smoothing_map(self.problem.map, x)
        tangent = np.asarray(self.problem.curve.dgamma(phi), dtype=float)
        normal = np.array([tangent[1], -tangent[0]]) / np.hypot(*tangent)
        return point, normal

    def k1(self, x, y):
        """
        Double-layer kernel (1/pi) n(x).(g(x) - g(y)) |g'(x)| / |g(x) - g(y)|^2,
        replaced by its continuous diagonal limit for |x - y| < 1e-5.
        """
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        point_x, tangent, curvature = curve_eval(self.problem, x)
        point_y, _, _ = curve_eval(self.problem, y)

        speed_sq = tangent[0] ** 2 + tangent[1] ** 2
        degenerate = (speed_sq == 0) & ~_at_endpoint(x)
        if degenerate.any():
            raise GeometryError(
                f"Tangent vanishes at x={float(x[degenerate].flat[0])}"
            )

        dx, dy = point_x - point_y
        chord_sq = dx * dx + dy * dy
        near = np.abs(x - y) < NEAR_DIAGONAL
        with np.errstate(divide="ignore", invalid="ignore"):
            off = (tangent[1] * dx - tangent[0] * dy) / chord_sq
            diagonal = (tangent[0] * curvature[1] - tangent[1] * curvature[0]) / (
                2.0 * speed_sq
            )
        diagonal = np.where(speed_sq > 0, diagonal, 0.0)
        return np.where(near, diagonal, off) / np.pi

    def rho(self, x, y):
        """
        (1/pi) |g'(x)| log(|g(y) - g(x)| / |x - y|), continuous at x = y.

        For |x - y| < 1e-5 the chord ratio is taken from the Taylor vector
        g'(x) + g''(x) d / 2 + (g''(y) - g''(x)) d / 6 with d = y - x.
        """
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        point_x, tangent, curvature_x = curve_eval(self.problem, x)
        point_y, _, curvature_y = curve_eval(self.problem, y)
        speed = np.hypot(*tangent)
        chord = np.hypot(*(point_y - point_x))
        step = y - x
        gap = np.abs(step)
        near = gap < NEAR_DIAGONAL

        closure = _at_endpoint(x) & _at_endpoint(y) & ~near
        collapsed = (chord == 0) & ~near & ~closure
        if collapsed.any():
            raise GeometryError(
                "Curve intersects itself between parameters "
                f"{float(x[collapsed].flat[0])} and {float(y[collapsed].flat[0])}"
            )
        taylor = (
            tangent
            + curvature_x * step / 2.0
            + (curvature_y - curvature_x) * step / 6.0
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            off = np.where(closure, -np.inf, np.log(chord / gap))
            diagonal = np.log(np.hypot(*taylor))
        return np.where(speed > 0, speed * np.where(near, diagonal, off), 0.0) / np.pi

    def psi(self, x):
        return self.speed(x) / np.pi

    def nemytskii(self) -> NemytskiiFunction:
        problem = self.problem

        def h(x, v):
            point, _, _ = curve_eval(problem, x)
            return problem.hbar(point, v)

        h_v = None
        if problem.hbar_v is not None:

            def h_v(x, v):
                point, _, _ = curve_eval(problem, x)
                return problem.hbar_v(point, v)

        return NemytskiiFunction(h=h, h_v=h_v)

    def boundary_flux(self, x):
        point, normal = self.boundary_data(x)
        return np.asarray(self.problem.gbar(point, normal), dtype=float)

    def rhs(self, y, nodes: Optional[int] = None):
        """
        g(y) = -(1/pi) int gbar(g(x)) |g'(x)| log|g(y) - g(x)| dx, split into
        a smooth part on the Gauss rule and a log|x - y| part on the product
        rule, both with `nodes` (default BIE_RHS_NODES) points.
        """
        points = np.atleast_1d(np.asarray(y, dtype=float))
        rule = gauss_rule(nodes or self.rhs_nodes)
        flux = self.boundary_flux(rule.nodes)
        product = ProductQuadratureService(
            rule, SingularKernel.logarithmic(psi=self.psi)
        )
        smooth = rule.weights * self.rho(rule.nodes[None, :], points[:, None])
        singular = product.weight_matrix(points) * product.psi
        values = -(smooth + singular) @ flux
        return float(values[0]) if np.ndim(y) == 0 else values.reshape(np.shape(y))

    def hammerstein(self) -> HammersteinProblem:
        return HammersteinProblem(
            k1=self.k1,
            second_kernel=CompositeKernel(rho=self.rho, psi=self.psi),
            nemytskii=self.nemytskii(),
            g=self.rhs,
            name=self.problem.name,
        )

    def solve(self, m: int) -> NystromSolution:
        """Boundary solution f_m(x_k) = u_m(gamma_bar(x_k)) at the m Gauss nodes."""
        if m < 4:
            raise ValueError(f"Boundary solves need m >= 4, got {m}")
        self.logger.info(
            "Solving boundary integral equation",
            problem=self.problem.name,
            curve=self.problem.curve.name,
            m=m,
            q=self.problem.map.q,
        )
        return self.nystrom.solve(self.hammerstein(), m)

    def polygon(self, segments: int = POLYGON_SEGMENTS) -> np.ndarray:
        x = -1.0 + 2.0 * np.arange(segments) / segments
        return np.asarray(self.problem.curve.gamma(x), dtype=float).T

    def winding_number(self, points) -> np.ndarray:
        """Winding numbers of the boundary polygon around points of shape (n, 2)."""
        vertices = self.polygon()
        rel = vertices[None, :, :] - np.asarray(points, dtype=float)[:, None, :]
        angles = np.arctan2(rel[..., 1], rel[..., 0])
        turns = np.diff(np.concatenate([angles, angles[:, :1]], axis=1), axis=1)
        turns = (turns + np.pi) % (2.0 * np.pi) - np.pi
        return turns.sum(axis=1) / (2.0 * np.pi)

    def distance(self, points) -> np.ndarray:
        """Distance of points (n, 2) to the boundary polygon."""
        start = self.polygon()
        end = np.roll(start, -1, axis=0)
        edge = end - start
        rel = np.asarray(points, dtype=float)[:, None, :] - start[None, :, :]
        t = np.clip(
            np.sum(rel * edge, axis=-1) / np.sum(edge * edge, axis=-1), 0.0, 1.0
        )
        nearest = start + t[..., None] * edge
        gap = np.asarray(points, dtype=float)[:, None, :] - nearest
        return np.hypot(gap[..., 0], gap[..., 1]).min(axis=1)

    def inside(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return (np.abs(self.winding_number(points) - 1.0) < 0.5) & (
            self.distance(points) > 0
        )

    def potential(self, solution: NystromSolution, points, upsample: int = 0):
        """
        Green representation of u at interior points (n, 2):

            u(P) = 1/(2 pi) sum lambda_k D_k(P) f_k
                   + 1/(2 pi) sum lambda_k (h_k - gbar_k) |g'(x_k)| log|P - g(x_k)|

        With `upsample` > 0 the boundary values come from the Nystrom
        interpolant on an auxiliary rule of that many nodes.

        Raises:
            DomainError: If a point is on or outside the boundary.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        outside = ~self.inside(points)
        if outside.any():
            raise DomainError(
                f"Point {points[outside][0].tolist()} is not inside "
                f"{self.problem.curve.name}"
            )

        if upsample:
            rule = gauss_rule(upsample)
            values = self.nystrom.interpolate(solution, rule.nodes)
        else:
            rule, values = solution.rule, np.asarray(solution.a)

        boundary, tangent, _ = curve_eval(self.problem, rule.nodes)
        speed = np.hypot(*tangent)
        _, normal = self.boundary_data(rule.nodes)
        jump = (
            np.asarray(self.problem.hbar(boundary, values), dtype=float)
            - np.asarray(self.problem.gbar(boundary, normal), dtype=float)
        )

        dx = boundary[0][None, :] - points[:, 0:1]
        dy = boundary[1][None, :] - points[:, 1:2]
        chord_sq = dx * dx + dy * dy
        double_layer = (tangent[1] * dx - tangent[0] * dy) / chord_sq
        single_layer = 0.5 * np.log(chord_sq) * speed
        return (
            (double_layer @ (rule.weights * values))
            + (single_layer @ (rule.weights * jump))
        ) / (2.0 * np.pi)


def k1_kernel(problem: BoundaryProblem, x, y):
    return LaplaceBIEService(problem).k1(x, y)


def rho_kernel(problem: BoundaryProblem, x, y):
    return LaplaceBIEService(problem).rho(x, y)


def rhs_g(problem: BoundaryProblem, y, nodes: Optional[int] = None):
    return LaplaceBIEService(problem).rhs(y, nodes)


def solve_bie(
    problem: BoundaryProblem, m: int, options: Optional[NewtonOptions] = None
) -> NystromSolution:
    return LaplaceBIEService(problem, options).solve(m)


def potential_eval(
    problem: BoundaryProblem, solution: NystromSolution, points, upsample: int = 0
):
    values = LaplaceBIEService(problem).potential(solution, points, upsample)
    return float(values[0]) if np.ndim(points) == 1 else values
