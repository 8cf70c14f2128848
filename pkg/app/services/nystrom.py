from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import root

from app.exceptions.nystrom import (
    AssemblyError,
    InvalidConvergenceSequenceError,
    NonConvergenceError,
    SingularJacobianError,
    ZeroReferenceError,
)
from app.helpers.gauss_legendre import gauss_rule
from app.models.kernel import SingularKernel
from app.models.problem import (
    CompositeKernel,
    HammersteinProblem,
    NewtonOptions,
    NystromSolution,
    SmoothKernel,
)
from app.models.quadrature import QuadratureRule
from app.services.logging import StandardLoggerService
from app.services.singular_moments import ProductQuadratureService

PIVOT_FLOOR = 1e-300
CERTIFICATE = 1e-13
ROUNDING_ULPS = 32
ERROR_GRID = np.linspace(-1.0, 1.0, 100)


def _kernel_matrix(kernel, nodes, points, label):
    """Rows [kernel(x_k, y_j)]_jk, checked for finiteness."""
    values = np.broadcast_to(
        np.asarray(kernel(nodes[None, :], points[:, None]), dtype=float),
        (points.size, nodes.size),
    )
    _check_finite(values, label)
    return values


def _check_finite(values, label):
    bad = ~np.isfinite(values)
    if bad.any():
        i, k = (int(index) for index in np.argwhere(bad)[0])
        raise AssemblyError(
            f"{label} is not finite at node pair (k={k}, i={i})", k=k, i=i
        )


class NystromSystem:
    """
    Collocated Nystrom system of a problem on a Gauss-Legendre rule.

    The residual is F(a) = A a - W h(x, a) - b with A = I - [lambda_k k1(x_k, x_i)],
    W the second-kernel weights at the nodes and b = g(nodes). A, W and b are
    assembled once.
    """

    def __init__(self, problem: HammersteinProblem, rule: QuadratureRule):
        self.problem = problem
        self.rule = rule
        self.nodes = rule.nodes
        self.product = self._product_service()

        self.linear = np.eye(rule.m) - self.first_weights(self.nodes)
        self.second = self.second_weights(self.nodes)
        self.rhs = self.right_hand_side(self.nodes)

    def _product_service(self) -> Optional[ProductQuadratureService]:
        kernel = self.problem.second_kernel
        if isinstance(kernel, SingularKernel):
            return ProductQuadratureService(self.rule, kernel)
        if isinstance(kernel, CompositeKernel):
            return ProductQuadratureService(
                self.rule, SingularKernel.logarithmic(psi=kernel.psi)
            )
        return None

    def first_weights(self, points) -> np.ndarray:
        """[lambda_k k1(x_k, y_j)], zero when the problem has no k1."""
        points = np.atleast_1d(np.asarray(points, dtype=float))
        if self.problem.k1 is None:
            return np.zeros((points.size, self.rule.m))
        return self.rule.weights * _kernel_matrix(
            self.problem.k1, self.nodes, points, "k1"
        )

    def second_weights(self, points) -> np.ndarray:
        """w_k(y_j) of the second kernel, psi(x_k) included."""
        points = np.atleast_1d(np.asarray(points, dtype=float))
        kernel = self.problem.second_kernel
        if isinstance(kernel, SmoothKernel):
            return self.rule.weights * _kernel_matrix(
                kernel.k2, self.nodes, points, "k2"
            )

        weights = self.product.weight_matrix(points) * self.product.psi
        if isinstance(kernel, CompositeKernel):
            weights = weights + self.rule.weights * _kernel_matrix(
                kernel.rho, self.nodes, points, "rho"
            )
        _check_finite(weights, "product weights")
        return weights

    def right_hand_side(self, points) -> np.ndarray:
        points = np.atleast_1d(np.asarray(points, dtype=float))
        values = np.broadcast_to(
            np.asarray(self.problem.g(points), dtype=float), points.shape
        )
        _check_finite(values[:, None], "g")
        return values

    def nonlinear(self, a) -> np.ndarray:
        values = self.problem.nemytskii.value(self.nodes, a)
        _check_finite(values[None, :], "h")
        return values

    def residual(self, a) -> np.ndarray:
        return self.linear @ a - self.second @ self.nonlinear(a) - self.rhs

    def jacobian(self, a) -> np.ndarray:
        slope = self.problem.nemytskii.derivative(self.nodes, a)
        return self.linear - self.second * slope

    def term_scale(self, a) -> float:
        """max_i of sum_k |A_ik a_k| + |W_ik h(x_k, a_k)| + |b_i|."""
        terms = (
            np.abs(self.linear * a).sum(axis=1)
            + np.abs(self.second * self.nonlinear(a)).sum(axis=1)
            + np.abs(self.rhs)
        )
        return float(terms.max())


def certified(system, a, norm) -> bool:
    """
    Residual certificate of a Newton iterate: max|F(a)| <= 1e-13 (1 + max|a|),
    or at most ROUNDING_ULPS units of roundoff of the summed terms of F, the
    floor below which the residual of a double precision iterate cannot fall.
    """
    if norm <= CERTIFICATE * (1.0 + np.abs(a).max()):
        return True
    return norm <= ROUNDING_ULPS * np.finfo(float).eps * system.term_scale(a)


class NystromService:
    """
    Solves Hammerstein problems by the Nystrom method and evaluates the
    Nystrom interpolant of the node solution.
    """

    def __init__(self, options: Optional[NewtonOptions] = None, logger=None):
        self.options = options or NewtonOptions()
        self.logger = logger or StandardLoggerService()

    def assemble(self, problem: HammersteinProblem, rule: QuadratureRule):
        self.logger.debug("Assembling system", problem=problem.name, m=rule.m)
        return NystromSystem(problem, rule)

    def newton(self, system, initial) -> Tuple[np.ndarray, int, float]:
        """
        Newton iteration with dense LU factorization per step.

        Stops when max|F(a)| <= tol (1 + max|a|) or the Newton correction
        satisfies max|da| <= tol max(1, max|a|). A full step is taken unless
        its residual is not finite or exceeds `growth_limit` times the current
        one; such steps are halved up to `max_damping` times. When no halving
        helps, or the residual stops decreasing, the iterate is accepted only
        if it passes `certified`.

        Returns:
            Tuple[np.ndarray, int, float]: Solution, iterations, residual norm.
        """
        if self.options.method == "hybr":
            return self._hybrid(system, initial)

        tol = self.options.tol
        a = np.array(initial, dtype=float)
        if not np.all(np.isfinite(a)):
            raise ValueError("Initial guess must be finite")
        residual = system.residual(a)
        norm = np.abs(residual).max()
        best, best_norm = a.copy(), norm

        for iteration in range(1, self.options.max_iter + 1):
            if norm <= tol * (1.0 + np.abs(a).max()):
                return a, iteration - 1, float(norm)

            factors = lu_factor(system.jacobian(a), check_finite=False)
            if np.abs(np.diag(factors[0])).min() < PIVOT_FLOOR:
                raise SingularJacobianError(
                    f"Jacobian is singular at iteration {iteration}"
                )
            delta = lu_solve(factors, residual, check_finite=False)

            step, candidate, candidate_residual = self._damped_step(
                system, a, delta, norm
            )
            if step is None:
                if certified(system, a, norm):
                    self._stagnated(iteration, norm)
                    return a, iteration, float(norm)
                self.logger.error(
                    "No acceptable Newton step",
                    iteration=iteration,
                    residual=float(best_norm),
                )
                raise NonConvergenceError(
                    f"No acceptable Newton step at iteration {iteration} "
                    f"(residual {best_norm:.3e})",
                    best=best,
                    iterations=iteration,
                    residual_norm=float(best_norm),
                )
            previous = norm
            a, residual = candidate, candidate_residual
            norm = np.abs(residual).max()
            if norm < best_norm:
                best, best_norm = a.copy(), norm

            self.logger.debug(
                "Newton iteration",
                iteration=iteration,
                residual=float(norm),
                step=float(step * np.abs(delta).max()),
                damping=step,
            )
            correction = np.abs(delta).max()
            if correction <= tol * max(1.0, np.abs(a).max()) and certified(
                system, a, norm
            ):
                return a, iteration, float(norm)
            if norm >= previous and certified(system, a, norm):
                self._stagnated(iteration, norm)
                return a, iteration, float(norm)

        self.logger.error(
            "Newton iteration did not converge",
            iterations=self.options.max_iter,
            residual=float(best_norm),
        )
        raise NonConvergenceError(
            f"No convergence after {self.options.max_iter} iterations "
            f"(residual {best_norm:.3e})",
            best=best,
            iterations=self.options.max_iter,
            residual_norm=float(best_norm),
        )

    def _stagnated(self, iteration, norm):
        self.logger.warning(
            "Residual stagnated at rounding level",
            iteration=iteration,
            residual=float(norm),
        )

    def _damped_step(self, system, a, delta, norm):
        """First of a - delta, a - delta/2, ... whose residual is acceptable."""
        limit = self.options.growth_limit * norm
        step = 1.0
        for _ in range(self.options.max_damping + 1):
            candidate = a - step * delta
            try:
                residual = system.residual(candidate)
            except AssemblyError:
                residual = None
            if residual is not None and np.all(np.isfinite(residual)):
                candidate_norm = np.abs(residual).max()
                if candidate_norm < norm or candidate_norm <= limit:
                    return step, candidate, residual
            step /= 2.0
        return None, a, None

    def _hybrid(self, system, initial):
        result = root(
            system.residual,
            np.array(initial, dtype=float),
            jac=system.jacobian,
            method="hybr",
            tol=self.options.tol,
            options={"maxfev": self.options.max_iter * (len(initial) + 1)},
        )
        norm = float(np.abs(system.residual(result.x)).max())
        if not result.success:
            self.logger.error("Hybrid solver failed", message=result.message)
            raise NonConvergenceError(
                f"Hybrid solver failed: {result.message}",
                best=result.x,
                iterations=int(result.nfev),
                residual_norm=norm,
            )
        return result.x, int(result.nfev), norm

    def initial_guess(self, system: NystromSystem) -> np.ndarray:
        """a0 = initial(nodes) when the problem sets one, else g(nodes)."""
        if system.problem.initial is None:
            return system.rhs
        return np.broadcast_to(
            np.asarray(system.problem.initial(system.nodes), dtype=float),
            system.nodes.shape,
        )

    def solve(self, problem: HammersteinProblem, m: int) -> NystromSolution:
        rule = gauss_rule(m)
        system = self.assemble(problem, rule)
        a, iterations, norm = self.newton(system, self.initial_guess(system))
        self.logger.info(
            "Nystrom solve converged",
            problem=problem.name,
            m=m,
            iterations=iterations,
            residual=norm,
        )
        return NystromSolution(
            rule=rule,
            a=a,
            problem=problem,
            iterations=iterations,
            residual_norm=norm,
            system=system,
        )

    def interpolate(self, solution: NystromSolution, y):
        """
        Nystrom interpolant
        f_m(y) = sum lambda_k k1(x_k, y) a_k + sum w_k(y) h(x_k, a_k) + g(y).
        """
        system = solution.system or NystromSystem(solution.problem, solution.rule)
        points = np.atleast_1d(np.asarray(y, dtype=float))
        values = (
            system.first_weights(points) @ solution.a
            + system.second_weights(points) @ system.nonlinear(solution.a)
            + system.right_hand_side(points)
        )
        return float(values[0]) if np.ndim(y) == 0 else values.reshape(np.shape(y))


def assemble_system(problem: HammersteinProblem, rule: QuadratureRule) -> NystromSystem:
    return NystromSystem(problem, rule)


def newton_solve(system, initial, options: Optional[NewtonOptions] = None):
    """Returns (a*, iterations)."""
    a, iterations, _ = NystromService(options).newton(system, initial)
    return a, iterations


def solve(
    problem: HammersteinProblem, m: int, options: Optional[NewtonOptions] = None
) -> NystromSolution:
    return NystromService(options).solve(problem, m)


def interpolant_eval(solution: NystromSolution, y):
    return NystromService().interpolate(solution, y)


def relative_error(solution: NystromSolution, reference) -> float:
    """
    Max-norm error on 100 equispaced points of [-1, 1] (end points included),
    relative to the max of the reference there. The reference is a callable
    or another solution, whose interpolant is then used.
    """
    if isinstance(reference, NystromSolution):
        exact = interpolant_eval(reference, ERROR_GRID)
    else:
        exact = np.broadcast_to(
            np.asarray(reference(ERROR_GRID), dtype=float), ERROR_GRID.shape
        )
    scale = np.abs(exact).max()
    if scale == 0:
        raise ZeroReferenceError("Reference solution vanishes on the error grid")
    return float(np.abs(exact - interpolant_eval(solution, ERROR_GRID)).max() / scale)


def eoc(errors: Sequence[Tuple[int, float]]) -> np.ndarray:
    """EOC_m = log2(E_m / E_2m) for consecutive doubling rule orders."""
    orders = np.array([m for m, _ in errors], dtype=float)
    values = np.array([error for _, error in errors], dtype=float)
    if np.any(orders[1:] != 2.0 * orders[:-1]):
        raise InvalidConvergenceSequenceError(
            f"Rule orders {orders.astype(int).tolist()} do not double"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(values[:-1] / values[1:]) / np.log(2.0)
