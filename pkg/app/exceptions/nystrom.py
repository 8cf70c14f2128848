class AssemblyError(Exception):
    """
    Exception raised when kernel or right-hand side data is not finite at a
    node pair while assembling the collocation system.

    Attributes:
        message (str): Explanation of the error.
        k (int): Quadrature node index (integration variable).
        i (int): Collocation node index.
    """

    def __init__(self, message, k=None, i=None):
        super().__init__(message)
        self.k = k
        self.i = i


class SingularJacobianError(Exception):
    """
    Exception raised when the LU factorization of the Newton Jacobian has a
    pivot below 1e-300 in magnitude.

    Attributes:
        message (str): Explanation of the error.
    """


class NonConvergenceError(Exception):
    """
    Exception raised when the nonlinear solver exhausts its iteration budget.

    Attributes:
        message (str): Explanation of the error.
        best (numpy.ndarray): Iterate with the smallest residual norm seen.
        iterations (int): Number of iterations performed.
        residual_norm (float): Max-norm of the residual at the best iterate.
    """

    def __init__(self, message, best=None, iterations=None, residual_norm=None):
        super().__init__(message)
        self.best = best
        self.iterations = iterations
        self.residual_norm = residual_norm


class ZeroReferenceError(Exception):
    """
    Exception raised when the reference solution vanishes on the whole error
    grid, so a relative error cannot be formed.
    """


class InvalidConvergenceSequenceError(Exception):
    """
    Exception raised when the rule orders handed to the convergence-order
    estimate do not double from one entry to the next.
    """
