class InvalidRuleOrderError(Exception):
    """
    Exception raised when a Gauss-Legendre rule is requested with an order
    outside the supported range (1 <= m <= 2048).

    Attributes:
        message (str): Explanation of the error.
    """


class QuadratureEvaluationError(Exception):
    """
    Exception raised when an integrand returns non-finite values at the
    quadrature nodes.

    Attributes:
        message (str): Explanation of the error.
    """
