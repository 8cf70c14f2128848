class InvalidKernelError(Exception):
    """
    Exception raised for singular kernel descriptions that are not weakly
    singular: algebraic exponents mu <= -1, mu == 0 (reserved for the
    logarithmic tag) or a smooth factor psi that is not finite on [-1, 1].

    Attributes:
        message (str): Explanation of the error.
    """


class MomentValidationError(Exception):
    """
    Exception raised when a modified-moment vector disagrees with the
    oracle even after the slow path was taken.

    Attributes:
        message (str): Explanation of the error.
        y (float): Singularity location of the failing vector.
        index (int): Degree of the first failing moment.
    """

    def __init__(self, message, y=None, index=None):
        super().__init__(message)
        self.y = y
        self.index = index
