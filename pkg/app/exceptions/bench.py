class UnknownExampleError(Exception):
    """
    Exception raised when an example id is not part of the registry.

    Attributes:
        message (str): Explanation of the error.
    """
