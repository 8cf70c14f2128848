import numpy as np
from aws_lambda_powertools.logging.formatter import LambdaPowertoolsFormatter


def to_builtin(value):
    """Convert numpy scalars and arrays found in log keys to JSON-friendly values."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


class StandardLogFormatter(LambdaPowertoolsFormatter):
    """
    JSON formatter for solver logs.

    Structured keys frequently carry numpy values (norms, node counts), which
    the default serializer rejects, so they are converted before dumping.
    """

    def __init__(self, **kwargs):
        kwargs.setdefault("json_default", to_builtin)
        super().__init__(**kwargs)
