import numpy as np
from pydantic import BaseModel, ConfigDict


class NumericModel(BaseModel):
    """
    Base class for the immutable numerical domain types.

    Instances carry numpy arrays and plain callables, so arbitrary types are
    allowed; models are frozen and every array handed to them is made
    read-only, which lets rules, kernels and solutions be shared between
    solves without copies.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def readonly(values, dtype=float) -> np.ndarray:
    """Return a read-only float copy of `values`."""
    array = np.array(values, dtype=dtype)
    array.flags.writeable = False
    return array
