from typing import Callable, Dict, List, Literal, Optional, Tuple

from pydantic import Field

from app.models.base import NumericModel


class ExampleSpec(NumericModel):
    """
    Registry entry of a reproducible experiment.

    Attributes:
        id (str): Registry key (ex1 ... ex9, bie1 ... bie3).
        title (str): One-line description.
        kind (str): "interval" for Hammerstein problems on [-1, 1],
            "boundary" for the Laplace boundary problems.
        build (Callable): Problem constructor; boundary examples take q.
        exact (Optional[Callable]): Exact solution, or None when the
            interpolant at the reference order serves as exact.
        default_m (List[int]): Rule orders of the published table.
        default_q (Tuple[float, ...]): Smoothing exponents of the table.
        targets (Dict): Published errors, keyed by q then m; interval
            examples use q = 1 and a single error, boundary examples a pair
            (boundary error, interior error).
        eoc_targets (Dict[int, float]): Published EOC values keyed by m.
    """

    id: str
    title: str
    kind: Literal["interval", "boundary"]
    build: Callable
    exact: Optional[Callable] = None
    default_m: List[int]
    default_q: Tuple[float, ...] = (1.0,)
    targets: Dict[float, Dict[int, Tuple[float, ...]]] = Field(default_factory=dict)
    eoc_targets: Dict[int, float] = Field(default_factory=dict)

    @property
    def self_referenced(self) -> bool:
        return self.exact is None
