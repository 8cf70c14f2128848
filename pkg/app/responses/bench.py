from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class ReportRow(BaseModel):
    """
    One rule order of a convergence table.

    Attributes:
        m (int): Rule order.
        error (Optional[float]): Relative grid error (interval examples) or
            interior max error (boundary examples); None when the solve failed.
        boundary_error (Optional[float]): Max error at the boundary nodes.
        iterations (Optional[int]): Nonlinear solver iterations.
        eoc (Optional[float]): log2 of the error ratio to the previous order.
        status (str): "ok" or "non-convergence".
    """

    m: int
    error: Optional[float] = None
    boundary_error: Optional[float] = None
    iterations: Optional[int] = None
    eoc: Optional[float] = None
    status: Literal["ok", "non-convergence"] = "ok"

    model_config = ConfigDict(from_attributes=True)


class ConvergenceReport(BaseModel):
    """
    Error table of one benchmark run.

    `metadata` holds seed, q, reference mode, wall time and sampling band;
    it is not part of the emitted tables so that they stay reproducible.
    """

    example: str
    rows: List[ReportRow] = Field(default_factory=list)
    metadata: Dict[str, object] = Field(default_factory=dict)

    model_config = ConfigDict(from_attributes=True)

    @property
    def converged(self) -> bool:
        return all(row.status == "ok" for row in self.rows)
