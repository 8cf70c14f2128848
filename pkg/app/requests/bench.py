from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.helpers.environment import env
from app.helpers.gauss_legendre import MAX_ORDER
from app.services.examples import REGISTRY


class RunExampleRequest(BaseModel):
    """
    Parameters of one benchmark run.

    Attributes:
        example (str): Registry id of the example.
        m (List[int]): Rule orders; a comma-separated string is accepted.
            Defaults to the orders of the published table.
        format (str): "csv" or "md" ("markdown" is accepted).
        q (Optional[float]): Smoothing exponent of boundary examples.
        seed (int): Seed of the interior sample points.
        ref_m (int): Rule order of the self-reference solution.
        out (Optional[str]): Output file; stdout when absent.
        solver (str): "newton" or "hybr".
    """

    example: str
    m: List[int] = Field(default_factory=list)
    format: Literal["csv", "md"] = "md"
    q: Optional[float] = None
    seed: int = Field(default_factory=lambda: env().BENCH_SEED)
    ref_m: int = Field(default_factory=lambda: env().BENCH_REF_M)
    out: Optional[str] = None
    solver: Literal["newton", "hybr"] = "newton"

    model_config = ConfigDict(from_attributes=True)

    @field_validator("example", mode="before")
    def check_example(cls, value):
        if value not in REGISTRY:
            raise ValueError(
                f"Unknown example '{value}', expected one of {', '.join(REGISTRY)}"
            )
        return value

    @field_validator("m", mode="before")
    def parse_orders(cls, value):
        if value is None:
            return []
        if isinstance(value, str):
            try:
                value = [int(item) for item in value.split(",") if item.strip()]
            except ValueError:
                raise ValueError(f"Rule orders must be integers, got '{value}'")
        return value

    @field_validator("m")
    def check_orders(cls, value):
        for order in value:
            if not 1 <= order <= MAX_ORDER:
                raise ValueError(f"Rule order {order} is outside [1, {MAX_ORDER}]")
        if len(set(value)) != len(value):
            raise ValueError("Rule orders must be distinct")
        return sorted(value)

    @field_validator("format", mode="before")
    def normalize_format(cls, value):
        return "md" if value == "markdown" else value

    @field_validator("q")
    def check_q(cls, value):
        if value is not None and value < 1:
            raise ValueError("Smoothing exponent q must be >= 1")
        return value

    @field_validator("ref_m")
    def check_reference(cls, value):
        if not 1 <= value <= MAX_ORDER:
            raise ValueError(f"Reference order {value} is outside [1, {MAX_ORDER}]")
        return value

    @model_validator(mode="after")
    def apply_defaults(self):
        spec = REGISTRY[self.example]
        if not self.m:
            self.m = list(spec.default_m)
        if spec.kind == "boundary" and min(self.m) < 4:
            raise ValueError("Boundary examples need rule orders m >= 4")
        if spec.kind == "interval" and self.q is not None:
            raise ValueError("--q applies to boundary examples only")
        if self.q is None and spec.kind == "boundary":
            self.q = spec.default_q[-1]
        return self
