import csv
import io
import time
from typing import List, Optional, Sequence

import numpy as np

from app.exceptions.boundary import SamplingError
from app.exceptions.nystrom import InvalidConvergenceSequenceError, NonConvergenceError
from app.helpers.environment import env
from app.helpers.random import SplitMix64
from app.models.boundary import BoundaryProblem
from app.models.problem import NewtonOptions
from app.requests.bench import RunExampleRequest
from app.responses.bench import ConvergenceReport, ReportRow
from app.services.examples import get_example
from app.services.laplace_bie import LaplaceBIEService, curve_eval
from app.services.logging import StandardLoggerService
from app.services.nystrom import NystromService, eoc, relative_error

SAMPLING_BUDGET = 1_000_000
SAMPLING_BATCH = 256
CSV_COLUMNS = [
    "m",
    "error",
    "boundary_error",
    "iterations",
    "eoc",
    "status",
    "error_fmt",
    "boundary_error_fmt",
    "eoc_fmt",
]


def sample_interior_points(
    problem: BoundaryProblem,
    n: int,
    seed: int,
    band: Optional[float] = None,
    budget: int = SAMPLING_BUDGET,
) -> np.ndarray:
    """
    Seeded rejection sampling of n points inside the curve, at distance at
    least `band` (default INTERIOR_BAND) from it.

    Candidates are uniform in the bounding box of a 2048-segment polygon,
    drawn as (x, y) pairs from SplitMix64(seed).

    Raises:
        SamplingError: If `budget` candidates do not yield n points.
    """
    if n < 1:
        raise ValueError(f"Number of points must be positive, got {n}")
    band = env().INTERIOR_BAND if band is None else band
    service = LaplaceBIEService(problem)
    polygon = service.polygon()
    low, high = polygon.min(axis=0), polygon.max(axis=0)

    generator = SplitMix64(seed)
    accepted: List[np.ndarray] = []
    count, drawn = 0, 0
    while count < n:
        if drawn >= budget:
            raise SamplingError(
                f"Collected {count} of {n} interior points in {budget} draws"
            )
        size = min(SAMPLING_BATCH, budget - drawn)
        candidates = low + generator.uniform(2 * size).reshape(size, 2) * (high - low)
        drawn += size
        keep = service.inside(candidates)
        keep[keep] = service.distance(candidates[keep]) >= band
        accepted.append(candidates[keep])
        count += int(keep.sum())
    return np.concatenate(accepted)[:n]


def _is_doubling(orders: Sequence[int]) -> bool:
    return len(orders) > 1 and all(b == 2 * a for a, b in zip(orders, orders[1:]))


class BenchService:
    """Runs registry examples and assembles convergence reports."""

    def __init__(self, logger=None):
        self.logger = logger or StandardLoggerService()

    def run(self, request: RunExampleRequest) -> ConvergenceReport:
        spec = get_example(request.example)
        options = NewtonOptions(method=request.solver)
        started = time.perf_counter()
        with self.logger.keys(example=spec.id):
            if spec.kind == "interval":
                rows, metadata = self._run_interval(spec, request, options)
            else:
                rows, metadata = self._run_boundary(spec, request, options)
        self._attach_eoc(rows)
        metadata.update(
            seed=request.seed,
            solver=request.solver,
            wall_time=round(time.perf_counter() - started, 3),
        )
        return ConvergenceReport(example=spec.id, rows=rows, metadata=metadata)

    def _run_interval(self, spec, request, options):
        problem = spec.build()
        nystrom = NystromService(options, logger=self.logger)
        if spec.self_referenced:
            reference = nystrom.solve(problem, request.ref_m)
            mode = f"f_{request.ref_m}"
        else:
            reference, mode = spec.exact, "exact"

        rows = []
        for m in request.m:
            try:
                with self.logger.timed("Solve finished", m=m):
                    solution = nystrom.solve(problem, m)
            except NonConvergenceError as e:
                rows.append(self._failed_row(m, e))
                continue
            row = ReportRow(
                m=m,
                error=relative_error(solution, reference),
                iterations=solution.iterations,
            )
            self.logger.info("Report row", m=m, error=row.error)
            rows.append(row)
        return rows, {"reference": mode}

    def _run_boundary(self, spec, request, options):
        problem = spec.build(request.q)
        service = LaplaceBIEService(problem, options, logger=self.logger)
        points = sample_interior_points(
            problem, env().INTERIOR_POINTS, request.seed
        )
        exact_inside, _ = spec.exact(points.T)
        upsample = env().POTENTIAL_UPSAMPLE

        rows = []
        for m in request.m:
            try:
                with self.logger.timed("Solve finished", m=m):
                    solution = service.solve(m)
            except NonConvergenceError as e:
                rows.append(self._failed_row(m, e))
                continue
            nodes, _, _ = curve_eval(problem, solution.rule.nodes)
            exact_nodes, _ = spec.exact(nodes)
            approximate = service.potential(solution, points, upsample=upsample)
            row = ReportRow(
                m=m,
                error=float(np.abs(approximate - exact_inside).max()),
                boundary_error=float(np.abs(solution.a - exact_nodes).max()),
                iterations=solution.iterations,
            )
            self.logger.info(
                "Report row",
                m=m,
                error=row.error,
                boundary_error=row.boundary_error,
            )
            rows.append(row)
        return rows, {
            "reference": "exact",
            "q": request.q,
            "band": env().INTERIOR_BAND,
            "points": int(points.shape[0]),
            "upsample": upsample,
        }

    def _failed_row(self, m, error: NonConvergenceError) -> ReportRow:
        self.logger.error(
            "Solver did not converge", m=m, residual=error.residual_norm
        )
        return ReportRow(m=m, iterations=error.iterations, status="non-convergence")

    def _attach_eoc(self, rows: List[ReportRow]) -> None:
        """EOC of each doubling is printed on the row of the larger order."""
        orders = [row.m for row in rows]
        if not _is_doubling(orders):
            return
        errors = [
            (row.m, np.nan if row.error is None else row.error) for row in rows
        ]
        try:
            values = eoc(errors)
        except InvalidConvergenceSequenceError:
            return
        for row, value in zip(rows[1:], values):
            row.eoc = float(value) if np.isfinite(value) else None


def run_example(
    example_id: str, m_list: Sequence[int], **options
) -> ConvergenceReport:
    """Run a registry example; options are RunExampleRequest fields."""
    get_example(example_id)
    request = RunExampleRequest(example=example_id, m=list(m_list), **options)
    return BenchService().run(request)


def _scientific(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.2e}"


def _full(value) -> str:
    return "" if value is None else repr(value)


def _markdown(report: ConvergenceReport) -> str:
    boundary = any(row.boundary_error is not None for row in report.rows)
    header = ["m", "error", "iterations", "EOC"]
    if boundary:
        header.insert(1, "boundary error")
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(["---"] * len(header)) + "|",
    ]
    for row in report.rows:
        cells = [
            str(row.m),
            _scientific(row.error),
            "-" if row.iterations is None else str(row.iterations),
            _scientific(row.eoc),
        ]
        if boundary:
            cells.insert(1, _scientific(row.boundary_error))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _csv(report: ConvergenceReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(
            [
                row.m,
                _full(row.error),
                _full(row.boundary_error),
                _full(row.iterations),
                _full(row.eoc),
                row.status,
                _scientific(row.error),
                _scientific(row.boundary_error),
                _scientific(row.eoc),
            ]
        )
    return buffer.getvalue()


def emit_table(report: ConvergenceReport, format: str = "md") -> str:
    """Render the report as a markdown table ("md"/"markdown") or as CSV."""
    if format in ("md", "markdown"):
        return _markdown(report)
    if format == "csv":
        return _csv(report)
    raise ValueError(f"Unknown table format '{format}'")


def parse_csv(text: str) -> List[ReportRow]:
    """Rows of a table written by emit_table(..., "csv")."""

    def number(value, cast=float):
        return None if value == "" else cast(value)

    reader = csv.DictReader(io.StringIO(text))
    return [
        ReportRow(
            m=int(record["m"]),
            error=number(record["error"]),
            boundary_error=number(record["boundary_error"]),
            iterations=number(record["iterations"], int),
            eoc=number(record["eoc"]),
            status=record["status"],
        )
        for record in reader
    ]
