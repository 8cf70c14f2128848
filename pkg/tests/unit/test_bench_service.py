from types import SimpleNamespace
from unittest.mock import patch

import numpy as np
import pytest

from app.exceptions.bench import UnknownExampleError
from app.exceptions.boundary import SamplingError
from app.exceptions.nystrom import NonConvergenceError
from app.responses.bench import ConvergenceReport, ReportRow
from app.services.bench import (
    CSV_COLUMNS,
    BenchService,
    emit_table,
    parse_csv,
    run_example,
    sample_interior_points,
)
from app.services.nystrom import NystromService

SMALL_SAMPLE = SimpleNamespace(
    INTERIOR_POINTS=20, INTERIOR_BAND=0.3, POTENTIAL_UPSAMPLE=0
)


@pytest.fixture
def interval_report():
    return ConvergenceReport(
        example="ex1",
        rows=[
            ReportRow(m=4, error=4.88e-8, iterations=5),
            ReportRow(m=8, error=4.9e-16, iterations=6),
        ],
    )


def test_markdown_table(interval_report):
    table = emit_table(interval_report, "md")

    assert table.splitlines() == [
        "| m | error | iterations | EOC |",
        "|---|---|---|---|",
        "| 4 | 4.88e-08 | 5 | - |",
        "| 8 | 4.90e-16 | 6 | - |",
    ]
    assert emit_table(interval_report, "markdown") == table


def test_markdown_eoc_in_scientific_format(interval_report):
    interval_report.rows[1].eoc = 3.85

    lines = emit_table(interval_report, "md").splitlines()

    assert lines[3] == "| 8 | 4.90e-16 | 6 | 3.85e+00 |"


def test_markdown_table_of_empty_report():
    table = emit_table(ConvergenceReport(example="ex1"), "md")

    assert table == "| m | error | iterations | EOC |\n|---|---|---|---|\n"


def test_markdown_table_with_boundary_errors():
    report = ConvergenceReport(
        example="bie1",
        rows=[
            ReportRow(m=16, error=1.42e-1, boundary_error=1.14e-2, iterations=7),
            ReportRow(m=32, status="non-convergence", iterations=100),
        ],
    )

    lines = emit_table(report, "md").splitlines()

    assert lines[0] == "| m | boundary error | error | iterations | EOC |"
    assert lines[2] == "| 16 | 1.14e-02 | 1.42e-01 | 7 | - |"
    assert lines[3] == "| 32 | - | - | 100 | - |"


def test_csv_round_trip(interval_report):
    interval_report.rows[1].eoc = 26.6

    text = emit_table(interval_report, "csv")

    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert "4.88e-08" in text.splitlines()[1]
    assert text.splitlines()[2].endswith(",2.66e+01")
    assert parse_csv(text) == interval_report.rows


def test_unknown_table_format(interval_report):
    with pytest.raises(ValueError):
        emit_table(interval_report, "json")


def test_eoc_is_attached_to_the_larger_order():
    rows = [
        ReportRow(m=8, error=1.6e-3),
        ReportRow(m=16, error=4e-4),
        ReportRow(m=32, status="non-convergence"),
    ]

    BenchService()._attach_eoc(rows)

    assert rows[0].eoc is None
    assert rows[1].eoc == pytest.approx(2.0)
    assert rows[2].eoc is None


def test_eoc_needs_doubling_orders():
    rows = [ReportRow(m=8, error=1e-3), ReportRow(m=12, error=1e-4)]

    BenchService()._attach_eoc(rows)

    assert all(row.eoc is None for row in rows)


def test_interior_sampling_is_reproducible(circle_problem):
    first = sample_interior_points(circle_problem, 50, seed=3, band=0.1)
    second = sample_interior_points(circle_problem, 50, seed=3, band=0.1)
    other = sample_interior_points(circle_problem, 50, seed=4, band=0.1)

    assert first.shape == (50, 2)
    np.testing.assert_array_equal(first, second)
    assert not np.array_equal(first, other)
    assert np.hypot(*first.T).max() <= 0.9 + 1e-5


def test_interior_sampling_in_the_ellipse(ellipse_problem):
    points = sample_interior_points(ellipse_problem, 100, seed=11, band=0.05)

    assert np.all(points[:, 0] ** 2 + points[:, 1] ** 2 / 4.0 < 1.0)


def test_interior_sampling_budget(circle_problem):
    with pytest.raises(SamplingError):
        sample_interior_points(circle_problem, 5, seed=1, band=1.5, budget=1000)
    with pytest.raises(ValueError):
        sample_interior_points(circle_problem, 0, seed=1)


def test_run_smooth_example():
    report = run_example("ex1", [4, 8])

    assert [row.m for row in report.rows] == [4, 8]
    assert report.rows[0].error <= 50 * 4.88e-8
    assert report.rows[1].error <= 1e-13
    assert report.rows[0].eoc is None
    assert report.converged
    assert report.metadata["reference"] == "exact"
    assert report.metadata["solver"] == "newton"


def test_run_weakly_singular_example():
    report = run_example("ex8", [4])

    assert report.rows[0].error <= 1e-13
    assert report.rows[0].eoc is None


def test_run_unknown_example():
    with pytest.raises(UnknownExampleError):
        run_example("ex5", [4])


def test_non_convergence_becomes_a_row():
    failure = NonConvergenceError("stalled", iterations=100, residual_norm=1e-3)

    with patch.object(NystromService, "solve", side_effect=failure):
        report = run_example("ex1", [4, 8])

    assert not report.converged
    assert [row.status for row in report.rows] == ["non-convergence"] * 2
    assert report.rows[0].iterations == 100
    assert report.rows[0].error is None


def test_run_boundary_example():
    with patch("app.services.bench.env", return_value=SMALL_SAMPLE):
        report = run_example("bie1", [16, 32], q=2.0)

    first, second = report.rows
    assert report.metadata["q"] == 2.0
    assert report.metadata["points"] == 20
    assert report.metadata["band"] == 0.3
    assert report.metadata["upsample"] == 0
    assert np.isfinite(first.error) and np.isfinite(second.error)
    assert second.boundary_error < first.boundary_error
    assert second.eoc is not None
