from functools import lru_cache

import numpy as np
import pytest

from app.services.bench import emit_table, run_example
from app.services.examples import get_example

ENVELOPE = 50.0
EOC_BAND = 0.6
INTERVAL_EXAMPLES = ["ex1", "ex2", "ex3", "ex4", "ex7", "ex8", "ex9"]


@lru_cache(maxsize=None)
def table(example_id, q=None):
    spec = get_example(example_id)
    options = {} if q is None else {"q": q}
    return run_example(example_id, spec.default_m, **options)


def rows_by_order(report):
    return {row.m: row for row in report.rows}


@pytest.mark.parametrize("example_id", INTERVAL_EXAMPLES)
def test_interval_errors_within_envelope(example_id):
    spec = get_example(example_id)
    report = table(example_id)

    assert report.converged
    for row in report.rows:
        (published,) = spec.targets[1.0][row.m]
        assert row.error <= ENVELOPE * published, f"m={row.m}"


@pytest.mark.parametrize("example_id", ["ex3", "ex4", "ex9"])
def test_convergence_orders_match_published_values(example_id):
    spec = get_example(example_id)
    rows = rows_by_order(table(example_id))

    for m, published in spec.eoc_targets.items():
        if m <= 128:
            assert abs(rows[m].eoc - published) <= EOC_BAND, f"m={m}"


def test_smooth_kernels_reach_rounding_level():
    assert rows_by_order(table("ex1"))[8].error <= 1e-14
    assert rows_by_order(table("ex2"))[16].error <= 1e-14


def test_complete_equation_against_self_reference():
    rows = rows_by_order(table("ex3"))

    assert table("ex3").metadata["reference"] == "f_512"
    assert rows[256].error <= 5e-9
    assert all(rows[m].eoc >= 3.0 for m in (16, 32, 64, 128))


def test_non_smooth_kernel_order():
    rows = rows_by_order(table("ex4"))

    assert rows[256].error <= 1e-9
    assert all(rows[m].eoc >= 4.0 for m in (16, 32, 64, 128))


def test_weakly_singular_kernels_are_exact_on_polynomial_solutions():
    assert table("ex7").rows[0].error <= 1e-12
    assert table("ex8").rows[0].error <= 1e-13


def test_algebraic_singularity_order():
    rows = rows_by_order(table("ex9"))

    assert rows[256].error <= 1e-5
    assert all(1.5 <= rows[m].eoc <= 2.6 for m in (16, 32, 64, 128))


def test_algebraic_singularity_matches_published_errors():
    spec = get_example("ex9")
    rows = rows_by_order(table("ex9"))

    for m in (16, 32, 64, 128):
        (published,) = spec.targets[1.0][m]
        assert rows[m].error == pytest.approx(published, rel=0.05), f"m={m}"


def test_tables_are_deterministic():
    first = emit_table(run_example("ex3", [8, 16, 32]), "csv")
    second = emit_table(run_example("ex3", [8, 16, 32]), "csv")

    assert first == second


def test_ellipse_with_sine_nonlinearity():
    (row,) = run_example("bie1", [512], q=2.0).rows

    assert row.error <= 1e-10
    assert row.boundary_error <= 1e-7


def test_ellipse_with_quartic_nonlinearity():
    (row,) = run_example("bie2", [512], q=2.0).rows

    assert row.error <= 1e-8


def test_amoeba_without_smoothing():
    (row,) = run_example("bie3", [512], q=1.0).rows

    assert row.error <= 1e-8


@pytest.mark.parametrize(
    "example_id, q, orders",
    [
        ("bie1", 1.0, [64, 128]),
        ("bie2", 1.0, [128, 256]),
        ("bie2", 2.0, [128, 256]),
        ("bie3", 1.0, [128, 256]),
    ],
)
def test_boundary_errors_within_envelope(example_id, q, orders):
    targets = get_example(example_id).targets[q]
    report = run_example(example_id, orders, q=q)

    assert report.converged
    assert report.metadata["upsample"] == 0
    for row in report.rows:
        boundary, interior = targets[row.m]
        assert row.boundary_error <= ENVELOPE * boundary, f"m={row.m}"
        assert row.error <= ENVELOPE * interior, f"m={row.m}"


def test_smoothing_improves_ellipse_boundary_error():
    plain = rows_by_order(run_example("bie1", [64, 128], q=1.0))
    smoothed = rows_by_order(run_example("bie1", [64, 128], q=2.0))

    assert smoothed[128].boundary_error < plain[128].boundary_error
    for m in (64, 128):
        boundary, interior = get_example("bie1").targets[2.0][m]
        assert smoothed[m].boundary_error <= ENVELOPE * boundary
        assert smoothed[m].error <= ENVELOPE * interior
        assert np.isfinite(plain[m].error)
