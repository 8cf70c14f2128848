import numpy as np
import pytest

from app.exceptions.quadrature import InvalidRuleOrderError, QuadratureEvaluationError
from app.helpers.gauss_legendre import (
    classical_legendre,
    gauss_rule,
    integrate,
    legendre_eval,
    legendre_table,
)


def test_legendre_eval_known_values():
    assert legendre_eval(0, 0.3) == pytest.approx(0.7071067811865476, abs=1e-15)
    assert legendre_eval(1, 0.5) == pytest.approx(0.6123724356957945, abs=1e-15)
    assert legendre_eval(2, 1.0 / np.sqrt(3.0)) == pytest.approx(0.0, abs=1e-15)
    assert legendre_eval(2, -1.0 / np.sqrt(3.0)) == pytest.approx(0.0, abs=1e-15)


def test_legendre_eval_rejects_negative_degree():
    with pytest.raises(ValueError):
        legendre_eval(-1, 0.0)


def test_legendre_table_matches_closed_forms():
    x = np.linspace(-1.0, 1.0, 7)
    table = legendre_table(4, x)

    assert table.shape == (4, 7)
    np.testing.assert_allclose(table[2], np.sqrt(5.0 / 2.0) * (3 * x**2 - 1) / 2)
    np.testing.assert_allclose(
        table[3], np.sqrt(7.0 / 2.0) * (5 * x**3 - 3 * x) / 2, atol=1e-15
    )


def test_small_rules():
    one = gauss_rule(1)
    two = gauss_rule(2)

    np.testing.assert_array_equal(one.nodes, [0.0])
    np.testing.assert_allclose(one.weights, [2.0])
    np.testing.assert_allclose(
        two.nodes, [-0.5773502691896258, 0.5773502691896258], atol=1e-16
    )
    np.testing.assert_allclose(two.weights, [1.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("m", [1, 3, 8, 64, 255, 512, 2048])
def test_rule_invariants(m):
    rule = gauss_rule(m)

    assert rule.m == m
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    assert np.all(np.abs(rule.nodes) < 1)
    assert rule.weights.sum() == pytest.approx(2.0, abs=1e-14)
    np.testing.assert_allclose(rule.nodes, -rule.nodes[::-1], atol=1e-15)
    value, derivative = classical_legendre(m, rule.nodes)
    assert np.abs(value / derivative).max() <= 1e-13


@pytest.mark.parametrize("m", [1, 2, 5, 8, 16])
def test_node_residual(m):
    value, _ = classical_legendre(m, gauss_rule(m).nodes)

    assert np.abs(value).max() <= 1e-14


@pytest.mark.parametrize("m", [0, -3, 2049, 2.5])
def test_invalid_order(m):
    with pytest.raises(InvalidRuleOrderError):
        gauss_rule(m)


def test_rules_are_cached_and_read_only():
    rule = gauss_rule(16)

    assert gauss_rule(16) is rule
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.0


def test_integrate_examples():
    assert integrate(gauss_rule(5), lambda x: np.ones_like(x)) == pytest.approx(2.0)
    assert integrate(gauss_rule(2), lambda x: x**2) == pytest.approx(2.0 / 3.0)
    assert integrate(gauss_rule(8), np.exp) == pytest.approx(
        2.3504023872876028, abs=1e-14
    )
    assert integrate(gauss_rule(16), np.cos) == pytest.approx(
        1.6829419696157930, abs=1e-14
    )


def test_integrate_broadcasts_constants():
    assert integrate(gauss_rule(4), lambda x: 3.0) == pytest.approx(6.0)


def test_integrate_rejects_non_finite_values():
    with pytest.raises(QuadratureEvaluationError):
        integrate(gauss_rule(4), lambda x: 1.0 / (x - x))


def test_discrete_orthonormality():
    m = 32
    rule = gauss_rule(m)
    basis = legendre_table(m, rule.nodes)

    gram = (basis * rule.weights) @ basis.T

    np.testing.assert_allclose(gram, np.eye(m), atol=1e-12)


def test_exactness_sweep(rng):
    for m in range(1, 65):
        rule = gauss_rule(m)
        coefficients = rng.uniform(-1.0, 1.0, 2 * m)
        polynomial = np.polynomial.Polynomial(coefficients)
        antiderivative = polynomial.integ()
        exact = antiderivative(1.0) - antiderivative(-1.0)

        approximate = integrate(rule, polynomial)

        assert abs(approximate - exact) <= 1e-12 * (1.0 + abs(exact))
