import numpy as np
import pytest

from app.exceptions.boundary import CurveFileError
from app.helpers.curves import TrigonometricCurve, amoeba, ellipse, from_samples

X = np.linspace(-0.99, 0.99, 23)


def write_samples(path, count, closing=False, radius=1.0):
    x = -1.0 + 2.0 * np.arange(count + int(closing)) / count
    theta = np.pi * (x + 1.0)
    points = radius * np.array([np.cos(theta), np.sin(theta)])
    np.savetxt(path, np.column_stack([x, *points]))
    return path


def test_ellipse_parameterization():
    curve = ellipse(1.0, 2.0)

    np.testing.assert_allclose(curve.gamma(np.array(-1.0)), [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(curve.gamma(np.array(-0.5)), [0.0, 2.0], atol=1e-15)
    np.testing.assert_allclose(curve.gamma(np.array(0.0)), [-1.0, 0.0], atol=1e-15)
    assert curve.name == "ellipse(1,2)"


@pytest.mark.parametrize(
    "curve", [ellipse(1.0, 2.0), amoeba()], ids=["ellipse", "amoeba"]
)
def test_derivatives_match_finite_differences(curve):
    step = 1e-6

    first = (curve.gamma(X + step) - curve.gamma(X - step)) / (2 * step)
    second = (curve.dgamma(X + step) - curve.dgamma(X - step)) / (2 * step)

    np.testing.assert_allclose(curve.dgamma(X), first, atol=1e-6)
    np.testing.assert_allclose(curve.ddgamma(X), second, atol=1e-5)


def test_amoeba_is_closed_and_positively_oriented():
    curve = amoeba()

    np.testing.assert_allclose(
        curve.gamma(np.array(-1.0)), curve.gamma(np.array(1.0)), atol=1e-12
    )
    assert curve.signed_area() > 0


@pytest.mark.parametrize("count", [15, 16])
def test_trigonometric_interpolant_of_a_circle(count):
    x = -1.0 + 2.0 * np.arange(count) / count
    theta = np.pi * (x + 1.0)

    curve = TrigonometricCurve(np.cos(theta), np.sin(theta))
    angle = np.pi * (X + 1.0)

    np.testing.assert_allclose(
        curve.value(X), [np.cos(angle), np.sin(angle)], atol=1e-13
    )
    np.testing.assert_allclose(
        curve.first(X), np.pi * np.array([-np.sin(angle), np.cos(angle)]), atol=1e-12
    )


def test_nyquist_mode_stays_real():
    count = 8
    x = -1.0 + 2.0 * np.arange(count) / count
    samples = np.cos(np.pi * (x + 1.0) * count / 2)

    curve = TrigonometricCurve(samples, np.zeros(count))

    np.testing.assert_allclose(curve.value(x)[0], samples, atol=1e-13)
    np.testing.assert_allclose(curve.value(x)[1], 0.0, atol=1e-13)


@pytest.mark.parametrize("closing", [False, True])
def test_from_samples(tmp_path, closing):
    path = write_samples(tmp_path / "disc.txt", 32, closing=closing, radius=1.5)

    curve = from_samples(path)
    angle = np.pi * (X + 1.0)

    assert curve.name == "disc"
    np.testing.assert_allclose(
        curve.gamma(X), 1.5 * np.array([np.cos(angle), np.sin(angle)]), atol=1e-12
    )


def test_from_samples_missing_file(tmp_path):
    with pytest.raises(CurveFileError):
        from_samples(tmp_path / "missing.txt")


def test_from_samples_too_short(tmp_path):
    path = write_samples(tmp_path / "short.txt", 5)

    with pytest.raises(CurveFileError, match="fewer"):
        from_samples(path)


def test_from_samples_non_uniform_grid(tmp_path):
    path = tmp_path / "skewed.txt"
    x = np.sort(np.random.default_rng(3).uniform(-1.0, 1.0, 16))
    np.savetxt(path, np.column_stack([x, np.cos(np.pi * x), np.sin(np.pi * x)]))

    with pytest.raises(CurveFileError, match="uniform"):
        from_samples(path)


def test_from_samples_wrong_columns(tmp_path):
    path = tmp_path / "flat.txt"
    np.savetxt(path, np.zeros((16, 2)))

    with pytest.raises(CurveFileError, match="three columns"):
        from_samples(path)
