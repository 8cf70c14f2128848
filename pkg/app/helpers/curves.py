from pathlib import Path

import numpy as np

from app.exceptions.boundary import CurveFileError
from app.models.boundary import BoundaryCurve

MIN_SAMPLES = 8


def _angle(x):
    return np.pi * (np.asarray(x, dtype=float) + 1.0)


def ellipse(a: float = 1.0, b: float = 2.0) -> BoundaryCurve:
    """(a cos pi(x+1), b sin pi(x+1)), starting at (a, 0)."""

    def gamma(x):
        theta = _angle(x)
        return np.array([a * np.cos(theta), b * np.sin(theta)])

    def dgamma(x):
        theta = _angle(x)
        return np.pi * np.array([-a * np.sin(theta), b * np.cos(theta)])

    def ddgamma(x):
        theta = _angle(x)
        return -np.pi**2 * np.array([a * np.cos(theta), b * np.sin(theta)])

    return BoundaryCurve(
        gamma=gamma, dgamma=dgamma, ddgamma=ddgamma, name=f"ellipse({a:g},{b:g})"
    )


def circle(radius: float = 1.0) -> BoundaryCurve:
    curve = ellipse(radius, radius)
    return curve.model_copy(update={"name": f"circle({radius:g})"})


def _amoeba_radius(theta):
    """R and its first two derivatives for R = e^cos cos^2(2t) + e^sin sin^2(2t)."""
    c, s = np.cos(theta), np.sin(theta)
    ec, es = np.exp(c), np.exp(s)
    cos2, sin2 = np.cos(2 * theta) ** 2, np.sin(2 * theta) ** 2
    sin4, cos4 = np.sin(4 * theta), np.cos(4 * theta)

    radius = ec * cos2 + es * sin2
    first = ec * (-s * cos2 - 2 * sin4) + es * (c * sin2 + 2 * sin4)
    second = ec * ((s * s - c) * cos2 + 4 * s * sin4 - 8 * cos4) + es * (
        (c * c - s) * sin2 + 4 * c * sin4 + 8 * cos4
    )
    return radius, first, second


def amoeba() -> BoundaryCurve:
    """Star-shaped curve with polar radius e^cos(t) cos^2(2t) + e^sin(t) sin^2(2t)."""

    def gamma(x):
        theta = _angle(x)
        radius, _, _ = _amoeba_radius(theta)
        return radius * np.array([np.cos(theta), np.sin(theta)])

    def dgamma(x):
        theta = _angle(x)
        c, s = np.cos(theta), np.sin(theta)
        radius, first, _ = _amoeba_radius(theta)
        return np.pi * np.array([first * c - radius * s, first * s + radius * c])

    def ddgamma(x):
        theta = _angle(x)
        c, s = np.cos(theta), np.sin(theta)
        radius, first, second = _amoeba_radius(theta)
        return np.pi**2 * np.array(
            [
                second * c - 2 * first * s - radius * c,
                second * s + 2 * first * c - radius * s,
            ]
        )

    return BoundaryCurve(gamma=gamma, dgamma=dgamma, ddgamma=ddgamma, name="amoeba")


class TrigonometricCurve:
    """
    Trigonometric interpolant of a closed curve sampled on the uniform grid
    x_j = -1 + 2j/N. The Nyquist mode of an even N is split evenly between
    +N/2 and -N/2, so the interpolant stays real for real samples.
    """

    def __init__(self, xi, eta):
        samples = np.asarray(xi, dtype=float) + 1j * np.asarray(eta, dtype=float)
        count = samples.size
        self.coefficients = np.fft.fft(samples) / count
        self.frequencies = np.fft.fftfreq(count, d=1.0 / count)
        if count % 2 == 0:
            nyquist = count // 2
            self.coefficients = np.append(
                self.coefficients, self.coefficients[nyquist] / 2
            )
            self.coefficients[nyquist] /= 2
            self.frequencies = np.append(self.frequencies, nyquist)
            self.frequencies[nyquist] = -nyquist

    def _evaluate(self, x, order):
        x = np.asarray(x, dtype=float)
        factor = (1j * np.pi * self.frequencies) ** order
        phases = np.exp(1j * np.multiply.outer(_angle(x), self.frequencies))
        values = phases @ (factor * self.coefficients)
        return np.array([values.real, values.imag])

    def value(self, x):
        return self._evaluate(x, 0)

    def first(self, x):
        return self._evaluate(x, 1)

    def second(self, x):
        return self._evaluate(x, 2)


def from_samples(path) -> BoundaryCurve:
    """
    Read a closed curve from a text file with one "x xi eta" triple per line.

    The parameters must form the uniform grid x_j = -1 + 2j/N; a repeated
    closing sample at x = 1 is dropped.

    Raises:
        CurveFileError: If the file cannot be read or the grid is not uniform.
    """
    path = Path(path)
    try:
        data = np.loadtxt(path, ndmin=2)
    except (OSError, ValueError) as e:
        raise CurveFileError(f"Cannot read curve samples from {path}: {e}")

    if data.shape[1] != 3:
        raise CurveFileError(f"{path} must hold three columns (x xi eta)")
    if data.shape[0] > 1 and np.isclose(data[-1, 0], 1.0):
        data = data[:-1]
    if data.shape[0] < MIN_SAMPLES:
        raise CurveFileError(f"{path} holds fewer than {MIN_SAMPLES} samples")

    count = data.shape[0]
    grid = -1.0 + 2.0 * np.arange(count) / count
    if not np.allclose(data[:, 0], grid, atol=1e-12, rtol=0.0):
        raise CurveFileError(f"{path} is not sampled on a uniform grid of [-1, 1)")

    curve = TrigonometricCurve(data[:, 1], data[:, 2])
    return BoundaryCurve(
        gamma=curve.value,
        dgamma=curve.first,
        ddgamma=curve.second,
        name=path.stem,
    )
