from typing import Dict, List

import numpy as np

from app.exceptions.bench import UnknownExampleError
from app.helpers.curves import amoeba, ellipse
from app.models.boundary import BoundaryProblem, SmoothingMap
from app.models.example import ExampleSpec
from app.models.kernel import SingularKernel
from app.models.problem import (
    CompositeKernel,
    HammersteinProblem,
    NemytskiiFunction,
    SmoothKernel,
)

TABLE_M = [8, 16, 32, 64, 128, 256]
BOUNDARY_M = [8, 16, 32, 64, 128, 256, 512]


def _cube():
    return NemytskiiFunction(h=lambda x, v: v**3, h_v=lambda x, v: 3.0 * v**2)


def _reciprocal():
    return NemytskiiFunction(
        h=lambda x, v: 1.0 / (1.0 + v**2),
        h_v=lambda x, v: -2.0 * v / (1.0 + v**2) ** 2,
    )


def example_1():
    return HammersteinProblem(
        second_kernel=SmoothKernel(k2=lambda x, y: np.exp(y - 2.0 * x)),
        nemytskii=_cube(),
        g=lambda y: np.exp(y - 1.0) * (np.e - np.e**2 + 1.0),
        name="ex1",
    )


def example_2():
    return HammersteinProblem(
        second_kernel=SmoothKernel(k2=lambda x, y: y * np.cos(np.pi * x / 2.0)),
        nemytskii=NemytskiiFunction(
            h=lambda x, v: np.exp(v), h_v=lambda x, v: np.exp(v)
        ),
        g=lambda y: np.sin(np.pi * y / 2.0) - 4.0 * y / np.pi * np.sinh(1.0),
        name="ex2",
    )


def example_3():
    return HammersteinProblem(
        k1=lambda x, y: y * np.cos(x),
        second_kernel=SmoothKernel(
            k2=lambda x, y: np.exp(x + y) * np.cos(x + 1.0) / (x**2 + 5.0)
        ),
        nemytskii=_reciprocal(),
        g=lambda y: np.abs(y) ** 2.5,
        name="ex3",
    )


def example_4():
    return HammersteinProblem(
        k1=lambda x, y: x + y,
        second_kernel=SmoothKernel(k2=lambda x, y: np.abs(x * y) ** 3.5),
        nemytskii=_cube(),
        g=lambda y: np.exp(y) + np.log(3.0 + y),
        name="ex4",
    )


def _example_7_data(t):
    """Right-hand side on [0, 1] evaluated at y = (t + 1) / 2."""
    y = (np.asarray(t, dtype=float) + 1.0) / 2.0
    rest = 1.0 - y
    return (
        np.sqrt(y * rest)
        + 16.0 / 15.0 * y**2.5
        - 4.0 / 3.0 * y**1.5
        - 2.0 / 3.0 * (1.0 + y) * rest**1.5
        + 2.0 / 5.0 * rest**2.5
    )


def example_7():
    # |x - y|^(-1/2) dx on [0, 1] becomes 2^(-1/2) |t - s|^(-1/2) dt on [-1, 1].
    # The discrete system has a second root near -0.05 that g(nodes) is drawn to;
    # Newton starts from 1/2, the maximum of the solution.
    return HammersteinProblem(
        second_kernel=SingularKernel.algebraic(
            -0.5, psi=lambda x: np.full_like(x, 1.0 / np.sqrt(2.0))
        ),
        nemytskii=NemytskiiFunction(h=lambda x, v: v**2, h_v=lambda x, v: 2.0 * v),
        g=_example_7_data,
        initial=lambda x: np.full_like(x, 0.5),
        name="ex7",
    )


def example_8():
    # log|x - y| dx on [0, 1] becomes (log|t - s| - log 2) dt / 2 on [-1, 1]
    return HammersteinProblem(
        second_kernel=CompositeKernel(
            rho=lambda x, y: np.full(np.broadcast(x, y).shape, -np.log(2.0) / 2.0),
            psi=lambda x: np.full_like(x, 0.5),
        ),
        nemytskii=NemytskiiFunction(
            h=lambda x, v: np.sin(np.pi * v),
            h_v=lambda x, v: np.pi * np.cos(np.pi * v),
        ),
        g=lambda y: np.ones_like(y),
        name="ex8",
    )


def example_9(reflected: bool = True):
    """
    Published table data by default: g(y) = sqrt(1 - y). With reflected=False
    the right-hand side is sqrt(1 + y), whose endpoint error changes sign near
    m = 17 and gives an irregular EOC sequence below m = 64.
    """
    sign = -1.0 if reflected else 1.0
    return HammersteinProblem(
        k1=lambda x, y: x**2 * y,
        second_kernel=SingularKernel.algebraic(-0.5),
        nemytskii=_reciprocal(),
        g=lambda y: np.sqrt(1.0 + sign * y),
        name="ex9",
    )


def harmonic_exp_cos(points):
    """u = e^x cos y and its gradient."""
    x, y = points
    value = np.exp(x) * np.cos(y)
    return value, np.array([value, -np.exp(x) * np.sin(y)])


def harmonic_sin_cosh(points):
    """u = sin x cosh y and its gradient."""
    x, y = points
    value = np.sin(x) * np.cosh(y)
    return value, np.array([np.cos(x) * np.cosh(y), np.sin(x) * np.sinh(y)])


def manufactured_flux(harmonic, hbar):
    """gbar(P, n) = grad u(P) . n + hbar(P, u(P)) for an exact harmonic u."""

    def gbar(points, normals):
        value, gradient = harmonic(points)
        return np.sum(gradient * normals, axis=0) + hbar(points, value)

    return gbar


def _boundary_problem(curve, q, hbar, hbar_v, harmonic, name):
    return BoundaryProblem(
        curve=curve,
        map=SmoothingMap(q=q),
        hbar=hbar,
        hbar_v=hbar_v,
        gbar=manufactured_flux(harmonic, hbar),
        name=name,
    )


def boundary_1(q: float = 2.0):
    return _boundary_problem(
        ellipse(1.0, 2.0),
        q,
        lambda points, v: v + np.sin(v),
        lambda points, v: 1.0 + np.cos(v),
        harmonic_exp_cos,
        "bie1",
    )


def boundary_2(q: float = 2.0):
    return _boundary_problem(
        ellipse(1.0, 2.0),
        q,
        lambda points, v: np.abs(v) * v**3,
        lambda points, v: 4.0 * np.abs(v) * v**2,
        harmonic_exp_cos,
        "bie2",
    )


def boundary_3(q: float = 1.0):
    return _boundary_problem(
        amoeba(),
        q,
        lambda points, v: v**3,
        lambda points, v: 3.0 * v**2,
        harmonic_sin_cosh,
        "bie3",
    )


def _single(errors: Dict[int, float]):
    return {1.0: {m: (error,) for m, error in errors.items()}}


REGISTRY: Dict[str, ExampleSpec] = {
    spec.id: spec
    for spec in [
        ExampleSpec(
            id="ex1",
            title="e^(y-2x) f^3, smooth kernel, exact e^x",
            kind="interval",
            build=example_1,
            exact=np.exp,
            default_m=[4, 8],
            targets=_single({4: 4.88e-8, 8: 4.90e-16}),
        ),
        ExampleSpec(
            id="ex2",
            title="y cos(pi x / 2) e^f, exact sin(pi y / 2)",
            kind="interval",
            build=example_2,
            exact=lambda y: np.sin(np.pi * np.asarray(y) / 2.0),
            default_m=[4, 8, 16],
            targets=_single({4: 4.87e-3, 8: 2.32e-7, 16: 2.22e-16}),
        ),
        ExampleSpec(
            id="ex3",
            title="complete equation, g = |y|^(5/2), reference f_512",
            kind="interval",
            build=example_3,
            default_m=TABLE_M,
            targets=_single(
                {
                    8: 2.35e-4,
                    16: 2.15e-5,
                    32: 1.98e-6,
                    64: 1.79e-7,
                    128: 1.59e-8,
                    256: 1.30e-9,
                }
            ),
            eoc_targets={16: 3.45, 32: 3.44, 64: 3.47, 128: 3.49, 256: 3.61},
        ),
        ExampleSpec(
            id="ex4",
            title="kernels x + y and |xy|^(7/2), reference f_512",
            kind="interval",
            build=example_4,
            default_m=TABLE_M,
            targets=_single(
                {
                    8: 9.45e-4,
                    16: 4.77e-5,
                    32: 2.26e-6,
                    64: 1.03e-7,
                    128: 4.64e-9,
                    256: 1.98e-10,
                }
            ),
            eoc_targets={16: 4.31, 32: 4.40, 64: 4.45, 128: 4.48, 256: 4.55},
        ),
        ExampleSpec(
            id="ex7",
            title="|x-y|^(-1/2) f^2 on [0, 1], exact sqrt(x(1-x))",
            kind="interval",
            build=example_7,
            exact=lambda t: np.sqrt(1.0 - np.asarray(t) ** 2) / 2.0,
            default_m=[4],
            targets=_single({4: 1.97e-14}),
        ),
        ExampleSpec(
            id="ex8",
            title="log|x-y| sin(pi f) on [0, 1], exact 1",
            kind="interval",
            build=example_8,
            exact=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            default_m=[4],
            targets=_single({4: 6.66e-16}),
        ),
        ExampleSpec(
            id="ex9",
            title="|x-y|^(-1/2) / (1 + f^2), g = sqrt(1 - y), reference f_512",
            kind="interval",
            build=example_9,
            default_m=TABLE_M,
            targets=_single(
                {
                    8: 2.93e-3,
                    16: 7.81e-4,
                    32: 2.03e-4,
                    64: 5.16e-5,
                    128: 1.25e-5,
                    256: 2.51e-6,
                }
            ),
            eoc_targets={16: 1.91, 32: 1.94, 64: 1.98, 128: 2.05, 256: 2.31},
        ),
        ExampleSpec(
            id="bie1",
            title="ellipse (1, 2), hbar = v + sin v, u = e^x cos y",
            kind="boundary",
            build=boundary_1,
            exact=harmonic_exp_cos,
            default_m=BOUNDARY_M,
            default_q=(1.0, 2.0),
            targets={
                1.0: {
                    8: (6.93e-2, 2.71e-1),
                    16: (2.36e-3, 5.94e-2),
                    32: (3.94e-4, 4.98e-3),
                    64: (1.01e-4, 3.65e-5),
                    128: (2.56e-5, 3.89e-8),
                    256: (6.44e-6, 2.45e-9),
                    512: (1.61e-6, 1.53e-10),
                },
                2.0: {
                    8: (4.59e-1, 3.58e-1),
                    16: (1.14e-2, 1.42e-1),
                    32: (6.60e-5, 1.48e-2),
                    64: (5.92e-7, 1.21e-3),
                    128: (3.76e-8, 2.59e-5),
                    256: (3.19e-9, 2.84e-9),
                    512: (1.98e-9, 1.71e-14),
                },
            },
        ),
        ExampleSpec(
            id="bie2",
            title="ellipse (1, 2), hbar = |v| v^3, u = e^x cos y",
            kind="boundary",
            build=boundary_2,
            exact=harmonic_exp_cos,
            default_m=BOUNDARY_M,
            default_q=(1.0, 2.0),
            targets={
                1.0: {
                    8: (5.27e-1, 6.28e-1),
                    16: (5.65e-2, 9.57e-2),
                    32: (1.23e-3, 6.01e-3),
                    64: (7.58e-4, 2.23e-4),
                    128: (3.16e-4, 1.00e-6),
                    256: (9.89e-5, 4.54e-8),
                    512: (2.70e-5, 3.06e-9),
                },
                2.0: {
                    8: (6.71e-1, 8.71e-1),
                    16: (9.83e-2, 1.95e-1),
                    32: (1.84e-3, 1.52e-2),
                    64: (3.38e-5, 1.20e-3),
                    128: (6.53e-7, 2.60e-5),
                    256: (4.21e-8, 5.54e-9),
                    512: (1.53e-9, 3.18e-10),
                },
            },
        ),
        ExampleSpec(
            id="bie3",
            title="amoeba, hbar = v^3, u = sin x cosh y",
            kind="boundary",
            build=boundary_3,
            exact=harmonic_sin_cosh,
            default_m=BOUNDARY_M[1:],
            default_q=(1.0,),
            targets={
                1.0: {
                    16: (4.23e-1, 4.72e-1),
                    32: (1.99e-1, 1.09e-1),
                    64: (5.68e-3, 8.61e-3),
                    128: (3.25e-5, 1.38e-4),
                    256: (1.94e-7, 6.71e-8),
                    512: (4.86e-8, 1.42e-12),
                }
            },
        ),
    ]
}


def example_ids() -> List[str]:
    return list(REGISTRY)


def get_example(example_id: str) -> ExampleSpec:
    try:
        return REGISTRY[example_id]
    except KeyError:
        raise UnknownExampleError(
            f"Unknown example '{example_id}', expected one of {', '.join(REGISTRY)}"
        )
