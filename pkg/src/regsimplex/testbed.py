"""Test functions, rotated simplexes, curvature estimates and h-sweeps."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionError, ExtrapolationError, InputError
from .extrapolation import ExtrapolationPlan, extrapolate
from .gradient import error_bound_centroid
from .simplex import GeneralRegularSimplex, Orientation, basis_matrix

__all__ = [
    "TestFunction",
    "FUNCTIONS",
    "get_function",
    "rosenbrock",
    "rosenbrock_grad",
    "rotated_regular_simplex",
    "fd_hessian",
    "estimate_lipschitz",
    "curvature_bound",
    "SweepRow",
    "h_sweep",
    "write_sweep_csv",
    "SWEEP_HEADER",
    "loglog_slope",
]


@dataclass(frozen=True)
class TestFunction:
    """Smooth function with its analytic gradient.

    ``dimension`` is ``None`` for functions defined in any dimension.
    """

    __test__ = False  # not a pytest class

    name: str
    dimension: int | None
    func: Callable[[NDArray[np.float64]], float]
    grad: Callable[[NDArray[np.float64]], NDArray[np.float64]]

    def _check(self, x: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float).reshape(-1)
        if self.dimension is not None and x.size != self.dimension:
            raise DimensionError(f"{self.name} is defined for n = {self.dimension}, got n = {x.size}")
        return x

    def __call__(self, x: ArrayLike) -> float:
        return self.func(self._check(x))

    def gradient(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.grad(self._check(x))


def rosenbrock(y: ArrayLike) -> float:
    y1, y2 = _pair(y)
    return (1 - y1) ** 2 + 100 * (y2 - y1**2) ** 2


def rosenbrock_grad(y: ArrayLike) -> NDArray[np.float64]:
    y1, y2 = _pair(y)
    return np.array([-2 * (1 - y1) - 400 * y1 * (y2 - y1**2), 200 * (y2 - y1**2)])


def _pair(y: ArrayLike) -> tuple[float, float]:
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != 2:
        raise DimensionError(f"Rosenbrock's function is two-dimensional, got n = {y.size}")
    return float(y[0]), float(y[1])


def _sphere(x):
    return float(x @ x)


def _sphere_grad(x):
    return 2.0 * x


# affine a^T x + b with a_i = i, b = 1
def _affine(x):
    return float(np.arange(1, x.size + 1) @ x + 1.0)


def _affine_grad(x):
    return np.arange(1, x.size + 1, dtype=float)


# sum_i exp(x_i / i): smooth, not quadratic, curvature differs per coordinate
def _expsum(x):
    return float(np.exp(x / np.arange(1, x.size + 1)).sum())


def _expsum_grad(x):
    i = np.arange(1, x.size + 1)
    return np.exp(x / i) / i


FUNCTIONS: dict[str, TestFunction] = {
    "rosenbrock": TestFunction("rosenbrock", 2, rosenbrock, rosenbrock_grad),
    "sphere": TestFunction("sphere", None, _sphere, _sphere_grad),
    "affine": TestFunction("affine", None, _affine, _affine_grad),
    "expsum": TestFunction("expsum", None, _expsum, _expsum_grad),
}


def get_function(name: str) -> TestFunction:
    try:
        return FUNCTIONS[name]
    except KeyError:
        raise InputError(f"unknown function {name!r}; choose from {sorted(FUNCTIONS)}") from None


def rotated_regular_simplex(
    x0: ArrayLike,
    h: float,
    orientation: Orientation = Orientation.MINUS,
    seed: int = 0,
    reflections: int | None = None,
) -> GeneralRegularSimplex:
    """Regular simplex ``x0 e^T + h Q V+`` with a seeded random orthogonal ``Q``.

    ``Q`` is a product of Householder reflections ``I - 2 w w^T / (w^T w)``
    (``n`` of them unless ``reflections`` says otherwise) whose vectors ``w``
    are drawn in order from ``numpy.random.default_rng(seed)`` (PCG64) with
    ``standard_normal(n)``.  The first reflection drawn is applied first.
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    n = x0.size
    if not h > 0:
        raise InputError(f"radius must be positive, got {h!r}")
    k = n if reflections is None else int(reflections)
    rng = np.random.default_rng(seed)
    v = basis_matrix(n, orientation)
    for _ in range(k):
        w = rng.standard_normal(n)
        v -= np.outer(w, (2.0 / (w @ w)) * (w @ v))
    z = x0[:, None] + h * v
    return GeneralRegularSimplex(z, centroid=x0, h=float(h))


def fd_hessian(f: TestFunction, x: ArrayLike) -> NDArray[np.float64]:
    """Forward differences of the analytic gradient, step ``1e-4*(1+|x_i|)``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    g0 = f.gradient(x)
    hess = np.empty((x.size, x.size))
    for i in range(x.size):
        step = 1e-4 * (1 + abs(x[i]))
        xp = x.copy()
        xp[i] += step
        hess[:, i] = (f.gradient(xp) - g0) / (xp[i] - x[i])
    return hess


def estimate_lipschitz(f: TestFunction, x0: ArrayLike, x1: ArrayLike) -> float:
    """``||H(x0) - H(x1)||_2 / ||x0 - x1||_2`` with finite-difference Hessians."""
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    x1 = np.asarray(x1, dtype=float).reshape(-1)
    dist = float(np.linalg.norm(x0 - x1))
    if dist == 0.0:
        raise InputError("estimate_lipschitz needs two distinct points")
    return float(np.linalg.norm(fd_hessian(f, x0) - fd_hessian(f, x1), 2)) / dist


def curvature_bound(f: TestFunction, x0: ArrayLike, radius: float, samples: int = 400, seed: int = 0) -> float:
    """Largest ``||H(x)||_2`` seen over sample points in the ball ``B(x0; radius)``.

    Points: the centre, ``x0 +- radius*e_i``, and ``samples`` seeded uniform
    draws from the ball.  A brute-force stand-in for the gradient's
    Lipschitz constant on that ball.
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    n = x0.size
    rng = np.random.default_rng(seed)
    pts = [x0]
    for i in range(n):
        for s in (-1.0, 1.0):
            p = x0.copy()
            p[i] += s * radius
            pts.append(p)
    for _ in range(samples):
        d = rng.standard_normal(n)
        d *= radius * rng.uniform() ** (1 / n) / np.linalg.norm(d)
        pts.append(x0 + d)
    return max(float(np.linalg.norm(fd_hessian(f, p), 2)) for p in pts)


@dataclass(frozen=True)
class SweepRow:
    h1: float
    err_g1: float
    err_g2: float
    err_g12: float
    bound: float


SWEEP_HEADER = tuple(fl.name for fl in fields(SweepRow))


def h_sweep(
    f: TestFunction,
    x0: ArrayLike,
    orientation: Orientation,
    h_values: Sequence[float],
    eta: float = 0.5,
    L: float = 1.0,
) -> list[SweepRow]:
    """Errors of ``g1`` (at ``h1``), ``g2`` (at ``eta*h1``) and ``g12`` per ``h1``.

    Errors are Euclidean distances to the analytic gradient at ``x0``;
    ``bound`` is the centroid error bound ``L*h1*sqrt(n)/2``.
    """
    if len(h_values) == 0:
        raise InputError("h_values must not be empty")
    if eta == 1 or eta == 0:
        raise ExtrapolationError(f"eta must differ from 0 and 1, got {eta!r}")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    true_grad = f.gradient(x0)
    rows = []
    for h1 in h_values:
        if not h1 > 0:
            raise InputError(f"sweep radii must be positive, got {h1!r}")
        plan = ExtrapolationPlan.from_eta(h1, eta)
        ex = extrapolate(f, x0, plan.h1, plan.h2, orientation)
        rows.append(
            SweepRow(
                h1=float(h1),
                err_g1=float(np.linalg.norm(true_grad - ex.g1.g)),
                err_g2=float(np.linalg.norm(true_grad - ex.g2.g)),
                err_g12=float(np.linalg.norm(true_grad - ex.g12.g)),
                bound=error_bound_centroid(L, h1, x0.size),
            )
        )
    return rows


def write_sweep_csv(rows: Iterable[SweepRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([repr(float(v)) for v in astuple(row)])


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
