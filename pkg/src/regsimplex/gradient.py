"""Simplex gradients.

Three routes to the same vector:

* :func:`aligned_gradient`, O(n) work and memory for an aligned simplex,
* :func:`general_gradient`, O(n^2) for a regular simplex in any orientation,
* :func:`ls_oracle_gradient` / :func:`square_system_gradient`, dense O(n^3)
  reference solves kept independent of the closed forms for verification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import (
    DegenerateSimplexError,
    DimensionError,
    EvaluationError,
    InputError,
    RegularityError,
    SingularSystemError,
)
from .simplex import (
    DEFAULT_REL_TOL,
    AlignedRegularSimplex,
    GeneralRegularSimplex,
    Orientation,
    constants,
    validate_regular,
)

__all__ = [
    "Order",
    "SampleSet",
    "GradientEstimate",
    "ErrorBoundInput",
    "sample_aligned",
    "aligned_gradient",
    "simplex_gradient",
    "general_gradient",
    "ls_oracle_gradient",
    "oracle_gradient",
    "square_system_gradient",
    "error_bound_centroid",
    "error_bound_vertex",
]

# doubles per block in aligned_gradient (128 KiB)
_BLOCK = 16384

Objective = Callable[[NDArray[np.float64]], float]


class Order(enum.Enum):
    FIRST = 1
    SECOND = 2


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Function values ``f_1 .. f_{n+1}`` at the vertices, in vertex order.

    ``f0`` (the value at the centroid) is optional and only consumed by the
    least-squares oracle; the closed-form gradients never read it.
    """

    values: NDArray[np.float64]
    f0: float | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if v.size < 2:
            raise DimensionError("need at least two function values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.f0 is not None:
            object.__setattr__(self, "f0", float(self.f0))

    @property
    def n(self) -> int:
        return self.values.size - 1

    def delta_f_plus(self) -> NDArray[np.float64]:
        if self.f0 is None:
            raise InputError("f0 is required to form the centroid differences")
        return self.values - self.f0


@dataclass(frozen=True, eq=False)
class GradientEstimate:
    g: NDArray[np.float64]
    order: Order
    h_used: tuple[float, ...]

    def __post_init__(self):
        h_used = tuple(float(h) for h in self.h_used)
        expected = 1 if self.order is Order.FIRST else 2
        if len(h_used) != expected:
            raise InputError(f"{self.order.name} estimate needs {expected} radius value(s), got {h_used}")
        if expected == 2 and h_used[0] == h_used[1]:
            raise InputError("second-order estimate needs two distinct radii")
        object.__setattr__(self, "h_used", h_used)

    def __array__(self, dtype=None, copy=None):
        return self.g if dtype is None else self.g.astype(dtype)


def _values(samples: SampleSet | ArrayLike, n: int) -> NDArray[np.float64]:
    values = samples.values if isinstance(samples, SampleSet) else np.asarray(samples, dtype=float).reshape(-1)
    if values.size != n + 1:
        raise DimensionError(f"expected {n + 1} function values, got {values.size}")
    return values


def sample_aligned(f: Objective, s: AlignedRegularSimplex) -> SampleSet:
    """Evaluate ``f`` at each vertex in index order, one vertex alive at a time."""
    values = np.empty(s.n + 1)
    for j, x in enumerate(s.vertices(), start=1):
        try:
            values[j - 1] = f(x)
        except Exception as exc:
            raise EvaluationError(f"function evaluation failed at vertex {j}: {exc}", j) from exc
    return SampleSet(values)


def aligned_gradient(s: AlignedRegularSimplex, samples: SampleSet | ArrayLike) -> GradientEstimate:
    """Simplex gradient of an aligned regular simplex in O(n).

    ``g = c1*f + c2*e`` with ``c1 = 1/(h*alpha)`` and
    ``c2 = c1*((gamma*n - 1)*f_{n+1} - gamma*sum(f))``.  The values are first
    taken relative to ``f_{n+1}``; ``g`` is unchanged by a common shift, and
    the shift keeps ``c1*f`` and ``c2`` from cancelling when ``h`` is small.
    """
    c = s.constants
    values = _values(samples, c.n)
    n = c.n
    f_last = values[n]
    c1 = 1.0 / (s.h * c.alpha)
    g = np.empty(n)
    # blocked so each value is read once and each block is reused while cached
    total = 0.0
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        blk = g[lo:hi]
        np.subtract(values[lo:hi], f_last, out=blk)
        total += float(blk.sum())
    # with f_{n+1} shifted to zero, c2 reduces to -c1*gamma*sum(f)
    c2 = -c1 * c.gamma * total
    for lo in range(0, n, _BLOCK):
        blk = g[lo : lo + _BLOCK]
        blk *= c1
        blk += c2
    return GradientEstimate(g, Order.FIRST, (s.h,))


def simplex_gradient(
    f: Objective,
    x0: ArrayLike,
    h: float,
    orientation: Orientation = Orientation.MINUS,
) -> GradientEstimate:
    """Build the aligned simplex, sample ``f`` (n+1 evaluations), return ``g``."""
    s = AlignedRegularSimplex(x0, h, orientation)
    return aligned_gradient(s, sample_aligned(f, s))


def general_gradient(
    z: GeneralRegularSimplex,
    samples: SampleSet | ArrayLike,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    check: bool = True,
) -> GradientEstimate:
    """Simplex gradient of an arbitrarily oriented regular simplex in O(n^2).

    ``u = (f - f_{n+1}*e) / (alpha*h)**2`` and ``g = Z u - (e^T u) z0``, with
    ``Z`` the first ``n`` vertex columns.  The centroid and radius are computed
    from the vertices when not supplied.  ``check=False`` skips the O(n^3)
    pairwise regularity gate.
    """
    zmat = z.vertices
    n = z.n
    values = _values(samples, n)
    if check:
        report = validate_regular(zmat, rel_tol)
        if report.h == 0.0:
            raise DegenerateSimplexError("all vertices coincide")
        if not report.is_regular:
            raise RegularityError(
                f"vertices are not a regular simplex: relative distance spread "
                f"{report.max_distance_spread:.3e} exceeds {rel_tol:.1e}",
                report.max_distance_spread,
            )
    z0 = z.centroid if z.centroid is not None else zmat.mean(axis=1)
    r1 = float(np.linalg.norm(zmat[:, 0] - z0))
    if z.h is None:
        h = r1
    else:
        h = z.h
        if abs(r1 - h) > 1e-6 * h:
            raise RegularityError(f"supplied radius {h!r} disagrees with |z_1 - z0| = {r1!r}", abs(r1 - h) / h)
    if h == 0.0:
        raise DegenerateSimplexError("simplex radius is zero")
    alpha = constants(n).alpha
    u = (values[:n] - values[n]) / (alpha * alpha * h * h)
    # Z u - (e^T u) z0, accumulated on centred columns to avoid cancellation
    g = (zmat[:, :n] - z0[:, None]) @ u
    return GradientEstimate(g, Order.FIRST, (h,))


# -- dense reference solves ---------------------------------------------------


def _check_arms(arms: ArrayLike) -> NDArray[np.float64]:
    a = np.asarray(arms, dtype=float)
    if a.ndim != 2 or a.shape[1] != a.shape[0] + 1:
        raise DimensionError(f"expected an n x (n+1) arm matrix, got shape {a.shape}")
    if np.linalg.matrix_rank(a) < a.shape[0]:
        raise SingularSystemError("arm matrix is rank deficient")
    return a


def _bareiss_solve(m: list[list[int]], b: list[int]) -> list[Fraction]:
    """Exact solve of an integer system by fraction-free elimination."""
    n = len(b)
    rows = [list(r) + [bi] for r, bi in zip(m, b)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if p is None:
            raise SingularSystemError("normal equations are singular")
        rows[k], rows[p] = rows[p], rows[k]
        rk = rows[k]
        akk = rk[k]
        for i in range(k + 1, n):
            ri = rows[i]
            aik = ri[k]
            for j in range(k + 1, n + 1):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    x: list[Fraction] = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = Fraction(rows[i][n]) - sum((rows[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / rows[i][i]
    return x


def _to_fractions(a: NDArray[np.float64]) -> list[Fraction]:
    return [Fraction(float(v)) for v in a.reshape(-1)]


def _exact_oracle(arms: NDArray[np.float64], delta: Sequence[Fraction], h: float) -> NDArray[np.float64]:
    n = arms.shape[0]
    cols = arms.shape[1]
    fa = _to_fractions(arms)
    rows = [fa[i * cols : (i + 1) * cols] for i in range(n)]
    # arms are measured from the centroid, so they sum to zero; make that exact
    means = [sum(r, Fraction(0)) / cols for r in rows]
    rows = [[v - mu for v in r] for r, mu in zip(rows, means)]
    den = 1
    for v in [*(v for r in rows for v in r), *delta]:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ia = [[int(v * den) for v in r] for r in rows]
    idelta = [int(v * den) for v in delta]
    m = [[sum(x * y for x, y in zip(ia[i], ia[j])) for j in range(n)] for i in range(n)]
    rhs = [sum(x * y for x, y in zip(ia[i], idelta)) for i in range(n)]
    sol = _bareiss_solve(m, rhs)
    # m = den^2 * A A^T, rhs = den^2 * A delta, so sol is exactly (A A^T)^{-1} A delta
    hf = Fraction(h)
    return np.array([float(v / hf) for v in sol])


def ls_oracle_gradient(
    arms: ArrayLike,
    delta_f_plus: ArrayLike,
    h: float,
    *,
    method: str = "cholesky",
) -> NDArray[np.float64]:
    """Least-squares simplex gradient from the dense normal equations.

    Solves ``(A A^T) g = A delta_f_plus / h`` where the columns of ``A`` are
    the arms ``(x_j - x0)/h``.  Never uses any structure of ``A``.

    ``method="cholesky"`` factors ``A A^T`` in floating point.
    ``method="exact"`` does the whole solve in rational arithmetic on the
    given floats (after re-centring the arms so they sum to zero exactly) and
    rounds once at the end; it is slow and meant for small ``n``.
    """
    a = _check_arms(arms)
    d = np.asarray(delta_f_plus, dtype=float).reshape(-1)
    if d.size != a.shape[1]:
        raise DimensionError(f"expected {a.shape[1]} differences, got {d.size}")
    h = float(h)
    if h == 0.0:
        raise DegenerateSimplexError("h must be nonzero")
    if method == "exact":
        return _exact_oracle(a, _to_fractions(d), h)
    if method != "cholesky":
        raise InputError(f"unknown oracle method {method!r}")
    try:
        factor = cho_factor(a @ a.T)
    except LinAlgError as exc:
        raise SingularSystemError(f"normal equations are not positive definite: {exc}") from exc
    return cho_solve(factor, a @ d / h)


def oracle_gradient(
    arms: ArrayLike,
    samples: SampleSet,
    h: float,
    *,
    method: str = "cholesky",
) -> NDArray[np.float64]:
    """:func:`ls_oracle_gradient` fed from a :class:`SampleSet` carrying ``f0``.

    With ``method="exact"`` the differences ``f_j - f0`` are formed in
    rational arithmetic too, so nothing is rounded before the final result.
    """
    if samples.f0 is None:
        raise InputError("oracle needs the centroid value f0")
    if method == "exact":
        a = _check_arms(arms)
        if samples.values.size != a.shape[1]:
            raise DimensionError(f"expected {a.shape[1]} values, got {samples.values.size}")
        f0 = Fraction(samples.f0)
        delta = [Fraction(float(v)) - f0 for v in samples.values]
        return _exact_oracle(a, delta, float(h))
    return ls_oracle_gradient(arms, samples.delta_f_plus(), h, method=method)


def square_system_gradient(arms: ArrayLike, values: SampleSet | ArrayLike, h: float) -> NDArray[np.float64]:
    """Gradient of the affine interpolant through the ``n+1`` vertices.

    Solves the square system ``(x_j - x_{n+1})^T g = f_j - f_{n+1}``,
    ``j = 1..n``, using ``x_j - x_{n+1} = h*(v_j - v_{n+1})``.  No centroid value.
    """
    a = np.asarray(arms, dtype=float)
    if a.ndim != 2 or a.shape[1] != a.shape[0] + 1:
        raise DimensionError(f"expected an n x (n+1) arm matrix, got shape {a.shape}")
    n = a.shape[0]
    f = _values(values, n)
    diffs = float(h) * (a[:, :n] - a[:, n:])
    try:
        return np.linalg.solve(diffs.T, f[:n] - f[n])
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"vertices are affinely dependent: {exc}") from exc


# -- error bounds ---------------------------------------------------------------


@dataclass(frozen=True)
class ErrorBoundInput:
    """Lipschitz constant of the gradient, simplex radius and dimension."""

    L: float
    h: float
    n: int

    def __post_init__(self):
        if not self.L > 0:
            raise InputError(f"Lipschitz constant must be positive, got {self.L!r}")
        if not self.h >= 0:
            raise InputError(f"radius must be nonnegative, got {self.h!r}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DimensionError(f"dimension must be a positive integer, got {self.n!r}")

    def centroid_bound(self) -> float:
        return 0.5 * self.L * self.h * math.sqrt(self.n)

    def vertex_bound(self) -> float:
        return (1 + 0.5 * math.sqrt(self.n)) * self.L * self.h


def error_bound_centroid(L: float, h: float, n: int) -> float:
    """Bound on ``|grad f(x0) - g|`` at the centroid: ``L*h*sqrt(n)/2``."""
    return ErrorBoundInput(L, h, n).centroid_bound()


def error_bound_vertex(L: float, h: float, n: int) -> float:
    """Bound on ``|grad f(x_j) - g|`` at any vertex: ``(1 + sqrt(n)/2)*L*h``."""
    return ErrorBoundInput(L, h, n).vertex_bound()
