"""Regular simplex construction.

The aligned regular simplex is generated by the minimal positive basis

    V+ = [V, -Ve],   V = alpha * (I - gamma * e e^T),

with ``alpha = sqrt((n+1)/n)``, ``beta = 1/(n+1)`` and ``gamma`` a root of
``n*gamma**2 - 2*gamma + beta = 0``.  Its vertices are never stored: vertex
``j`` is the constant vector ``x0 - h*alpha*gamma*e`` with component ``j``
bumped by ``h*alpha``, so every vertex is available in O(n) time and memory.

Vertex and arm indices are 1-based (``1..n+1``) throughout, matching the
usual labelling where vertex ``n+1`` is the one aligned with ``e``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial.distance import pdist

from .errors import (
    DegenerateSimplexError,
    DimensionError,
    InfeasibleConstructionError,
    InputError,
)

__all__ = [
    "Orientation",
    "SimplexConstants",
    "AlignedRegularSimplex",
    "GeneralRegularSimplex",
    "IntegerSimplex",
    "RegularityReport",
    "DEFAULT_REL_TOL",
    "constants",
    "arm",
    "vertex",
    "basis_matrix",
    "validate_regular",
    "edge_length",
    "arm_from_edge",
    "is_sum_of_two_squares",
    "schoenberg_case",
    "schoenberg_feasible",
    "integer_simplex",
]

DEFAULT_REL_TOL = 1e-8


class Orientation(enum.Enum):
    """Root of the quadratic for ``gamma``.

    ``MINUS`` gives the positive definite square root ``V`` (``Ve = e/sqrt(n)``,
    so vertex ``n+1`` points along ``-e``).  ``PLUS`` is its reflection through
    the hyperplane normal to ``e``.
    """

    MINUS = -1
    PLUS = 1

    @property
    def sign(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text: "str | Orientation") -> "Orientation":
        if isinstance(text, Orientation):
            return text
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise InputError(f"unknown orientation {text!r}; expected 'plus' or 'minus'") from None


@dataclass(frozen=True)
class SimplexConstants:
    n: int
    alpha: float
    beta: float
    gamma: float
    orientation: Orientation


def _check_dimension(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DimensionError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def constants(n: int, orientation: Orientation = Orientation.MINUS) -> SimplexConstants:
    """Return ``alpha``, ``beta`` and ``gamma`` for dimension ``n``."""
    n = _check_dimension(n)
    orientation = Orientation.parse(orientation)
    alpha = math.sqrt((n + 1) / n)
    beta = 1 / (n + 1)
    gamma = (1 + orientation.sign / math.sqrt(n + 1)) / n
    return SimplexConstants(n, alpha, beta, gamma, orientation)


def _check_index(j: int, n: int) -> int:
    if isinstance(j, bool) or int(j) != j or not 1 <= j <= n + 1:
        raise IndexError(f"vertex index {j!r} out of range 1..{n + 1}")
    return int(j)


def arm(n: int, orientation: Orientation, j: int) -> NDArray[np.float64]:
    """Unit arm ``v_j`` of the aligned basis (``j`` in ``1..n+1``)."""
    c = constants(n, orientation)
    j = _check_index(j, c.n)
    if j <= c.n:
        v = np.full(c.n, -c.gamma)
        v[j - 1] += 1.0
        v *= c.alpha
        return v
    # v_{n+1} = -Ve = +-e/sqrt(n)
    return np.full(c.n, c.orientation.sign / math.sqrt(c.n))


def basis_matrix(n: int, orientation: Orientation = Orientation.MINUS) -> NDArray[np.float64]:
    """The extended basis ``V+`` as an ``n x (n+1)`` array.

    O(n^2) storage; meant for tests and small ``n``.  Production paths use
    :func:`arm` and :meth:`AlignedRegularSimplex.vertex`.
    """
    n = _check_dimension(n)
    return np.column_stack([arm(n, orientation, j) for j in range(1, n + 2)])


@dataclass(frozen=True, eq=False)
class AlignedRegularSimplex:
    """Aligned regular simplex described by centroid, radius and orientation.

    ``h`` may be negative, which yields the simplex rotated by 180 degrees
    about ``x0`` (radius ``|h|``).
    """

    x0: NDArray[np.float64]
    h: float
    orientation: Orientation = Orientation.MINUS
    constants: SimplexConstants = field(init=False, repr=False)

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=float, copy=True).reshape(-1)
        if x0.size < 1:
            raise DimensionError("centroid must have at least one component")
        x0.setflags(write=False)
        h = float(self.h)
        if h == 0.0 or not math.isfinite(h):
            raise DegenerateSimplexError(f"simplex radius must be finite and nonzero, got {self.h!r}")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "orientation", Orientation.parse(self.orientation))
        object.__setattr__(self, "constants", constants(x0.size, self.orientation))

    @property
    def n(self) -> int:
        return self.x0.size

    @property
    def radius(self) -> float:
        return abs(self.h)

    def arm(self, j: int) -> NDArray[np.float64]:
        return arm(self.n, self.orientation, j)

    def _base(self) -> NDArray[np.float64]:
        c = self.constants
        return self.x0 - (self.h * c.alpha) * c.gamma

    def vertex(self, j: int) -> NDArray[np.float64]:
        """Vertex ``x_j`` in O(n) without touching any other vertex."""
        j = _check_index(j, self.n)
        if j <= self.n:
            x = self._base()
            x[j - 1] += self.h * self.constants.alpha
            return x
        return self.x0 + self.h * (self.orientation.sign / math.sqrt(self.n))

    def vertices(self) -> Iterator[NDArray[np.float64]]:
        """Yield ``x_1 .. x_{n+1}`` in index order, one fresh array each."""
        base = self._base()
        step = self.h * self.constants.alpha
        for j in range(self.n):
            x = base.copy()
            x[j] += step
            yield x
        yield self.vertex(self.n + 1)

    def matrix(self) -> NDArray[np.float64]:
        """All vertices as columns of an ``n x (n+1)`` array (O(n^2) memory)."""
        return np.column_stack(list(self.vertices()))


def vertex(s: AlignedRegularSimplex, j: int) -> NDArray[np.float64]:
    return s.vertex(j)


@dataclass(frozen=True)
class RegularityReport:
    is_regular: bool
    centroid: NDArray[np.float64]
    h: float
    max_distance_spread: float


def _as_vertex_matrix(vertices: ArrayLike) -> NDArray[np.float64]:
    z = np.asarray(vertices, dtype=float)
    if z.ndim != 2 or z.shape[0] < 1 or z.shape[1] != z.shape[0] + 1:
        raise DimensionError(f"expected an n x (n+1) vertex matrix, got shape {z.shape}")
    return z


def _relative_spread(d: NDArray[np.float64]) -> float:
    mean = d.mean()
    if mean == 0.0:
        return math.inf
    return float((d.max() - d.min()) / mean)


def validate_regular(vertices: ArrayLike, rel_tol: float = DEFAULT_REL_TOL) -> RegularityReport:
    """Check that the columns of ``vertices`` form a regular simplex.

    Both the pairwise vertex distances and the centroid distances must agree
    to within ``rel_tol`` (relative spread ``(max - min) / mean``).  The
    reported spread is the larger of the two.
    """
    if not rel_tol > 0:
        raise InputError("rel_tol must be positive")
    z = _as_vertex_matrix(vertices)
    centroid = z.mean(axis=1)
    y = z - centroid[:, None]
    radii = np.linalg.norm(y, axis=0)
    h = float(radii.mean())
    if h == 0.0:
        return RegularityReport(False, centroid, 0.0, math.inf)
    spread = max(_relative_spread(radii), _relative_spread(pdist(y.T)))
    return RegularityReport(bool(spread <= rel_tol), centroid, h, spread)


@dataclass(frozen=True, eq=False)
class GeneralRegularSimplex:
    """Regular simplex given by explicit vertices (columns), any orientation."""

    vertices: NDArray[np.float64]
    centroid: NDArray[np.float64] | None = None
    h: float | None = None

    def __post_init__(self):
        z = _as_vertex_matrix(self.vertices).copy()
        z.setflags(write=False)
        object.__setattr__(self, "vertices", z)
        if self.h is not None:
            h = float(self.h)
            if not h > 0:
                raise DegenerateSimplexError(f"radius must be positive, got {self.h!r}")
            object.__setattr__(self, "h", h)
        if self.centroid is not None:
            c = np.array(self.centroid, dtype=float, copy=True).reshape(-1)
            if c.size != z.shape[0]:
                raise DimensionError(f"centroid has {c.size} components, vertices have {z.shape[0]} rows")
            scale = max(float(np.abs(c).max()), self.h or 0.0, float(np.abs(z - c[:, None]).max()))
            if np.abs(z.mean(axis=1) - c).max() > 1e-12 * scale:
                raise InputError("supplied centroid does not match the vertex mean")
            c.setflags(write=False)
            object.__setattr__(self, "centroid", c)

    @property
    def n(self) -> int:
        return self.vertices.shape[0]


def edge_length(h: float, n: int) -> float:
    """Edge length of a regular simplex with radius ``h`` (cosine rule)."""
    n = _check_dimension(n)
    if not h > 0:
        raise InputError(f"radius must be positive, got {h!r}")
    return h * math.sqrt(2 + 2 / n)


def arm_from_edge(s: float, n: int) -> float:
    n = _check_dimension(n)
    if not s > 0:
        raise InputError(f"edge length must be positive, got {s!r}")
    return s / math.sqrt(2 + 2 / n)


def _is_square(m: int) -> bool:
    return m >= 0 and math.isqrt(m) ** 2 == m


def is_sum_of_two_squares(m: int) -> bool:
    """True iff ``m = a**2 + b**2`` for integers ``a, b``.

    Uses the classical criterion: every prime ``p = 3 (mod 4)`` divides ``m``
    to an even power.
    """
    if m < 0:
        return False
    if m == 0:
        return True
    p = 2
    while p * p <= m:
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        if p % 4 == 3 and k % 2:
            return False
        p += 1 if p == 2 else 2
    return m % 4 != 3


def schoenberg_case(n: int) -> str | None:
    """Which of Schoenberg's three cases admits an integer regular n-simplex.

    ``"i"``: n even and n+1 a square; ``"ii"``: n = 3 (mod 4); ``"iii"``:
    n = 1 (mod 4) and n+1 a sum of two squares.  ``None`` if none applies.
    """
    n = _check_dimension(n)
    if n % 2 == 0:
        return "i" if _is_square(n + 1) else None
    if n % 4 == 3:
        return "ii"
    return "iii" if is_sum_of_two_squares(n + 1) else None


def schoenberg_feasible(n: int) -> bool:
    """Whether a regular n-simplex with integer vertex coordinates exists in R^n."""
    return schoenberg_case(n) is not None


@dataclass(frozen=True, eq=False)
class IntegerSimplex:
    """Regular simplex with integer vertices, centred at the origin.

    ``vertices == scale * (1/alpha) * V+`` for the matching orientation.
    """

    vertices: NDArray[np.int64]
    scale: int

    def __post_init__(self):
        z = np.asarray(self.vertices)
        if not np.issubdtype(z.dtype, np.integer):
            raise InputError("integer simplex needs integer entries")
        _as_vertex_matrix(z)
        z = z.copy()
        z.setflags(write=False)
        object.__setattr__(self, "vertices", z)
        if not self.is_exactly_regular():
            raise InputError("integer vertices do not form a regular simplex centred at the origin")

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    def is_exactly_regular(self) -> bool:
        """Exact integer check: zero column sum, equal norms, equal pairwise distances."""
        z = self.vertices.astype(object)
        if any(s != 0 for s in z.sum(axis=1)):
            return False
        gram = z.T.dot(z)
        norms = {gram[i, i] for i in range(gram.shape[0])}
        if len(norms) != 1:
            return False
        (r2,) = norms
        m = gram.shape[0]
        dist2 = {r2 + r2 - 2 * gram[i, j] for i in range(m) for j in range(i + 1, m)}
        return len(dist2) == 1


def integer_simplex(n: int, orientation: Orientation = Orientation.MINUS) -> IntegerSimplex:
    """Integer-coordinate regular simplex proportional to ``(1/alpha) V+``.

    Only available when ``n + 1`` is a perfect square.
    """
    n = _check_dimension(n)
    orientation = Orientation.parse(orientation)
    s = math.isqrt(n + 1)
    if s * s != n + 1:
        feasible = schoenberg_feasible(n)
        hint = (
            "an integer simplex exists for this n, but not via this construction"
            if feasible
            else "no integer regular simplex exists for this n (Schoenberg condition fails)"
        )
        raise InfeasibleConstructionError(f"n + 1 = {n + 1} is not a perfect square; {hint}")
    sign = orientation.sign
    gamma = Fraction(s + sign, n * s)
    last = Fraction(sign, s)
    factor = n * s
    diag = (1 - gamma) * factor
    off = -gamma * factor
    col = last * factor
    assert diag.denominator == off.denominator == col.denominator == 1
    d, o, c = int(diag), int(off), int(col)
    g = math.gcd(d, o, c)
    x = np.full((n, n + 1), o // g, dtype=np.int64)
    np.fill_diagonal(x[:, :n], d // g)
    x[:, n] = c // g
    return IntegerSimplex(x, factor // g)
