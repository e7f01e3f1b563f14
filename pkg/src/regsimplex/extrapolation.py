"""Second-order gradients by Richardson extrapolation of two simplex gradients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionError, ExtrapolationError
from .gradient import GradientEstimate, Objective, Order, simplex_gradient
from .simplex import Orientation

__all__ = ["ExtrapolationPlan", "Extrapolation", "richardson", "extrapolate", "extrapolated_gradient"]


@dataclass(frozen=True)
class ExtrapolationPlan:
    """Pair of radii ``h1``, ``h2 = eta*h1`` sharing one centroid.

    A negative ``h2`` evaluates the simplex rotated by 180 degrees about the
    centroid, with radius ``|h2|``.
    """

    h1: float
    h2: float

    def __post_init__(self):
        h1, h2 = float(self.h1), float(self.h2)
        if h1 == 0.0 or h2 == 0.0 or not (math.isfinite(h1) and math.isfinite(h2)):
            raise ExtrapolationError(f"radii must be finite and nonzero, got h1={self.h1!r}, h2={self.h2!r}")
        if h1 == h2:
            raise ExtrapolationError("h1 and h2 must differ (eta = 1 divides by zero)")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @classmethod
    def from_eta(cls, h1: float, eta: float) -> "ExtrapolationPlan":
        if eta == 1:
            raise ExtrapolationError("eta must not be 1")
        return cls(h1, eta * h1)

    @property
    def eta(self) -> float:
        return self.h2 / self.h1

    @property
    def weights(self) -> tuple[float, float]:
        """Coefficients of ``g1`` and ``g2``; they sum to one."""
        d = self.h2 - self.h1
        return self.h2 / d, -self.h1 / d


def richardson(g1: ArrayLike, h1: float, g2: ArrayLike, h2: float) -> GradientEstimate:
    """Combine two O(h) gradients at one point: ``(h2*g1 - h1*g2) / (h2 - h1)``."""
    plan = ExtrapolationPlan(h1, h2)
    a = np.asarray(g1, dtype=float)
    b = np.asarray(g2, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"gradients must be vectors of equal length, got {a.shape} and {b.shape}")
    g12 = (plan.h2 * a - plan.h1 * b) / (plan.h2 - plan.h1)
    return GradientEstimate(g12, Order.SECOND, (plan.h1, plan.h2))


@dataclass(frozen=True, eq=False)
class Extrapolation:
    g1: GradientEstimate
    g2: GradientEstimate
    g12: GradientEstimate


def extrapolate(
    f: Objective,
    x0: ArrayLike,
    h1: float,
    h2: float,
    orientation: Orientation = Orientation.MINUS,
) -> Extrapolation:
    """Both first-order gradients and their extrapolation.

    ``f`` is called exactly ``2(n+1)`` times: vertices ``1..n+1`` at ``h1``,
    then ``1..n+1`` at ``h2``.
    """
    plan = ExtrapolationPlan(h1, h2)
    g1 = simplex_gradient(f, x0, plan.h1, orientation)
    g2 = simplex_gradient(f, x0, plan.h2, orientation)
    return Extrapolation(g1, g2, richardson(g1.g, plan.h1, g2.g, plan.h2))


def extrapolated_gradient(
    f: Objective,
    x0: ArrayLike,
    h1: float,
    h2: float,
    orientation: Orientation = Orientation.MINUS,
) -> GradientEstimate:
    """O(h^2) gradient at ``x0`` from two aligned simplexes of radii ``h1``, ``h2``."""
    return extrapolate(f, x0, h1, h2, orientation).g12

