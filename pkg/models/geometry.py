#!/usr/bin/env python3
"""
Geometric data model: balls, admissible balls, quadrature grids and weights
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import AdmissibilityError, DimensionMismatchError, QuadratureError

# Relative slack when checking r_B <= m(|c_B|) for radii built as fractions of m
ADMISSIBILITY_RTOL = 1e-12


def m_admissibility(s: float) -> float:
    """m(s) = 1 for 0 <= s <= 1 and 1/s for s > 1"""
    if s < 0:
        raise ValueError(f"m(s) needs s >= 0, got {s}")
    return 1.0 if s <= 1.0 else 1.0 / s


@dataclass(frozen=True)
class Ball:
    """Euclidean ball B(center, radius) in R^n"""
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        center = tuple(float(c) for c in np.atleast_1d(self.center))
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'radius', float(self.radius))
        if len(center) == 0:
            raise ValueError("Ball center needs at least one coordinate")
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise ValueError(f"Ball radius must be positive and finite, got {self.radius}")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def center_array(self) -> np.ndarray:
        return np.array(self.center)

    @property
    def center_norm(self) -> float:
        return float(np.linalg.norm(self.center_array))

    def scaled(self, factor: float) -> "Ball":
        """The concentric ball factor*B, a plain ball even when B is admissible"""
        return Ball(self.center, factor * self.radius)

    def distance_from_center(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise DimensionMismatchError(f"Points of dimension {points.shape[-1]} for a ball in R^{self.dim}")
        return np.linalg.norm(points - self.center_array, axis=-1)

    def contains(self, points, closed: bool = True) -> np.ndarray:
        distance = self.distance_from_center(points)
        return distance <= self.radius if closed else distance < self.radius

    def __str__(self) -> str:
        center = ", ".join(f"{c:g}" for c in self.center)
        return f"B(({center}), {self.radius:g})"


@dataclass(frozen=True)
class AdmissibleBall(Ball):
    """Ball with r_B <= m(|c_B|); the constructor rejects anything else"""

    def __post_init__(self):
        super().__post_init__()
        bound = m_admissibility(self.center_norm)
        if self.radius > bound * (1.0 + ADMISSIBILITY_RTOL):
            raise AdmissibilityError(
                f"Ball {self} is not admissible: radius {self.radius:g} > m(|c|) = {bound:g}")

    @classmethod
    def from_fraction(cls, center, fraction: float) -> "AdmissibleBall":
        """Ball centred at center with radius fraction * m(|center|)"""
        c = np.atleast_1d(np.asarray(center, dtype=float))
        return cls(tuple(c), fraction * m_admissibility(float(np.linalg.norm(c))))

    def r_B_y(self, y) -> float:
        """r_{B,y} = r_B / (2|y|), infinite at y = 0"""
        norm = float(np.linalg.norm(np.asarray(y, dtype=float)))
        if norm == 0.0:
            return math.inf
        return self.radius / (2.0 * norm)


@dataclass(frozen=True)
class WeightFunction:
    """w_k(x) = 1 for k in {1, 2} and 1 + |x|^(k-2) for k >= 3"""
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"Weight order must be >= 1, got {self.order}")

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.order <= 2:
            return np.ones(points.shape[:-1])
        return 1.0 + np.linalg.norm(points, axis=-1) ** (self.order - 2)

    def sup_on(self, ball: Ball) -> float:
        if self.order <= 2:
            return 1.0
        return 1.0 + (ball.center_norm + ball.radius) ** (self.order - 2)


REGION_FULL = "full"
REGION_BALL = "ball"
REGION_COMPLEMENT = "complement"


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """
    Nodes and weights on a region of R^n

    weights integrate against e^{-|x|^2} dx; gamma_weights (weights * pi^{-n/2})
    integrate against d(gamma). lebesgue_weights, when present, integrate against dx.
    """
    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    region: str = REGION_FULL
    ball: Optional[Ball] = None
    lebesgue_weights: Optional[np.ndarray] = field(default=None, repr=False)
    spec: str = ""

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).reshape(-1, self.dim)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(nodes) == 0:
            raise QuadratureError("Quadrature grid has no nodes")
        if len(weights) != len(nodes):
            raise QuadratureError(f"{len(weights)} weights for {len(nodes)} nodes")
        if self.region not in (REGION_FULL, REGION_BALL, REGION_COMPLEMENT):
            raise ValueError(f"Unknown region tag '{self.region}'")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, 'nodes', nodes)
        object.__setattr__(self, 'weights', weights)
        if self.lebesgue_weights is not None:
            lebesgue = np.asarray(self.lebesgue_weights, dtype=float).reshape(-1)
            lebesgue.setflags(write=False)
            object.__setattr__(self, 'lebesgue_weights', lebesgue)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def gamma_weights(self) -> np.ndarray:
        return self.weights * math.pi ** (-self.dim / 2.0)

    def integrate(self, values, measure: str = "gamma") -> float:
        """Integrate node values against d(gamma) or dx"""
        values = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise QuadratureError(f"Non-finite integrand values on {self.region} grid")
        if measure == "gamma":
            return float(self.gamma_weights @ values)
        if measure == "lebesgue":
            if self.lebesgue_weights is None:
                raise QuadratureError(f"Grid '{self.spec}' carries no Lebesgue weights")
            return float(self.lebesgue_weights @ values)
        raise ValueError(f"Unknown measure '{measure}'")
