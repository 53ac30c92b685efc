#!/usr/bin/env python3
"""
Gaussian measure of regions, L^p(gamma) norms and the doubling ratio
"""

import logging
import math
from typing import Callable, Optional, Union

import numpy as np
from scipy.stats import chi2, ncx2

from models.errors import QuadratureError
from models.geometry import Ball, QuadratureGrid, WeightFunction
from .quadrature import ball_grid

logger = logging.getLogger(__name__)


def gamma_measure(grid: QuadratureGrid) -> float:
    """gamma(region) for the region the grid covers; the full-space grid gives 1"""
    if grid.size == 0:
        raise QuadratureError("Cannot measure an empty grid")
    return float(np.clip(np.sum(grid.gamma_weights), 0.0, 1.0))


def gamma_complement(ball_grid_: QuadratureGrid) -> float:
    """gamma of the complement of the ball, as full-space measure minus ball measure"""
    return 1.0 - gamma_measure(ball_grid_)


def gamma_ball_closed_form(ball: Ball) -> float:
    """
    gamma(B) through the non-central chi-square law

    Under gamma the coordinates are N(0, 1/2), so 2|X - c|^2 is non-central
    chi-square with n degrees of freedom and non-centrality 2|c|^2.
    """
    threshold = 2.0 * ball.radius ** 2
    nc = 2.0 * ball.center_norm ** 2
    if nc == 0.0:
        return float(chi2.cdf(threshold, ball.dim))
    return float(ncx2.cdf(threshold, ball.dim, nc))


Evaluable = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


def node_values(f: Evaluable, grid: QuadratureGrid) -> np.ndarray:
    values = np.asarray(f(grid.nodes) if callable(f) else f, dtype=float)
    if values.shape != (grid.size,):
        raise QuadratureError(f"Expected {grid.size} node values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"Non-finite node value on grid '{grid.spec}'")
    return values


def lp_norm(f: Evaluable, p: int, grid: QuadratureGrid,
            weight: Optional[WeightFunction] = None) -> float:
    """
    (integral over the grid region of |f|^p w d(gamma))^(1/p)

    Args:
        f: Callable on (m, n) node arrays, or precomputed node values
        p: 1 or 2
        grid: Grid covering the region
        weight: Optional weight w_k
    """
    if p not in (1, 2):
        raise ValueError(f"Only p = 1 and p = 2 are supported, got {p}")
    values = np.abs(node_values(f, grid)) ** p
    if weight is not None:
        values = values * weight(grid.nodes)
    return float(grid.gamma_weights @ values) ** (1.0 / p)


def doubling_ratio(ball: Ball, radial_nodes: int = 16, radial_panels: int = 2,
                   angular_nodes: int = 16) -> float:
    """
    gamma(2B) / gamma(B); 2B is treated as a plain ball

    Raises:
        QuadratureError: When gamma(B) underflows to 0
    """
    inner = gamma_measure(ball_grid(ball, radial_nodes, radial_panels, angular_nodes))
    if inner <= 0.0 or not math.isfinite(inner):
        raise QuadratureError(f"gamma({ball}) underflows; ball excluded")
    outer = gamma_measure(ball_grid(ball.scaled(2.0), radial_nodes, 2 * radial_panels, angular_nodes))
    return outer / inner
