#!/usr/bin/env python3
"""
Quadrature rules

Full-space integrals use tensor Gauss-Hermite rules. Balls, shells and
complements use polar rules centred at the ball centre: Gauss-Legendre panels
in the radius and an antipodally symmetric direction set, so region boundaries
are aligned with the rule however small the ball is.
"""

import functools
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma as gamma_fn

from models.errors import QuadratureError
from models.geometry import (REGION_BALL, REGION_COMPLEMENT, REGION_FULL, Ball,
                             QuadratureGrid)

logger = logging.getLogger(__name__)

MAX_DIM = 3


def sphere_area(n: int) -> float:
    """|S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)"""
    return 2.0 * math.pi ** (n / 2.0) / float(gamma_fn(n / 2.0))


@functools.lru_cache(maxsize=64)
def _gauss_legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(nodes)


def gauss_legendre_panels(edges: Sequence[float], nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on consecutive panels [edges[j], edges[j+1]]"""
    t, w = _gauss_legendre(nodes)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    points = (lo + half * (t[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return points, weights


def sphere_rule(n: int, angular_nodes: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """
    Antipodally symmetric direction set on S^{n-1}

    Returns:
        (directions of shape (m, n), weights summing to 1), so that
        sum w g(theta) approximates the mean of g over the sphere
    """
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    m = max(2, angular_nodes + angular_nodes % 2)
    if n == 2:
        angles = 2.0 * math.pi * (np.arange(m) + 0.5) / m
        directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        return directions, np.full(m, 1.0 / m)
    if n == 3:
        cos_theta, w_theta = _gauss_legendre(max(2, angular_nodes // 2))
        m_phi = 2 * m
        phi = 2.0 * math.pi * (np.arange(m_phi) + 0.5) / m_phi
        sin_theta = np.sqrt(1.0 - cos_theta ** 2)
        directions = np.stack([
            np.outer(sin_theta, np.cos(phi)).ravel(),
            np.outer(sin_theta, np.sin(phi)).ravel(),
            np.repeat(cos_theta, m_phi),
        ], axis=1)
        weights = np.repeat(w_theta / 2.0, m_phi) / m_phi
        return directions, weights
    raise ValueError(f"Dimensions above {MAX_DIM} are not supported, got {n}")


def full_space_grid(n: int, nodes: int = 40) -> QuadratureGrid:
    """
    Tensor Gauss-Hermite grid with `nodes` points per axis

    Exact for polynomials of degree <= 2*nodes - 1 times e^{-|x|^2}.
    """
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"Dimension must be in 1..{MAX_DIM}, got {n}")
    x, w = hermgauss(nodes)
    mesh = np.meshgrid(*([x] * n), indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    wmesh = np.meshgrid(*([w] * n), indexing="ij")
    weights = np.prod(np.stack([m.ravel() for m in wmesh], axis=1), axis=1)
    return QuadratureGrid(n, points, weights, REGION_FULL, spec=f"gauss-hermite n={n} nodes={nodes}")


def graded_edges(start: float, stop: float, breakpoints: Sequence[float] = (),
                 panels: int = 2, grading: int = 0) -> np.ndarray:
    """
    Radial panel edges on [start, stop]

    Each segment between breakpoints gets `panels` uniform panels; with grading > 0
    the panels next to every breakpoint are additionally refined geometrically.
    """
    cuts = sorted({float(start), float(stop), *(b for b in breakpoints if start < b < stop)})
    edges = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        segment = list(np.linspace(lo, hi, panels + 1))
        if grading > 0:
            width = (hi - lo) / panels
            interior_break = hi < stop
            if interior_break:
                tail = [hi - width * 0.5 ** j for j in range(1, grading + 1)]
                segment = segment[:-1] + tail + [hi]
            if lo > start:
                head = [lo + width * 0.5 ** j for j in range(grading, 0, -1)]
                segment = [segment[0]] + head + segment[1:]
        edges.extend(segment if not edges else segment[1:])
    return np.array(sorted(set(edges)))


def polar_grid(center, edges: Sequence[float], radial_nodes: int = 16,
               angular_nodes: int = 16, region: str = REGION_BALL,
               ball: Optional[Ball] = None, spec: str = "") -> QuadratureGrid:
    """
    Polar rule about center over the shell edges[0] <= |x - center| <= edges[-1]

    Lebesgue weights are w_rho rho^{n-1} |S^{n-1}| w_theta; the e^{-|x|^2} weights
    follow from them.
    """
    c = np.atleast_1d(np.asarray(center, dtype=float))
    n = len(c)
    rho, w_rho = gauss_legendre_panels(edges, radial_nodes)
    directions, w_theta = sphere_rule(n, angular_nodes)
    points = c[None, None, :] + rho[:, None, None] * directions[None, :, :]
    lebesgue = (w_rho * rho ** (n - 1))[:, None] * w_theta[None, :] * sphere_area(n)
    points = points.reshape(-1, n)
    lebesgue = lebesgue.ravel()
    with np.errstate(under="ignore"):
        weights = lebesgue * np.exp(-np.sum(points ** 2, axis=1))
    return QuadratureGrid(n, points, weights, region, ball=ball,
                          lebesgue_weights=lebesgue, spec=spec)


def ball_grid(ball: Ball, radial_nodes: int = 16, radial_panels: int = 2,
              angular_nodes: int = 16, breakpoints: Sequence[float] = (),
              grading: int = 0) -> QuadratureGrid:
    """Polar grid over B; breakpoints are radii (about the centre) where panels must end"""
    edges = graded_edges(0.0, ball.radius, breakpoints, radial_panels, grading)
    spec = (f"ball {ball} radial={radial_nodes}x{len(edges) - 1} "
            f"angular={angular_nodes}")
    return polar_grid(ball.center, edges, radial_nodes, angular_nodes, REGION_BALL, ball, spec)


def outside_ball_grid(ball: Ball, outer_radius: Optional[float] = None, radial_nodes: int = 16,
                      angular_nodes: int = 16, dyadic_levels: int = 4) -> QuadratureGrid:
    """
    Polar grid over r_B <= |x - c_B| <= outer_radius

    Panels double in width from r_B for dyadic_levels steps and are at most
    one unit wide after that. The default outer radius reaches |c_B| + 9, where
    e^{-|x|^2} is below 1e-35.
    """
    if outer_radius is None:
        outer_radius = ball.center_norm + 9.0
    if outer_radius <= ball.radius:
        raise QuadratureError(f"Outer radius {outer_radius} does not exceed the ball radius {ball.radius}")
    edges = [ball.radius]
    for _ in range(dyadic_levels):
        nxt = min(2.0 * edges[-1], edges[-1] + 1.0)
        if nxt >= outer_radius:
            break
        edges.append(nxt)
    while edges[-1] < outer_radius:
        edges.append(min(edges[-1] + 1.0, outer_radius))
    spec = f"complement of {ball} to radius {outer_radius:g} panels={len(edges) - 1}"
    return polar_grid(ball.center, edges, radial_nodes, angular_nodes, REGION_COMPLEMENT, ball, spec)
