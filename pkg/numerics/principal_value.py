#!/usr/bin/env python3
"""
Principal-value application of the Riesz kernels

R f(x) = m f(x) + lim_{eps -> 0} int_{|x-y|>eps} k(x, y) f(y) dy

m is the identity coefficient of even orders. The limit is estimated from the
exclusion radii eps_inner and eps_outer = 2 eps_inner by first-order Richardson
extrapolation; the size of that correction is the reliability indicator.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from models.errors import DimensionMismatchError, QuadratureError
from models.geometry import REGION_FULL, Ball, QuadratureGrid
from models.multiindex import HermiteCoeffs
from models.operators import Family, KernelSpec, PVConfig, identity_coefficient
from .hermite import evaluate
from .kernels import RRule, full_r_rule, kernel_matrix
from .quadrature import ball_grid, polar_grid

logger = logging.getLogger(__name__)

# Relative Richardson correction beyond which a point is flagged
UNRELIABLE_FACTOR = 10.0


@dataclass(frozen=True)
class PVResult:
    """Extrapolated p.v. value at one point together with its diagnostics"""
    x: tuple
    value: float
    inner: float
    outer: float
    correction: float
    unreliable: bool
    nodes: int


def _values(f, points: np.ndarray) -> np.ndarray:
    if isinstance(f, HermiteCoeffs):
        return evaluate(f, points)
    values = np.asarray(f(points), dtype=float).reshape(-1)
    if values.shape != (len(points),):
        raise QuadratureError(f"Expected {len(points)} values, got shape {values.shape}")
    return values


def _pv_edges(pv: PVConfig, fine_width: float, outer_radius: float) -> List[float]:
    """eps_inner, eps_outer, then doubling up to fine_width, then panels of fine_width"""
    edges = [pv.eps_inner, pv.eps_outer]
    while edges[-1] < fine_width and edges[-1] < outer_radius:
        edges.append(min(2.0 * edges[-1], fine_width, outer_radius))
    while edges[-1] < outer_radius:
        edges.append(min(edges[-1] + fine_width, outer_radius))
    return edges


def pv_grid(x: np.ndarray, pv: PVConfig, support: Optional[Ball] = None) -> QuadratureGrid:
    """
    Polar y-grid about x starting at eps_inner

    With a support ball the grid reaches across it with panels of r/8; without one it
    reaches |x| + sqrt(|x|^2 + decay_margin), where e^{-|y|^2} has decayed.
    """
    norm = float(np.linalg.norm(x))
    if support is None:
        fine_width, outer = 1.0, norm + math.sqrt(norm * norm + pv.decay_margin)
    else:
        fine_width = support.radius / 8.0
        outer = float(support.distance_from_center(x)) + support.radius
    if outer <= pv.eps_outer:
        raise QuadratureError(f"Integration radius {outer:.3e} does not exceed the exclusion radius")
    edges = _pv_edges(pv, fine_width, outer)
    return polar_grid(x, edges, pv.radial_nodes, pv.angular_nodes, REGION_FULL,
                      spec=f"pv about x panels={len(edges) - 1}")


@dataclass(frozen=True, eq=False)
class PVTable:
    """Kernel values on the y-grid of one evaluation point, reusable across inputs"""
    spec: KernelSpec
    x: np.ndarray
    grid: QuadratureGrid
    weighted_kernel: np.ndarray
    first_shell: Optional[np.ndarray]
    tolerance: float

    def apply(self, f, reference_scale: float = 0.0) -> PVResult:
        """reference_scale lifts the reliability scale for inputs that vanish near x"""
        integrand = self.weighted_kernel * _values(f, self.grid.nodes)
        inner = float(np.sum(integrand))
        x = tuple(self.x)
        if self.first_shell is None:
            return PVResult(x, inner, inner, inner, 0.0, False, self.grid.size)
        outer = inner - float(np.sum(integrand[self.first_shell]))
        extrapolated = 2.0 * inner - outer
        correction = extrapolated - inner
        f_x = float(_values(f, self.x[None, :])[0])
        local = 0.0
        if self.spec.family is not Family.HALFPOWER:
            local = identity_coefficient(self.spec.alpha) * f_x
        value = local + extrapolated
        scale = max(abs(value), abs(f_x), reference_scale, 1e-300)
        unreliable = abs(correction) > UNRELIABLE_FACTOR * self.tolerance * scale
        if unreliable:
            logger.warning("Unreliable p.v. value at x=%s: correction %.3e vs value %.3e",
                           np.array2string(self.x, precision=4), correction, value)
        else:
            logger.debug("p.v. at x=%s: %.6e (correction %.2e, %d nodes)",
                         np.array2string(self.x, precision=4), value, correction, self.grid.size)
        return PVResult(x, value, inner, outer, correction, unreliable, self.grid.size)


def _restrict(grid: QuadratureGrid, support: Ball) -> QuadratureGrid:
    """Drop nodes outside the support ball, where the input vanishes"""
    keep = support.contains(grid.nodes)
    return QuadratureGrid(grid.dim, grid.nodes[keep], grid.weights[keep], grid.region, grid.ball,
                          grid.lebesgue_weights[keep], grid.spec + " within " + str(support))


def pv_table(spec: KernelSpec, x, pv: PVConfig = PVConfig(), support: Optional[Ball] = None,
             rule: Optional[RRule] = None) -> PVTable:
    """
    Kernel table at x

    When x lies at least one support radius outside the support ball the table covers
    the ball with no exclusion; otherwise it is the polar grid about x, cut to the
    support ball when one is given.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if len(x) != spec.dim:
        raise DimensionMismatchError(f"Point of dimension {len(x)} for a kernel in R^{spec.dim}")
    if rule is None:
        rule = full_r_rule(pv)
    if support is not None and support.distance_from_center(x) >= 2.0 * support.radius:
        grid = ball_grid(support, pv.radial_nodes, 4, pv.angular_nodes)
        first_shell = None
    else:
        grid = pv_grid(x, pv, support)
        if support is not None:
            grid = _restrict(grid, support)
        first_shell = np.linalg.norm(grid.nodes - x, axis=1) < pv.eps_outer
    weighted = grid.lebesgue_weights * kernel_matrix(spec, x, grid.nodes, pv, rule)
    return PVTable(spec, x, grid, weighted, first_shell, pv.tolerance)


def apply_riesz_pv(spec: KernelSpec, f, x, pv: PVConfig = PVConfig(),
                   support: Optional[Ball] = None, rule: Optional[RRule] = None,
                   reference_scale: float = 0.0) -> PVResult:
    """
    Apply the kernel of spec to f at x

    Args:
        spec: Kernel family, multi-index and normalization
        f: HermiteCoeffs or a callable on (m, n) point arrays
        x: Evaluation point
        pv: Exclusion radii and quadrature settings
        support: Ball containing the support of f; None for global inputs
        rule: Optional precomputed r-rule shared across calls
        reference_scale: Floor of the scale the Richardson correction is judged against

    Returns:
        PVResult; when x lies well outside the support no exclusion is applied and
        the correction is zero
    """
    return pv_table(spec, x, pv, support, rule).apply(f, reference_scale)


def apply_riesz_kernel_global(spec: KernelSpec, coeffs: HermiteCoeffs, x,
                              pv: PVConfig = PVConfig(), rule: Optional[RRule] = None) -> PVResult:
    """p.v. application to an unmasked Hermite polynomial"""
    if coeffs.dim != spec.dim:
        raise DimensionMismatchError(f"Coefficients in R^{coeffs.dim} for a kernel in R^{spec.dim}")
    return apply_riesz_pv(spec, coeffs, x, pv, support=None, rule=rule)


def apply_riesz_pv_many(spec: KernelSpec, f, points: Sequence, pv: PVConfig = PVConfig(),
                        support: Optional[Ball] = None, workers: int = 1,
                        reference_scale: float = 0.0) -> List[PVResult]:
    """apply_riesz_pv over many points, in input order; the r-rule is shared"""
    rule = full_r_rule(pv)
    points = np.atleast_2d(np.asarray(points, dtype=float))

    def one(x):
        return apply_riesz_pv(spec, f, x, pv, support, rule, reference_scale)

    if workers <= 1:
        return [one(x) for x in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, points))
