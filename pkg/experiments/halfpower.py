#!/usr/bin/env python3
"""
Scaling of D^alpha L^{k/2} f away from the support, k odd

For a mean-zero bump f in B the ratio
  ||D^alpha L^{k/2} f||_{L^1((4B)^c, gamma)} / ||f||_{L^1(B, gamma)}
is computed over a shrinking family of balls and regressed on r_B in log-log scale.
The kernel uses plain partials; D^alpha = 2^{-k/2} partial^alpha.
"""

import logging
import math
from typing import Generator

import numpy as np

from models import AdmissibleBall, Ball, ExperimentConfig, Family, KernelSpec, SampleRecord, SweepReport
from numerics.atoms import atom_grid, concentric_profile
from numerics.kernels import fit_hermite_growth, full_r_rule, kernel_matrix
from numerics.quadrature import outside_ball_grid

logger = logging.getLogger(__name__)

DEFAULT_RADII = (0.4, 0.2, 0.1, 0.05)
SLOPE_MARGIN = 0.3
SLOPE_WINDOW = (-0.3, 0.5)


def halfpower_ratio(spec: KernelSpec, ball: AdmissibleBall, pv, scale: float = 1.0) -> dict:
    """
    L^1 norms of D^alpha L^{k/2} (scale * u) on (4B)^c and of scale * u on B

    u is the concentric mean-zero profile of the ball.
    """
    profile = concentric_profile(ball)
    y_grid = atom_grid(ball, profile.breakpoints)
    f = scale * profile(y_grid.nodes)
    f_weighted = y_grid.lebesgue_weights * f
    x_grid = outside_ball_grid(Ball(ball.center, 4.0 * ball.radius), dyadic_levels=10,
                               radial_nodes=pv.radial_nodes, angular_nodes=pv.angular_nodes)
    rule = full_r_rule(pv)
    factor = 2.0 ** (-spec.k / 2.0)
    values = np.array([factor * float(kernel_matrix(spec, x, y_grid.nodes, pv, rule) @ f_weighted)
                       for x in x_grid.nodes])
    outside = float(x_grid.gamma_weights @ np.abs(values))
    inside = float(y_grid.gamma_weights @ np.abs(f))
    return {"lhs": outside, "f_l1": inside, "ratio": outside / inside if inside > 0 else 0.0,
            "x_nodes": x_grid.size, "y_nodes": y_grid.size}


def run(config: ExperimentConfig) -> Generator[SampleRecord, None, SweepReport]:
    alpha = config.order_alpha(default_k=1)
    k = alpha.order
    spec = KernelSpec(alpha, Family.HALFPOWER)
    radii = config.radii or DEFAULT_RADII
    center = np.zeros(config.dim)
    growth = fit_hermite_growth(alpha)
    logger.info("Half-power scaling: alpha=%s, radii %s", alpha.label(), radii)

    log_r, log_ratio = [], []
    for i, radius in enumerate(radii):
        ball = AdmissibleBall(tuple(center), radius)
        result = halfpower_ratio(spec, ball, config.pv)
        if result["ratio"] > 0:
            log_r.append(math.log(radius))
            log_ratio.append(math.log(result["ratio"]))
        yield SampleRecord(index=i, values={"radius": radius, **result})

    slope = float(np.polyfit(log_r, log_ratio, 1)[0]) if len(log_r) >= 2 else math.nan
    target = -2.0 * k
    lower = target - SLOPE_MARGIN
    in_window = target + SLOPE_WINDOW[0] <= slope <= target + SLOPE_WINDOW[1]
    passed = bool(slope >= lower)
    notes = [] if in_window else [f"slope {slope:.3f} outside [{target - 0.3:g}, {target + 0.5:g}]"]
    if not passed:
        logger.warning("Half-power slope %.3f below %.1f", slope, lower)
    return SweepReport(
        experiment="halfpower",
        seed=config.seed,
        parameters={"alpha": alpha.label(), "n": config.dim, "radii": list(radii)},
        samples=len(radii),
        violations=0 if passed else 1,
        fitted={"slope": slope, "target_slope": target, "in_window": float(in_window),
                "hermite_growth_C": growth},
        notes=notes,
        passed=passed,
    )


def get_experiment_info():
    return {
        "name": "halfpower",
        "description": "Decay of D^alpha L^{k/2} f outside 4B for mean-zero bumps, k odd",
        "assertion": "log-log slope in r_B at least -2k - 0.3",
    }
