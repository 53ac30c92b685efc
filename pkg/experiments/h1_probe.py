#!/usr/bin/env python3
"""
Contrast check: old Riesz transforms on H^1 atoms without the X^k certificate

Off-centre two-bump atoms (mean zero, no higher cancellation) are shrunk towards a
fixed centre and ||R_alpha a||_{L^1(gamma)} is recorded next to the same norm for
X^k atoms on the same balls. Truncated or unreliable atoms are left out of the
trend fits; the run passes when both families keep enough atoms for a slope.
Nothing is asserted about the slopes themselves.
"""

import logging
import math
from typing import Generator

import numpy as np

from models import AdmissibleBall, ExperimentConfig, Family, RieszOrder, SampleRecord, SweepReport
from numerics.atoms import MAX_ORDER, make_h1_atom, make_xk_atom, off_centre_profile
from .atom_sweep import transform_norms

logger = logging.getLogger(__name__)

DEFAULT_RADII = (0.4, 0.2, 0.1, 0.05)
DEFAULT_CENTER_NORM = 0.5
MIN_USABLE = 2


def _usable(norms) -> bool:
    return "truncated" not in norms["flags"] and "unreliable" not in norms["flags"]


def _slope(radii, norms) -> float:
    points = [(math.log(r), math.log(v)) for r, v in zip(radii, norms) if v > 0 and math.isfinite(v)]
    if len(points) < MIN_USABLE:
        return math.nan
    x, y = np.array(points).T
    return float(np.polyfit(x, y, 1)[0])


def run(config: ExperimentConfig) -> Generator[SampleRecord, None, SweepReport]:
    alpha = config.order_alpha(default_k=2)
    order = RieszOrder(alpha, Family.OLD)
    if order.k > MAX_ORDER:
        raise ValueError(f"X^k contrast atoms are built for k <= {MAX_ORDER}, got {order.k}")
    radii = config.radii or DEFAULT_RADII
    center = np.zeros(config.dim)
    center[0] = DEFAULT_CENTER_NORM
    logger.info("H1 contrast: %s, radii %s", order.label(), radii)

    h1_points, xk_points = [], []
    flag_counts = {}
    for i, radius in enumerate(radii):
        ball = AdmissibleBall(tuple(center), radius)
        generic = make_h1_atom(ball, profile=off_centre_profile(ball))
        certified = make_xk_atom(order.k, ball)
        h1 = transform_norms(order, generic, config)
        xk = transform_norms(order, certified, config)
        flags = sorted({f"h1:{f}" for f in h1["flags"]} | {f"xk:{f}" for f in xk["flags"]})
        for flag in flags:
            flag_counts[flag] = flag_counts.get(flag, 0) + 1
        h1_usable, xk_usable = _usable(h1), _usable(xk)
        if h1_usable:
            h1_points.append((radius, h1["l1"]))
        if xk_usable:
            xk_points.append((radius, xk["l1"]))
        yield SampleRecord(
            index=i,
            values={"radius": radius, "h1_l1": h1["l1"], "h1_route": h1["route"], "h1_tail": h1["tail"],
                    "h1_usable": int(h1_usable), "xk_l1": xk["l1"], "xk_route": xk["route"],
                    "xk_tail": xk["tail"], "xk_usable": int(xk_usable)},
            flags=flags,
        )

    h1_slope = _slope(*zip(*h1_points)) if h1_points else math.nan
    xk_slope = _slope(*zip(*xk_points)) if xk_points else math.nan
    growth = math.nan
    if len(h1_points) >= 2 and h1_points[0][1] > 0:
        growth = h1_points[-1][1] / h1_points[0][1]
    notes = [f"H1 trend slope {h1_slope:.3f}, X^{order.k} trend slope {xk_slope:.3f}"]
    dropped = 2 * len(radii) - len(h1_points) - len(xk_points)
    if dropped:
        notes.append(f"{dropped} truncated or unreliable atoms left out of the trends")
    conclusive = math.isfinite(h1_slope) and math.isfinite(xk_slope)
    if not conclusive:
        notes.append(f"inconclusive: fewer than {MIN_USABLE} usable atoms in a family")
        logger.warning("H1 contrast inconclusive: %d H1 and %d X^k atoms usable", len(h1_points), len(xk_points))
    return SweepReport(
        experiment="h1-probe",
        seed=config.seed,
        parameters={"alpha": alpha.label(), "n": config.dim, "radii": list(radii),
                    "center_norm": DEFAULT_CENTER_NORM},
        samples=len(radii),
        violations=0,
        fitted={"h1_slope": h1_slope, "xk_slope": xk_slope, "h1_growth": growth,
                "h1_usable": float(len(h1_points)), "xk_usable": float(len(xk_points))},
        flags=flag_counts,
        notes=notes,
        passed=conclusive,
    )


def get_experiment_info():
    return {
        "name": "h1-probe",
        "description": "Old Riesz transforms on shrinking H^1 atoms versus X^k atoms",
        "assertion": "both trends are fitted on at least 2 usable atoms",
    }
