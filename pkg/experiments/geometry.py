#!/usr/bin/env python3
"""
Geometry lemma for admissible balls

For y in B, x outside 2B and r in the admissible range
  r in [0, 1]            when r_{B,y} >= 1,
  r in [1 - r_{B,y}, 1]  when r_{B,y} < 1,
the bound 4|x - ry| >= |x - c_B| holds exactly.
"""

import logging
from typing import Generator

import numpy as np

from models import ExperimentConfig, SampleRecord, SweepReport
from .sampling import points_in_balls, random_balls, random_directions

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100000
RTOL = 1e-12


def _case_one(rng: np.random.Generator, count: int, dim: int):
    """|y| <= r_B/2: y is drawn first and the ball placed around it"""
    radii = (2.0 / 3.0) * np.exp(rng.uniform(np.log(0.05), 0.0, count))
    y = points_in_balls(rng, np.zeros((count, dim)), 0.5 * radii)
    centers = points_in_balls(rng, y, radii)
    return centers, radii, y


def _case_two(rng: np.random.Generator, count: int, dim: int):
    """|y| > r_B/2 by rejection over random admissible balls"""
    centers, radii, points = [], [], []
    remaining = count
    while remaining > 0:
        balls = random_balls(rng, 2 * remaining + 16, dim)
        c = np.array([b.center for b in balls])
        r = np.array([b.radius for b in balls])
        y = points_in_balls(rng, c, r)
        keep = np.linalg.norm(y, axis=1) > 0.5 * r
        centers.append(c[keep][:remaining])
        radii.append(r[keep][:remaining])
        points.append(y[keep][:remaining])
        remaining -= len(points[-1])
    return np.concatenate(centers), np.concatenate(radii), np.concatenate(points)


def _mixed(rng: np.random.Generator, count: int, dim: int):
    balls = random_balls(rng, count, dim)
    c = np.array([b.center for b in balls])
    r = np.array([b.radius for b in balls])
    return c, r, points_in_balls(rng, c, r)


def sample_geometry_lemma(samples: int, dim: int, seed: int, case: str = "both"):
    """
    Sample (B, y, x, r) and evaluate 4|x - ry| / |x - c_B|

    Returns:
        Dict of arrays: center_norm, radius, y_norm, r_By, r, ratio, case (1 or 2)
    """
    rng = np.random.default_rng(seed)
    sampler = {"i": _case_one, "ii": _case_two, "both": _mixed}[case]
    centers, radii, y = sampler(rng, samples, dim)
    y_norm = np.linalg.norm(y, axis=1)
    with np.errstate(divide="ignore"):
        r_by = np.where(y_norm > 0.0, radii / (2.0 * np.where(y_norm > 0.0, y_norm, 1.0)), np.inf)
    low = np.where(r_by >= 1.0, 0.0, 1.0 - np.minimum(r_by, 1.0))
    r = low + (1.0 - low) * rng.uniform(0.0, 1.0, samples)
    rho = 2.0 * radii * 10.0 ** rng.uniform(0.0, 1.5, samples)
    x = centers + random_directions(rng, samples, dim) * rho[:, None]

    # y = c_B, r = 1 with x on the boundary of 2B
    centers[0], radii[0], y[0], r[0] = 0.0, 1.0, 0.0, 1.0
    x[0] = 0.0
    x[0, 0] = 2.0
    y_norm[0], r_by[0] = 0.0, np.inf

    ratio = 4.0 * np.linalg.norm(x - r[:, None] * y, axis=1) / np.linalg.norm(x - centers, axis=1)
    return {
        "center_norm": np.linalg.norm(centers, axis=1),
        "radius": radii,
        "y_norm": y_norm,
        "r_By": r_by,
        "r": r,
        "ratio": ratio,
        "case": np.where(r_by >= 1.0, 1, 2),
    }


def run(config: ExperimentConfig) -> Generator[SampleRecord, None, SweepReport]:
    samples = config.samples or DEFAULT_SAMPLES
    logger.info("Geometry lemma: %d samples, n=%d, case %s", samples, config.dim, config.case)
    data = sample_geometry_lemma(samples, config.dim, config.seed, config.case)
    violations = []
    for i in range(samples):
        violated = bool(data["ratio"][i] < 1.0 - RTOL)
        if violated:
            violations.append(i)
        yield SampleRecord(
            index=i,
            values={name: (int(column[i]) if name == "case" else float(column[i]))
                    for name, column in data.items()},
            violation=violated,
        )
    if violations:
        logger.warning("Geometry lemma violated at %d samples", len(violations))
    return SweepReport(
        experiment="geometry",
        seed=config.seed,
        parameters={"samples": samples, "n": config.dim, "case": config.case},
        samples=samples,
        violations=len(violations),
        fitted={"min_ratio": float(np.min(data["ratio"]))},
        flags={"case_i": int(np.sum(data["case"] == 1)), "case_ii": int(np.sum(data["case"] == 2))},
        failing=violations[:50],
        passed=not violations,
    )


def get_experiment_info():
    return {
        "name": "geometry",
        "description": "Samples admissible balls, y in B, x outside 2B and r in the admissible range",
        "assertion": "4|x - ry| >= |x - c_B| on every sample",
    }
