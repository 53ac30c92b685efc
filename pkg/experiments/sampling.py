#!/usr/bin/env python3
"""
Seeded sampling of admissible balls and points
"""

from typing import List

import numpy as np

from models import AdmissibleBall


def random_directions(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Uniform directions on S^{n-1}, shape (count, dim)"""
    if dim == 1:
        return rng.choice([-1.0, 1.0], size=(count, 1))
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_balls(rng: np.random.Generator, count: int, dim: int, max_center: float = 3.0,
                 min_fraction: float = 0.05) -> List[AdmissibleBall]:
    """
    Admissible balls with |c_B| uniform in [0, max_center] and r_B = f m(|c_B|),
    f log-uniform in [min_fraction, 1]
    """
    norms = rng.uniform(0.0, max_center, count)
    centers = random_directions(rng, count, dim) * norms[:, None]
    fractions = np.exp(rng.uniform(np.log(min_fraction), 0.0, count))
    return [AdmissibleBall.from_fraction(c, f) for c, f in zip(centers, fractions)]


def points_in_balls(rng: np.random.Generator, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """One uniform point in each ball B(centers[i], radii[i])"""
    count, dim = centers.shape
    rho = radii * rng.uniform(0.0, 1.0, count) ** (1.0 / dim)
    return centers + random_directions(rng, count, dim) * rho[:, None]
