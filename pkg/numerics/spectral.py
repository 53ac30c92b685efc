#!/usr/bin/env python3
"""
Functional calculus of the Ornstein-Uhlenbeck operator on Hermite expansions

L h_beta = |beta| h_beta, so every function of L acts coefficient-wise.
Negative powers of L annihilate the constant term (L^z is L^z Pi_0).
"""

from models.multiindex import HermiteCoeffs
from models.operators import SpectralMultiplier
from .hermite import lower, raise_


def project(j: int, f: HermiteCoeffs) -> HermiteCoeffs:
    """P_j: keep the coefficients with |beta| = j"""
    if j < 0:
        raise ValueError(f"Chaos order must be non-negative, got {j}")
    return HermiteCoeffs(f.dim, {k: v for k, v in f.items() if k.order == j})


def pi0(f: HermiteCoeffs) -> HermiteCoeffs:
    """Pi_0 = I - P_0: drop the mean"""
    return HermiteCoeffs(f.dim, {k: v for k, v in f.items() if k.order != 0})


def apply_power(mult: SpectralMultiplier, f: HermiteCoeffs) -> HermiteCoeffs:
    """Scale coefficient beta by (|beta| + shift)^z"""
    return HermiteCoeffs(f.dim, {k: mult.factor(k.order) * v for k, v in f.items()})


def apply_L(f: HermiteCoeffs) -> HermiteCoeffs:
    return apply_power(SpectralMultiplier(1.0), f)


def apply_L_ladder(f: HermiteCoeffs) -> HermiteCoeffs:
    """L as sum_i delta*_i delta_i"""
    total = HermiteCoeffs.zero(f.dim)
    for i in range(f.dim):
        total = total + raise_(i, lower(i, f))
    return total
