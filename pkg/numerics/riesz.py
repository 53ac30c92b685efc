#!/usr/bin/env python3
"""
Spectral Riesz transforms on Hermite expansions

Old family:  R_alpha  = D^alpha L^{-k/2}
New family:  R*_alpha = D*^alpha (L+I)^{-k/2}, the multiplier applied first
"""

import math
from typing import Sequence

import numpy as np

from models.multiindex import HermiteCoeffs, MultiIndex
from models.operators import Family, RieszOrder, SpectralMultiplier
from .hermite import apply_D, apply_Dstar, evaluate
from .spectral import apply_power


def riesz_multiplier(order: RieszOrder, beta: Sequence[int]) -> float:
    """
    Factor multiplying h_beta's coefficient (the image sits at beta -/+ alpha)

    For the old family it is |beta|^{-k/2} sqrt(prod beta_i!/(beta_i - alpha_i)!),
    zero unless beta >= alpha and |beta| >= 1.
    """
    beta = MultiIndex(beta)
    alpha, k = order.alpha, order.k
    if order.family is Family.OLD:
        if beta.order == 0 or not beta.dominates(alpha):
            return 0.0
        ladder = math.prod(math.factorial(b) / math.factorial(b - a) for b, a in zip(beta, alpha))
        return beta.order ** (-k / 2.0) * math.sqrt(ladder)
    ladder = math.prod(math.factorial(b + a) / math.factorial(b) for b, a in zip(beta, alpha))
    return (beta.order + 1) ** (-k / 2.0) * math.sqrt(ladder)


def riesz_old(order: RieszOrder, f: HermiteCoeffs) -> HermiteCoeffs:
    if order.family is not Family.OLD:
        raise ValueError(f"riesz_old needs the old family, got {order.family.value}")
    powered = apply_power(SpectralMultiplier(-order.k / 2.0, shift=0), f)
    return apply_D(order.alpha, powered)


def riesz_new(order: RieszOrder, f: HermiteCoeffs) -> HermiteCoeffs:
    if order.family is not Family.NEW:
        raise ValueError(f"riesz_new needs the new family, got {order.family.value}")
    powered = apply_power(SpectralMultiplier(-order.k / 2.0, shift=1), f)
    return apply_Dstar(order.alpha, powered)


def riesz(order: RieszOrder, f: HermiteCoeffs) -> HermiteCoeffs:
    return riesz_old(order, f) if order.family is Family.OLD else riesz_new(order, f)


def riesz_apply_pointwise(order: RieszOrder, f: HermiteCoeffs, x) -> np.ndarray:
    """
    Evaluate the spectral image at x: one point, an (m, n) array, or for n = 1 a flat array of points

    Raises:
        DegreeCapError: When the image degree exceeds the evaluation cap
    """
    x = np.asarray(x, dtype=float)
    values = evaluate(riesz(order, f), x.reshape(-1, f.dim))
    return float(values[0]) if x.ndim == 1 and x.size == f.dim else values
