#!/usr/bin/env python3
"""
Integral kernels of the Gaussian Riesz transforms

All kernels are r-integrals (r = e^{-t}) of Mehler-type Gaussians:

  old:        c int r^{k-1} (-log r)^{k/2-1} (1-r^2)^{-(n+k)/2} H_a((y-rx)/s) e^{-|y-rx|^2/s^2} dr
  new:        c e^{|x|^2-|y|^2} int (-log r)^{k/2-1} (1-r^2)^{-(n+k)/2} H_a((x-ry)/s) e^{-|x-ry|^2/s^2} dr
  halfpower:  e^{|x|^2-|y|^2} / (pi^{n/2} Gamma(-k/2))
              int r^{k-1} (-log r)^{-(k+2)/2} (1-r^2)^{-(n+k)/2} H_a((y-rx)/s) e^{-|x-ry|^2/s^2} dr

with s = sqrt(1 - r^2). Because -|rx-y|^2 = -|x-ry|^2 + (1-r^2)(|x|^2-|y|^2), the
prefactor e^{|x|^2-|y|^2} and the Gaussian combine into e^{-|y-rx|^2/s^2}; every
factor is combined as a logarithm before a single exponentiation.

The r-integral is split at r = 1/2. The lower piece uses dyadic panels towards 0,
the upper piece the substitution s = 1/sqrt(1-r^2) with dyadic panels in s.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from models.errors import DiagonalSingularityError, DimensionMismatchError
from models.multiindex import MultiIndex
from models.operators import FAlphaEval, Family, KernelSpec, PVConfig
from .hermite import hermite_eval_1d
from .quadrature import gauss_legendre_panels

logger = logging.getLogger(__name__)

S_SPLIT = 2.0 / math.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class RRule:
    """Nodes in (0, 1) with dr-weights and the derived logarithms"""
    r: np.ndarray
    weights: np.ndarray
    log_r: np.ndarray
    log_minus_log_r: np.ndarray
    log_one_minus_r2: np.ndarray

    @property
    def size(self) -> int:
        return len(self.r)

    def one_minus_r2(self) -> np.ndarray:
        return np.exp(self.log_one_minus_r2)


def _lower_rule(a: float, b: float, nodes: int, levels: int) -> RRule:
    """Dyadic panels on [a, b] within [0, 1/2], refined geometrically towards 0 when a = 0"""
    if a == 0.0:
        edges = [0.0] + [b * 0.5 ** j for j in range(levels, -1, -1)]
    else:
        edges = [a, b]
    r, w = gauss_legendre_panels(edges, nodes)
    minus_log_r = -np.log(r)
    return RRule(r, w, np.log(r), np.log(minus_log_r), np.log1p(-r * r))


def _upper_rule(s_start: float, s_stop: float, nodes: int, panels_per_octave: int) -> RRule:
    """Panels in s = 1/sqrt(1-r^2) on [s_start, s_stop], dr = s^{-3}/r ds"""
    octaves = math.log2(s_stop / s_start)
    count = max(1, int(math.ceil(octaves * panels_per_octave - 1e-9)))
    edges = s_start * (s_stop / s_start) ** (np.arange(count + 1) / count)
    s, ws = gauss_legendre_panels(edges, nodes)
    inv_s2 = 1.0 / (s * s)
    log_r = 0.5 * np.log1p(-inv_s2)
    r = np.exp(log_r)
    weights = ws * dr_ds(s)
    return RRule(r, weights, log_r, np.log(-log_r), np.log(inv_s2))


def concat_rules(rules: List[RRule]) -> RRule:
    return RRule(*(np.concatenate([getattr(q, name) for q in rules])
                   for name in ("r", "weights", "log_r", "log_minus_log_r", "log_one_minus_r2")))


def r_rule(pv: PVConfig, r_split: Optional[float] = None) -> List[RRule]:
    """
    Quadrature pieces for int_0^1 dr

    Without r_split: [0, 1/2] and [1/2, 1). With r_split in (1/2, 1) the upper
    piece is divided at r_split; with r_split <= 1/2 the lower piece is.
    """
    s_top_octaves = pv.upper_octaves
    if r_split is None or r_split >= 1.0:
        pieces = [_lower_rule(0.0, 0.5, pv.r_nodes, pv.lower_levels)]
        pieces.append(_upper_rule(S_SPLIT, S_SPLIT * 2.0 ** s_top_octaves, pv.r_nodes, pv.panels_per_octave))
        return pieces
    if r_split <= 0.5:
        r_split = max(r_split, 0.5 ** (pv.lower_levels + 1))
        return [_lower_rule(0.0, r_split, pv.r_nodes, pv.lower_levels),
                _lower_rule(r_split, 0.5, pv.r_nodes, 1),
                _upper_rule(S_SPLIT, S_SPLIT * 2.0 ** s_top_octaves, pv.r_nodes, pv.panels_per_octave)]
    s_split = 1.0 / math.sqrt(1.0 - r_split * r_split)
    return [_lower_rule(0.0, 0.5, pv.r_nodes, pv.lower_levels),
            _upper_rule(S_SPLIT, s_split, pv.r_nodes, pv.panels_per_octave),
            _upper_rule(s_split, s_split * 2.0 ** s_top_octaves, pv.r_nodes, pv.panels_per_octave)]


def full_r_rule(pv: PVConfig) -> RRule:
    return concat_rules(r_rule(pv))


def s_of_r(r, scale: float = 1.0):
    """s = scale / sqrt(1 - r^2)"""
    return scale / np.sqrt(1.0 - np.asarray(r) ** 2)


def ds_dr(r, scale: float = 1.0):
    """ds/dr = scale * r / (1 - r^2)^{3/2}"""
    r = np.asarray(r)
    return scale * r / (1.0 - r * r) ** 1.5


def dr_ds(s, scale: float = 1.0):
    """dr/ds for r = sqrt(1 - (scale/s)^2)"""
    s = np.asarray(s)
    r = np.sqrt(1.0 - (scale / s) ** 2)
    return scale ** 2 / (s ** 3 * r)


def hermite_product(alpha: MultiIndex, u: np.ndarray) -> np.ndarray:
    """H_alpha(u) over the last axis of u"""
    value = np.ones(u.shape[:-1])
    for i, a in enumerate(alpha):
        if a:
            value = value * hermite_eval_1d(a, u[..., i])
    return value


def _log_r_factor(spec: KernelSpec, rule: RRule) -> np.ndarray:
    k, n = spec.k, spec.dim
    log_s2 = rule.log_one_minus_r2
    if spec.family is Family.OLD:
        return (k - 1) * rule.log_r + (k / 2.0 - 1.0) * rule.log_minus_log_r - ((n + k) / 2.0) * log_s2
    if spec.family is Family.NEW:
        return (k / 2.0 - 1.0) * rule.log_minus_log_r - ((n + k) / 2.0) * log_s2
    return (k - 1) * rule.log_r - ((k + 2) / 2.0) * rule.log_minus_log_r - ((n + k) / 2.0) * log_s2


def kernel_matrix(spec: KernelSpec, x, y_nodes, pv: PVConfig = PVConfig(),
                  rule: Optional[RRule] = None) -> np.ndarray:
    """
    Kernel values k(x, y_j) for one point x and many y_j

    Args:
        spec: Kernel family, multi-index and normalization
        x: Point of shape (n,)
        y_nodes: Points of shape (m, n), all off the diagonal
        pv: Quadrature settings for the r-integral
        rule: Optional precomputed r-rule

    Raises:
        DiagonalSingularityError: When some |x - y_j| < pv.eps_inner
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y_nodes = np.asarray(y_nodes, dtype=float).reshape(-1, spec.dim)
    if len(x) != spec.dim:
        raise DimensionMismatchError(f"Point of dimension {len(x)} for a kernel in R^{spec.dim}")
    gap = np.linalg.norm(y_nodes - x, axis=1)
    if np.any(gap < pv.eps_inner * (1.0 - 1e-9)):
        raise DiagonalSingularityError(
            f"|x - y| = {gap.min():.3e} is below the exclusion radius {pv.eps_inner:.3e}; use the p.v. path")
    if rule is None:
        rule = full_r_rule(pv)
    r = rule.r
    inv_s = np.exp(-0.5 * rule.log_one_minus_r2)
    log_factor = _log_r_factor(spec, rule)
    out = np.empty(len(y_nodes))
    for start in range(0, len(y_nodes), pv.chunk):
        y = y_nodes[start:start + pv.chunk]
        # (m, R, n) displacement y - r x scaled by 1/s
        rel = (y[:, None, :] - r[None, :, None] * x[None, None, :]) * inv_s[None, :, None]
        exponent = -np.sum(rel * rel, axis=2)
        if spec.family is Family.NEW:
            arg = (x[None, None, :] - r[None, :, None] * y[:, None, :]) * inv_s[None, :, None]
        else:
            arg = rel
        with np.errstate(under="ignore"):
            integrand = hermite_product(spec.alpha, arg) * np.exp(exponent + log_factor[None, :])
        out[start:start + pv.chunk] = integrand @ rule.weights
    return spec.constant * out


def kernel_old(spec: KernelSpec, x, y, pv: PVConfig = PVConfig()) -> float:
    if spec.family is not Family.OLD:
        raise ValueError(f"kernel_old needs the old family, got {spec.family.value}")
    return float(kernel_matrix(spec, x, np.atleast_2d(y), pv)[0])


def kernel_new(spec: KernelSpec, x, y, pv: PVConfig = PVConfig()) -> float:
    if spec.family is not Family.NEW:
        raise ValueError(f"kernel_new needs the new family, got {spec.family.value}")
    return float(kernel_matrix(spec, x, np.atleast_2d(y), pv)[0])


def kernel_halfpower_derivative(spec: KernelSpec, x, y, pv: PVConfig = PVConfig()) -> float:
    """
    partial_x^alpha of the kernel of L^{k/2}, k odd (plain partials; multiply by
    2^{-k/2} for delta^alpha)
    """
    if spec.family is not Family.HALFPOWER:
        raise ValueError(f"kernel_halfpower_derivative needs the half-power family, got {spec.family.value}")
    return float(kernel_matrix(spec, x, np.atleast_2d(y), pv)[0])


def f_alpha(alpha, x, y, r) -> np.ndarray:
    """F_alpha(x, y, r) = H_alpha(u) e^{-|u|^2}, u = (x - r y)/sqrt(1 - r^2)"""
    index = MultiIndex(alpha)
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    r = np.asarray(r, dtype=float)[..., None]
    u = (x - r * y) / np.sqrt(1.0 - r * r)
    return hermite_product(index, u) * np.exp(-np.sum(u * u, axis=-1))


def grad_y_F(alpha, x, y, r) -> np.ndarray:
    """
    y-gradient of F_alpha:
      d/dy_i F = -(2r/s) (alpha_i H_{alpha - e_i}(u) - u_i H_alpha(u)) e^{-|u|^2}

    Broadcasts over leading axes of x, y and r; the last axis holds coordinates.
    """
    index = MultiIndex(alpha)
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    r = np.asarray(r, dtype=float)[..., None]
    s = np.sqrt(1.0 - r * r)
    u = (x - r * y) / s
    gauss = np.exp(-np.sum(u * u, axis=-1))
    h_alpha = hermite_product(index, u)
    components = []
    for i in range(index.dim):
        lowered = index.shifted(i, -1)
        first = index[i] * hermite_product(lowered, u) if lowered is not None else 0.0
        components.append(first - u[..., i] * h_alpha)
    grad = np.stack(np.broadcast_arrays(*components), axis=-1)
    return -(2.0 * r / s) * grad * gauss[..., None]


def f_alpha_eval(alpha, x, y, r: float) -> FAlphaEval:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return FAlphaEval(tuple(x), tuple(y), float(r),
                      float(f_alpha(alpha, x, y, r)), grad_y_F(alpha, x, y, r))


def lambda_alpha(k: int, r) -> np.ndarray:
    """((-log r)/(1 - r^2))^{k/2 - 1}"""
    r = np.asarray(r, dtype=float)
    return (-np.log(r) / (1.0 - r * r)) ** (k / 2.0 - 1.0)


def gradient_envelope(alpha, u) -> np.ndarray:
    """2 sum_i |alpha_i H_{alpha-e_i}(u) - u_i H_alpha(u)| e^{-|u|^2/2}"""
    index = MultiIndex(alpha)
    u = np.asarray(u, dtype=float)
    h_alpha = hermite_product(index, u)
    total = np.zeros(u.shape[:-1])
    for i in range(index.dim):
        lowered = index.shifted(i, -1)
        first = index[i] * hermite_product(lowered, u) if lowered is not None else 0.0
        total = total + np.abs(first - u[..., i] * h_alpha)
    return 2.0 * total * np.exp(-0.5 * np.sum(u * u, axis=-1))


def fit_gradient_bound(alpha, radius: float = 12.0, points: int = 241, margin: float = 1.05) -> float:
    """
    C with |grad_y F_alpha| <= C (1-r^2)^{-1/2} e^{-|x-ry|^2/(2(1-r^2))}

    The maximum of gradient_envelope over a tensor grid in [-radius, radius]^n, times margin.
    """
    index = MultiIndex(alpha)
    axis = np.linspace(-radius, radius, points)
    mesh = np.meshgrid(*([axis] * index.dim), indexing="ij")
    u = np.stack([m.ravel() for m in mesh], axis=1)
    return margin * float(np.max(gradient_envelope(index, u)))


def gradient_bound_ratio(alpha, x, y, r) -> np.ndarray:
    """|grad_y F| divided by (1-r^2)^{-1/2} e^{-|x-ry|^2/(2(1-r^2))}"""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    r = np.asarray(r, dtype=float)
    s2 = 1.0 - r * r
    gap = np.sum((x - r[..., None] * y) ** 2, axis=-1)
    envelope = np.exp(-gap / (2.0 * s2)) / np.sqrt(s2)
    grad = np.linalg.norm(grad_y_F(alpha, x, y, r), axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(envelope > 0.0, grad / np.where(envelope > 0.0, envelope, 1.0), 0.0)


def fit_hermite_growth(alpha, radius: float = 10.0, points: int = 2000) -> float:
    """
    Smallest C with |H_alpha(u)| <= C sum_{j=0}^{l} |u|^{2j+1}, k = 2l + 1, on a grid
    in [-radius, radius]^n that avoids the origin
    """
    index = MultiIndex(alpha)
    if index.order % 2 == 0:
        raise ValueError(f"Hermite growth bound is stated for odd |alpha|, got {index.order}")
    per_axis = points if index.dim == 1 else max(11, int(round(points ** (1.0 / index.dim))))
    axis = np.linspace(-radius, radius, per_axis)
    mesh = np.meshgrid(*([axis] * index.dim), indexing="ij")
    u = np.stack([m.ravel() for m in mesh], axis=1)
    norm = np.linalg.norm(u, axis=1)
    keep = norm > 0.0
    majorant = sum(norm[keep] ** (2 * j + 1) for j in range((index.order - 1) // 2 + 1))
    return float(np.max(np.abs(hermite_product(index, u[keep])) / majorant))
