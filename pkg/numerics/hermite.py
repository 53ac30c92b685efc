#!/usr/bin/env python3
"""
Hermite polynomial engine

Physicists' polynomials H_m are evaluated by the three-term recurrence
H_{m+1} = 2t H_m - 2m H_{m-1}. Expansions use the normalized family
h_alpha = H_alpha / sqrt(2^|alpha| alpha!), which is orthonormal in L^2(gamma),
evaluated through its own stable recurrence. The ladder operators
delta_i = (1/sqrt 2) d/dx_i and their adjoints act exactly on coefficients.
"""

import math
from typing import Optional, Sequence

import numpy as np

from models.errors import DegreeCapError, DimensionMismatchError
from models.multiindex import HermiteCoeffs, MultiIndex, total_degree_indices

MAX_DEGREE = 60


def _check_degree(m: int):
    if m < 0:
        raise ValueError(f"Hermite degree must be non-negative, got {m}")
    if m > MAX_DEGREE:
        raise DegreeCapError(f"Hermite degree {m} exceeds the evaluation cap {MAX_DEGREE}")


def hermite_eval_1d(m: int, t):
    """
    Physicists' Hermite polynomial H_m(t)

    Args:
        m: Degree, 0 <= m <= MAX_DEGREE
        t: Scalar or array of evaluation points

    Returns:
        H_m(t) with the shape of t (a float for scalar t)
    """
    _check_degree(m)
    t = np.asarray(t, dtype=float)
    previous = np.ones_like(t)
    if m == 0:
        return previous if previous.ndim else float(previous)
    current = 2.0 * t
    for j in range(1, m):
        previous, current = current, 2.0 * t * current - 2.0 * j * previous
    return current if current.ndim else float(current)


def hermite_table(max_degree: int, t, normalized: bool = True) -> np.ndarray:
    """
    Table of H_0..H_max (or h_0..h_max) at the points t

    Returns:
        Array of shape t.shape + (max_degree + 1,)
    """
    _check_degree(max_degree)
    t = np.asarray(t, dtype=float)
    table = np.empty(t.shape + (max_degree + 1,))
    table[..., 0] = 1.0
    if max_degree == 0:
        return table
    if normalized:
        table[..., 1] = math.sqrt(2.0) * t
        for m in range(1, max_degree):
            table[..., m + 1] = (math.sqrt(2.0 / (m + 1)) * t * table[..., m]
                                 - math.sqrt(m / (m + 1)) * table[..., m - 1])
    else:
        table[..., 1] = 2.0 * t
        for m in range(1, max_degree):
            table[..., m + 1] = 2.0 * t * table[..., m] - 2.0 * m * table[..., m - 1]
    return table


def hermite_eval_normalized(m: int, t):
    """h_m(t) = H_m(t) / sqrt(2^m m!) by the normalized recurrence"""
    values = hermite_table(m, t)[..., m]
    return values if values.ndim else float(values)


def normalization(alpha: Sequence[int]) -> float:
    """sqrt(2^|alpha| alpha!), the factor between H_alpha and h_alpha"""
    index = MultiIndex(alpha)
    return math.sqrt(2.0 ** index.order * index.factorial)


def _as_points(u, dim: int) -> np.ndarray:
    points = np.asarray(u, dtype=float)
    if points.ndim == 0 or points.shape[-1] != dim:
        raise DimensionMismatchError(
            f"Point dimension {points.shape[-1] if points.ndim else 0} does not match multi-index dimension {dim}")
    return points


def hermite_eval(alpha: Sequence[int], u, normalized: bool = False):
    """
    H_alpha(u) = prod_i H_{alpha_i}(u_i), or h_alpha(u) when normalized

    Args:
        alpha: Multi-index of dimension n
        u: Point of shape (n,) or array of points of shape (..., n)
    """
    index = MultiIndex(alpha)
    points = _as_points(u, index.dim)
    value = np.ones(points.shape[:-1])
    for i, a in enumerate(index):
        if normalized:
            value = value * hermite_table(a, points[..., i])[..., a]
        else:
            value = value * hermite_eval_1d(a, points[..., i])
    return value if value.ndim else float(value)


def lower(i: int, f: HermiteCoeffs) -> HermiteCoeffs:
    """delta_i on coefficients: beta -> sqrt(beta_i + 1) * c(beta + e_i)"""
    def rule(beta, value):
        target = beta.shifted(i, -1)
        if target is None:
            return None
        return target, math.sqrt(beta[i]) * value
    return f.map_indices(rule)


def raise_(i: int, f: HermiteCoeffs) -> HermiteCoeffs:
    """delta*_i on coefficients: beta -> sqrt(beta_i) * c(beta - e_i)"""
    def rule(beta, value):
        return beta.shifted(i, 1), math.sqrt(beta[i] + 1) * value
    return f.map_indices(rule)


def apply_D(alpha: Sequence[int], f: HermiteCoeffs) -> HermiteCoeffs:
    """D^alpha h_beta = sqrt(prod beta_i!/(beta_i - alpha_i)!) h_{beta - alpha}"""
    index = MultiIndex(alpha)

    def rule(beta, value):
        target = beta.minus(index)
        if target is None:
            return None
        factor = math.prod(math.factorial(b) / math.factorial(b - a) for b, a in zip(beta, index))
        return target, math.sqrt(factor) * value
    return f.map_indices(rule)


def apply_Dstar(alpha: Sequence[int], f: HermiteCoeffs) -> HermiteCoeffs:
    """D*^alpha h_beta = sqrt(prod (beta_i + alpha_i)!/beta_i!) h_{beta + alpha}"""
    index = MultiIndex(alpha)

    def rule(beta, value):
        factor = math.prod(math.factorial(b + a) / math.factorial(b) for b, a in zip(beta, index))
        return beta + index, math.sqrt(factor) * value
    return f.map_indices(rule)


def evaluate(f: HermiteCoeffs, points, chunk: int = 4096) -> np.ndarray:
    """
    Evaluate the expansion at points of shape (m, n)

    Raises:
        DegreeCapError: When a per-axis degree exceeds MAX_DEGREE
    """
    points = _as_points(points, f.dim).reshape(-1, f.dim)
    if len(f) == 0:
        return np.zeros(len(points))
    indices = np.array([tuple(k) for k in f.coeffs], dtype=int)
    values = np.array(list(f.coeffs.values()))
    degrees = f.axis_degrees()
    for d in degrees:
        _check_degree(d)
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        block = points[start:start + chunk]
        product = np.ones((len(block), len(values)))
        for i in range(f.dim):
            table = hermite_table(degrees[i], block[:, i])
            product *= table[:, indices[:, i]]
        out[start:start + chunk] = product @ values
    return out


def expand(nodes, gamma_weights, values, max_degree: int,
           indices: Optional[Sequence[MultiIndex]] = None) -> HermiteCoeffs:
    """
    Project node values onto h_beta, |beta| <= max_degree, by quadrature

    Args:
        nodes: Quadrature nodes of shape (m, n)
        gamma_weights: Weights integrating against d(gamma)
        values: Function values at the nodes
        max_degree: Total-degree truncation
        indices: Optional explicit index set (overrides max_degree)
    """
    nodes = np.asarray(nodes, dtype=float)
    dim = nodes.shape[1]
    if indices is None:
        indices = list(total_degree_indices(dim, max_degree))
    index_array = np.array([tuple(k) for k in indices], dtype=int)
    weighted = np.asarray(gamma_weights, dtype=float) * np.asarray(values, dtype=float)
    tables = [hermite_table(int(index_array[:, i].max()), nodes[:, i]) for i in range(dim)]
    coeffs = {}
    for row, index in zip(index_array, indices):
        basis = np.ones(len(nodes))
        for i in range(dim):
            basis = basis * tables[i][:, row[i]]
        coeffs[MultiIndex(index)] = float(basis @ weighted)
    return HermiteCoeffs(dim, coeffs)


def from_values(grid, values, degree: int) -> HermiteCoeffs:
    """expand() on the nodes and d(gamma) weights of a QuadratureGrid"""
    return expand(grid.nodes, grid.gamma_weights, values, degree)
