#!/usr/bin/env python3
"""
Truncated multivariate Taylor jets, vectorised over base points

A jet stores the Taylor coefficients of a function in the displacement h
around each base point x0, for all monomials h^beta with |beta| <= order.
Differential operators act exactly on jets, so L^k of a closed-form profile
is obtained without finite differences or symbolic expression swell.
"""

import functools
import math
from typing import List, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from models.errors import JetOverflowError
from models.multiindex import MultiIndex, total_degree_indices


class JetSpace:
    """Monomial bookkeeping for jets of a fixed dimension and order"""

    def __init__(self, dim: int, order: int):
        self.dim = dim
        self.order = order
        self.monomials: List[MultiIndex] = list(total_degree_indices(dim, order))
        self.position = {m: i for i, m in enumerate(self.monomials)}
        self.degrees = np.array([m.order for m in self.monomials])
        left, right, target = [], [], []
        for i, a in enumerate(self.monomials):
            for j, b in enumerate(self.monomials):
                if a.order + b.order <= order:
                    left.append(i)
                    right.append(j)
                    target.append(self.position[a + b])
        self.product_table = (np.array(left), np.array(right), np.array(target))
        self.derivative_tables = []
        for axis in range(dim):
            source, dest, factor = [], [], []
            for i, m in enumerate(self.monomials):
                if m[axis] > 0:
                    source.append(i)
                    dest.append(self.position[m.shifted(axis, -1)])
                    factor.append(float(m[axis]))
            self.derivative_tables.append((np.array(source, dtype=int), np.array(dest, dtype=int),
                                           np.array(factor)))

    @property
    def size(self) -> int:
        return len(self.monomials)


@functools.lru_cache(maxsize=32)
def jet_space(dim: int, order: int) -> JetSpace:
    return JetSpace(dim, order)


class TaylorJet:
    """Jets at m base points; coeffs has shape (m, space.size)"""

    def __init__(self, space: JetSpace, coeffs: np.ndarray, valid_order: int = None):
        self.space = space
        self.coeffs = coeffs
        self.valid_order = space.order if valid_order is None else valid_order

    @classmethod
    def constant(cls, space: JetSpace, values) -> "TaylorJet":
        values = np.asarray(values, dtype=float)
        coeffs = np.zeros((len(values), space.size))
        coeffs[:, 0] = values
        return cls(space, coeffs)

    @classmethod
    def variable(cls, space: JetSpace, base_points: np.ndarray, axis: int) -> "TaylorJet":
        """The coordinate function x_axis = x0_axis + h_axis"""
        jet = cls.constant(space, base_points[:, axis])
        if space.order >= 1:
            jet.coeffs[:, space.position[MultiIndex.unit(space.dim, axis)]] = 1.0
        return jet

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[:, 0]

    def coefficient(self, beta: Sequence[int]) -> np.ndarray:
        return self.coeffs[:, self.space.position[MultiIndex(beta)]]

    def partial(self, beta: Sequence[int]) -> np.ndarray:
        """partial^beta at the base points, beta! times the Taylor coefficient"""
        index = MultiIndex(beta)
        if index.order > self.valid_order:
            raise ValueError(f"Derivative of order {index.order} exceeds the jet's valid order {self.valid_order}")
        return index.factorial * self.coefficient(index)

    def _wrap(self, coeffs: np.ndarray, valid_order: int) -> "TaylorJet":
        if not np.all(np.isfinite(coeffs)):
            raise JetOverflowError("Taylor-jet coefficients overflowed")
        return TaylorJet(self.space, coeffs, valid_order)

    def __add__(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            return TaylorJet(self.space, self.coeffs + other.coeffs, min(self.valid_order, other.valid_order))
        coeffs = self.coeffs.copy()
        coeffs[:, 0] += other
        return TaylorJet(self.space, coeffs, self.valid_order)

    __radd__ = __add__

    def __neg__(self) -> "TaylorJet":
        return TaylorJet(self.space, -self.coeffs, self.valid_order)

    def __sub__(self, other) -> "TaylorJet":
        return self + (-other)

    def __mul__(self, other) -> "TaylorJet":
        if not isinstance(other, TaylorJet):
            other = np.asarray(other, dtype=float)
            scale = other[:, None] if other.ndim == 1 else other
            return TaylorJet(self.space, self.coeffs * scale, self.valid_order)
        left, right, target = self.space.product_table
        out = np.zeros_like(self.coeffs)
        np.add.at(out.T, target, (self.coeffs[:, left] * other.coeffs[:, right]).T)
        return self._wrap(out, min(self.valid_order, other.valid_order))

    __rmul__ = __mul__

    def derivative(self, axis: int) -> "TaylorJet":
        source, dest, factor = self.space.derivative_tables[axis]
        out = np.zeros_like(self.coeffs)
        out[:, dest] = self.coeffs[:, source] * factor
        return TaylorJet(self.space, out, self.valid_order - 1)

    def compose(self, derivatives: np.ndarray) -> "TaylorJet":
        """
        g(self) given derivatives[:, j] = g^(j)(self.value), j = 0..order

        Uses g(q0 + d) = sum_j g^(j)(q0) d^j / j! with d = self - q0.
        """
        delta = TaylorJet(self.space, self.coeffs.copy(), self.valid_order)
        delta.coeffs[:, 0] = 0.0
        result = TaylorJet.constant(self.space, derivatives[:, 0])
        power = TaylorJet.constant(self.space, np.ones(len(self.coeffs)))
        for j in range(1, self.space.order + 1):
            power = power * delta
            result = result + power * (derivatives[:, j] / math.factorial(j))
        result.valid_order = self.valid_order
        return self._wrap(result.coeffs, self.valid_order)

    def exp(self) -> "TaylorJet":
        base = np.exp(self.value)
        return self.compose(np.repeat(base[:, None], self.space.order + 1, axis=1))


def coordinate_jets(space: JetSpace, base_points: np.ndarray) -> List[TaylorJet]:
    return [TaylorJet.variable(space, base_points, i) for i in range(space.dim)]


def apply_ou(jet: TaylorJet, base_points: np.ndarray) -> TaylorJet:
    """L J = -1/2 sum_i d_i^2 J + sum_i x_i d_i J; the valid order drops by 2"""
    result = None
    for i, x_i in enumerate(coordinate_jets(jet.space, base_points)):
        first = jet.derivative(i)
        term = first.derivative(i) * (-0.5) + x_i * first
        result = term if result is None else result + term
    result.valid_order = jet.valid_order - 2
    return result


def bump_polynomials(count: int) -> List[Polynomial]:
    """P_j with d^j/dq^j exp(-1/(1-q)) = P_j(w) e^{-w}, w = 1/(1-q)"""
    polys = [Polynomial([1.0])]
    w_squared = Polynomial([0.0, 0.0, 1.0])
    for _ in range(count - 1):
        p = polys[-1]
        polys.append((p.deriv() - p) * w_squared)
    return polys


def bump_derivatives(q: np.ndarray, order: int) -> np.ndarray:
    """
    Derivatives 0..order of psi(q) = exp(-1/(1-q)) for q < 1, zero for q >= 1

    Returns:
        Array of shape (len(q), order + 1)
    """
    q = np.asarray(q, dtype=float)
    out = np.zeros((len(q), order + 1))
    inside = q < 1.0
    if not np.any(inside):
        return out
    w = 1.0 / (1.0 - q[inside])
    with np.errstate(under="ignore", over="ignore", invalid="ignore"):
        decay = np.where(w < 700.0, np.exp(-w), 0.0)
        for j, p in enumerate(bump_polynomials(order + 1)):
            column = np.where(decay > 0.0, p(np.minimum(w, 700.0)) * decay, 0.0)
            out[inside, j] = column
    return out


def radial_bump_jet(space: JetSpace, base_points: np.ndarray, center: np.ndarray,
                    radius: float) -> TaylorJet:
    """Jet of psi(|x - c|^2 / radius^2), the bump exp(-1/(1 - t^2)) at t = |x - c|/radius"""
    q = None
    for i, x_i in enumerate(coordinate_jets(space, base_points)):
        d = (x_i + (-center[i])) * (1.0 / radius)
        q = d * d if q is None else q + d * d
    return q.compose(bump_derivatives(q.value, space.order))

