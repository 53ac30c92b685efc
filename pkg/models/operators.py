#!/usr/bin/env python3
"""
Operator descriptions: spectral multipliers, Riesz orders, kernel and
principal-value configurations
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.special import gamma as gamma_fn

from .multiindex import MultiIndex


class Family(str, Enum):
    OLD = "old"
    NEW = "new"
    HALFPOWER = "halfpower-derivative"


@dataclass(frozen=True)
class SpectralMultiplier:
    """h_beta -> (|beta| + shift)^exponent h_beta; L^z for shift 0, (L+I)^z for shift 1"""
    exponent: float
    shift: int = 0

    def __post_init__(self):
        if self.shift not in (0, 1):
            raise ValueError(f"Multiplier shift must be 0 or 1, got {self.shift}")
        if isinstance(self.exponent, complex):
            raise ValueError("Only real exponents are supported")

    def factor(self, order: int) -> float:
        base = order + self.shift
        if base == 0:
            # L^z on the constant: kept for z = 0, annihilated otherwise
            return 1.0 if self.exponent == 0 else 0.0
        return float(base) ** self.exponent


@dataclass(frozen=True)
class RieszOrder:
    """R_alpha = D^alpha L^{-k/2} (old) or R*_alpha = D*^alpha (L+I)^{-k/2} (new)"""
    alpha: MultiIndex
    family: Family = Family.OLD

    def __post_init__(self):
        object.__setattr__(self, 'alpha', MultiIndex(self.alpha))
        object.__setattr__(self, 'family', Family(self.family))
        if self.alpha.order < 1:
            raise ValueError("Riesz transforms need |alpha| >= 1")
        if self.family is Family.HALFPOWER:
            raise ValueError("RieszOrder is either the old or the new family")

    @property
    def k(self) -> int:
        return self.alpha.order

    @property
    def dim(self) -> int:
        return self.alpha.dim

    def label(self) -> str:
        return f"{self.family.value}[{self.alpha.label()}]"


def reference_normalization(alpha: MultiIndex) -> float:
    """Closed-form c_{n,alpha} = 2^{-k/2} pi^{-n/2} / Gamma(k/2) from subordination"""
    k, n = alpha.order, alpha.dim
    return 2.0 ** (-k / 2.0) * math.pi ** (-n / 2.0) / float(gamma_fn(k / 2.0))


def sphere_moment(alpha: MultiIndex) -> float:
    """Mean of theta^alpha over the unit sphere S^{n-1}"""
    if any(a % 2 for a in alpha):
        return 0.0
    n, k = alpha.dim, alpha.order
    log_value = (math.lgamma(n / 2.0) + sum(math.lgamma((a + 1) / 2.0) for a in alpha)
                 - (n / 2.0) * math.log(math.pi) - math.lgamma((n + k) / 2.0))
    return math.exp(log_value)


def identity_coefficient(alpha: MultiIndex) -> float:
    """
    Local term of the principal-value representation

    Even orders carry m f(x) with m = (-1)^{k/2} times the sphere mean of theta^alpha;
    odd orders carry none.
    """
    if alpha.order % 2:
        return 0.0
    return (-1.0) ** (alpha.order // 2) * sphere_moment(alpha)


@dataclass(frozen=True)
class KernelSpec:
    """Integral kernel of a Riesz transform or of D^alpha L^{k/2} (odd k)"""
    alpha: MultiIndex
    family: Family = Family.OLD
    normalization: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'alpha', MultiIndex(self.alpha))
        object.__setattr__(self, 'family', Family(self.family))
        if self.alpha.order < 1:
            raise ValueError("Kernels need |alpha| >= 1")
        if self.family is Family.HALFPOWER and self.alpha.order % 2 == 0:
            raise ValueError(f"The half-power kernel needs odd |alpha|, got {self.alpha.order}")

    @property
    def k(self) -> int:
        return self.alpha.order

    @property
    def dim(self) -> int:
        return self.alpha.dim

    @property
    def constant(self) -> float:
        """Normalization in use: the calibrated value or the closed form"""
        if self.family is Family.HALFPOWER:
            return math.pi ** (-self.dim / 2.0) / float(gamma_fn(-self.k / 2.0))
        if self.normalization is not None:
            return self.normalization
        return reference_normalization(self.alpha)

    def with_normalization(self, value: float) -> "KernelSpec":
        return KernelSpec(self.alpha, self.family, value)

    @classmethod
    def for_order(cls, order: RieszOrder, normalization: Optional[float] = None) -> "KernelSpec":
        return cls(order.alpha, order.family, normalization)


@dataclass(frozen=True)
class PVConfig:
    """
    Principal-value and r-integral quadrature settings

    eps_inner < eps_outer are the exclusion radii; eps_outer = 2 eps_inner is
    assumed by the first-order extrapolation.
    """
    eps_inner: float = 1e-5
    eps_outer: float = 2e-5
    r_nodes: int = 16
    lower_levels: int = 40
    upper_octaves: int = 40
    panels_per_octave: int = 1
    radial_nodes: int = 16
    angular_nodes: int = 16
    tolerance: float = 1e-3
    decay_margin: float = 45.0
    chunk: int = 2048

    def __post_init__(self):
        if not 0 < self.eps_inner < self.eps_outer:
            raise ValueError(f"Need 0 < eps_inner < eps_outer, got {self.eps_inner}, {self.eps_outer}")
        if self.eps_inner < 1e-12:
            raise ValueError(f"eps_inner {self.eps_inner} is below the resolvable offset 1e-12")
        if not math.isclose(self.eps_outer, 2.0 * self.eps_inner, rel_tol=1e-12):
            raise ValueError("eps_outer must equal 2 * eps_inner")


@dataclass(frozen=True)
class FAlphaEval:
    """F_alpha(x, y, r) and its y-gradient at one point"""
    x: Tuple[float, ...]
    y: Tuple[float, ...]
    r: float
    value: float
    gradient: np.ndarray
