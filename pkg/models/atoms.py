#!/usr/bin/env python3
"""
Atom data model: smooth compactly supported profiles, H^1 atoms, X^k atoms and
their certificates
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .geometry import AdmissibleBall, QuadratureGrid


def smooth_bump(t) -> np.ndarray:
    """phi(t) = exp(-1/(1 - t^2)) for |t| < 1, zero otherwise"""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    with np.errstate(under="ignore"):
        out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


@dataclass(frozen=True)
class BumpComponent:
    """coefficient * phi(|x - center| / radius)"""
    center: Tuple[float, ...]
    radius: float
    coefficient: float = 1.0

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        distance = np.linalg.norm(points - np.asarray(self.center), axis=-1)
        return self.coefficient * smooth_bump(distance / self.radius)

    def reach(self, center) -> float:
        """Largest distance from center to the support"""
        return float(np.linalg.norm(np.asarray(self.center) - np.asarray(center))) + self.radius


@dataclass(frozen=True)
class BumpProfile:
    """
    Sum of radial bumps. The concentric two-bump form
    u = phi(|x-c|/rho_1) - mix * phi(|x-c|/rho_2) has mix fixed by int u d(gamma) = 0.
    """
    components: Tuple[BumpComponent, ...]
    breakpoints: Tuple[float, ...] = ()

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return sum(component(points) for component in self.components)

    def reach(self, center) -> float:
        return max(component.reach(center) for component in self.components)

    def scaled(self, factor: float) -> "BumpProfile":
        return type(self)(tuple(BumpComponent(c.center, c.radius, factor * c.coefficient)
                                for c in self.components), self.breakpoints)


class GenericH1Profile(BumpProfile):
    """Two off-centre bumps of opposite sign; mean zero but no X^k certificate"""


@dataclass(frozen=True)
class PlateauProfile:
    """Smooth function equal to 1 for |x - c| <= inner and 0 for |x - c| >= outer"""
    center: Tuple[float, ...]
    inner: float
    outer: float

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise ValueError(f"Plateau needs 0 < inner < outer, got {self.inner}, {self.outer}")

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        distance = np.linalg.norm(points - np.asarray(self.center), axis=-1)
        t = np.clip((distance - self.inner) / (self.outer - self.inner), 0.0, 1.0)
        with np.errstate(divide="ignore", under="ignore"):
            rise = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
            fall = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
        return fall / (fall + rise)


@dataclass(frozen=True, eq=False)
class H1Atom:
    """
    Gaussian (1,2)-atom: the constant 1, or a = scale * (L+I)^lift v with v a
    mean-zero profile supported in the ball
    """
    ball: Optional[AdmissibleBall]
    profile: Optional[BumpProfile] = None
    scale: float = 1.0
    lift: int = 0
    grid: Optional[QuadratureGrid] = field(default=None, repr=False)
    values: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def is_constant(self) -> bool:
        return self.ball is None

    @property
    def dim(self) -> int:
        return self.ball.dim if self.ball is not None else self.grid.dim


@dataclass(frozen=True, eq=False)
class XkAtom:
    """a = scale * L^k u; levels[j] holds L^j u at the grid nodes, j = 0..k"""
    order: int
    ball: AdmissibleBall
    profile: BumpProfile
    scale: float
    grid: QuadratureGrid = field(repr=False)
    levels: Tuple[np.ndarray, ...] = field(repr=False)

    @property
    def values(self) -> np.ndarray:
        return self.scale * self.levels[self.order]

    @property
    def dim(self) -> int:
        return self.ball.dim


@dataclass
class AtomCertificate:
    """Outcome of validating an atom; status fields are 'pass', 'fail' or 'inconclusive'"""
    kind: str
    order: int
    gamma_ball: float
    mean: float
    l2_norm: float
    l2_bound: float
    support_ok: bool
    mean_ok: bool
    l2_ok: bool
    reconstruction_error: float = math.nan
    reconstruction: str = "inconclusive"
    outside_mass: float = math.nan
    outside: str = "inconclusive"
    tail_fraction: float = math.nan
    probe: float = math.nan
    probe_status: str = "inconclusive"
    proposition_ratio: float = math.nan
    weighted_chain: Tuple[float, ...] = ()
    weighted_ok: bool = True
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Hard checks only; inconclusive spectral checks do not fail an atom"""
        return (self.support_ok and self.mean_ok and self.l2_ok and self.weighted_ok
                and "fail" not in (self.reconstruction, self.outside, self.probe_status))

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "order": self.order,
            "gamma_ball": self.gamma_ball,
            "mean": self.mean,
            "l2_norm": self.l2_norm,
            "l2_bound": self.l2_bound,
            "support_ok": self.support_ok,
            "mean_ok": self.mean_ok,
            "l2_ok": self.l2_ok,
            "reconstruction_error": self.reconstruction_error,
            "reconstruction": self.reconstruction,
            "outside_mass": self.outside_mass,
            "outside": self.outside,
            "tail_fraction": self.tail_fraction,
            "probe": self.probe,
            "probe_status": self.probe_status,
            "proposition_ratio": self.proposition_ratio,
            "weighted_chain": list(self.weighted_chain),
            "weighted_ok": self.weighted_ok,
            "passed": self.passed,
        }
