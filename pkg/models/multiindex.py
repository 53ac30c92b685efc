#!/usr/bin/env python3
"""
Multi-indices and sparse Hermite expansions

A HermiteCoeffs value is a finite map from multi-indices to the coefficients
<f, h_beta> of a function in L^2(gamma) on the orthonormal basis h_beta.
"""

import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import DimensionMismatchError


class MultiIndex(tuple):
    """Tuple of non-negative integers with |alpha| and alpha! helpers"""

    def __new__(cls, entries: Iterable[int]):
        values = tuple(int(e) for e in entries)
        if len(values) == 0:
            raise ValueError("MultiIndex needs at least one entry")
        if any(v < 0 for v in values):
            raise ValueError(f"MultiIndex entries must be non-negative, got {values}")
        return super().__new__(cls, values)

    @classmethod
    def zero(cls, dim: int) -> "MultiIndex":
        return cls((0,) * dim)

    @classmethod
    def unit(cls, dim: int, i: int) -> "MultiIndex":
        """The unit index e_i (coordinates are 0-based)"""
        return cls(1 if j == i else 0 for j in range(dim))

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        """Parse a comma-separated multi-index such as '2,0'"""
        try:
            return cls(int(part) for part in text.split(",") if part.strip() != "")
        except ValueError as e:
            raise ValueError(f"Invalid multi-index '{text}': {e}")

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        """|alpha|, the entry sum"""
        return sum(self)

    @property
    def factorial(self) -> int:
        """alpha! = prod alpha_i!"""
        return math.prod(math.factorial(a) for a in self)

    def shifted(self, i: int, delta: int) -> Optional["MultiIndex"]:
        """alpha + delta*e_i, or None when an entry would turn negative"""
        value = self[i] + delta
        if value < 0:
            return None
        return MultiIndex(self[:i] + (value,) + self[i + 1:])

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        self._check_dim(other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def minus(self, other: "MultiIndex") -> Optional["MultiIndex"]:
        """self - other, or None unless self >= other componentwise"""
        self._check_dim(other)
        if not self.dominates(other):
            return None
        return MultiIndex(a - b for a, b in zip(self, other))

    def dominates(self, other: "MultiIndex") -> bool:
        """True when self >= other componentwise"""
        return all(a >= b for a, b in zip(self, other))

    def label(self) -> str:
        return ",".join(str(a) for a in self)

    def _check_dim(self, other: "MultiIndex"):
        if len(self) != len(other):
            raise DimensionMismatchError(f"Multi-index dimensions differ: {len(self)} vs {len(other)}")


def total_degree_indices(dim: int, max_degree: int) -> Iterator[MultiIndex]:
    """All multi-indices of the given dimension with |beta| <= max_degree, graded order"""
    for degree in range(max_degree + 1):
        for combo in itertools.product(range(degree + 1), repeat=dim):
            if sum(combo) == degree:
                yield MultiIndex(combo)


@dataclass(frozen=True)
class HermiteCoeffs:
    """Finite Hermite expansion f = sum c_beta h_beta in dimension dim"""
    dim: int
    coeffs: Mapping[MultiIndex, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"Dimension must be >= 1, got {self.dim}")
        cleaned: Dict[MultiIndex, float] = {}
        for key, value in dict(self.coeffs).items():
            index = key if isinstance(key, MultiIndex) else MultiIndex(key)
            if index.dim != self.dim:
                raise DimensionMismatchError(
                    f"Coefficient index {tuple(index)} does not have dimension {self.dim}")
            value = float(value)
            if value != 0.0:
                cleaned[index] = cleaned.get(index, 0.0) + value
        object.__setattr__(self, 'coeffs', MappingProxyType(cleaned))

    @classmethod
    def zero(cls, dim: int) -> "HermiteCoeffs":
        return cls(dim, {})

    @classmethod
    def basis(cls, alpha: Iterable[int], scale: float = 1.0) -> "HermiteCoeffs":
        index = MultiIndex(alpha)
        return cls(index.dim, {index: scale})

    def __getitem__(self, index) -> float:
        return self.coeffs.get(MultiIndex(index), 0.0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.coeffs)

    def items(self):
        return self.coeffs.items()

    def __add__(self, other: "HermiteCoeffs") -> "HermiteCoeffs":
        self._check_dim(other)
        merged = dict(self.coeffs)
        for index, value in other.items():
            merged[index] = merged.get(index, 0.0) + value
        return HermiteCoeffs(self.dim, merged)

    def __sub__(self, other: "HermiteCoeffs") -> "HermiteCoeffs":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "HermiteCoeffs":
        return HermiteCoeffs(self.dim, {k: scalar * v for k, v in self.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "HermiteCoeffs":
        return (-1.0) * self

    def map_indices(self, rule) -> "HermiteCoeffs":
        """Apply rule(beta, c) -> (beta', c') or None to every coefficient"""
        out: Dict[MultiIndex, float] = {}
        for index, value in self.items():
            mapped = rule(index, value)
            if mapped is None:
                continue
            target, new_value = mapped
            out[target] = out.get(target, 0.0) + new_value
        return HermiteCoeffs(self.dim, out)

    def dot(self, other: "HermiteCoeffs") -> float:
        """L^2(gamma) inner product, the coefficient dot product"""
        self._check_dim(other)
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        return math.fsum(v * large.coeffs.get(k, 0.0) for k, v in small.items())

    def norm(self) -> float:
        return math.sqrt(math.fsum(v * v for v in self.coeffs.values()))

    def degree(self) -> int:
        """Largest |beta| with a nonzero coefficient (0 for the zero expansion)"""
        return max((k.order for k in self.coeffs), default=0)

    def axis_degrees(self) -> Tuple[int, ...]:
        """Largest beta_i per coordinate"""
        return tuple(max((k[i] for k in self.coeffs), default=0) for i in range(self.dim))

    def truncate(self, max_degree: int) -> "HermiteCoeffs":
        return HermiteCoeffs(self.dim, {k: v for k, v in self.items() if k.order <= max_degree})

    def isclose(self, other: "HermiteCoeffs", atol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(v) <= atol for v in diff.coeffs.values())

    def _check_dim(self, other: "HermiteCoeffs"):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"Expansion dimensions differ: {self.dim} vs {other.dim}")

    def __str__(self) -> str:
        terms = [f"{v:+.6g}*h[{k.label()}]" for k, v in sorted(self.items())]
        return " ".join(terms) if terms else "0"
