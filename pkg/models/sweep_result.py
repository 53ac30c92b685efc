#!/usr/bin/env python3
"""
Experiment parameters, per-sample records and sweep reports
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .multiindex import MultiIndex
from .operators import Family, PVConfig

DEFAULT_SEED = 20240531


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters shared by all experiments; None means the experiment's own default"""
    dim: int = 1
    alpha: Optional[MultiIndex] = None
    family: Family = Family.OLD
    k: Optional[int] = None
    samples: Optional[int] = None
    seed: int = DEFAULT_SEED
    degree: Optional[int] = None
    nodes: int = 40
    workers: int = 1
    route: str = "auto"
    case: str = "both"
    delta: float = 0.5
    truncation_tolerance: float = 1e-2
    radii: Optional[tuple] = None
    pv: PVConfig = field(default_factory=PVConfig)
    calibration: Optional[Dict] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"Dimension must be 1, 2 or 3, got {self.dim}")
        if self.alpha is not None:
            object.__setattr__(self, 'alpha', MultiIndex(self.alpha))
            if self.alpha.dim != self.dim:
                raise ValueError(f"alpha {self.alpha.label()} does not live in R^{self.dim}")
        object.__setattr__(self, 'family', Family(self.family))
        if self.route not in ("auto", "local", "spectral", "kernel"):
            raise ValueError(f"Unknown route '{self.route}'")
        if self.case not in ("both", "i", "ii"):
            raise ValueError(f"Unknown geometry case '{self.case}'")
        if self.workers < 1:
            raise ValueError(f"Need at least one worker, got {self.workers}")

    def order_alpha(self, default_k: int = 1) -> MultiIndex:
        """alpha if given, else k (or default_k) placed on the first axis"""
        if self.alpha is not None:
            return self.alpha
        k = self.k if self.k is not None else default_k
        return MultiIndex([k] + [0] * (self.dim - 1))


@dataclass
class SampleRecord:
    """One sample of an experiment"""
    index: int
    values: Dict[str, Any]
    message: str = ""
    violation: bool = False
    flags: List[str] = field(default_factory=list)

    def row(self) -> Dict[str, Any]:
        row = {"index": self.index, "violation": int(self.violation), "flags": ";".join(self.flags)}
        row.update(self.values)
        return row


@dataclass
class SweepReport:
    """Final result of an experiment"""
    experiment: str
    seed: int
    parameters: Dict[str, Any]
    samples: int
    violations: int
    fitted: Dict[str, float] = field(default_factory=dict)
    flags: Dict[str, int] = field(default_factory=dict)
    failing: List[int] = field(default_factory=list)
    grid_spec: str = ""
    notes: List[str] = field(default_factory=list)
    passed: bool = True
    time_taken: Optional[float] = None

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "parameters": self.parameters,
            "samples": self.samples,
            "violations": self.violations,
            "fitted": self.fitted,
            "flags": self.flags,
            "failing": self.failing,
            "grid_spec": self.grid_spec,
            "notes": self.notes,
            "passed": self.passed,
            "runtime": self.time_taken,
        }

    def __str__(self) -> str:
        result = f"Experiment: {self.experiment}\n"
        result += f"Samples: {self.samples}\n"
        result += f"Violations: {self.violations}\n"
        for name, value in sorted(self.fitted.items()):
            result += f"{name}: {value:.6g}\n"
        if self.flags:
            result += f"Flags: {self.flags}\n"
        if self.time_taken is not None:
            result += f"Time Taken: {self.time_taken:.4f} seconds\n"
        result += f"Passed: {self.passed}"
        return result
