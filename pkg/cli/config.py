#!/usr/bin/env python3
"""
Run configuration: built-in defaults, flat key=value files, command-line overrides
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from models import ConfigError, ExperimentConfig, Family, MultiIndex, PVConfig
from models.sweep_result import DEFAULT_SEED

logger = logging.getLogger(__name__)

# Largest truncation degree and Gauss-Hermite nodes per axis, per dimension
BUDGET = {1: (60, 200), 2: (40, 80), 3: (16, 40)}


@dataclass(frozen=True)
class RunConfig:
    """Every tunable of a run; None means the experiment's own default"""
    n: int = 1
    degree: Optional[int] = None
    nodes: int = 40
    experiment: str = "all"
    alpha: Optional[str] = None
    family: str = "old"
    k: Optional[int] = None
    seed: int = DEFAULT_SEED
    out: str = "reports"
    samples: Optional[int] = None
    workers: int = 1
    case: str = "both"
    route: str = "auto"
    delta: float = 0.5
    calibration: Optional[str] = None
    input: Optional[str] = None
    coeffs: Optional[str] = None
    points: Optional[str] = None
    with_kernel: bool = False
    eps_inner: float = 1e-5
    r_nodes: int = 16
    truncation_tolerance: float = 1e-2
    extra: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n not in BUDGET:
            raise ConfigError(f"n must be 1, 2 or 3, got {self.n}")
        max_degree, max_nodes = BUDGET[self.n]
        if self.degree is not None and not 0 <= self.degree <= max_degree:
            raise ConfigError(f"degree {self.degree} outside the budget 0..{max_degree} for n={self.n}")
        if not 1 <= self.nodes <= max_nodes:
            raise ConfigError(f"nodes {self.nodes} outside the budget 1..{max_nodes} for n={self.n}")
        if self.family not in (Family.OLD.value, Family.NEW.value):
            raise ConfigError(f"family must be 'old' or 'new', got '{self.family}'")
        if self.alpha is not None:
            alpha = self.multi_index()
            if alpha.dim != self.n:
                raise ConfigError(f"alpha {self.alpha} does not live in R^{self.n}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")

    def multi_index(self) -> Optional[MultiIndex]:
        if self.alpha is None:
            return None
        try:
            return MultiIndex.parse(self.alpha)
        except ValueError as e:
            raise ConfigError(str(e))

    def pv_config(self) -> PVConfig:
        try:
            return PVConfig(eps_inner=self.eps_inner, eps_outer=2.0 * self.eps_inner, r_nodes=self.r_nodes)
        except ValueError as e:
            raise ConfigError(str(e))

    def experiment_config(self, calibration: Optional[Dict] = None) -> ExperimentConfig:
        try:
            return ExperimentConfig(
                dim=self.n, alpha=self.multi_index(), family=Family(self.family), k=self.k,
                samples=self.samples, seed=self.seed, degree=self.degree, nodes=self.nodes,
                workers=self.workers, route=self.route, case=self.case, delta=self.delta,
                truncation_tolerance=self.truncation_tolerance, pv=self.pv_config(),
                calibration=calibration)
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(str(e))


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig) if f.name != "extra"}


def _convert(name: str, text: str) -> Any:
    kind = FIELD_TYPES[name]
    if text.lower() == "none":
        return None
    if kind in (bool, "bool"):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got '{text}'")
    if kind in (int, Optional[int]):
        return int(text)
    if kind in (float, Optional[float]):
        return float(text)
    return text


def parse_config_file(path: str) -> Dict[str, Any]:
    """
    Read a flat key=value file

    Blank lines and lines starting with '#' are skipped. Keys use the RunConfig field
    names; dashes are accepted in place of underscores.

    Raises:
        ConfigError: With the file name and line number of the offending line
    """
    values: Dict[str, Any] = {}
    try:
        with open(path, 'r') as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigError(f"Cannot read config: {e}", path)
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise ConfigError(f"Expected key=value, got '{text}'", path, line_no)
        key = key.strip().replace("-", "_")
        if key not in FIELD_TYPES:
            raise ConfigError(f"Unknown key '{key}'", path, line_no)
        try:
            values[key] = _convert(key, value.strip())
        except ValueError as e:
            raise ConfigError(f"Bad value for '{key}': {e}", path, line_no)
    logger.debug("Read %d settings from %s", len(values), path)
    return values


def build_config(file_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Defaults, then the config file, then the non-None overrides"""
    values: Dict[str, Any] = {}
    if file_path:
        values.update(parse_config_file(file_path))
    for key, value in (overrides or {}).items():
        if key not in FIELD_TYPES:
            raise ConfigError(f"Unknown setting '{key}'")
        if value is not None:
            values[key] = value
    return RunConfig(**values)
