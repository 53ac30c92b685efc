#!/usr/bin/env python3
"""
Calibration of the kernel normalization c_{n,alpha}

The p.v. integral of the kernel with c = 1 is matched, by least squares over fixed
evaluation points, against the spectral transform of a reference input:
  old family: f = h_alpha, R_alpha f = sqrt(alpha!) k^{-k/2}
  new family: f = h_0,     R*_alpha f = sqrt(alpha!) h_alpha

Table format: one record per line, comma-separated key=value fields;
multi-index entries are separated by colons
  n=2,alpha=2:0,family=old,c=...,reference=...,residual=...,eps_inner=...,r_nodes=...,status=ok
"""

import logging
import math
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from models.errors import ConfigError
from models.multiindex import HermiteCoeffs, MultiIndex
from models.operators import (Family, KernelSpec, PVConfig, RieszOrder, identity_coefficient,
                              reference_normalization)
from .hermite import evaluate
from .principal_value import apply_riesz_pv_many
from .riesz import riesz

logger = logging.getLogger(__name__)

RESIDUAL_THRESHOLD = 1e-4


@dataclass(frozen=True)
class CalibrationRecord:
    dim: int
    alpha: MultiIndex
    family: Family
    constant: float
    reference: float
    residual: float
    eps_inner: float
    r_nodes: int

    @property
    def flagged(self) -> bool:
        return not self.residual < RESIDUAL_THRESHOLD

    @property
    def reference_deviation(self) -> float:
        return abs(self.constant - self.reference) / self.reference

    @property
    def key(self) -> Tuple[int, str, str]:
        return self.dim, self.alpha.label(), self.family.value

    def to_line(self) -> str:
        return (f"n={self.dim},alpha={self.alpha.label().replace(',', ':')},family={self.family.value},"
                f"c={self.constant:.15e},reference={self.reference:.15e},residual={self.residual:.6e},"
                f"eps_inner={self.eps_inner:.6e},r_nodes={self.r_nodes},"
                f"status={'warning' if self.flagged else 'ok'}")


def calibration_points(dim: int) -> np.ndarray:
    """Fixed evaluation points away from the coordinate hyperplanes"""
    base = np.array([-1.15, -0.65, -0.25, 0.35, 0.8, 1.3])
    return np.stack([np.roll(base, 2 * i) for i in range(dim)], axis=1)


def reference_input(order: RieszOrder) -> HermiteCoeffs:
    if order.family is Family.OLD:
        return HermiteCoeffs.basis(order.alpha)
    return HermiteCoeffs.basis([0] * order.dim)


def calibrate(order: RieszOrder, pv: PVConfig = PVConfig(), points: Optional[np.ndarray] = None,
              workers: int = 1) -> CalibrationRecord:
    """
    Fit c so that c * (p.v. kernel integral with c = 1) reproduces the spectral image

    The residual is ||c K - S'|| / ||S'|| where S' is the spectral image minus the
    identity part of even orders.
    """
    points = calibration_points(order.dim) if points is None else np.atleast_2d(points)
    f = reference_input(order)
    spectral = evaluate(riesz(order, f), points)
    local = identity_coefficient(order.alpha) * evaluate(f, points)
    target = spectral - local
    unit = KernelSpec(order.alpha, order.family, normalization=1.0)
    results = apply_riesz_pv_many(unit, f, points, pv, support=None, workers=workers)
    kernel_part = np.array([r.value for r in results]) - local
    constant = float(kernel_part @ target / (kernel_part @ kernel_part))
    residual = float(np.linalg.norm(constant * kernel_part - target) / np.linalg.norm(target))
    record = CalibrationRecord(order.dim, order.alpha, order.family, constant,
                               reference_normalization(order.alpha), residual, pv.eps_inner, pv.r_nodes)
    if record.flagged:
        logger.warning("Calibration of %s (n=%d): residual %.3e above %.0e",
                       order.label(), order.dim, residual, RESIDUAL_THRESHOLD)
    else:
        logger.info("Calibrated %s (n=%d): c=%.12e, residual %.3e, deviation from closed form %.3e",
                    order.label(), order.dim, constant, residual, record.reference_deviation)
    return record


def _parse_line(text: str, source: str, line_no: int) -> CalibrationRecord:
    fields: Dict[str, str] = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise ConfigError(f"Malformed field '{part}'", source, line_no)
        fields[key.strip()] = value.strip()
    try:
        return CalibrationRecord(int(fields["n"]), MultiIndex.parse(fields["alpha"].replace(":", ",")),
                                 Family(fields["family"]), float(fields["c"]),
                                 float(fields["reference"]), float(fields["residual"]),
                                 float(fields.get("eps_inner", "nan")), int(fields.get("r_nodes", "0")))
    except KeyError as exc:
        raise ConfigError(f"Missing field {exc}", source, line_no) from exc
    except ValueError as exc:
        raise ConfigError(str(exc), source, line_no) from exc


def read_table(path: str) -> Dict[Tuple[int, str, str], CalibrationRecord]:
    """Records keyed by (n, alpha label, family); a missing file is an empty table"""
    table = {}
    if not os.path.exists(path):
        return table
    with open(path, 'r') as f:
        for line_no, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            record = _parse_line(text, path, line_no)
            table[record.key] = record
    return table


def write_table(path: str, records: List[CalibrationRecord]):
    """Merge records into the table at path, sorted by key"""
    table = read_table(path)
    for record in records:
        table[record.key] = record
    with open(path, 'w') as f:
        f.write("# gaussriesz calibration table: n,alpha,family,c,reference,residual,eps_inner,r_nodes,status\n")
        for key in sorted(table):
            f.write(table[key].to_line() + "\n")


def calibrated_spec(order: RieszOrder, table: Dict[Tuple[int, str, str], CalibrationRecord]) -> KernelSpec:
    """KernelSpec using the table's constant when present, the closed form otherwise"""
    record = table.get((order.dim, order.alpha.label(), order.family.value))
    if record is None or not math.isfinite(record.constant):
        return KernelSpec.for_order(order)
    return KernelSpec.for_order(order, record.constant)
