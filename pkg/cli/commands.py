#!/usr/bin/env python3
"""
Command implementations: transform, verify, calibrate

Each command takes a RunConfig and returns the process exit code.
"""

import logging
import os
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from experiments import AVAILABLE_EXPERIMENTS, run_experiment
from models import (AdmissibleBall, ConfigError, GaussRieszError, HermiteCoeffs,
                    MultiIndex, RieszOrder)
from numerics.atoms import DEFAULT_DEGREE, concentric_profile, profile_grid
from numerics.calibration import calibrate, calibrated_spec, read_table, write_table
from numerics.hermite import evaluate, from_values
from numerics.principal_value import apply_riesz_pv_many
from numerics.riesz import riesz
from .config import RunConfig
from .reports import write_csv, write_records, write_summary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_WARNING = 2
EXIT_USAGE = 64

BUMP_RADIUS = 0.5


def riesz_order(config: RunConfig) -> RieszOrder:
    alpha = config.multi_index()
    if alpha is None:
        raise ConfigError("--alpha is required")
    try:
        return RieszOrder(alpha, config.family)
    except ValueError as e:
        raise ConfigError(str(e))


def parse_coefficients(text: str, dim: int) -> HermiteCoeffs:
    """'2:0=1.5;0:1=-0.25' -> HermiteCoeffs; ',' may replace ':' when n = 1"""
    coeffs: Dict[MultiIndex, float] = {}
    for entry in filter(None, (part.strip() for part in text.split(";"))):
        index, sep, value = entry.partition("=")
        if not sep:
            raise ConfigError(f"Coefficient entry '{entry}' is not index=value")
        try:
            beta = MultiIndex.parse(index.replace(":", ","))
            coeffs[beta] = coeffs.get(beta, 0.0) + float(value)
        except ValueError as e:
            raise ConfigError(f"Bad coefficient entry '{entry}': {e}")
        if beta.dim != dim:
            raise ConfigError(f"Coefficient index {index} does not live in R^{dim}")
    return HermiteCoeffs(dim, coeffs)


def builtin_input(name: str, dim: int, degree: Optional[int]) -> HermiteCoeffs:
    """
    Built-in inputs: 'h<beta>' is the normalized Hermite polynomial h_beta (entries
    separated by ':'), 'bump' the mean-zero concentric bump on B(0, 1/2) expanded to
    the truncation degree
    """
    if name == "bump":
        ball = AdmissibleBall(tuple([0.0] * dim), BUMP_RADIUS)
        profile = concentric_profile(ball)
        grid = profile_grid(ball, profile)
        return from_values(grid, profile(grid.nodes),
                           degree if degree is not None else DEFAULT_DEGREE[dim])
    if name.startswith("h"):
        try:
            beta = MultiIndex.parse(name[1:].replace(":", ","))
        except ValueError as e:
            raise ConfigError(f"Unknown input '{name}': {e}")
        if beta.dim != dim:
            raise ConfigError(f"Input {name} does not live in R^{dim}")
        return HermiteCoeffs.basis(beta)
    raise ConfigError(f"Unknown input '{name}'. Available: h<index>, bump")


def input_coefficients(config: RunConfig) -> HermiteCoeffs:
    if config.coeffs:
        return parse_coefficients(config.coeffs, config.n)
    if config.input:
        return builtin_input(config.input, config.n, config.degree)
    raise ConfigError("An input is required: --input NAME or --coeffs LIST")


def evaluation_points(config: RunConfig) -> np.ndarray:
    """--points 'x1,y1;x2,y2' or nine points on the diagonal segment [-2, 2] (1,..,1)/sqrt(n)"""
    if config.points:
        try:
            rows = [[float(v) for v in row.split(",")] for row in config.points.split(";") if row.strip()]
        except ValueError as e:
            raise ConfigError(f"Bad --points: {e}")
        points = np.array(rows, dtype=float)
        if points.ndim != 2 or points.shape[1] != config.n:
            raise ConfigError(f"--points must hold points of dimension {config.n}")
        return points
    t = np.linspace(-2.0, 2.0, 9)
    return t[:, None] * np.ones(config.n)[None, :] / np.sqrt(config.n)


def _calibration_table(config: RunConfig) -> Dict:
    return read_table(config.calibration) if config.calibration else {}


def cmd_transform(config: RunConfig) -> int:
    """Evaluation table of R_alpha f (old) or R*_alpha f (new) at the requested points"""
    order = riesz_order(config)
    f = input_coefficients(config)
    if f.dim != order.dim:
        raise ConfigError(f"Input lives in R^{f.dim}, alpha in R^{order.dim}")
    points = evaluation_points(config)
    frame = pd.DataFrame({f"x{i}": points[:, i] for i in range(config.n)})
    frame["input"] = evaluate(f, points)
    frame["spectral"] = evaluate(riesz(order, f), points)
    if config.with_kernel:
        spec = calibrated_spec(order, _calibration_table(config))
        results = apply_riesz_pv_many(spec, f, points, config.pv_config(), workers=config.workers)
        frame["kernel"] = [r.value for r in results]
        frame["kernel_unreliable"] = [int(r.unreliable) for r in results]
    path = os.path.join(config.out, "transform.csv")
    write_csv(path, frame, {"command": "transform", "order": order.label(), "n": config.n,
                            "input": config.coeffs or config.input})
    print(frame.to_string(index=False))
    return EXIT_OK


def _selectors(name: str) -> List[str]:
    if name == "all":
        return list(AVAILABLE_EXPERIMENTS)
    if name not in AVAILABLE_EXPERIMENTS:
        raise ConfigError(f"Experiment '{name}' not found. Available: {list(AVAILABLE_EXPERIMENTS)} or 'all'")
    return [name]


def cmd_verify(config: RunConfig) -> int:
    """Run the selected experiments; exit 0 iff every hard assertion passes"""
    selectors = _selectors(config.experiment)
    experiment_config = config.experiment_config(_calibration_table(config))
    overall: Dict[str, Dict] = {}
    failed: List[str] = []
    for name in selectors:
        records = []
        generator = run_experiment(name, experiment_config)
        try:
            while True:
                records.append(next(generator))
        except StopIteration as e:
            report = e.value
        except (GaussRieszError, ValueError) as e:
            logger.error("Experiment %s could not run: %s", name, e)
            overall[name] = {"experiment": name, "passed": False, "error": str(e)}
            failed.append(name)
            continue
        base = os.path.join(config.out, name)
        write_records(base + ".csv", records, report)
        summary = report.summary()
        write_summary(base + ".json", summary)
        overall[name] = summary
        print(report)
        print()
        if not report.passed:
            failed.append(name)
            logger.warning("Experiment %s failed; failing records: %s", name, report.failing)
    if len(selectors) > 1:
        write_summary(os.path.join(config.out, "summary.json"),
                      {"experiments": overall, "passed": not failed, "seed": config.seed})
    if failed:
        print(f"Failed: {', '.join(failed)}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_calibrate(config: RunConfig) -> int:
    """Fit c_{n,alpha} and merge the record into the calibration table"""
    order = riesz_order(config)
    record = calibrate(order, config.pv_config(), workers=config.workers)
    path = config.calibration or os.path.join(config.out, "calibration.txt")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    write_table(path, [record])
    print(record.to_line())
    if record.flagged:
        logger.warning("Calibration residual %.3e above threshold; record written with a warning", record.residual)
        return EXIT_WARNING
    return EXIT_OK


COMMANDS = {
    "transform": cmd_transform,
    "verify": cmd_verify,
    "calibrate": cmd_calibrate,
}
