#!/usr/bin/env python3
"""
Experiments package: numerical checks of the Gaussian Riesz estimates
"""

import dataclasses
import importlib
import time
from typing import Any, Dict, Generator, Optional

from models import (ExperimentConfig, MultiIndex, RieszOrder, SampleRecord, SweepReport,
                    UnknownExperimentError)

# Available experiments
AVAILABLE_EXPERIMENTS = {
    "geometry": "geometry",
    "phi-bound": "phi_bound",
    "halfpower": "halfpower",
    "atom-sweep": "atom_sweep",
    "h1-probe": "h1_probe",
    "nu-s": "nu_s",
    "kernel-oracle": "kernel_oracle",
    "doubling": "doubling",
}


def get_available_experiments() -> Dict[str, str]:
    """
    Get list of available experiments

    Returns:
        Dict mapping experiment selectors to module names
    """
    return AVAILABLE_EXPERIMENTS.copy()


def load_experiment(name: str):
    """
    Dynamically load an experiment module

    Args:
        name: Selector of the experiment

    Returns:
        The loaded experiment module

    Raises:
        UnknownExperimentError: If the experiment is not found
    """
    if name not in AVAILABLE_EXPERIMENTS:
        raise UnknownExperimentError(
            f"Experiment '{name}' not found. Available: {list(AVAILABLE_EXPERIMENTS.keys())}")

    module_name = AVAILABLE_EXPERIMENTS[name]
    try:
        return importlib.import_module(f"experiments.{module_name}")
    except ImportError as e:
        raise UnknownExperimentError(f"Failed to load experiment '{name}': {e}")


def run_experiment(name: str, config: ExperimentConfig) -> Generator[SampleRecord, None, SweepReport]:
    """
    Run a specific experiment

    Args:
        name: Selector of the experiment
        config: Experiment parameters

    Yields:
        SampleRecord: One record per sample

    Returns:
        SweepReport: Final report, with the wall time filled in
    """
    experiment_module = load_experiment(name)

    start_time = time.perf_counter()
    experiment_generator = experiment_module.run(config)
    try:
        while True:
            record = next(experiment_generator)
            yield record
    except StopIteration as e:
        report = e.value
        report.time_taken = time.perf_counter() - start_time
        return report


def get_experiment_info(name: str) -> Dict[str, Any]:
    """
    Get information about a specific experiment

    Args:
        name: Selector of the experiment

    Returns:
        Dictionary with experiment information
    """
    experiment_module = load_experiment(name)
    if hasattr(experiment_module, 'get_experiment_info'):
        return experiment_module.get_experiment_info()
    return {
        "name": name,
        "description": "No description available",
        "assertion": None,
    }


def run_to_report(name: str, config: ExperimentConfig) -> SweepReport:
    """Run an experiment to completion, discarding the per-sample records"""
    experiment_generator = run_experiment(name, config)
    try:
        while True:
            next(experiment_generator)
    except StopIteration as e:
        return e.value


def _with_order(config: Optional[ExperimentConfig], alpha, family=None) -> ExperimentConfig:
    alpha = MultiIndex(alpha)
    changes = {"dim": alpha.dim, "alpha": alpha}
    if family is not None:
        changes["family"] = family
    return dataclasses.replace(config or ExperimentConfig(dim=alpha.dim), **changes)


def check_geometry_lemma(samples: int, dim: int, config: Optional[ExperimentConfig] = None) -> SweepReport:
    return run_to_report("geometry", dataclasses.replace(config or ExperimentConfig(), samples=samples, dim=dim))


def check_phi_bound(delta: float, config: Optional[ExperimentConfig] = None) -> SweepReport:
    return run_to_report("phi-bound", dataclasses.replace(config or ExperimentConfig(), delta=delta))


def check_halfpower_scaling(alpha, config: Optional[ExperimentConfig] = None) -> SweepReport:
    return run_to_report("halfpower", _with_order(config, alpha))


def sweep_atom_boundedness(order: RieszOrder, config: Optional[ExperimentConfig] = None) -> SweepReport:
    return run_to_report("atom-sweep", _with_order(config, order.alpha, order.family))


def sweep_h1_counterprobe(order: RieszOrder, config: Optional[ExperimentConfig] = None) -> SweepReport:
    """Only the old family is probed; order.family is ignored"""
    return run_to_report("h1-probe", _with_order(config, order.alpha))


def estimate_nu_s(order: RieszOrder, samples: Optional[int] = None,
                  config: Optional[ExperimentConfig] = None) -> SweepReport:
    config = _with_order(config, order.alpha, order.family)
    return run_to_report("nu-s", dataclasses.replace(config, samples=samples or config.samples))


__all__ = ['AVAILABLE_EXPERIMENTS', 'get_available_experiments', 'load_experiment', 'run_to_report',
           'run_experiment', 'get_experiment_info', 'check_geometry_lemma', 'check_phi_bound',
           'check_halfpower_scaling', 'sweep_atom_boundedness', 'sweep_h1_counterprobe', 'estimate_nu_s']
