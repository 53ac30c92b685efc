#!/usr/bin/env python3
"""
Example usage of the Gaussian Riesz transform toolkit

This script demonstrates how to:
1. Transform Hermite expansions with the old and new Riesz transforms
2. Compare the spectral route with the p.v. kernel route
3. Build and validate an X^k atom
4. Run experiments without the CLI
"""

import numpy as np

from experiments import get_available_experiments, get_experiment_info, run_experiment
from models import AdmissibleBall, ExperimentConfig, HermiteCoeffs, KernelSpec, RieszOrder
from numerics.atoms import make_xk_atom, validate_xk_atom
from numerics.hermite import evaluate
from numerics.principal_value import apply_riesz_pv_many
from numerics.riesz import riesz


def spectral_demo():
    """Old and new first-order transforms of a small expansion"""
    print(f"\n{'='*60}")
    print("Spectral transforms")
    print(f"{'='*60}")

    f = HermiteCoeffs(1, {(1,): 1.0, (3,): 0.5})
    points = np.linspace(-1.5, 1.5, 7)[:, None]
    for family in ("old", "new"):
        order = RieszOrder([1], family)
        image = riesz(order, f)
        print(f"{order.label()}: {image}")
        print(f"  values: {np.round(evaluate(image, points), 6)}")


def kernel_demo():
    """Spectral values against the kernel route at a few points"""
    print(f"\n{'='*60}")
    print("Kernel route")
    print(f"{'='*60}")

    order = RieszOrder([1], "old")
    f = HermiteCoeffs.basis([2])
    points = np.array([[-0.8], [0.3], [1.1]])
    spectral = evaluate(riesz(order, f), points)
    kernel = apply_riesz_pv_many(KernelSpec.for_order(order), f, points)
    print(f"{'x':>8} {'spectral':>14} {'kernel':>14} {'correction':>12}")
    for x, s, r in zip(points[:, 0], spectral, kernel):
        print(f"{x:>8.3f} {s:>14.8f} {r.value:>14.8f} {r.correction:>12.2e}")


def atom_demo():
    """Build an X^2 atom on a small ball and print its certificate"""
    print(f"\n{'='*60}")
    print("X^2 atom")
    print(f"{'='*60}")

    ball = AdmissibleBall((0.5,), 0.2)
    atom = make_xk_atom(2, ball)
    certificate = validate_xk_atom(atom)
    for key, value in certificate.to_dict().items():
        print(f"  {key}: {value}")


def experiment_demo(name: str, config: ExperimentConfig):
    """Run an experiment and print its report"""
    info = get_experiment_info(name)
    print(f"\n{'='*60}")
    print(f"Running {name}: {info['description']}")
    print(f"{'='*60}")

    generator = run_experiment(name, config)
    count = 0
    try:
        while True:
            next(generator)
            count += 1
    except StopIteration as e:
        report = e.value
    print(f"{count} records")
    print(report)


def main():
    """Main demonstration function"""
    print("Gaussian Riesz Transform Toolkit - Example Usage")
    print("=" * 60)

    experiments = get_available_experiments()
    print(f"Available experiments: {list(experiments.keys())}")

    spectral_demo()
    kernel_demo()
    atom_demo()
    experiment_demo("geometry", ExperimentConfig(dim=2, samples=2000))
    experiment_demo("doubling", ExperimentConfig(dim=2, samples=50))

    print("\n" + "="*60)
    print("Demo completed! To run every check from the command line:")
    print("python main.py verify all")
    print("="*60)


if __name__ == "__main__":
    main()
