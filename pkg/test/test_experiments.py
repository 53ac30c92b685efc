#!/usr/bin/env python3
"""
Tests for the experiment registry and small runs of the experiments
"""

import math

import numpy as np
import pytest
from scipy.stats import ncx2, norm

from experiments import (check_geometry_lemma, check_phi_bound, get_available_experiments, get_experiment_info,
                         load_experiment, run_experiment, run_to_report, sweep_atom_boundedness)
from experiments.atom_sweep import sweep_pv, transform_norms
from experiments.halfpower import SLOPE_MARGIN
from experiments.kernel_oracle import MASK_INNER, MASK_OUTER, RELATIVE_TOLERANCE, oracle_orders
from experiments.nu_s import TAIL_CUTOFF, log_lambda, majorant, outside_probability
from experiments.phi_bound import tail_closed_form, tail_quadrature
from experiments.sampling import random_balls
from models import (AdmissibleBall, ExperimentConfig, Family, MultiIndex, PVConfig, RieszOrder,
                    UnknownExperimentError)
from numerics.atoms import make_xk_atom
from numerics.kernels import full_r_rule


def drain(generator):
    records = []
    try:
        while True:
            records.append(next(generator))
    except StopIteration as e:
        return records, e.value


class TestRegistry:
    def test_selectors(self):
        assert set(get_available_experiments()) == {
            "geometry", "phi-bound", "halfpower", "atom-sweep", "h1-probe", "nu-s", "kernel-oracle", "doubling"}

    def test_unknown_selector(self):
        with pytest.raises(UnknownExperimentError):
            load_experiment("nope")
        with pytest.raises(UnknownExperimentError):
            drain(run_experiment("nope", ExperimentConfig()))

    @pytest.mark.parametrize("name", sorted(get_available_experiments()))
    def test_info(self, name):
        info = get_experiment_info(name)
        assert info["name"] == name
        assert info["description"]
        assert info["assertion"]


class TestSampling:
    def test_random_balls_are_admissible(self, rng):
        balls = random_balls(rng, 200, 2)
        assert len(balls) == 200
        assert all(isinstance(ball, AdmissibleBall) for ball in balls)


class TestGeometry:
    @pytest.mark.parametrize("case", ["both", "i", "ii"])
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_lemma_holds(self, dim, case):
        records, report = drain(run_experiment("geometry", ExperimentConfig(dim=dim, samples=2000, case=case)))
        assert len(records) == 2000
        assert report.passed
        assert report.violations == 0
        assert report.fitted["min_ratio"] >= 1.0 - 1e-12
        assert report.time_taken is not None

    def test_case_split(self):
        _, report = drain(run_experiment("geometry", ExperimentConfig(dim=2, samples=500, case="ii")))
        # sample 0 is the fixed boundary configuration with y = c_B = 0
        assert report.flags["case_i"] >= 1
        assert report.flags["case_i"] + report.flags["case_ii"] == 500

    def test_reproducible(self):
        first, _ = drain(run_experiment("geometry", ExperimentConfig(dim=2, samples=50, seed=7)))
        second, _ = drain(run_experiment("geometry", ExperimentConfig(dim=2, samples=50, seed=7)))
        assert [r.values["ratio"] for r in first] == [r.values["ratio"] for r in second]


class TestDoubling:
    @pytest.mark.parametrize("dim", [1, 2])
    def test_matches_closed_form(self, dim):
        records, report = drain(run_experiment("doubling", ExperimentConfig(dim=dim, samples=20)))
        assert len(records) == 20
        assert report.passed, report.summary()
        assert report.fitted["D_gamma"] > 1.0
        assert report.fitted["max_relative_error"] <= 1e-6


class TestPhiBound:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_tail_quadrature(self, dim):
        for radius, r in ((1.0, 0.0), (0.5, 0.6), (0.1, 0.99)):
            s = radius / math.sqrt(1.0 - r * r)
            exact = tail_closed_form(dim, 0.5, s)
            assert tail_quadrature(dim, 0.5, radius, r) == pytest.approx(exact, rel=1e-8)

    def test_envelopes_hold(self):
        records, report = drain(run_experiment("phi-bound", ExperimentConfig(dim=1, samples=5)))
        assert len(records) == 5 * 50
        assert report.violations == 0
        assert report.fitted["C2"] == 0.5
        assert report.fitted["C1"] > 0.0

    def test_rejects_non_positive_delta(self):
        with pytest.raises(ValueError):
            drain(run_experiment("phi-bound", ExperimentConfig(delta=0.0)))


class TestAtomSweep:
    def test_local_route_run(self):
        config = ExperimentConfig(dim=1, k=2, family="old", samples=4, route="local")
        records, report = drain(run_experiment("atom-sweep", config))
        assert len(records) == 4
        assert all(r.values["route"] == "local" for r in records)
        assert all(r.values["l1_outside_4B"] == 0.0 for r in records)
        assert report.parameters["alpha"] == "2"
        assert report.fitted["accepted"] == 4.0
        assert report.fitted["sup"] >= report.fitted["median"] > 0.0

    def test_new_family_includes_constant_atom(self):
        config = ExperimentConfig(dim=1, k=2, family="new", samples=2)
        records, report = drain(run_experiment("atom-sweep", config))
        assert len(records) == 3
        assert records[0].values["radius"] == math.inf
        assert records[0].values["route"] == "spectral"
        assert [r.values["route"] for r in records[1:]] == ["local", "local"]
        assert report.samples == 3

    def test_local_unavailable_falls_back(self, small_ball):
        atom = make_xk_atom(1, small_ball)
        norms = transform_norms(RieszOrder([1], "old"), atom, ExperimentConfig(truncation_tolerance=1.0),
                                route="local")
        assert norms["route"] == "spectral"
        assert norms["flags"] == ["local-unavailable"]
        assert norms["l1"] > 0.0

    def test_kernel_unavailable_in_three_dimensions(self):
        atom = make_xk_atom(2, AdmissibleBall((0.3, -0.2, 0.1), 0.3))
        norms = transform_norms(RieszOrder([2, 0, 0], "old"), atom, ExperimentConfig(dim=3), route="kernel")
        assert norms["route"] == "local"
        assert norms["flags"] == ["kernel-unavailable"]

    def test_constant_atom_reported_apart(self):
        report = sweep_atom_boundedness(RieszOrder([1, 1], "new"), ExperimentConfig(dim=2, samples=100))
        # R*_(1,1) 1 = 2xy, whose L^1(gamma) norm is 2/pi
        assert report.fitted["constant_atom_l1"] == pytest.approx(2.0 / math.pi, rel=0.05)
        assert report.fitted["accepted"] == 100.0
        assert 0 not in report.failing
        assert report.fitted["sup"] < report.fitted["constant_atom_l1"]

    def test_old_family_has_no_constant_atom(self):
        config = ExperimentConfig(dim=1, k=2, family="old", samples=2, route="local")
        _, report = drain(run_experiment("atom-sweep", config))
        assert math.isnan(report.fitted["constant_atom_l1"])

    def test_odd_order_in_two_dimensions_uses_kernel_route(self):
        pv = PVConfig(r_nodes=6, lower_levels=20, upper_octaves=20, radial_nodes=6, angular_nodes=8)
        config = ExperimentConfig(dim=2, k=1, family="old", samples=2, pv=pv)
        records, report = drain(run_experiment("atom-sweep", config))
        assert all(r.values["route"] in ("kernel", "spectral") for r in records)
        assert all("spectral-truncated" in r.flags for r in records if r.values["route"] == "kernel")
        assert all(r.values["accepted"] == 1 for r in records)
        assert all(math.isfinite(r.values["l1"]) and r.values["l1"] > 0.0 for r in records)
        assert report.fitted["accepted"] == 2.0

    def test_kernel_route_in_two_dimensions(self):
        pv = PVConfig(r_nodes=6, lower_levels=20, upper_octaves=20, radial_nodes=6, angular_nodes=8)
        atom = make_xk_atom(1, AdmissibleBall((0.4, -0.3), 0.2))
        norms = transform_norms(RieszOrder([1, 0], "old"), atom, ExperimentConfig(dim=2, pv=pv), route="kernel")
        assert norms["route"] == "kernel"
        assert norms["flags"] == []
        assert norms["unreliable_points"] == 0
        assert norms["l1"] == pytest.approx(norms["l1_4B"] + norms["l1_outside_4B"])
        assert norms["l1_outside_4B"] > 0.0

    def test_sweep_pv_coarsens_only_in_higher_dimensions(self, pv):
        assert sweep_pv(pv, 1) is pv
        coarse = sweep_pv(pv, 2)
        assert (coarse.r_nodes, coarse.angular_nodes) == (8, 12)
        assert coarse.eps_inner == pv.eps_inner


class TestNuS:
    def test_outside_probability_one_dimension(self):
        value = outside_probability(1, np.array([1.0]), np.array([0.3]))[0]
        assert value == pytest.approx(norm.sf(0.7) + norm.sf(1.3), rel=1e-12)

    def test_outside_probability_higher_dimensions(self):
        assert outside_probability(2, np.array([1.5]), np.array([0.0]))[0] == pytest.approx(math.exp(-1.125))
        value = outside_probability(3, np.array([2.0]), np.array([0.5]))[0]
        assert value == pytest.approx(ncx2.sf(4.0, 3, 0.25), rel=1e-10)

    def test_outside_probability_cutoff(self):
        assert outside_probability(2, np.array([TAIL_CUTOFF + 1.0]), np.array([0.0]))[0] == 0.0

    def test_lambda_vanishes_in_log_for_second_order(self, pv):
        assert np.all(log_lambda(2, full_r_rule(pv)) == 0.0)

    def test_majorant_split(self, pv):
        # r_{B,y} = 0.2 / (2 * 0.1) >= 1/2 leaves the r-integral unsplit
        total, parts = majorant(1, AdmissibleBall((0.1,), 0.2), [0.1], pv, 1.0)
        assert parts["I3"] == 0.0
        assert total == pytest.approx(parts["I1"] + parts["I2"])
        # r_{B,y} = 0.2 / (2 * 0.6) < 1/2 splits the upper piece
        total, parts = majorant(1, AdmissibleBall((0.5,), 0.2), [0.6], pv, 1.0)
        assert parts["I3"] > 0.0
        assert total > 0.0 and math.isfinite(total)


class TestHalfpower:
    def test_full_run(self):
        config = ExperimentConfig(dim=1, alpha=MultiIndex((1,)), radii=(0.2, 0.1))
        records, report = drain(run_experiment("halfpower", config))
        assert [r.values["radius"] for r in records] == [0.2, 0.1]
        assert all(r.values["lhs"] > 0.0 and r.values["f_l1"] > 0.0 for r in records)
        assert report.fitted["target_slope"] == -2.0
        assert math.isfinite(report.fitted["slope"])
        assert report.passed == (report.fitted["slope"] >= -2.0 - SLOPE_MARGIN)


class TestH1Contrast:
    def test_full_run(self):
        config = ExperimentConfig(dim=1, k=2, radii=(0.4, 0.2))
        records, report = drain(run_experiment("h1-probe", config))
        assert len(records) == 2
        usable = sum(r.values["h1_usable"] for r in records)
        assert report.fitted["h1_usable"] == usable
        assert report.fitted["xk_usable"] == sum(r.values["xk_usable"] for r in records)
        assert report.passed == (math.isfinite(report.fitted["h1_slope"])
                                 and math.isfinite(report.fitted["xk_slope"]))

    def test_truncated_atoms_leave_the_fit(self):
        config = ExperimentConfig(dim=1, k=2, radii=(0.4, 0.2), route="spectral", degree=8,
                                  truncation_tolerance=1e-14)
        records, report = drain(run_experiment("h1-probe", config))
        assert all("h1:truncated" in r.flags and r.values["h1_usable"] == 0 for r in records)
        assert math.isnan(report.fitted["h1_slope"])
        assert report.fitted["h1_usable"] == 0.0
        assert not report.passed
        assert any(note.startswith("inconclusive") for note in report.notes)


class TestNuSRun:
    def test_full_run(self):
        records, report = drain(run_experiment("nu-s", ExperimentConfig(dim=1, samples=4)))
        assert len(records) == 4
        assert math.isfinite(records[0].values["exact_rB"])
        assert report.fitted["nu_s"] > 0.0 and math.isfinite(report.fitted["nu_s"])
        assert report.flags["gradient-bound"] == 0
        assert report.passed, report.summary()


class TestKernelOracle:
    def test_grid_covers_both_dimensions_and_families(self):
        orders = oracle_orders(ExperimentConfig())
        assert {o.dim for o in orders} == {1, 2}
        assert {o.family for o in orders} == {Family.OLD, Family.NEW}
        assert {o.k for o in orders} == {1, 2, 3}
        # 3 orders in n = 1 and 9 in n = 2, each in both families
        assert len(orders) == 24

    def test_explicit_alpha_runs_one_order(self):
        orders = oracle_orders(ExperimentConfig(dim=2, alpha=MultiIndex((1, 1)), family="new"))
        assert [o.label() for o in orders] == ["new[1,1]"]

    def test_masked_inputs_match_spectral_route(self):
        config = ExperimentConfig(dim=1, alpha=MultiIndex((2,)), family="old", samples=3)
        records, report = drain(run_experiment("kernel-oracle", config))
        assert len(records) == 3
        assert report.parameters["mask"] == [MASK_INNER, MASK_OUTER]
        assert report.fitted["max_relative_error"] < RELATIVE_TOLERANCE
        assert report.fitted["compact_support_error[old[2]]"] < RELATIVE_TOLERANCE
        assert report.passed, report.summary()

    def test_two_dimensional_order(self):
        pv = PVConfig(radial_nodes=8, angular_nodes=8)
        config = ExperimentConfig(dim=2, alpha=MultiIndex((1, 0)), family="new", samples=1, pv=pv)
        records, report = drain(run_experiment("kernel-oracle", config))
        assert len(records) == 1
        assert records[0].values["n"] == 2
        assert math.isfinite(records[0].values["relative_error"])
        assert report.parameters["dims"] == [2]


class TestNamedEntryPoints:
    def test_check_geometry_lemma(self):
        report = check_geometry_lemma(200, 2)
        assert report.experiment == "geometry"
        assert report.samples == 200
        assert report.passed

    def test_check_phi_bound(self):
        report = check_phi_bound(0.25, ExperimentConfig(samples=2))
        assert report.violations == 0
        assert report.fitted["C2"] == 0.25
        assert "C2 fixed at delta = 0.25" in report.notes

    def test_sweep_atom_boundedness(self):
        report = sweep_atom_boundedness(RieszOrder([2], "old"), ExperimentConfig(samples=2, route="local"))
        assert report.samples == 2
        assert report.parameters["alpha"] == "2"

    def test_run_to_report_matches_drain(self):
        config = ExperimentConfig(dim=1, samples=30, seed=3)
        _, drained = drain(run_experiment("geometry", config))
        assert run_to_report("geometry", config).fitted == drained.fitted
