#!/usr/bin/env python3
"""
Tests for atom construction, validation and the local transform route
"""

import glob
import json
import math
import os

import numpy as np
import pytest

from models import AdmissibleBall, DegenerateProfileError, H1Atom, RieszOrder, XkAtom
from numerics.atoms import (concentric_profile, has_local_route, local_riesz_values, make_h1_atom,
                            make_xk_atom, off_centre_profile, omega, validate_h1_atom, weighted_chain,
                            _chain_holds)
from numerics.gaussian import gamma_measure


def load_families(test_dir):
    families = []
    for path in sorted(glob.glob(os.path.join(test_dir, "atom_family_*.json"))):
        with open(path, 'r') as f:
            families.append(json.load(f))
    return families


def family_cases(test_dir):
    for family in load_families(test_dir):
        for ball in family["balls"]:
            yield family, AdmissibleBall(tuple(ball["center"]), ball["radius"])


def l2(values, grid):
    return math.sqrt(float(grid.gamma_weights @ values ** 2))


class TestProfiles:
    def test_concentric_profile_has_mean_zero(self, small_ball):
        profile = concentric_profile(small_ball)
        atom = make_h1_atom(small_ball, profile)
        mass = float(atom.grid.gamma_weights @ np.abs(profile(atom.grid.nodes)))
        assert abs(float(atom.grid.gamma_weights @ profile(atom.grid.nodes))) <= 1e-12 * mass

    def test_profile_stays_in_ball(self, small_ball):
        assert concentric_profile(small_ball).reach(small_ball.center) <= small_ball.radius
        assert off_centre_profile(small_ball).reach(small_ball.center) < small_ball.radius

    def test_nearly_equal_radii(self, small_ball):
        with pytest.raises(DegenerateProfileError):
            concentric_profile(small_ball, rho_outer=0.18, rho_inner=0.179)

    def test_radii_out_of_order(self, small_ball):
        with pytest.raises(ValueError):
            concentric_profile(small_ball, rho_outer=0.05, rho_inner=0.1)

    def test_off_centre_bumps_must_fit(self, small_ball):
        with pytest.raises(ValueError):
            off_centre_profile(small_ball, offset=0.6, radius=0.45)


class TestH1Atoms:
    def test_constant_atom(self):
        atom = make_h1_atom(dim=2)
        assert atom.is_constant
        assert atom.dim == 2
        assert validate_h1_atom(atom).passed

    def test_saturated_atom_passes(self, test_dir):
        for _, ball in family_cases(test_dir):
            atom = make_h1_atom(ball)
            cert = validate_h1_atom(atom)
            assert cert.passed, cert.to_dict()
            assert cert.l2_norm == pytest.approx(gamma_measure(atom.grid) ** -0.5, rel=1e-12)

    def test_lift_range(self, small_ball):
        with pytest.raises(ValueError):
            make_h1_atom(small_ball, lift=4)


class TestXkAtoms:
    def test_omega(self):
        assert omega(1, 0.1) == 1.0
        assert omega(2, 0.1) == 1.0
        assert omega(3, 0.1) == pytest.approx(0.1)

    def test_saturated_norm(self, test_dir):
        for family, ball in family_cases(test_dir):
            for k in family["orders"]:
                atom = make_xk_atom(k, ball)
                bound = omega(k, ball.radius) * gamma_measure(atom.grid) ** -0.5
                assert l2(atom.values, atom.grid) == pytest.approx(bound, rel=1e-12)
                assert len(atom.levels) == k + 1

    def test_cap_never_exceeds_saturation(self, small_ball):
        saturated = make_xk_atom(2, small_ball)
        capped = make_xk_atom(2, small_ball, normalization="cap")
        assert capped.scale == pytest.approx(min(1.0, saturated.scale))
        assert l2(capped.values, capped.grid) <= l2(saturated.values, saturated.grid) * (1 + 1e-12)

    def test_first_order_atom_has_small_mean(self, test_dir):
        for _, ball in family_cases(test_dir):
            atom = make_xk_atom(1, ball)
            gw = atom.grid.gamma_weights
            assert abs(float(gw @ atom.values)) <= 1e-6 * float(gw @ np.abs(atom.values))

    def test_weighted_chain(self, test_dir):
        for family, ball in family_cases(test_dir):
            for k in family["orders"]:
                atom = make_xk_atom(k, ball)
                chain = weighted_chain(atom.values, atom.grid, k, ball.radius)
                assert _chain_holds(chain), chain

    def test_order_and_normalization_guards(self, small_ball):
        with pytest.raises(ValueError):
            make_xk_atom(4, small_ball)
        with pytest.raises(ValueError):
            make_xk_atom(1, small_ball, normalization="bogus")


class TestLocalRoute:
    def test_route_availability(self, small_ball):
        xk = make_xk_atom(1, small_ball)
        lifted = make_h1_atom(small_ball, lift=1)
        assert has_local_route(RieszOrder([2], "old"), xk)
        assert not has_local_route(RieszOrder([1], "old"), xk)
        assert not has_local_route(RieszOrder([2], "new"), xk)
        assert has_local_route(RieszOrder([2], "new"), lifted)
        assert not has_local_route(RieszOrder([2], "new"), make_h1_atom(small_ball))
        assert not has_local_route(RieszOrder([2], "new"), make_h1_atom(dim=1))

    def test_values_are_supported_in_ball(self, small_ball):
        atom = make_xk_atom(1, small_ball)
        order = RieszOrder([2], "old")
        assert local_riesz_values(order, atom).shape == (atom.grid.size,)
        outside = local_riesz_values(order, atom, [[0.9], [0.1], [-1.0]])
        assert np.all(outside == 0.0)

    def test_unavailable_route_raises(self, small_ball):
        with pytest.raises(ValueError):
            local_riesz_values(RieszOrder([1], "old"), make_xk_atom(1, small_ball))

    def test_atom_types(self, small_ball):
        assert isinstance(make_xk_atom(1, small_ball), XkAtom)
        assert isinstance(make_h1_atom(small_ball), H1Atom)
