#!/usr/bin/env python3
"""
Tests for the Ornstein-Uhlenbeck functional calculus
"""

import pytest

from models import HermiteCoeffs, SpectralMultiplier, total_degree_indices
from numerics.spectral import apply_L, apply_L_ladder, apply_power, pi0, project


def random_coeffs(rng, dim, degree):
    indices = list(total_degree_indices(dim, degree))
    return HermiteCoeffs(dim, dict(zip(indices, rng.standard_normal(len(indices)))))


class TestFunctionalCalculus:
    def test_projections_partition(self, rng):
        f = random_coeffs(rng, 2, 4)
        total = HermiteCoeffs.zero(2)
        for j in range(5):
            total = total + project(j, f)
        assert total.isclose(f)
        assert (pi0(f) + project(0, f)).isclose(f)

    def test_negative_chaos_order(self):
        with pytest.raises(ValueError):
            project(-1, HermiteCoeffs.basis([1]))

    def test_L_matches_ladder_form(self, rng):
        for dim in (1, 2, 3):
            f = random_coeffs(rng, dim, 5)
            assert apply_L(f).isclose(apply_L_ladder(f), atol=1e-11)

    @pytest.mark.parametrize("exponent", [0.5, 1.0, 2.0])
    def test_power_then_inverse_is_pi0(self, rng, exponent):
        f = random_coeffs(rng, 2, 4)
        there = apply_power(SpectralMultiplier(exponent), f)
        back = apply_power(SpectralMultiplier(-exponent), there)
        assert back.isclose(pi0(f), atol=1e-12)

    def test_negative_power_annihilates_constants(self):
        assert len(apply_power(SpectralMultiplier(-0.5), HermiteCoeffs.basis([0, 0]))) == 0
        shifted = apply_power(SpectralMultiplier(-0.5, shift=1), HermiteCoeffs.basis([0, 0]))
        assert shifted[(0, 0)] == 1.0

    def test_multiplier_rejects_bad_shift(self):
        with pytest.raises(ValueError):
            SpectralMultiplier(1.0, shift=2)
