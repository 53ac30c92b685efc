#!/usr/bin/env python3
"""
Tests for multi-indices, Hermite evaluation, expansion and the ladder operators
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from models import DegreeCapError, DimensionMismatchError, HermiteCoeffs, MultiIndex, total_degree_indices
from numerics.hermite import (MAX_DEGREE, apply_D, apply_Dstar, evaluate, expand, from_values, hermite_eval,
                              hermite_eval_1d, hermite_eval_normalized, hermite_table, lower, raise_)
from numerics.quadrature import full_space_grid


def random_coeffs(rng, dim, degree):
    indices = list(total_degree_indices(dim, degree))
    return HermiteCoeffs(dim, dict(zip(indices, rng.standard_normal(len(indices)))))


class TestMultiIndex:
    def test_parse_and_label(self):
        alpha = MultiIndex.parse("2,0,1")
        assert alpha == (2, 0, 1)
        assert alpha.order == 3
        assert alpha.factorial == 2
        assert alpha.label() == "2,0,1"

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))

    def test_shifted_and_dominates(self):
        alpha = MultiIndex((1, 0))
        assert alpha.shifted(0, -1) == (0, 0)
        assert alpha.shifted(1, -1) is None
        assert MultiIndex((2, 1)).dominates(alpha)
        assert not alpha.dominates(MultiIndex((0, 1)))

    def test_total_degree_count(self):
        # C(n + D, n) indices of total degree <= D
        assert len(list(total_degree_indices(2, 4))) == math.comb(6, 2)
        assert len(list(total_degree_indices(3, 3))) == math.comb(6, 3)


class TestHermiteEvaluation:
    def test_low_degrees(self):
        t = np.array([-1.5, 0.0, 0.7, 2.0])
        assert_allclose(hermite_eval_1d(0, t), np.ones(4))
        assert_allclose(hermite_eval_1d(2, t), 4 * t ** 2 - 2)
        assert_allclose(hermite_eval_1d(3, t), 8 * t ** 3 - 12 * t)

    def test_scalar_input(self):
        assert hermite_eval_1d(3, 1.0) == pytest.approx(-4.0)

    def test_degree_cap(self):
        with pytest.raises(DegreeCapError):
            hermite_eval_1d(MAX_DEGREE + 1, 0.5)

    def test_normalized_table_matches_recurrence(self):
        t = np.linspace(-3, 3, 13)
        normalized = hermite_table(10, t)
        plain = hermite_table(10, t, normalized=False)
        for m in range(11):
            assert_allclose(normalized[:, m], plain[:, m] / math.sqrt(2.0 ** m * math.factorial(m)),
                            rtol=1e-12, atol=1e-12)

    def test_normalized_scalar(self):
        # H_2(1) = 2 and sqrt(2^2 2!) = sqrt(8)
        assert hermite_eval_normalized(2, 1.0) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-14)
        assert hermite_eval_normalized(0, np.zeros(3)).shape == (3,)

    def test_orthonormal_under_gamma(self):
        grid = full_space_grid(1, 40)
        table = hermite_table(12, grid.nodes[:, 0])
        gram = table.T @ (grid.gamma_weights[:, None] * table)
        assert_allclose(gram, np.eye(13), atol=1e-12)

    def test_multivariate_product(self):
        u = np.array([[0.3, -1.2], [1.0, 0.5]])
        expected = hermite_eval_1d(2, u[:, 0]) * hermite_eval_1d(1, u[:, 1])
        assert_allclose(hermite_eval((2, 1), u), expected)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hermite_eval((1, 1), np.array([0.5, 0.5, 0.5]))


class TestExpansion:
    def test_expand_recovers_polynomial(self, rng):
        f = random_coeffs(rng, 2, 5)
        grid = full_space_grid(2, 20)
        recovered = expand(grid.nodes, grid.gamma_weights, evaluate(f, grid.nodes), 5)
        assert recovered.isclose(f, atol=1e-11)

    def test_from_values_uses_grid_weights(self, rng):
        f = random_coeffs(rng, 1, 8)
        grid = full_space_grid(1, 30)
        assert from_values(grid, evaluate(f, grid.nodes), 8).isclose(f, atol=1e-11)

    def test_evaluate_zero_expansion(self):
        assert_allclose(evaluate(HermiteCoeffs.zero(2), np.zeros((3, 2))), np.zeros(3))

    def test_h1_is_sqrt2_x(self):
        x = np.linspace(-2, 2, 9)[:, None]
        assert_allclose(evaluate(HermiteCoeffs.basis([1]), x), math.sqrt(2.0) * x[:, 0], atol=1e-14)


class TestLadder:
    def test_lower_raise_on_basis(self):
        h3 = HermiteCoeffs.basis([3])
        assert lower(0, h3).isclose(HermiteCoeffs.basis([2], math.sqrt(3.0)))
        assert raise_(0, h3).isclose(HermiteCoeffs.basis([4], 2.0))
        assert len(lower(0, HermiteCoeffs.basis([0]))) == 0

    def test_lower_is_derivative(self, rng):
        # delta = (1/sqrt 2) d/dx
        f = random_coeffs(rng, 1, 6)
        x = np.linspace(-1.5, 1.5, 7)
        h = 1e-5
        numeric = (evaluate(f, (x + h)[:, None]) - evaluate(f, (x - h)[:, None])) / (2 * h)
        assert_allclose(evaluate(lower(0, f), x[:, None]), numeric / math.sqrt(2.0), rtol=1e-7, atol=1e-7)

    def test_adjointness(self, rng):
        for dim in (1, 2, 3):
            f = random_coeffs(rng, dim, 6)
            g = random_coeffs(rng, dim, 6)
            for i in range(dim):
                assert lower(i, f).dot(g) == pytest.approx(f.dot(raise_(i, g)), rel=1e-12, abs=1e-12)

    def test_commutator_is_identity(self, rng):
        f = random_coeffs(rng, 2, 5)
        for i in range(2):
            commutator = lower(i, raise_(i, f)) - raise_(i, lower(i, f))
            assert commutator.isclose(f, atol=1e-12)

    def test_D_and_Dstar_compose_ladders(self, rng):
        f = random_coeffs(rng, 2, 6)
        alpha = (2, 1)
        by_ladder = lower(1, lower(0, lower(0, f)))
        assert apply_D(alpha, f).isclose(by_ladder, atol=1e-12)
        by_ladder = raise_(1, raise_(0, raise_(0, f)))
        assert apply_Dstar(alpha, f).isclose(by_ladder, atol=1e-12)
