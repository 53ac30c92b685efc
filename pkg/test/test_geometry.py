#!/usr/bin/env python3
"""
Tests for balls, quadrature grids and Gaussian measures
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import erf

from models import (AdmissibilityError, AdmissibleBall, Ball, HermiteCoeffs, QuadratureError,
                    WeightFunction, m_admissibility)
from numerics.gaussian import (doubling_ratio, gamma_ball_closed_form, gamma_complement, gamma_measure,
                               lp_norm)
from numerics.hermite import evaluate
from numerics.quadrature import ball_grid, full_space_grid, graded_edges, outside_ball_grid, sphere_rule


class TestBalls:
    def test_admissibility_function(self):
        assert m_admissibility(0.0) == 1.0
        assert m_admissibility(0.5) == 1.0
        assert m_admissibility(2.0) == 0.5

    def test_rejects_large_radius(self):
        with pytest.raises(AdmissibilityError):
            AdmissibleBall((2.0,), 0.6)

    def test_from_fraction(self):
        ball = AdmissibleBall.from_fraction((3.0, 0.0), 0.5)
        assert ball.radius == pytest.approx(1.0 / 6.0)
        assert ball.center == (3.0, 0.0)

    def test_r_B_y(self):
        ball = AdmissibleBall((1.0,), 0.1)
        assert ball.r_B_y([1.0]) == pytest.approx(0.05)
        assert ball.r_B_y([0.0]) == math.inf

    def test_scaled_is_plain_ball(self):
        doubled = AdmissibleBall((0.9,), 1.0).scaled(2.0)
        assert type(doubled) is Ball
        assert doubled.radius == 2.0

    def test_contains(self):
        ball = Ball((0.0, 0.0), 1.0)
        inside = ball.contains(np.array([[0.5, 0.5], [1.0, 0.0], [1.0, 1.0]]))
        assert inside.tolist() == [True, True, False]

    def test_weight_function(self):
        assert WeightFunction(2)(np.array([[3.0, 4.0]]))[0] == 1.0
        assert WeightFunction(3)(np.array([[3.0, 4.0]]))[0] == pytest.approx(6.0)
        assert WeightFunction(4).sup_on(Ball((1.0,), 0.5)) == pytest.approx(1.0 + 1.5 ** 2)


class TestQuadrature:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_full_space_grid_is_probability(self, n):
        assert gamma_measure(full_space_grid(n, 12)) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_sphere_rule_moments(self, n):
        directions, weights = sphere_rule(n, 16)
        assert weights.sum() == pytest.approx(1.0)
        assert_allclose(weights @ directions, np.zeros(n), atol=1e-14)
        assert weights @ directions[:, 0] ** 2 == pytest.approx(1.0 / n)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_ball_measure_matches_closed_form(self, n):
        center = np.zeros(n)
        center[0] = 0.5
        ball = Ball(tuple(center), 0.3)
        assert gamma_measure(ball_grid(ball)) == pytest.approx(gamma_ball_closed_form(ball), rel=1e-9)

    def test_centred_closed_form(self):
        assert gamma_ball_closed_form(Ball((0.0,), 1.0)) == pytest.approx(erf(1.0), rel=1e-12)

    def test_outside_grid_complements_ball(self):
        ball = Ball((1.0,), 0.5)
        outside = gamma_measure(outside_ball_grid(ball))
        assert outside == pytest.approx(gamma_complement(ball_grid(ball)), rel=1e-10)

    def test_outside_grid_two_dimensions(self):
        ball = Ball((1.0, 0.0), 0.5)
        outside = gamma_measure(outside_ball_grid(ball, angular_nodes=32))
        assert outside + gamma_ball_closed_form(ball) == pytest.approx(1.0, rel=1e-6)

    def test_outer_radius_must_exceed_ball(self):
        with pytest.raises(QuadratureError):
            outside_ball_grid(Ball((0.0,), 1.0), outer_radius=0.5)

    def test_graded_edges_hit_breakpoints(self):
        edges = graded_edges(0.0, 1.0, (0.25, 0.6), panels=2, grading=3)
        assert edges[0] == 0.0 and edges[-1] == 1.0
        assert 0.25 in edges and 0.6 in edges
        assert np.all(np.diff(edges) > 0)

    def test_non_finite_integrand(self):
        grid = full_space_grid(1, 4)
        with pytest.raises(QuadratureError):
            grid.integrate(np.array([1.0, np.nan, 1.0, 1.0]))


class TestGaussianMeasure:
    def test_lp_norm_of_h1(self):
        grid = full_space_grid(1, 30)
        h1 = evaluate(HermiteCoeffs.basis([1]), grid.nodes)
        assert lp_norm(h1, 2, grid) == pytest.approx(1.0, rel=1e-12)
        # E|sqrt(2) X| with X ~ N(0, 1/2) is sqrt(2/pi)
        fine = outside_ball_grid(Ball((0.0,), 1e-9), dyadic_levels=0)
        values = evaluate(HermiteCoeffs.basis([1]), fine.nodes)
        assert lp_norm(values, 1, fine) == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-8)

    def test_lp_norm_rejects_other_exponents(self):
        with pytest.raises(ValueError):
            lp_norm(np.ones(4), 3, full_space_grid(1, 4))

    def test_doubling_ratio_matches_closed_form(self):
        ball = AdmissibleBall((1.0, 0.0), 0.5)
        expected = gamma_ball_closed_form(ball.scaled(2.0)) / gamma_ball_closed_form(ball)
        assert doubling_ratio(ball) == pytest.approx(expected, rel=1e-8)
        assert expected > 1.0
