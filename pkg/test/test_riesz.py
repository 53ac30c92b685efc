#!/usr/bin/env python3
"""
Tests for the spectral Riesz transforms
"""

import glob
import json
import math
import os

import numpy as np
import pytest
from numpy.testing import assert_allclose

from models import HermiteCoeffs, RieszOrder, total_degree_indices
from numerics.hermite import evaluate
from numerics.riesz import riesz, riesz_apply_pointwise, riesz_multiplier, riesz_new, riesz_old
from numerics.spectral import pi0


def random_coeffs(rng, dim, degree):
    indices = list(total_degree_indices(dim, degree))
    return HermiteCoeffs(dim, dict(zip(indices, rng.standard_normal(len(indices)))))


def load_transform_cases(test_dir):
    cases = []
    for path in sorted(glob.glob(os.path.join(test_dir, "transform_case_*.json"))):
        with open(path, 'r') as f:
            cases.append((os.path.basename(path), json.load(f)))
    return cases


class TestTransformCases:
    def test_cases_present(self, test_dir):
        assert len(load_transform_cases(test_dir)) == 5

    def test_closed_forms(self, test_dir):
        for name, case in load_transform_cases(test_dir):
            dim = len(case["alpha"])
            f = HermiteCoeffs(dim, {tuple(c["index"]): c["value"] for c in case["coeffs"]})
            order = RieszOrder(case["alpha"], case["family"])
            values = riesz_apply_pointwise(order, f, np.array(case["points"], dtype=float))
            assert_allclose(values, case["expected"], atol=1e-12, err_msg=name)


class TestRieszTransforms:
    def test_old_first_order_on_h1(self):
        image = riesz(RieszOrder([1], "old"), HermiteCoeffs.basis([1]))
        assert image.isclose(HermiteCoeffs.basis([0]))

    def test_new_first_order_on_h0(self):
        image = riesz(RieszOrder([1], "new"), HermiteCoeffs.basis([0]))
        assert image.isclose(HermiteCoeffs.basis([1]))
        x = np.linspace(-2, 2, 5)[:, None]
        assert_allclose(evaluate(image, x), math.sqrt(2.0) * x[:, 0], atol=1e-12)

    def test_old_kills_constants(self):
        assert len(riesz(RieszOrder([0, 1], "old"), HermiteCoeffs.basis([0, 0]))) == 0

    @pytest.mark.parametrize("family", ["old", "new"])
    def test_multiplier_matches_transform(self, family):
        order = RieszOrder([2, 1], family)
        for beta in total_degree_indices(2, 5):
            image = riesz(order, HermiteCoeffs.basis(beta))
            factor = riesz_multiplier(order, beta)
            assert image.norm() == pytest.approx(factor, rel=1e-12, abs=1e-15)

    def test_old_second_order_value(self):
        # R_(2) h_2 = 2^{-1} sqrt(2) h_0
        assert riesz_multiplier(RieszOrder([2], "old"), [2]) == pytest.approx(math.sqrt(2.0) / 2.0)

    def test_old_family_is_contractive(self, rng):
        f = random_coeffs(rng, 2, 6)
        for alpha in ([1, 0], [1, 1], [3, 0], [2, 2]):
            assert riesz(RieszOrder(alpha, "old"), f).norm() <= f.norm() + 1e-12

    def test_first_order_transforms_sum_to_pi0(self, rng):
        # sum_i |R_i f|^2 = |Pi_0 f|^2
        f = random_coeffs(rng, 3, 5)
        total = sum(riesz(RieszOrder(np.eye(3, dtype=int)[i], "old"), f).norm() ** 2 for i in range(3))
        assert total == pytest.approx(pi0(f).norm() ** 2, rel=1e-12)

    def test_family_guards(self):
        f = HermiteCoeffs.basis([1])
        with pytest.raises(ValueError):
            riesz_old(RieszOrder([1], "new"), f)
        with pytest.raises(ValueError):
            riesz_new(RieszOrder([1], "old"), f)
        with pytest.raises(ValueError):
            RieszOrder([0, 0])

    def test_pointwise_shapes(self):
        order = RieszOrder([1], "old")
        f = HermiteCoeffs.basis([2])
        single = riesz_apply_pointwise(order, f, [0.5])
        assert isinstance(single, float)
        many = riesz_apply_pointwise(order, f, [[0.5], [1.0]])
        assert many.shape == (2,)
        assert many[0] == pytest.approx(single)

    def test_pointwise_flat_array_of_one_dimensional_points(self):
        # R_1 h_2 = h_1 = sqrt(2) x
        values = riesz_apply_pointwise(RieszOrder([1], "old"), HermiteCoeffs.basis([2]), np.array([0.1, 0.2, 0.3]))
        assert values.shape == (3,)
        assert_allclose(values, math.sqrt(2.0) * np.array([0.1, 0.2, 0.3]), rtol=1e-12)
