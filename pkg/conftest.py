#!/usr/bin/env python3
"""
Shared pytest fixtures
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from models import AdmissibleBall, PVConfig  # noqa: E402

TEST_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test")


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def pv():
    return PVConfig()


@pytest.fixture
def small_ball():
    return AdmissibleBall((0.5,), 0.2)


@pytest.fixture
def test_dir():
    return TEST_DIR
