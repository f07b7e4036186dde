"""
Shared fixtures for the dtlab test suite.
"""

import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.boolfn import DecisionTree  # noqa: E402
from src.config import get_config  # noqa: E402
from helpers import node  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def and_tree():
    """x1 AND x2 as a size-3 tree."""
    return DecisionTree(2, node(1, 0, node(2, 0, 1)))


@pytest.fixture
def xor_tree():
    return DecisionTree(2, node(1, node(2, 0, 1), node(2, 1, 0)))


@pytest.fixture
def three_leaf_tree():
    """root x1 (lo: leaf 1, hi: x2 (lo: leaf 1, hi: leaf 0))."""
    return DecisionTree(2, node(1, 1, node(2, 1, 0)))


@pytest.fixture
def fresh_config():
    """Drop the cached configuration before and after a test."""
    get_config.cache_clear()
    yield
    get_config.cache_clear()
