"""
Tests for the seeded instance generators and generator specs.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.boolfn import F2Polynomial, Internal
from src.generators import (
    describe,
    generate,
    parity,
    parse_generator,
    random_junta_poly,
    random_poly,
    random_tree_depth,
    random_tree_size,
    random_truth_table,
)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def paths_repeat_a_variable(node, seen=0):
    if not isinstance(node, Internal):
        return False
    if (seen >> node.var) & 1:
        return True
    seen |= 1 << node.var
    return paths_repeat_a_variable(node.lo, seen) or paths_repeat_a_variable(node.hi, seen)


class TestTrees:

    @given(seed=seeds, n=st.integers(min_value=1, max_value=10), d=st.integers(min_value=0, max_value=5))
    @settings(max_examples=50, deadline=None)
    def test_depth_generator(self, seed, n, d):
        d = min(d, n)
        t = random_tree_depth(np.random.default_rng(seed), n, d)
        assert t.n == n
        assert t.depth() <= d
        assert not paths_repeat_a_variable(t.root)

    @given(seed=seeds, n=st.integers(min_value=1, max_value=10), s=st.integers(min_value=1, max_value=12))
    @settings(max_examples=50, deadline=None)
    def test_size_generator(self, seed, n, s):
        t = random_tree_size(np.random.default_rng(seed), n, s)
        assert t.size() <= s
        assert not paths_repeat_a_variable(t.root)

    def test_size_generator_depth_cap(self):
        t = random_tree_size(np.random.default_rng(0), 10, 64, max_depth=3)
        assert t.depth() <= 3

    def test_depth_above_n(self):
        with pytest.raises(ValueError):
            random_tree_depth(np.random.default_rng(0), 3, 4)

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            random_tree_size(np.random.default_rng(0), 3, 0)

    def test_equal_seeds_give_equal_trees(self):
        a = random_tree_depth(np.random.default_rng(5), 12, 4)
        b = random_tree_depth(np.random.default_rng(5), 12, 4)
        assert a == b


class TestPolynomials:

    def test_parity(self):
        assert parity(3) == F2Polynomial.from_vars([[0], [1], [2]])
        assert list(parity(4, [1, 3]).truth_table().values[:4]) == [0, 0, 1, 1]

    @given(seed=seeds, d=st.integers(min_value=1, max_value=4))
    @settings(max_examples=40, deadline=None)
    def test_random_poly_respects_degree_and_support(self, seed, d):
        f = random_poly(np.random.default_rng(seed), 10, d, 8, support=[1, 3, 5, 7])
        assert f.degree() <= d
        assert set(f.variables()) <= {1, 3, 5, 7}
        assert f.n == 10

    @given(seed=seeds, d=st.integers(min_value=1, max_value=3))
    @settings(max_examples=40, deadline=None)
    def test_junta_poly_support(self, seed, d):
        f = random_junta_poly(np.random.default_rng(seed), 20, d)
        assert len(f.variables()) <= 2 ** d
        assert f.degree() <= d

    def test_degree_zero_is_zero(self):
        assert random_poly(np.random.default_rng(0), 5, 0, 3) == F2Polynomial.zero()

    def test_truth_table_shape(self):
        tt = random_truth_table(np.random.default_rng(1), 5)
        assert tt.values.shape == (32,)
        assert set(np.unique(tt.values)) <= {0, 1}


class TestSpecs:

    def test_parse(self):
        assert parse_generator("tree-depth:n=64,d=3") == ("tree-depth", {"n": 64, "d": 3})

    def test_parity_defaults_to_all_variables(self):
        assert parse_generator("parity:n=5") == ("parity", {"n": 5, "k": 5})

    def test_empty_parity_is_constant(self):
        f = generate("parity:n=4,k=0", np.random.default_rng(0))
        assert f == F2Polynomial.zero()
        assert f.n == 4

    @pytest.mark.parametrize("spec", [
        "bdd:n=3",
        "tree-depth:n=3",
        "tree-depth:n=3,d=x",
        "tree-depth:n,d=2",
        "parity:n=3,q=1",
    ])
    def test_invalid(self, spec):
        with pytest.raises(ValueError):
            parse_generator(spec)

    def test_generate_is_seeded(self):
        spec = "tree-size:n=20,s=6"
        assert generate(spec, np.random.default_rng(3)) == generate(spec, np.random.default_rng(3))

    def test_describe(self):
        assert describe("poly:n=8,d=2,terms=5") == {"family": "poly", "n": 8, "d": 2, "terms": 5}
