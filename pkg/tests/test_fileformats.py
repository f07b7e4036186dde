"""
Tests for the JSON function and distribution formats.
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings

from src.boolfn import (
    UNIFORM,
    DecisionTree,
    ExplicitDistribution,
    F2Polynomial,
    SamplerDistribution,
    TruthTable,
    distance,
    leaf,
)
from src.errors import MalformedFunctionError
from src.fileformats import (
    distribution_from_json,
    distribution_to_json,
    dumps,
    function_from_json,
    function_to_json,
    load_distribution,
    load_function,
    save_function,
)
from helpers import depth_trees, poly


class TestFunctionFiles:

    def test_tree_uses_one_based_indices(self, and_tree):
        obj = function_to_json(and_tree)
        assert obj["repr"] == "tree"
        assert obj["root"] == 0
        assert obj["nodes"][0] == {"var": 1, "lo": 1, "hi": 2}
        assert {"var": 2, "lo": 3, "hi": 4} in obj["nodes"]

    def test_tree_file_loads_back(self, three_leaf_tree, tmp_path):
        path = tmp_path / "t.json"
        save_function(three_leaf_tree, str(path))
        assert load_function(str(path)) == three_leaf_tree

    def test_poly_constant_monomial_is_empty_list(self):
        obj = function_to_json(poly([], [2, 3], n=3))
        assert obj == {"repr": "poly", "n": 3, "monomials": [[], [2, 3]]}

    def test_zero_poly_has_no_monomials(self):
        f = function_from_json({"repr": "poly", "n": 2, "monomials": []})
        assert f == F2Polynomial.zero()

    def test_duplicate_monomials_cancel(self):
        f = function_from_json({"repr": "poly", "n": 2, "monomials": [[1], [1], [2]]})
        assert f == poly([2])

    def test_truthtable_hex_lsb_first(self):
        tt = function_from_json({"repr": "truthtable", "n": 2, "bits": "8"})
        assert list(tt.values) == [0, 0, 0, 1]
        assert function_to_json(tt)["bits"] == "8"

    def test_shared_subtrees_are_allowed(self):
        obj = {"repr": "tree", "n": 2, "root": 0,
               "nodes": [{"var": 1, "lo": 1, "hi": 1}, {"var": 2, "lo": 2, "hi": 3}, {"leaf": 0}, {"leaf": 1}]}
        t = function_from_json(obj)
        assert [t.evaluate(x) for x in range(4)] == [0, 0, 1, 1]

    @given(t=depth_trees())
    @settings(max_examples=30, deadline=None)
    def test_tree_files_preserve_the_function(self, t):
        back = function_from_json(json.loads(dumps(function_to_json(t))))
        assert distance(t, back) == 0.0


class TestMalformedFiles:

    @pytest.mark.parametrize("obj", [
        {"repr": "bdd", "n": 2},
        {"repr": "tree", "n": 2, "nodes": [{"var": 0, "lo": 1, "hi": 1}, {"leaf": 0}], "root": 0},
        {"repr": "tree", "n": 1, "nodes": [{"var": 2, "lo": 1, "hi": 1}, {"leaf": 0}], "root": 0},
        {"repr": "tree", "n": 1, "nodes": [{"var": 1, "lo": 0, "hi": 1}, {"leaf": 0}], "root": 0},
        {"repr": "tree", "n": 1, "nodes": [{"var": 1, "lo": 5, "hi": 1}, {"leaf": 0}], "root": 0},
        {"repr": "tree", "n": 1, "nodes": [{"leaf": 2}], "root": 0},
        {"repr": "tree", "n": 1, "nodes": [{"leaf": 0}]},
        {"repr": "poly", "n": 2, "monomials": [[0]]},
        {"repr": "poly", "n": 1, "monomials": [[2]]},
        {"repr": "truthtable", "n": 1, "bits": "f"},
    ])
    def test_rejected(self, obj):
        with pytest.raises(MalformedFunctionError):
            function_from_json(obj)

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(MalformedFunctionError):
            load_function(str(path))


class TestDistributionFiles:

    def test_uniform(self):
        assert distribution_from_json({"dist": "uniform"}) is UNIFORM
        assert load_distribution(None) is UNIFORM

    def test_explicit(self):
        dist = distribution_from_json({"dist": "explicit", "points": [{"x": "10", "p": 0.5}, {"x": "01", "p": 0.5}]})
        assert isinstance(dist, ExplicitDistribution)
        assert dist.points == (0b01, 0b10)
        assert distribution_to_json(dist)["points"][0] == {"x": "10", "p": 0.5}

    def test_mixed_lengths_rejected(self):
        with pytest.raises(MalformedFunctionError):
            distribution_from_json({"dist": "explicit", "points": [{"x": "10", "p": 0.5}, {"x": "1", "p": 0.5}]})

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(MalformedFunctionError):
            distribution_from_json({"dist": "explicit", "points": [{"x": "1", "p": 0.3}]})

    def test_product(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"dist": "product", "p": [1.0, 0.0]}))
        dist = load_distribution(str(path))
        assert isinstance(dist, SamplerDistribution)
        assert dist.sample(np.random.default_rng(0), 2) == 0b01
        assert distribution_to_json(dist) == {"dist": "product", "p": [1.0, 0.0]}

    @pytest.mark.parametrize("p", [[], "0.5", [0.5, -0.1]])
    def test_bad_product_bias(self, p):
        with pytest.raises(MalformedFunctionError):
            distribution_from_json({"dist": "product", "p": p})

    def test_unknown_kind(self):
        with pytest.raises(MalformedFunctionError):
            distribution_from_json({"dist": "gaussian"})


class TestDumps:

    def test_single_line_sorted(self):
        assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'

    def test_pretty(self):
        assert "\n" in dumps({"a": 1}, pretty=True)

    def test_leaf_tree(self):
        assert function_to_json(DecisionTree(3, leaf(1))) == {"repr": "tree", "n": 3, "nodes": [{"leaf": 1}], "root": 0}

    def test_truth_table_round_value(self):
        tt = TruthTable.from_int(3, 0b10010110)
        assert function_from_json(function_to_json(tt)) == tt
