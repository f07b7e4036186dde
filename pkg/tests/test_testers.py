"""
Tests for the depth and size testers.

The tester entry points are reached through the module so pytest does not
collect them as tests.
"""

import json
import logging

import numpy as np
import pytest
from scipy import stats

from src import testers
from src.boolfn import DecisionTree, F2Polynomial, RestrictionSeq, leaf
from src.errors import InvariantError, MonomialTooLargeError
from src.generators import parity, random_tree_depth, random_tree_size
from src.oracle import OracleSession
from src.reports import ACCEPT, INCONCLUSIVE, REJECT, TesterReport
from src.testers import (
    EXCEEDED,
    LEAF,
    DepthTesterParams,
    Middle,
    NearOne,
    NearZero,
    SizeTesterParams,
    WalkState,
    appendix_walk,
    appendix_walk_cap,
    estimate_prob_one,
    estimate_sample_size,
    frequent_variable,
    greedy_variable,
    route_in_Tf,
    run_walk,
    walk_step,
)
from helpers import poly


def monomials(*vars_lists):
    return frozenset(sum(1 << (v - 1) for v in vs) for vs in vars_lists)


class TestTesterReport:

    def test_elapsed_only_with_timing(self):
        report = TesterReport(ACCEPT, "ok", {"bb": 1, "rex": 0}, [], {}, 3, 1.23456)
        assert "elapsed_ms" not in report.to_dict()
        assert report.to_dict(timing=True)["elapsed_ms"] == 1.235
        assert json.loads(report.to_json())["seed"] == 3

    def test_unknown_decision(self):
        with pytest.raises(ValueError):
            TesterReport("maybe", "", {})


class TestDepthTesterParams:

    def test_defaults(self):
        p = DepthTesterParams(3, 0.25, 0.1)
        assert (p.route_samples, p.route_cutoff) == (16, 6)

    def test_depth_one_cutoff(self):
        assert DepthTesterParams(1, 0.5, 0.1).route_cutoff == 1

    def test_cutoff_below_depth(self):
        with pytest.raises(ValueError):
            DepthTesterParams(3, 0.1, 0.1, route_cutoff=2)

    def test_invalid_eps(self):
        with pytest.raises(ValueError):
            DepthTesterParams(2, 1.5, 0.1)


class TestRoutes:

    def test_and_route(self, and_tree):
        trace = route_in_Tf(OracleSession(and_tree, seed=0), 0b11, 0b11, 2, 3, 1e-6)
        assert (trace.depth, trace.monomials, trace.verdict) == (2, [0b11], LEAF)
        assert trace.to_dict()["monomials"] == [[1, 2]]

    def test_cutoff_exceeded(self, and_tree):
        trace = route_in_Tf(OracleSession(and_tree, seed=0), 0, 0b11, 2, 1, 1e-6)
        assert trace.verdict == EXCEEDED
        assert trace.depth == 2

    def test_parity_routes_fix_one_variable_per_round(self):
        for b in (0, 0b101, 0b111):
            trace = route_in_Tf(OracleSession(parity(3), seed=b), b, 0b111, 3, 6, 1e-6)
            assert trace.depth == 3 and len(trace.monomials) == 3

    def test_constant_route_is_empty(self):
        trace = route_in_Tf(OracleSession(F2Polynomial.one(4), seed=0), 5, 0, 2, 3, 0.1)
        assert trace.depth == 0 and trace.monomials == []

    @pytest.mark.parametrize("f", [poly([1], n=2), poly([], [1], n=2)])
    def test_missing_relevant_variable_is_logged(self, f, caplog):
        with caplog.at_level(logging.DEBUG, logger="src.testers"):
            trace = route_in_Tf(OracleSession(f, seed=0), 0b11, 0b10, 1, 3, 1e-6)
        assert trace.depth == 0 and trace.monomials == []
        assert "route of 0b11 ended at depth 0" in caplog.text

    def test_monomial_above_degree(self):
        with pytest.raises(MonomialTooLargeError):
            route_in_Tf(OracleSession(poly([1, 2, 3], n=3), seed=0), 0b111, 0b111, 2, 3, 1e-9)


class TestDepthTester:

    def test_constant_accepts(self):
        p = DepthTesterParams(2, 0.25, 0.1)
        report = testers.test_depth_distfree(OracleSession(DecisionTree(6, leaf(1)), seed=0), p)
        assert report.decision == ACCEPT
        assert len(report.walks) == p.route_samples
        assert all(w["depth"] == 0 for w in report.walks)

    def test_depth_three_tree_accepts(self):
        f = random_tree_depth(np.random.default_rng(31), 10, 3)
        p = DepthTesterParams(3, 0.25, 0.1)
        report = testers.test_depth_distfree(OracleSession(f, seed=31), p)
        assert report.decision == ACCEPT
        assert max(w["depth"] for w in report.walks) <= p.route_cutoff
        assert report.params == p.to_dict()

    def test_many_relevant_variables_reject(self):
        report = testers.test_depth_distfree(OracleSession(parity(10), seed=1), DepthTesterParams(3, 0.25, 0.1))
        assert report.decision == REJECT
        assert "relevant" in report.reason

    def test_deep_route_rejects(self):
        report = testers.test_depth_distfree(OracleSession(parity(4), seed=2), DepthTesterParams(2, 0.25, 0.1))
        assert report.decision == REJECT
        assert report.walks[-1]["verdict"] == EXCEEDED

    def test_budget_gives_inconclusive(self):
        report = testers.test_depth_distfree(
            OracleSession(parity(10), seed=3, budget=5), DepthTesterParams(3, 0.25, 0.1))
        assert report.decision == INCONCLUSIVE
        assert report.queries["bb"] + report.queries["rex"] == 5


class TestSizeTesterParams:

    def test_derived_values(self):
        p = SizeTesterParams(4, 0.25, 0.1)
        assert (p.r, p.r_prime, p.walk_repeats) == (4, 128, 160)
        assert p.cap == 2048 * 16
        assert p.width(5) == 2048

    def test_reduced_constants(self):
        p = SizeTesterParams(4, 0.25, 0.1, reduced=True)
        assert p.cap == 64 * 16
        assert p.width(5) == 5

    def test_reduced_constant_overrides(self):
        p = SizeTesterParams(4, 0.25, 0.1, reduced_constants={"depth_cap_factor": 8, "width": 3})
        assert p.reduced
        assert p.cap == 8 * 16
        assert p.width(5) == 3
        assert p.to_dict()["reduced_constants"] == {"depth_cap_factor": 8, "width": 3}

    def test_overrides_merge_over_the_config_block(self):
        p = SizeTesterParams(4, 0.25, 0.1, reduced_constants={"width": 2})
        assert p.cap == 64 * 16
        assert p.width(5) == 2

    def test_explicit_depth_cap_factor(self):
        p = SizeTesterParams(4, 0.25, 0.1, depth_cap_factor=3)
        assert (p.cap, p.reduced) == (3 * 16, False)

    def test_explicit_walk_cap(self):
        assert SizeTesterParams(4, 0.25, 0.1, walk_cap=7).cap == 7

    @pytest.mark.parametrize("kwargs", [
        {"c": 1},
        {"walk_cap": 0},
        {"s": 0},
        {"depth_cap_factor": 0},
        {"reduced_constants": {"cap": 3}},
        {"reduced_constants": {"width": 0}},
        {"reduced_constants": {"width": "all"}},
    ])
    def test_invalid(self, kwargs):
        base = {"s": 4, "eps": 0.25, "delta": 0.1}
        with pytest.raises(ValueError):
            SizeTesterParams(**{**base, **kwargs})


class TestWalks:

    def test_frequent_variable(self):
        assert frequent_variable(monomials([1, 2], [1, 3], [4]), 1) == 0
        assert frequent_variable(monomials([1], [2], [3]), 1) is None
        assert frequent_variable(frozenset({0}), 1) is None

    def test_step_keeps_the_sum_identity(self):
        F, G = F2Polynomial(monomials([1, 2], [1, 3])), F2Polynomial(monomials([2]))
        state = WalkState(0, RestrictionSeq(), F.monomials, G.monomials)
        new = walk_step(state, 0, 1, origin=(F, G), r=1)
        assert new.j == 1
        assert new.H == monomials([3]) and new.L == frozenset()
        assert new.q == RestrictionSeq(((0, 1),))

    def test_infrequent_zero_step_is_flagged(self):
        state = WalkState(0, RestrictionSeq(), monomials([1], [2], [3], [4]), frozenset())
        with pytest.raises(InvariantError):
            walk_step(state, 0, 0, r=1)

    def test_wrong_origin_is_flagged(self):
        state = WalkState(0, RestrictionSeq(), monomials([1, 2]), frozenset())
        with pytest.raises(InvariantError):
            walk_step(state, 0, 1, origin=(poly([1]), F2Polynomial.zero()))

    def test_cap(self, rng):
        outcome = run_walk(poly([1], [2], [3]), F2Polynomial.zero(), 2, 1, rng)
        assert outcome.verdict == "cap"
        assert outcome.state.j == 1

    def test_no_frequent_variable(self, rng):
        outcome = run_walk(poly([1], [2], [3]), F2Polynomial.zero(), 1, 10, rng)
        assert outcome.verdict == "no-frequent-variable"
        assert outcome.state.j == 0

    def test_walk_reaches_a_constant(self, rng):
        for _ in range(10):
            outcome = run_walk(poly([1, 2]), F2Polynomial.zero(), 1, 10, rng)
            assert outcome.verdict == "constant"
            assert outcome.state.j <= 2


class TestEstimates:

    def test_sample_size(self):
        assert estimate_sample_size(0.5, 0.1) == 192

    def test_rare_ones_are_near_zero(self):
        f = poly(list(range(1, 9)), n=8)
        m = estimate_sample_size(0.5, 0.1)
        # chance that 1/256-rate ones reach the eps/8 threshold
        assert stats.binom.sf(m // 16 - 1, m, 1 / 256) < 1e-9
        verdict = estimate_prob_one(OracleSession(f, seed=5), RestrictionSeq(), 0.5, 0.1)
        assert isinstance(verdict, NearZero)

    def test_fixed_conjunction_is_near_one(self):
        q = RestrictionSeq(((0, 1), (1, 1)))
        verdict = estimate_prob_one(OracleSession(poly([1, 2], n=4), seed=6), q, 0.5, 0.1)
        assert verdict == NearOne(1.0)

    def test_parity_is_in_the_middle(self):
        verdict = estimate_prob_one(OracleSession(parity(6), seed=7), RestrictionSeq(), 0.5, 0.1)
        assert isinstance(verdict, Middle)
        m = estimate_sample_size(0.5, 0.1)
        assert stats.binomtest(round(verdict.mean * m), m, 0.5).pvalue > 1e-6


class TestSizeTester:

    def test_constant_accepts(self):
        p = SizeTesterParams(1, 0.25, 0.1, walk_repeats=10)
        report = testers.test_size_uniform(OracleSession(DecisionTree(8, leaf(0)), seed=0), p)
        assert report.decision == ACCEPT
        assert [w["depth"] for w in report.walks] == [0] * 10

    def test_size_four_tree_accepts(self):
        f = random_tree_size(np.random.default_rng(41), 16, 4)
        p = SizeTesterParams(4, 0.5, 0.1, walk_repeats=20, reduced=True)
        report = testers.test_size_uniform(OracleSession(f, seed=41), p)
        assert report.decision == ACCEPT
        assert len(report.walks) == 20
        assert all(w["verdict"] == "constant" for w in report.walks)

    def test_parity_rejects(self):
        p = SizeTesterParams(4, 0.25, 0.1, walk_repeats=20, reduced=True)
        report = testers.test_size_uniform(OracleSession(parity(12), seed=42), p)
        assert report.decision == REJECT
        assert "relevant" in report.reason

    def test_walk_cap_rejects(self):
        p = SizeTesterParams(4, 0.5, 0.1, walk_repeats=5, reduced=True, walk_cap=1)
        report = testers.test_size_uniform(OracleSession(parity(8, [0, 1, 2]), seed=43), p)
        assert report.decision == REJECT
        assert report.walks[-1]["verdict"] == "cap"

    def test_degree_above_the_learning_width_rejects(self):
        f = poly([1, 2, 3], [1], [2], [3], n=8)
        p = SizeTesterParams(4, 0.25, 0.1, walk_repeats=5, reduced_constants={"width": 2})
        report = testers.test_size_uniform(OracleSession(f, seed=45), p)
        assert report.decision == REJECT
        assert "degree 3 above the learning width 2" in report.reason
        assert report.params["projected"] == [1, 2, 3]
        assert report.walks == []

    def test_budget_gives_inconclusive(self):
        p = SizeTesterParams(4, 0.25, 0.1, reduced=True)
        report = testers.test_size_uniform(OracleSession(parity(12), seed=44, budget=8), p)
        assert report.decision == INCONCLUSIVE


class TestAppendixTester:

    def test_walk_cap(self):
        assert appendix_walk_cap(2, 0.25, 4) == 67
        assert appendix_walk_cap(0, 0.5, 0) == 12

    def test_greedy_variable(self):
        assert greedy_variable(poly([1, 2], [2, 3], [3])) == 1

    def test_walk(self):
        f = poly([1, 2], n=2)
        assert appendix_walk(f, 0, 0b11, 10) == testers.AppendixWalk(2, 0, 1, False)
        assert appendix_walk(f, 0, 0, 10) == testers.AppendixWalk(1, 1, 0, False)
        assert appendix_walk(f, 0, 0b11, 1).exceeded

    def test_walk_leaf_matches_f(self, rng):
        f = poly([1, 3], [2], [2, 4, 5], [], n=5)
        for _ in range(20):
            a, b = (int(v) for v in rng.integers(0, 32, size=2))
            assert appendix_walk(f, a, b, 50).value == f.evaluate(b)

    def test_constant_accepts(self):
        report = testers.test_depth_appendix(OracleSession(F2Polynomial.one(6), seed=0), 2, 0.25, 0.1)
        assert report.decision == ACCEPT

    def test_depth_two_tree_accepts(self):
        f = random_tree_depth(np.random.default_rng(51), 12, 2)
        report = testers.test_depth_appendix(OracleSession(f, seed=51), 2, 0.25, 0.1)
        assert report.decision == ACCEPT
        assert report.params["verify_disagreement"] == 0.0

    def test_parity_rejects(self):
        report = testers.test_depth_appendix(OracleSession(parity(10), seed=52), 2, 0.25, 0.1)
        assert report.decision == REJECT

    def test_invalid_depth(self):
        with pytest.raises(ValueError):
            testers.test_depth_appendix(OracleSession(parity(2)), -1, 0.25, 0.1)
