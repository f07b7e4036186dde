"""
Acceptance-scale corpora.

Every test here runs hundreds of seeded instances; they are marked slow and
skipped by default (run with `pytest -m slow`). Rates are checked against
the thresholds the algorithms are expected to meet at desk scale.
"""

import math

import numpy as np
import pytest

from src import testers
from src.algebra import (
    ProbeParams,
    cd,
    find_maximal_monomial,
    find_relevant_vars,
    interpolate_poly,
    is_maximal_monomial,
    psize,
)
from src.boolfn import F2Polynomial, distance, tree_to_dts, tree_to_poly
from src.diagnostics import (
    build_psize_tree,
    depth_drop_violations,
    restricted_cd_failure_bound,
    restricted_cd_trial,
    shift_event_failure_bound,
    shift_event_holds,
    small_monomial_bound,
    small_monomial_count,
    zero_depth,
    zero_depth_bound,
)
from src.errors import TooManyRelevantError
from src.experiments import ExperimentConfig, run_suite
from src.fileformats import dumps
from src.generators import parity, random_junta_poly, random_poly, random_tree_depth, random_tree_size, random_truth_table
from src.learners import LearnParams, Sample, consis, gen_universal_set, learn_dtds_distfree, min_dt_from_truth_table
from src.oracle import OracleSession
from src.reductions import find_close
from src.testers import run_walk

pytestmark = pytest.mark.slow


def suite(command, algorithm, fn, trials=100, seed=0, **params):
    return run_suite(ExperimentConfig(command, algorithm, fn, params=params, seed=seed, trials=trials))


def rate(summary, decision):
    return summary["decisions"].get(decision, 0) / summary["trials"]


def projection_error(f: F2Polynomial, found_mask: int) -> float:
    """Exact Pr[f(x) != f(x with unfound variables zeroed)] over f's own support."""
    support = f.variables()
    disagree = 0
    for pattern in range(1 << len(support)):
        x = sum(1 << v for j, v in enumerate(support) if (pattern >> j) & 1)
        disagree += f.evaluate(x) != f.evaluate(x & found_mask)
    return disagree / (1 << len(support))


class TestRepresentations:

    def test_tree_dts_and_polynomial_agree(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            n = int(rng.integers(1, 15))
            t = random_tree_depth(rng, n, int(rng.integers(0, min(6, n) + 1)))
            table = t.truth_table()
            assert tree_to_dts(t).truth_table() == table
            assert tree_to_poly(t).truth_table(n) == table

    def test_interpolation_recovers_polynomials(self):
        rng = np.random.default_rng(2)
        for i in range(500):
            n = int(rng.integers(1, 11))
            f = random_poly(rng, n, int(rng.integers(1, n + 1)), int(rng.integers(1, 12)))
            assert interpolate_poly(OracleSession(f, seed=i), list(range(n))) == f


class TestLearnerCorpora:

    def test_consis_matches_the_truth_table_optimiser(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            n = int(rng.integers(1, 5))
            tt = random_truth_table(rng, n)
            assert consis(Sample.full_table(tt), n, n).size() == min_dt_from_truth_table(tt).size()

    def test_occam_generalization(self):
        rng = np.random.default_rng(4)
        good = 0
        for i in range(100):
            f = random_tree_depth(rng, 8, 2)
            tree = learn_dtds_distfree(OracleSession(f, seed=i), LearnParams(s=4, d=2, eps=0.1, delta=0.1))
            good += distance(f, tree) <= 0.1
        assert good >= 85

    def test_distinct_depth_trees_are_far_apart(self):
        rng = np.random.default_rng(5)
        pairs = 0
        while pairs < 200:
            d = int(rng.integers(1, 4))
            a, b = random_tree_depth(rng, 6, d), random_tree_depth(rng, 6, d)
            dist = distance(a, b)
            if dist == 0.0:
                continue
            pairs += 1
            assert dist >= 2.0 ** -d

    def test_universal_sets_separate_distinct_trees(self):
        rng = np.random.default_rng(6)
        u = gen_universal_set(8, 4, 0.05, rng)
        while not u.verified:
            u = gen_universal_set(8, 4, 0.05, rng)
        pairs = 0
        while pairs < 100:
            a, b = random_tree_depth(rng, 8, 2), random_tree_depth(rng, 8, 2)
            if distance(a, b) == 0.0:
                continue
            pairs += 1
            assert any(a.evaluate(x) != b.evaluate(x) for x in u.points)

    @pytest.mark.parametrize("learner", ["exact-dtds", "exact-universal"])
    def test_exact_learners(self, learner):
        summary = suite("learn", learner, "tree-depth:n=10,d=3", seed=7, s=8, d=3, delta=0.05)
        assert sum(r.get("exact") is True for r in summary["per_trial"]) >= 95


class TestAlgebraCorpora:

    def test_maximal_monomials(self):
        rng = np.random.default_rng(8)
        calls = good = 0
        while calls < 500:
            d = int(rng.integers(1, 5))
            f = random_poly(rng, 12, d, int(rng.integers(1, 10)))
            if not f.nonconstant_monomials():
                continue
            calls += 1
            m = find_maximal_monomial(OracleSession(f, seed=calls), (1 << 12) - 1, ProbeParams(d, 0.01), size_cap=d)
            good += is_maximal_monomial(f, m)
        assert good >= 495

    def test_relevant_variable_recovery(self):
        rng = np.random.default_rng(9)
        exact = 0
        for i in range(500):
            d = int(rng.integers(1, 4))
            f = random_junta_poly(rng, 64, d)
            found = find_relevant_vars(OracleSession(f, seed=i), ProbeParams(d, 0.05), cap=2 ** d)
            assert set(found) <= set(f.variables())
            exact += found == f.variables()
        assert exact >= 475

    def test_frequent_variable_under_small_cd(self):
        rng = np.random.default_rng(10)
        for _ in range(300):
            f = random_poly(rng, 8, 3, int(rng.integers(1, 10)))
            monomials = f.nonconstant_monomials()
            if not monomials:
                continue
            ell = cd(f, 8).value
            best = max(sum(1 for m in monomials if (m >> v) & 1) for v in f.variables())
            assert best * ell >= len(monomials)


class TestProjectionCorpora:

    def test_find_close(self):
        rng = np.random.default_rng(11)
        close = 0
        for i in range(100):
            f = random_junta_poly(rng, 64, 2)
            o = OracleSession(f, seed=i)
            result = find_close(o, 4, 0.2, 0.1, c=2)
            close += projection_error(f, result.relevant_mask) <= 0.1
            counters = o.counters()
            assert counters["bb"] <= 5 * math.ceil(math.log2(64)) + result.rounds
            assert counters["rex"] == result.rounds
        assert close >= 90

    def test_parity_exceeds_small_juntas(self):
        too_many = 0
        for i in range(100):
            try:
                find_close(OracleSession(parity(6), seed=i), 2, 0.1, 0.1)
            except TooManyRelevantError:
                too_many += 1
        assert too_many >= 90

    def test_testing_by_learning(self):
        accept = suite("test", "by-learning", "tree-depth:n=8,d=2", seed=12, s=4, d=2, eps=0.2)
        assert rate(accept, "accept") >= 0.9
        reject = suite("test", "by-learning", "parity:n=6", seed=13, s=4, d=2, eps=0.2)
        assert rate(reject, "reject") >= 0.9


class TestStructuralStatements:

    def test_fixing_maximal_monomials(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            n = int(rng.integers(1, 11))
            t = random_tree_depth(rng, n, int(rng.integers(0, min(4, n) + 1)))
            assert depth_drop_violations(t, t.depth()) == []

    def test_zero_depth_of_psize_trees(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            t = random_tree_depth(rng, n, int(rng.integers(0, min(4, n) + 1)))
            a = int(rng.integers(0, 1 << n))
            f = tree_to_poly(t)
            tree = build_psize_tree(f, a, n)
            assert all(tree.evaluate(b ^ a) == f.evaluate(b) for b in range(1 << n))
            s = psize(f.shift(a)).value
            assert zero_depth(tree) <= zero_depth_bound(t.depth(), s) + 1e-9

    @pytest.mark.parametrize("lam", [1, 2])
    def test_shift_events_and_monomial_counts(self, lam):
        rng = np.random.default_rng(16 + lam)
        s, eps = 8, 0.25
        r = math.log2(s / eps)
        misses = 0
        for _ in range(500):
            t = random_tree_size(rng, 12, s)
            a = int(rng.integers(0, 1 << 12))
            if not shift_event_holds(tree_to_dts(t), a, s, eps, lam):
                misses += 1
                continue
            shifted = tree_to_poly(t).shift(a)
            assert small_monomial_count(shifted, 4 * lam * r) <= small_monomial_bound(s, eps, lam)
        assert misses / 500 <= 2 * shift_event_failure_bound(s, eps, lam)

    def test_restricted_cd(self):
        rng = np.random.default_rng(18)
        s, eps = 8, 0.25
        r = math.ceil(math.log2(s / eps))
        h = 2 * r
        failures = 0
        for _ in range(200):
            t = random_tree_size(rng, 12, s)
            a = int(rng.integers(0, 1 << 12))
            F = F2Polynomial(tree_to_poly(t).shift(a).nonconstant_monomials())
            outcome = run_walk(F, F2Polynomial.zero(), r, 10 * r * r, rng)
            failures += not restricted_cd_trial(t, a, outcome.state.q, h)
        assert failures / 200 <= 2 * restricted_cd_failure_bound(s, h)


class TestTesterCorpora:

    def test_depth_tester(self):
        accept = suite("test", "depth-df", "tree-depth:n=64,d=3", seed=19, d=3, eps=0.25)
        assert rate(accept, "accept") >= 0.9
        reject = suite("test", "depth-df", "parity:n=10", seed=20, d=3, eps=0.25)
        assert rate(reject, "reject") >= 0.9

    def test_size_tester(self):
        accept = suite("test", "size-u", "tree-size:n=16,s=4", seed=21, s=4, eps=0.25, reduced=True)
        assert rate(accept, "accept") >= 0.9
        assert "error" not in accept["decisions"]
        reject = suite("test", "size-u", "parity:n=12", seed=22, s=4, eps=0.25, reduced=True, walk_cap=11)
        assert rate(reject, "reject") >= 0.9

    def test_appendix_tester(self):
        accept = suite("test", "depth-appendix", "tree-depth:n=12,d=2", seed=23, d=2, eps=0.25)
        assert rate(accept, "accept") >= 0.9
        assert "error" not in accept["decisions"]

    def test_walk_identity_on_every_step(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            f = tree_to_poly(random_tree_depth(rng, 12, 2))
            a, b = (int(v) for v in rng.integers(0, 1 << 12, size=2))
            cap = testers.appendix_walk_cap(2, 0.25, psize(f.shift(a)).value)
            walk = testers.appendix_walk(f, a, b, cap)
            assert walk.exceeded or walk.value == f.evaluate(b)


class TestReproducibility:

    def test_suites_are_byte_identical(self):
        first = suite("test", "depth-df", "tree-depth:n=32,d=2", trials=20, seed=25, d=2)
        second = suite("test", "depth-df", "tree-depth:n=32,d=2", trials=20, seed=25, d=2)
        assert dumps(first) == dumps(second)
