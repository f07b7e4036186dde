"""
Experiment Runner (experiments.py)

Glue between the CLI and the library: resolves function sources, builds
learners and testers from flat parameter dicts, runs single commands and
seeded suites.

Features:
- ExperimentConfig: everything that determines a run
- Registries of learners and testers by CLI name
- run_learn / run_test / run_distance / run_suite
- Seeding: one seed -> SeedSequence(seed, spawn_key=(trial,)) -> two
  children (function generator, oracle session)
- Parallel suites through concurrent.futures, aggregated by trial index

Requirements:
- Hidden functions are only handed to OracleSession; learners and testers
  never receive them.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.boolfn import BooleanFunction, DecisionTree, Distribution, distance
from src.config import setting
from src.errors import BudgetExhaustedError, DtlabError, NotInClassError, TooManyRelevantError
from src.fileformats import load_distribution, load_function
from src.generators import generate
from src.learners import (
    LearnParams,
    exact_from_uniform,
    exact_learn_dtds,
    exact_learn_min_tree,
    exact_learn_universal,
    learn_dtds_distfree,
    learn_dtds_reduced,
    learn_dts_distfree,
    learn_dts_reduced,
    learn_dts_uniform,
    learn_dts_uniform_reduced,
    learn_nonproper_distfree,
    learn_nonproper_reduced,
)
from src.oracle import OracleSession
from src.reductions import lift_tester, tester_from_learner
from src.reports import ACCEPT, INCONCLUSIVE, REJECT, Stopwatch, TesterReport
from src.testers import DepthTesterParams, SizeTesterParams, test_depth_appendix, test_depth_distfree, test_size_uniform

log = logging.getLogger(__name__)

# Exit codes shared by every command
EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

DECISION_EXIT = {ACCEPT: EXIT_OK, REJECT: EXIT_REJECT, INCONCLUSIVE: EXIT_INCONCLUSIVE}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    command: "learn" or "test"; algorithm: learner or tester name;
    fn: function file or generator spec; dist: distribution file or None.
    """

    command: str
    algorithm: str
    fn: str
    dist: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    budget: Optional[int] = None
    trials: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.command not in ("learn", "test"):
            raise ValueError(f"Invalid command: {self.command}. Valid commands are: learn, test")
        if self.budget is not None and self.budget <= 0:
            raise ValueError(f"Invalid budget: {self.budget}. Valid budgets are positive integers")
        if self.trials < 0:
            raise ValueError(f"Invalid trial count: {self.trials}. Valid counts are >= 0")

    @property
    def effective_budget(self) -> Optional[int]:
        return self.budget if self.budget is not None else setting("default_budget")


# ============================================================================
# Seeding and function sources
# ============================================================================

def trial_seeds(seed: int, trial: Optional[int] = None) -> Tuple[int, int]:
    """(generator seed, session seed) for one trial; trial None is a single run."""
    root = np.random.SeedSequence(seed) if trial is None else np.random.SeedSequence(seed, spawn_key=(trial,))
    gen_seq, session_seq = root.spawn(2)
    return int(gen_seq.generate_state(1, dtype=np.uint64)[0]), int(session_seq.generate_state(1, dtype=np.uint64)[0])


def resolve_function(source: str, gen_seed: int) -> BooleanFunction:
    """A function file if the path exists, otherwise a generator spec."""
    if os.path.exists(source):
        return load_function(source)
    return generate(source, np.random.default_rng(gen_seed))


def resolve_distribution(source: Optional[str]) -> Distribution:
    return load_distribution(source)


# ============================================================================
# Registries
# ============================================================================

LEARNERS: Dict[str, Callable] = {
    "dtds-distfree": learn_dtds_distfree,
    "dtds-reduced": learn_dtds_reduced,
    "dts-distfree": learn_dts_distfree,
    "dts-reduced": learn_dts_reduced,
    "dts-uniform": learn_dts_uniform,
    "dts-uniform-reduced": learn_dts_uniform_reduced,
    "nonproper": learn_nonproper_distfree,
    "nonproper-reduced": learn_nonproper_reduced,
    "exact-dtds": exact_learn_dtds,
    "exact-universal": exact_learn_universal,
    "exact-min-tree": exact_learn_min_tree,
    "exact-reduced": exact_from_uniform(learn_dtds_reduced),
}

TESTERS = ("depth-df", "size-u", "size-lifted", "depth-appendix", "by-learning")


def _require(params: Dict[str, Any], *keys: str) -> None:
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise ValueError(f"Invalid parameters: missing {', '.join(missing)}")


def learn_params(params: Dict[str, Any]) -> LearnParams:
    s = params.get("s")
    d = params.get("d")
    if s is None and d is None:
        raise ValueError("Invalid parameters: learners need --s or --d")
    if s is None:
        s = 2 ** d
    if d is None:
        d = max(0, s - 1)
    return LearnParams(s=s, d=d, eps=params.get("eps") or 0.1, delta=params.get("delta") or 0.1)


def size_tester_params(params: Dict[str, Any], eps: float, delta: float) -> SizeTesterParams:
    _require(params, "s")
    return SizeTesterParams(
        params["s"], eps, delta,
        c=params.get("c") or 2,
        depth_cap_factor=params.get("depth_cap_factor"),
        reduced=bool(params.get("reduced")),
        walk_cap=params.get("walk_cap"),
        reduced_constants=params.get("reduced_constants"),
    )


def build_tester(name: str, params: Dict[str, Any]) -> Callable[[OracleSession], TesterReport]:
    """Tester callable for a CLI name and flat parameters."""
    eps = params.get("eps") or 0.25
    delta = params.get("delta") or 0.1
    if name == "depth-df":
        _require(params, "d")
        p = DepthTesterParams(params["d"], eps, delta, params.get("route_samples"), params.get("route_cutoff"))
        return lambda o: test_depth_distfree(o, p)
    if name == "size-u":
        p = size_tester_params(params, eps, delta)
        return lambda o: test_size_uniform(o, p)
    if name == "size-lifted":
        p = size_tester_params(params, eps, delta)

        def size_uniform(o: OracleSession) -> TesterReport:
            return test_size_uniform(o, p)

        return lift_tester(size_uniform, p.s, eps, delta, model="uniform")
    if name == "depth-appendix":
        _require(params, "d")
        return lambda o: test_depth_appendix(o, params["d"], eps, delta)
    if name == "by-learning":
        learner = params.get("learner") or "dtds-distfree"
        if learner not in LEARNERS:
            raise ValueError(f"Invalid learner: {learner}. Valid learners are: {', '.join(LEARNERS)}")
        lp = learn_params({**params, "eps": eps, "delta": delta})
        k = params.get("k") or lp.s
        return tester_from_learner(LEARNERS[learner], k, eps, delta, params.get("model") or "distfree", lp)
    raise ValueError(f"Invalid tester: {name}. Valid testers are: {', '.join(TESTERS)}")


# ============================================================================
# Single runs
# ============================================================================

def run_test(config: ExperimentConfig, trial: Optional[int] = None) -> TesterReport:
    gen_seed, session_seed = trial_seeds(config.seed, trial)
    tester = build_tester(config.algorithm, config.params)
    hidden = resolve_function(config.fn, gen_seed)
    session = OracleSession(hidden, resolve_distribution(config.dist), session_seed, config.effective_budget)
    report = tester(session)
    report.seed = config.seed if trial is None else session_seed
    return report


@dataclass
class LearnOutcome:
    status: str
    reason: str
    queries: Dict[str, int]
    hypothesis: Optional[DecisionTree] = None
    exact: Optional[bool] = None
    seed: Optional[int] = None
    elapsed_ms: Optional[float] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {"success": EXIT_OK, "not-in-class": EXIT_REJECT}.get(self.status, EXIT_INCONCLUSIVE)

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "status": self.status,
            "reason": self.reason,
            "queries": dict(self.queries),
            "params": dict(self.params),
            "seed": self.seed,
        }
        if self.hypothesis is not None:
            out["hypothesis"] = {"size": self.hypothesis.size(), "depth": self.hypothesis.depth()}
        if self.exact is not None:
            out["exact"] = self.exact
        if timing and self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def _agrees_everywhere(f: BooleanFunction, g: BooleanFunction) -> Optional[bool]:
    n = max(f.n, g.n)
    if n > setting("exact_cap"):
        return None
    return distance(f, g) == 0.0


def run_learn(config: ExperimentConfig, trial: Optional[int] = None, check_exact: bool = False) -> LearnOutcome:
    """
    Run one learner.

    Note:
        check_exact compares the hypothesis with the hidden function on every
        point after the session is closed; it is a harness check, not part of
        the learner's view.
    """
    if config.algorithm not in LEARNERS:
        raise ValueError(f"Invalid learner: {config.algorithm}. Valid learners are: {', '.join(LEARNERS)}")
    gen_seed, session_seed = trial_seeds(config.seed, trial)
    p = learn_params(config.params)
    hidden = resolve_function(config.fn, gen_seed)
    session = OracleSession(hidden, resolve_distribution(config.dist), session_seed, config.effective_budget)
    params = {"learner": config.algorithm, "s": p.s, "d": p.d, "eps": p.eps, "delta": p.delta}
    seed = config.seed if trial is None else session_seed
    clock = Stopwatch()
    try:
        tree = LEARNERS[config.algorithm](session, p)
    except BudgetExhaustedError as e:
        return LearnOutcome("inconclusive", str(e), e.counters, seed=seed, elapsed_ms=clock.ms(), params=params)
    except (NotInClassError, TooManyRelevantError) as e:
        return LearnOutcome("not-in-class", str(e), session.counters(), seed=seed, elapsed_ms=clock.ms(), params=params)
    exact = _agrees_everywhere(hidden, tree) if check_exact else None
    return LearnOutcome("success", "hypothesis found", session.counters(), tree, exact, seed, clock.ms(), params)


def run_distance(f: BooleanFunction, g: BooleanFunction, dist: Distribution, mode: str = "exact",
                 m: Optional[int] = None, seed: Optional[int] = None) -> float:
    return distance(f, g, dist, mode, m, seed)


# ============================================================================
# Suites
# ============================================================================

def _run_trial(job: Tuple[ExperimentConfig, int]) -> Dict[str, Any]:
    config, trial = job
    try:
        if config.command == "test":
            report = run_test(config, trial)
            return {"trial": trial, "decision": report.decision, "queries": report.queries, "seed": report.seed}
        outcome = run_learn(config, trial, check_exact=True)
        return {"trial": trial, "decision": outcome.status, "queries": outcome.queries,
                "exact": outcome.exact, "seed": outcome.seed}
    except DtlabError as e:
        log.error("trial %d failed: %s", trial, e)
        return {"trial": trial, "decision": "error", "reason": str(e), "queries": {"bb": 0, "rex": 0}}


def _quantiles(values: List[int]) -> Dict[str, float]:
    if not values:
        return {}
    q = np.quantile(np.asarray(values, dtype=float), [0.1, 0.5, 0.9])
    return {"p10": float(q[0]), "median": float(q[1]), "p90": float(q[2]), "max": float(max(values))}


def aggregate(results: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Accept rate, decision counts and query quantiles over trials sorted by index."""
    results = sorted(results, key=lambda r: r["trial"])
    n = len(results)
    counts: Dict[str, int] = {}
    for r in results:
        counts[r["decision"]] = counts.get(r["decision"], 0) + 1
    positive = counts.get(ACCEPT, 0) + counts.get("success", 0)
    out: Dict[str, Any] = {
        "trials": n,
        "accept_rate": positive / n if n else None,
        "decisions": dict(sorted(counts.items())),
        "bb": _quantiles([r["queries"]["bb"] for r in results]),
        "rex": _quantiles([r["queries"]["rex"] for r in results]),
        "per_trial": results,
    }
    exact = [r["exact"] for r in results if r.get("exact") is not None]
    if exact:
        out["exact_rate"] = sum(exact) / len(exact)
    return out


def run_suite(config: ExperimentConfig) -> Dict[str, Any]:
    """
    N seeded trials, run in a process pool when workers > 1.

    Example Usage:
        >>> cfg = ExperimentConfig("test", "depth-df", "tree-depth:n=64,d=3", params={"d": 3}, trials=100)
        >>> run_suite(cfg)["accept_rate"]
        0.98
    """
    clock = Stopwatch()
    jobs = [(config, i) for i in range(config.trials)]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_trial, jobs))
    else:
        results = [_run_trial(job) for job in jobs]
    summary = aggregate(results)
    summary["config"] = {"command": config.command, "algorithm": config.algorithm, "fn": config.fn,
                         "params": dict(config.params), "seed": config.seed}
    log.info("suite of %d trials finished in %.1f ms", config.trials, clock.ms())
    return summary
