"""
Junta Projections (reductions.py)

Front ends that make query complexity independent of n by projecting the
target onto the few variables that matter.

Features:
- find_close: removes relevant variables one at a time until t_X
  consecutive examples agree with f_{|X<-0}
- reduce_learner: find_close at (c=2, delta/2), then the inner learner on
  the projected oracle at (eps/2, delta/2)
- tester_from_learner: projection, learning at eps/3, verification of the
  hypothesis on fresh labeled examples
- lift_tester: projection front end for any tester over k variables

Note:
    X in the docstrings below is the set of variables forced to 0; the
    implementation tracks its complement, the variables found relevant.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Callable, Optional, Sequence, Tuple

from src.algebra import locate_relevant_variable
from src.boolfn import DecisionTree, vars_mask
from src.config import setting
from src.errors import BudgetExhaustedError, NotInClassError, TooManyRelevantError
from src.oracle import Oracle, ProjectedOracle, UniformExampleOracle
from src.reports import ACCEPT, INCONCLUSIVE, REJECT, Stopwatch, TesterReport

log = logging.getLogger(__name__)

Learner = Callable[..., DecisionTree]
Tester = Callable[[Oracle], TesterReport]

MODELS = ("distfree", "uniform")


@dataclass(frozen=True)
class ProjectionResult:
    """
    Output of find_close.

    kept: variables forced to 0 (X); found_relevant: removed variables in
    removal order; transcript: t_X after every round.
    """

    n: int
    found_relevant: Tuple[int, ...]
    transcript: Tuple[int, ...]
    converged: bool

    @property
    def relevant_mask(self) -> int:
        return vars_mask(self.found_relevant)

    @property
    def kept(self) -> Tuple[int, ...]:
        return tuple(v for v in range(self.n) if not (self.relevant_mask >> v) & 1)

    @property
    def relevant(self) -> Tuple[int, ...]:
        return tuple(sorted(self.found_relevant))

    @property
    def rounds(self) -> int:
        return len(self.transcript)


def find_close_schedule(k: int, eps: float, delta: float, c: float) -> Tuple[int, int]:
    """(round cap M, agreement target) for find_close."""
    kk = max(1, k)
    log_term = math.log(kk / delta)
    return math.ceil(c * kk * log_term / eps), math.ceil(c * log_term / eps)


def find_close(o: Oracle, k: int, eps: float, delta: float, c: float = 2) -> ProjectionResult:
    """
    Find a set X with Pr_D[f_{|X<-0} != f] <= eps/c, w.p. >= 1 - delta.

    Args:
        o: oracle; examples come from o.example()
        k: junta size bound
        eps, delta: accuracy and confidence
        c: closeness divisor

    Returns:
        ProjectionResult

    Raises:
        TooManyRelevantError: a (k+1)-th relevant variable was found

    Note:
        Black-box cost is one query per round plus at most ceil(log2 n) per
        removed variable. If the round cap runs out before t_X reaches its
        target, the current X is returned with converged=False.
    """
    if k < 0:
        raise ValueError(f"Invalid k: {k}. Valid values are >= 0")
    if not 0 < eps < 1 or not 0 < delta < 1:
        raise ValueError(f"Invalid eps/delta: {eps}/{delta}. Valid values are in (0, 1)")
    rounds, target = find_close_schedule(k, eps, delta, c)
    relevant = 0
    found = []
    t = 0
    transcript = []
    for _ in range(rounds):
        u, y = o.example()
        t += 1
        projected = u & relevant
        z = o.query(projected)
        if z != y:
            var = locate_relevant_variable(o, projected, u, z)
            found.append(var)
            relevant |= 1 << var
            t = 0
            log.debug("find_close removed x%d (%d so far)", var + 1, len(found))
            if len(found) > k:
                raise TooManyRelevantError(tuple(found), k)
        transcript.append(t)
        if t >= target:
            return ProjectionResult(o.n, tuple(found), tuple(transcript), True)
    log.info("find_close stopped after %d rounds without %d consecutive agreements", rounds, target)
    return ProjectionResult(o.n, tuple(found), tuple(transcript), False)


def reduce_learner(inner: Learner, k: Optional[int] = None, c: float = 2) -> Learner:
    """
    Wrap a learner with the projection front end.

    Args:
        inner: learner(oracle, params, variables) over the kept variables
        k: junta size; defaults to params.s at call time
        c: closeness divisor for find_close

    Returns:
        learner(oracle, params, variables=None)
    """

    def learner(o: Oracle, p, variables: Optional[Sequence[int]] = None) -> DecisionTree:
        kk = p.s if k is None else k
        projection = find_close(o, kk, p.eps, p.delta / 2, c)
        log.info("projected onto %s", [v + 1 for v in projection.relevant])
        proj = ProjectedOracle(o, projection.relevant_mask)
        return inner(proj, replace(p, eps=p.eps / 2, delta=p.delta / 2), projection.relevant)

    learner.__name__ = f"reduced_{getattr(inner, '__name__', 'learner')}"
    return learner


def _example_source(o: Oracle, model: str) -> Oracle:
    if model not in MODELS:
        raise ValueError(f"Invalid model: {model}. Valid models are: {MODELS}")
    return UniformExampleOracle(o) if model == "uniform" else o


def verify_sample_size(eps: float, delta: float) -> int:
    return math.ceil((setting("verify_C") / eps) * math.log(1.0 / delta))


def tester_from_learner(
    inner: Learner,
    k: int,
    eps: float,
    delta: float,
    model: str = "distfree",
    learn_params: Any = None,
) -> Tester:
    """
    Tester for a class by learning on the projection and verifying.

    Steps: find_close (reject on more than k relevant variables), learn on
    the projected oracle at eps/3, draw ceil((27/eps) ln(1/delta)) labeled
    examples and accept iff the hypothesis disagrees on at most 2eps/3 of
    them. The model only changes where examples come from: the session
    distribution, or uniform points queried through the black box.
    """

    def tester(o: Oracle) -> TesterReport:
        clock = Stopwatch()
        src = _example_source(o, model)
        params = {"k": k, "eps": eps, "delta": delta, "model": model, "learner": getattr(inner, "__name__", "learner")}

        def report(decision: str, reason: str, walks=None) -> TesterReport:
            return TesterReport(decision, reason, o.counters(), walks or [], params, getattr(o, "seed", None), clock.ms())

        try:
            try:
                projection = find_close(src, k, eps, delta / 3, c=3)
            except TooManyRelevantError as e:
                return report(REJECT, f"more than {k} relevant variables ({len(e.found)} found)")
            proj = ProjectedOracle(src, projection.relevant_mask)
            lp = replace(learn_params, eps=eps / 3, delta=delta / 3)
            try:
                hypothesis = inner(proj, lp, projection.relevant)
            except (NotInClassError, TooManyRelevantError) as e:
                return report(REJECT, f"learner failed: {e}")
            m = verify_sample_size(eps, delta / 3)
            mistakes = 0
            for _ in range(m):
                x, y = src.example()
                mistakes += hypothesis.evaluate(x) != y
            rate = mistakes / m
            walk = {"verify_samples": m, "disagreement": round(rate, 6), "hypothesis_size": hypothesis.size()}
            if rate <= 2 * eps / 3:
                return report(ACCEPT, "hypothesis verified", [walk])
            return report(REJECT, f"hypothesis disagrees on {rate:.4f} of verification samples", [walk])
        except BudgetExhaustedError as e:
            return report(INCONCLUSIVE, str(e))

    tester.__name__ = f"by_learning_{getattr(inner, '__name__', 'learner')}"
    return tester


def lift_tester(inner: Tester, k: int, eps: float, delta: float, model: str = "uniform", c: float = 2) -> Tester:
    """
    Run a tester for k-variable functions on the projection of f.

    The projection runs at (eps, delta/2, c); the inner tester then sees
    f_{|X<-0} only. More than k relevant variables is a reject.
    """

    def tester(o: Oracle) -> TesterReport:
        clock = Stopwatch()
        src = _example_source(o, model)
        params = {"k": k, "eps": eps, "delta": delta, "model": model, "inner": getattr(inner, "__name__", "tester")}
        try:
            projection = find_close(src, k, eps, delta / 2, c)
        except TooManyRelevantError as e:
            return TesterReport(REJECT, f"more than {k} relevant variables ({len(e.found)} found)",
                                o.counters(), [], params, getattr(o, "seed", None), clock.ms())
        except BudgetExhaustedError as e:
            return TesterReport(INCONCLUSIVE, str(e), o.counters(), [], params, getattr(o, "seed", None), clock.ms())
        report = inner(ProjectedOracle(o, projection.relevant_mask))
        report.params = {**params, "inner_params": report.params, "projected": [v + 1 for v in projection.relevant]}
        report.queries = o.counters()
        report.elapsed_ms = clock.ms()
        return report

    tester.__name__ = f"lifted_{getattr(inner, '__name__', 'tester')}"
    return tester
