"""
Decision Tree Testers (testers.py)

Three testers, each returning a TesterReport:

Features:
- test_depth_distfree: relevant variables plus on-the-fly routes through
  the maximal-monomial tree T_f, distribution-free
- test_size_uniform: learn the low-degree part of a shifted copy of f,
  then random walks that split on frequent variables of the small
  monomials (uniform distribution)
- test_depth_appendix: learn f as a sparse low-degree polynomial, verify
  it, then walk the psize-greedy tree of a random shift

Requirements:
- Testers only touch the target through the oracle they receive.
- Cap failures (too many relevant variables, monomials too large, walk cap)
  are reject decisions; budget exhaustion is inconclusive.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from src.algebra import (
    Constant,
    Interval,
    ProbeParams,
    find_maximal_monomial,
    find_relevant_vars,
    interpolate_poly,
    low_degree_part,
    probe_nonconstant,
)
from src.boolfn import F2Polynomial, RestrictionSeq, mask_vars, popcount, vars_mask
from src.config import setting
from src.errors import (
    AlgebraPreconditionError,
    BudgetExhaustedError,
    InvariantError,
    MonomialTooLargeError,
    TooManyRelevantError,
)
from src.oracle import Oracle, ProjectedOracle, RestrictedOracle, ShiftedOracle
from src.reductions import find_close
from src.reports import ACCEPT, INCONCLUSIVE, REJECT, Stopwatch, TesterReport

log = logging.getLogger(__name__)

REDUCED_CONSTANT_KEYS = ("depth_cap_factor", "width")


# ============================================================================
# Parameters
# ============================================================================

@dataclass(frozen=True)
class DepthTesterParams:
    """
    d: depth bound; route_samples defaults to ceil(4/eps); route_cutoff
    defaults to d(d+1)/2, the depth of T_f for a depth-d tree.
    """

    d: int
    eps: float
    delta: float
    route_samples: Optional[int] = None
    route_cutoff: Optional[int] = None

    def __post_init__(self):
        if self.d < 0:
            raise ValueError(f"Invalid d: {self.d}. Valid values are >= 0")
        if not 0 < self.eps < 1 or not 0 < self.delta < 1:
            raise ValueError(f"Invalid eps/delta: {self.eps}/{self.delta}. Valid values are in (0, 1)")
        if self.route_samples is None:
            object.__setattr__(self, "route_samples", math.ceil(4 / self.eps))
        if self.route_cutoff is None:
            object.__setattr__(self, "route_cutoff", self.d * (self.d + 1) // 2)
        if self.route_cutoff < self.d:
            raise ValueError(f"Invalid route_cutoff: {self.route_cutoff}. Valid values are >= d = {self.d}")

    def to_dict(self) -> Dict[str, object]:
        return {"d": self.d, "eps": self.eps, "delta": self.delta,
                "route_samples": self.route_samples, "route_cutoff": self.route_cutoff}


@dataclass(frozen=True)
class SizeTesterParams:
    """
    Size tester parameters.

    Derived values: r = ceil(log2(s/eps)), r' = 16 c r and the walk cap
    depth_cap_factor * ceil(log2(s/eps)^2). Full constants use
    depth_cap_factor = 1024 c and learning width 16 r'; reduced constants
    take both from the reduced_constants config block, with the
    reduced_constants overrides of this run merged on top (width
    "projected" keeps every monomial of the projected polynomial, an
    integer width caps it). Passing overrides implies reduced.
    """

    s: int
    eps: float
    delta: float
    c: int = 2
    walk_repeats: Optional[int] = None
    depth_cap_factor: Optional[int] = None
    reduced: bool = False
    walk_cap: Optional[int] = None
    reduced_constants: Optional[Dict[str, Union[int, str]]] = None

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"Invalid s: {self.s}. Valid values are >= 1")
        if self.c < 2:
            raise ValueError(f"Invalid c: {self.c}. Valid values are >= 2")
        if not 0 < self.eps < 1 or not 0 < self.delta < 1:
            raise ValueError(f"Invalid eps/delta: {self.eps}/{self.delta}. Valid values are in (0, 1)")
        if self.reduced_constants is not None:
            unknown = sorted(set(self.reduced_constants) - set(REDUCED_CONSTANT_KEYS))
            if unknown:
                raise ValueError(
                    f"Invalid reduced constants: {', '.join(unknown)}. "
                    f"Valid keys are: {', '.join(REDUCED_CONSTANT_KEYS)}"
                )
            object.__setattr__(self, "reduced", True)
        if self.walk_repeats is None:
            object.__setattr__(self, "walk_repeats", math.ceil(40 / self.eps))
        if self.depth_cap_factor is None:
            if self.reduced:
                factor = self.constants()["depth_cap_factor"]
            else:
                factor = setting("size_tester")["depth_cap_base"] * self.c
            object.__setattr__(self, "depth_cap_factor", factor)
        if self.depth_cap_factor < 1:
            raise ValueError(f"Invalid depth_cap_factor: {self.depth_cap_factor}. Valid values are >= 1")
        if self.walk_cap is not None and self.walk_cap < 1:
            raise ValueError(f"Invalid walk_cap: {self.walk_cap}. Valid values are >= 1")
        if self.reduced:
            width = self.constants().get("width", "projected")
            if width != "projected" and (not isinstance(width, int) or width < 1):
                raise ValueError(f"Invalid width: {width}. Valid values are: projected, an integer >= 1")

    def constants(self) -> Dict[str, Union[int, str]]:
        """The reduced_constants config block with this run's overrides on top."""
        return {**setting("reduced_constants"), **(self.reduced_constants or {})}

    @property
    def log_ratio(self) -> float:
        return math.log2(self.s / self.eps)

    @property
    def r(self) -> int:
        return max(1, math.ceil(self.log_ratio))

    @property
    def r_prime(self) -> int:
        return 16 * self.c * self.r

    @property
    def cap(self) -> int:
        if self.walk_cap is not None:
            return self.walk_cap
        return self.depth_cap_factor * math.ceil(self.log_ratio ** 2)

    def width(self, projected: int) -> int:
        """Largest monomial size kept by the learning step."""
        if not self.reduced:
            return 16 * self.r_prime
        width = self.constants().get("width", "projected")
        if width == "projected":
            return min(16 * self.r_prime, projected)
        return min(16 * self.r_prime, width)

    def to_dict(self) -> Dict[str, object]:
        out = {"s": self.s, "eps": self.eps, "delta": self.delta, "c": self.c,
               "r": self.r, "r_prime": self.r_prime, "walk_repeats": self.walk_repeats,
               "walk_cap": self.cap, "reduced": self.reduced}
        if self.reduced:
            out["reduced_constants"] = {**self.constants(), "depth_cap_factor": self.depth_cap_factor}
        return out


# ============================================================================
# Walk state and route traces
# ============================================================================

@dataclass(frozen=True)
class WalkState:
    """Step j, substitutions q, and the disjoint monomial sets H and L."""

    j: int
    q: RestrictionSeq
    H: FrozenSet[int]
    L: FrozenSet[int]

    def nonconstant_H(self) -> FrozenSet[int]:
        return self.H - {0}

    def is_constant(self) -> bool:
        return not self.nonconstant_H()


@dataclass
class RouteTrace:
    depth: int
    monomials: List[int] = field(default_factory=list)
    q: RestrictionSeq = field(default_factory=RestrictionSeq)
    verdict: str = "leaf"

    def to_dict(self) -> Dict[str, object]:
        return {
            "depth": self.depth,
            "verdict": self.verdict,
            "monomials": [[v + 1 for v in mask_vars(m)] for m in self.monomials],
        }


LEAF = "leaf"
EXCEEDED = "exceeded"
TOO_LARGE = "too-large"


@dataclass(frozen=True)
class NearZero:
    mean: float


@dataclass(frozen=True)
class NearOne:
    mean: float


@dataclass(frozen=True)
class Middle:
    mean: float


ProbVerdict = Union[NearZero, NearOne, Middle]


# ============================================================================
# Depth tester (distribution-free)
# ============================================================================

def route_in_Tf(
    proj: Oracle,
    b: int,
    relevant_mask: int,
    d: int,
    cutoff: int,
    delta: float,
) -> RouteTrace:
    """
    Route of b in T_f, built on the fly.

    Args:
        proj: oracle for f over its relevant variables
        b: the point being routed
        relevant_mask: variables f may depend on
        d: degree bound (and maximal-monomial size cap)
        cutoff: largest acceptable route depth
        delta: failure probability for the whole route

    Returns:
        RouteTrace with verdict "leaf" or "exceeded"; depth never exceeds
        cutoff + 1

    Raises:
        MonomialTooLargeError: a maximal monomial has more than d variables

    Note:
        Each round probes the current restriction for constancy, then
        finds a maximal monomial and fixes all its variables to b's values.
        Confidence is split evenly over the at most cutoff + 1 rounds.
    """
    params = ProbeParams(d, delta).split(2 * (cutoff + 1))
    trace = RouteTrace(depth=0)
    while True:
        current = RestrictedOracle(proj, trace.q)
        free = relevant_mask & ~trace.q.mask
        probe = probe_nonconstant(current, params)
        if isinstance(probe, Constant):
            return trace
        try:
            monomial = find_maximal_monomial(current, free, params, size_cap=d, hint=probe.point)
        except AlgebraPreconditionError as e:
            log.debug("route of %s ended at depth %d: %s", bin(b), trace.depth, e)
            return trace
        if monomial == 0:
            log.debug("route of %s ended at depth %d: witness %s outside the relevant variables",
                      bin(b), trace.depth, bin(probe.point))
            return trace
        trace.monomials.append(monomial)
        for v in mask_vars(monomial):
            trace.q = trace.q.extend(v, (b >> v) & 1)
            trace.depth += 1
            if trace.depth > cutoff:
                trace.verdict = EXCEEDED
                return trace
        log.debug("route of %s fixed %s, depth %d", bin(b), mask_vars(monomial), trace.depth)


def test_depth_distfree(o: Oracle, p: DepthTesterParams) -> TesterReport:
    """
    Distribution-free tester for depth-d trees (against depth-d^2 trees).

    Steps:
        1. Relevant variables with cap 2^d at confidence delta/3; more is a
           reject.
        2. route_samples points from the example distribution are routed
           through T_f of the projection at total confidence 2delta/3;
           a maximal monomial above d variables or a route deeper than
           route_cutoff is a reject.

    Example Usage:
        >>> session = OracleSession(tree, seed=7)
        >>> test_depth_distfree(session, DepthTesterParams(d=3, eps=0.25, delta=0.1)).decision
        'accept'
    """
    clock = Stopwatch()
    walks: List[Dict[str, object]] = []

    def report(decision: str, reason: str) -> TesterReport:
        return TesterReport(decision, reason, o.counters(), walks, p.to_dict(), getattr(o, "seed", None), clock.ms())

    try:
        try:
            relevant = find_relevant_vars(o, ProbeParams(p.d, p.delta / 3), cap=2 ** p.d)
        except TooManyRelevantError as e:
            return report(REJECT, f"more than {2 ** p.d} relevant variables ({len(e.found)} found)")
        mask = vars_mask(relevant)
        proj = ProjectedOracle(o, mask)
        per_route = (2 * p.delta / 3) / max(1, p.route_samples)
        for _ in range(p.route_samples):
            b, _ = o.example()
            try:
                trace = route_in_Tf(proj, b, mask, p.d, p.route_cutoff, per_route)
            except MonomialTooLargeError as e:
                walks.append({"depth": None, "verdict": TOO_LARGE})
                return report(REJECT, f"maximal monomial larger than {e.cap} variables")
            walks.append(trace.to_dict())
            if trace.verdict == EXCEEDED:
                return report(REJECT, f"route deeper than {p.route_cutoff}")
        log.info("depth tester accepted after %d routes (%.1f ms)", len(walks), clock.ms())
        return report(ACCEPT, f"{len(walks)} routes within depth {p.route_cutoff}")
    except BudgetExhaustedError as e:
        return report(INCONCLUSIVE, str(e))


# ============================================================================
# Size tester (uniform distribution)
# ============================================================================

def frequent_variable(H: FrozenSet[int], r: int) -> Optional[int]:
    """Smallest variable in at least a 1/(2r) fraction of H's non-constant monomials."""
    monomials = [m for m in H if m]
    if not monomials:
        return None
    counts: Dict[int, int] = {}
    for m in monomials:
        for v in mask_vars(m):
            counts[v] = counts.get(v, 0) + 1
    threshold = len(monomials) / (2 * r)
    for v in sorted(counts):
        if counts[v] >= threshold:
            return v
    return None


def _restrict_set(monomials: FrozenSet[int], var: int, xi: int) -> FrozenSet[int]:
    """Monomials of (sum of the set) with x_var <- xi, cancelling duplicates."""
    bit = 1 << var
    out: set = set()
    for m in monomials:
        if m & bit:
            if not xi:
                continue
            m &= ~bit
        out ^= {m}
    return frozenset(out)


def walk_step(
    state: WalkState,
    var: int,
    xi: int,
    origin: Optional[Tuple[F2Polynomial, F2Polynomial]] = None,
    r: Optional[int] = None,
) -> WalkState:
    """
    One substitution x_var <- xi of a size-tester walk.

    H' = M(H|) minus M(L|) and L' = M(L|) minus M(H|).

    Args:
        state: current walk state
        var, xi: substitution
        origin: (F, G) to assert sum(H') + sum(L') = F|q' + G|q'
        r: when given, var is a 1/(2r)-frequent variable of H and the
            shrinkage bounds are asserted

    Raises:
        InvariantError: an identity failed
    """
    h = _restrict_set(state.H, var, xi)
    l = _restrict_set(state.L, var, xi)
    new = WalkState(state.j + 1, state.q.extend(var, xi), h - l, l - h)
    if new.H & new.L:
        raise InvariantError(f"H and L intersect after step {new.j}")
    if origin is not None:
        F, G = origin
        lhs = F2Polynomial(new.H) + F2Polynomial(new.L)
        rhs = F.restrict(new.q) + G.restrict(new.q)
        if lhs != rhs:
            raise InvariantError(f"sum identity failed after step {new.j}")
    if r is not None:
        before = len(state.nonconstant_H())
        after = len(new.nonconstant_H())
        bound = (1 - 1 / (2 * r)) * before if xi == 0 else before
        if after > bound + 1e-9:
            raise InvariantError(f"H grew from {before} to {after} monomials on xi={xi}")
    return new


@dataclass(frozen=True)
class WalkOutcome:
    state: WalkState
    verdict: str  # "constant", "no-frequent-variable" or "cap"


def run_walk(
    F: F2Polynomial,
    G: F2Polynomial,
    r: int,
    cap: int,
    rng,
    check: bool = True,
) -> WalkOutcome:
    """One random walk from H_0 = M(F), L_0 = M(G) with uniform xi's."""
    state = WalkState(0, RestrictionSeq(), F.monomials, G.monomials)
    origin = (F, G) if check else None
    while not state.is_constant():
        if state.j >= cap:
            return WalkOutcome(state, "cap")
        var = frequent_variable(state.H, r)
        if var is None:
            return WalkOutcome(state, "no-frequent-variable")
        xi = int(rng.integers(2))
        state = walk_step(state, var, xi, origin, r if check else None)
    return WalkOutcome(state, "constant")


def estimate_sample_size(eps: float, delta: float) -> int:
    return math.ceil((setting("estimate_C") / eps) * math.log(2 / delta))


def estimate_prob_one(o: Oracle, q: RestrictionSeq, eps: float, delta: float) -> ProbVerdict:
    """
    Classify Pr[f_{|q} = 1] from ceil((32/eps) ln(2/delta)) uniform points.

    NearZero below eps/8, NearOne above 1 - eps/8, Middle otherwise.
    """
    m = estimate_sample_size(eps, delta)
    restricted = RestrictedOracle(o, q)
    ones = sum(restricted.query(x) for x in o.random_points(m))
    mean = ones / m
    if mean < eps / 8:
        return NearZero(mean)
    if mean > 1 - eps / 8:
        return NearOne(mean)
    return Middle(mean)


def test_size_uniform(o: Oracle, p: SizeTesterParams) -> TesterReport:
    """
    Uniform-distribution tester for size-s trees.

    Steps:
        1. T(x) = f(x XOR a) for a uniform a.
        2. Learn T's polynomial: projection onto at most s variables, then
           exact interpolation; more than s variables, or degree above
           the learning width (16 r' by default), is a reject.
        3. F = monomials of size 1..r', G = sizes (r', 16 r'].
        4. walk_repeats walks, each splitting on the smallest frequent
           variable of H; no frequent variable or reaching the walk cap is
           a reject.
        5. After each walk, Pr[T_{|q} = 1] in the middle band is a reject.

    Note:
        The constant monomial of T stays out of F and G; it only shifts
        every leaf value and the leaf check reads T itself.
    """
    clock = Stopwatch()
    walks: List[Dict[str, object]] = []
    params = p.to_dict()

    def report(decision: str, reason: str) -> TesterReport:
        return TesterReport(decision, reason, o.counters(), walks, params, getattr(o, "seed", None), clock.ms())

    try:
        a = o.random_point()
        shifted = ShiftedOracle(o, a)
        try:
            projection = find_close(shifted, p.s, p.eps / 4, p.delta / 3, c=2)
        except TooManyRelevantError as e:
            return report(REJECT, f"learning failed: more than {p.s} relevant variables ({len(e.found)} found)")
        proj = ProjectedOracle(shifted, projection.relevant_mask)
        poly = interpolate_poly(proj, projection.relevant)
        params["projected"] = [v + 1 for v in projection.relevant]
        width = p.width(len(projection.relevant))
        if poly.degree() > width:
            return report(REJECT, f"learning failed: degree {poly.degree()} above the learning width {width}")
        learned = low_degree_part(poly, Interval(0, width))
        F = low_degree_part(learned, Interval(1, p.r_prime))
        G = low_degree_part(learned, Interval(p.r_prime, width, lo_open=True))
        log.info("size tester learned %d monomials (|F|=%d, |G|=%d)", len(learned), len(F), len(G))

        per_estimate = (p.delta / 3) / max(1, p.walk_repeats)
        for _ in range(p.walk_repeats):
            outcome = run_walk(F, G, p.r, p.cap, o.rng)
            walk = {"depth": outcome.state.j, "verdict": outcome.verdict}
            walks.append(walk)
            if outcome.verdict == "no-frequent-variable":
                return report(REJECT, f"no variable in 1/{2 * p.r} of the monomials at step {outcome.state.j}")
            if outcome.verdict == "cap":
                return report(REJECT, f"walk reached the cap of {p.cap} steps")
            estimate = estimate_prob_one(proj, outcome.state.q, p.eps, per_estimate)
            walk["leaf_mean"] = round(estimate.mean, 6)
            if isinstance(estimate, Middle):
                return report(REJECT, f"leaf probability {estimate.mean:.4f} inside [eps/4, 1-eps/4]")
        return report(ACCEPT, f"{len(walks)} walks ended at near-constant leaves")
    except BudgetExhaustedError as e:
        return report(INCONCLUSIVE, str(e))


# ============================================================================
# Appendix tester
# ============================================================================

def appendix_walk_cap(d: int, eps: float, sparsity: int) -> int:
    """D = ceil(16 (d ln s + ln(1/eps))) with s the psize of the learned polynomial."""
    return math.ceil(16 * (d * math.log(max(1, sparsity)) + math.log(1 / eps)))


def greedy_variable(g: F2Polynomial) -> int:
    """
    Smallest variable i minimizing psize(g with x_i <- 0).

    Zeroing x_i removes exactly the monomials containing it, so this is the
    variable in the most non-constant monomials.
    """
    counts: Dict[int, int] = {}
    for m in g.nonconstant_monomials():
        for v in mask_vars(m):
            counts[v] = counts.get(v, 0) + 1
    best = max(counts.values())
    return min(v for v, k in counts.items() if k == best)


@dataclass(frozen=True)
class AppendixWalk:
    depth: int
    zero_edges: int
    value: int
    exceeded: bool


def appendix_walk(f: F2Polynomial, a: int, b: int, cap: int) -> AppendixWalk:
    """
    Walk g = f(x XOR a) down its psize-greedy tree along c = a XOR b.

    Raises:
        InvariantError: the leaf value differs from f(b)
    """
    g = f.shift(a)
    c = a ^ b
    depth = 0
    zeros = 0
    while not g.is_constant():
        if depth == cap:
            return AppendixWalk(depth, zeros, -1, True)
        var = greedy_variable(g)
        bit = (c >> var) & 1
        g = g.restrict(RestrictionSeq(((var, bit),)))
        depth += 1
        zeros += bit == 0
    value = g.constant_value()
    if value != f.evaluate(b):
        raise InvariantError(f"walk leaf {value} differs from f(b) = {f.evaluate(b)}")
    return AppendixWalk(depth, zeros, value, False)


def appendix_verify_size(eps: float, delta: float) -> int:
    return math.ceil((setting("appendix_verify_C") / eps) * math.log(4 / delta))


def test_depth_appendix(o: Oracle, d: int, eps: float, delta: float) -> TesterReport:
    """
    Tester for depth-d trees through a learned sparse polynomial.

    Steps:
        1. Projection onto at most 2^d variables (eps/8, delta/4) and exact
           interpolation; more than 4^d monomials or degree above d is a
           reject.
        2. Reject if the polynomial disagrees with f on at least eps/4 of
           ceil((48/eps) ln(4/delta)) examples.
        3. ceil(4/eps) walks with b from the example distribution and a
           uniform shift a; a walk longer than D is a reject.
    """
    if d < 0:
        raise ValueError(f"Invalid d: {d}. Valid values are >= 0")
    if not 0 < eps < 1 or not 0 < delta < 1:
        raise ValueError(f"Invalid eps/delta: {eps}/{delta}. Valid values are in (0, 1)")
    clock = Stopwatch()
    walks: List[Dict[str, object]] = []
    params: Dict[str, object] = {"d": d, "eps": eps, "delta": delta}

    def report(decision: str, reason: str) -> TesterReport:
        return TesterReport(decision, reason, o.counters(), walks, params, getattr(o, "seed", None), clock.ms())

    try:
        try:
            projection = find_close(o, 2 ** d, eps / 8, delta / 4, c=2)
        except TooManyRelevantError as e:
            return report(REJECT, f"learning failed: more than {2 ** d} relevant variables ({len(e.found)} found)")
        learned = interpolate_poly(ProjectedOracle(o, projection.relevant_mask), projection.relevant)
        if len(learned) > 4 ** d:
            return report(REJECT, f"learning failed: {len(learned)} monomials, more than {4 ** d}")
        if learned.degree() > d:
            return report(REJECT, f"learning failed: degree {learned.degree()} above {d}")

        m = appendix_verify_size(eps, delta)
        mistakes = 0
        for _ in range(m):
            x, y = o.example()
            mistakes += learned.evaluate(x) != y
        rate = mistakes / m
        params["verify_disagreement"] = round(rate, 6)
        if rate >= eps / 4:
            return report(REJECT, f"learned polynomial disagrees on {rate:.4f} of verification samples")

        sparsity = len(learned.nonconstant_monomials())
        cap = appendix_walk_cap(d, eps, sparsity)
        params["walk_cap"] = cap
        for _ in range(math.ceil(4 / eps)):
            b, _ = o.example()
            a = o.random_point()
            walk = appendix_walk(learned, a, b, cap)
            walks.append({"depth": walk.depth, "zero_edges": walk.zero_edges,
                          "verdict": EXCEEDED if walk.exceeded else LEAF})
            if walk.exceeded:
                return report(REJECT, f"walk deeper than {cap}")
        return report(ACCEPT, f"{len(walks)} walks within depth {cap}")
    except BudgetExhaustedError as e:
        return report(INCONCLUSIVE, str(e))
