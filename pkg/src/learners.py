"""
Decision Tree Learners (learners.py)

Proper, exact and non-proper learners for depth-d, size-s and depth-d
size-s decision trees, plus the exact truth-table optimiser used as ground
truth everywhere else.

Features:
- consis: memoised search over restriction cells for a smallest consistent
  depth-bounded tree
- Occam sample sizes with the |DT^s| <= (8n)^s bound
- distribution-free, uniform-distribution and exact learners, each with a
  projection-reduced variant whose query count does not grow with n
- (n, d)-universal sets: randomized construction plus exhaustive check
- min_dt_from_truth_table: exact DP over subcubes
- the root-guessing non-proper learner and exhaustive search

Requirements:
- Samples are stored as Python int bitsets over sample indices, so a cell
  split is a single AND per variable.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra import ProbeParams, find_relevant_vars
from src.boolfn import (
    BooleanFunction,
    DecisionTree,
    Internal,
    Leaf,
    Node,
    TruthTable,
    leaf,
    random_points,
)
from src.config import setting
from src.errors import DtlabError, EnumerationCapError, NotInClassError
from src.oracle import Oracle, UniformExampleOracle
from src.reductions import find_close, reduce_learner

log = logging.getLogger(__name__)


# ============================================================================
# Types
# ============================================================================

class Objective(str, Enum):
    MIN_SIZE = "min-size"
    MIN_DEPTH = "min-depth"
    MIN_DEPTH_THEN_SIZE = "min-depth-then-size"


@dataclass(frozen=True)
class Sample:
    """Labeled points; contradictory labels are allowed and make consis fail."""

    n: int
    pairs: Tuple[Tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_function(cls, f: BooleanFunction, points: Iterable[int]) -> "Sample":
        return cls(f.n, tuple((x, f.evaluate(x)) for x in points))

    @classmethod
    def full_table(cls, f: BooleanFunction) -> "Sample":
        return cls.from_function(f, range(1 << f.n))

    @classmethod
    def draw(cls, o: Oracle, m: int) -> "Sample":
        return cls(o.n, tuple(o.example() for _ in range(m)))

    def is_consistent(self, t: BooleanFunction) -> bool:
        return all(t.evaluate(x) == y for x, y in self.pairs)


@dataclass(frozen=True)
class LearnParams:
    """Size budget s, depth budget d, accuracy eps, confidence delta."""

    s: int
    d: int
    eps: float
    delta: float
    occam_C: float = field(default_factory=lambda: setting("occam_C"))

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"Invalid size budget: {self.s}. Valid budgets are >= 1")
        if self.d < 0:
            raise ValueError(f"Invalid depth budget: {self.d}. Valid budgets are >= 0")
        if not 0 < self.eps < 1 or not 0 < self.delta < 1:
            raise ValueError(f"Invalid eps/delta: {self.eps}/{self.delta}. Valid values are in (0, 1)")


@dataclass(frozen=True)
class UniversalSet:
    n: int
    d: int
    points: Tuple[int, ...]
    verified: bool


Learner = Callable[..., DecisionTree]


def _variables(o_n: int, variables: Optional[Sequence[int]]) -> Tuple[int, ...]:
    return tuple(range(o_n)) if variables is None else tuple(sorted(variables))


def relabel(node: Node, mapping: Sequence[int]) -> Node:
    """Rename variable i to mapping[i] throughout a tree."""
    if isinstance(node, Leaf):
        return node
    return Internal(mapping[node.var], relabel(node.lo, mapping), relabel(node.hi, mapping))


# ============================================================================
# Consis
# ============================================================================

class _Cells:
    """Bitset view of a sample: ones[v] holds the indices with x_v = 1."""

    def __init__(self, sample: Sample, variables: Sequence[int]):
        self.variables = tuple(variables)
        self.full = (1 << len(sample)) - 1
        self.labels = 0
        self.ones: Dict[int, int] = {v: 0 for v in self.variables}
        for i, (x, y) in enumerate(sample.pairs):
            bit = 1 << i
            if y:
                self.labels |= bit
            for v in self.variables:
                if (x >> v) & 1:
                    self.ones[v] |= bit

    def constant(self, cell: int) -> Optional[Leaf]:
        positives = cell & self.labels
        if positives == 0:
            return LEAF_ZERO
        if positives == cell:
            return LEAF_ONE
        return None

    def split(self, cell: int, v: int) -> Tuple[int, int]:
        hi = cell & self.ones[v]
        return cell & ~hi, hi


LEAF_ZERO = leaf(0)
LEAF_ONE = leaf(1)


@dataclass
class ConsisStats:
    cells: int = 0


def _consis_min_size(cells: _Cells, d: int, stats: ConsisStats) -> Optional[Tuple[int, Node]]:
    memo: Dict[Tuple[int, int], Optional[Tuple[int, Node]]] = {}

    def solve(fixed: int, pattern: int, cell: int, depth_left: int) -> Optional[Tuple[int, Node]]:
        key = (fixed, pattern)
        if key in memo:
            return memo[key]
        const = cells.constant(cell)
        if const is not None:
            best: Optional[Tuple[int, Node]] = (1, const)
        elif depth_left == 0:
            best = None
        else:
            best = None
            for v in cells.variables:
                bit = 1 << v
                if fixed & bit:
                    continue
                lo_cell, hi_cell = cells.split(cell, v)
                if not lo_cell or not hi_cell:
                    continue
                lo = solve(fixed | bit, pattern, lo_cell, depth_left - 1)
                if lo is None or (best is not None and lo[0] + 1 >= best[0]):
                    continue
                hi = solve(fixed | bit, pattern | bit, hi_cell, depth_left - 1)
                if hi is None:
                    continue
                size = lo[0] + hi[0]
                if best is None or size < best[0]:
                    best = (size, Internal(v, lo[1], hi[1]))
        memo[key] = best
        return best

    result = solve(0, 0, cells.full, d)
    stats.cells += len(memo)
    return result


def consis(
    sample: Sample,
    n: int,
    d: int,
    objective: Objective = Objective.MIN_SIZE,
    variables: Optional[Sequence[int]] = None,
    stats: Optional[ConsisStats] = None,
) -> Optional[DecisionTree]:
    """
    Smallest tree of depth at most d consistent with the sample.

    Args:
        sample: labeled points
        n: variable count of the output tree
        d: depth budget
        objective: MIN_SIZE, or MIN_DEPTH (smallest j <= d that admits a
            consistent tree, then smallest size at that depth)
        variables: candidate split variables (default all n)
        stats: receives the number of memoised cells

    Returns:
        DecisionTree or None when no depth-d tree fits (always None on a
        contradictory sample)

    Note:
        Cells are keyed by (fixed-variable set, pattern) and only non-empty
        cells are ever created. Among equal-size roots the smallest variable
        index wins.
    """
    stats = stats if stats is not None else ConsisStats()
    cells = _Cells(sample, _variables(n, variables))
    if objective == Objective.MIN_SIZE:
        depths: Iterable[int] = (d,)
    elif objective == Objective.MIN_DEPTH:
        depths = range(d + 1)
    else:
        raise ValueError(f"Invalid objective: {objective}. Valid objectives are: min-size, min-depth")
    for j in depths:
        found = _consis_min_size(cells, j, stats)
        if found is not None:
            tree = DecisionTree(n, found[1])
            if not sample.is_consistent(tree):
                raise DtlabError("consis produced an inconsistent tree")
            return tree
    return None


# ============================================================================
# Occam sample sizes
# ============================================================================

def occam_sample_size(logH_bits: float, eps: float, delta: float, C: Optional[float] = None) -> int:
    """ceil((C/eps) (logH ln 2 + ln(1/delta)))."""
    C = setting("occam_C") if C is None else C
    return math.ceil((C / eps) * (logH_bits * math.log(2) + math.log(1.0 / delta)))


def dt_log_size(n: int, s: int) -> float:
    """log2 of the (8n)^s bound on the number of size-s trees over n variables."""
    return s * math.log2(setting("tree_count_base") * max(1, n))


@lru_cache(maxsize=None)
def eh89_size_bound(n: int, s: int) -> int:
    """S(n, s) = S(n-1, floor(s/2)) + S(n-1, s), S(0, s) = S(n, 1) = 1."""
    if n <= 0 or s <= 1:
        return 1
    return eh89_size_bound(n - 1, s // 2) + eh89_size_bound(n - 1, s)


@lru_cache(maxsize=None)
def eh89_search_bound(n: int, s: int) -> int:
    """phi(n, s) = 2n phi(n-1, floor(s/2)) + phi(n-1, s)."""
    if n <= 0 or s <= 1:
        return 1
    return 2 * n * eh89_search_bound(n - 1, s // 2) + eh89_search_bound(n - 1, s)


# ============================================================================
# Distribution-free proper learners
# ============================================================================

def _fit(sample: Sample, n: int, d: int, s: int, variables: Sequence[int]) -> DecisionTree:
    stats = ConsisStats()
    tree = consis(sample, n, d, Objective.MIN_SIZE, variables, stats)
    log.debug("consis over %d examples visited %d cells", len(sample), stats.cells)
    if tree is None or tree.size() > s:
        raise NotInClassError(f"no tree of depth <= {d} and size <= {s} fits {len(sample)} examples")
    return tree


def learn_dtds_distfree(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    """
    Occam learner for depth-d size-s trees under the example distribution.

    Draws occam_sample_size(log|DT_d^s|, eps, delta) examples and returns
    the smallest consistent depth-d tree.
    """
    variables = _variables(o.n, variables)
    q = occam_sample_size(dt_log_size(len(variables), p.s), p.eps, p.delta, p.occam_C)
    return _fit(Sample.draw(o, q), o.n, p.d, p.s, variables)


def learn_dts_distfree(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    """Occam learner for size-s trees; a size-s tree has depth at most s - 1."""
    variables = _variables(o.n, variables)
    q = occam_sample_size(dt_log_size(len(variables), p.s), p.eps, p.delta, p.occam_C)
    depth = min(p.s - 1, len(variables))
    return _fit(Sample.draw(o, q), o.n, depth, p.s, variables)


def learn_dtds_reduced(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    return reduce_learner(learn_dtds_distfree)(o, p, variables)


def learn_dts_reduced(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    return reduce_learner(learn_dts_distfree)(o, p, variables)


# ============================================================================
# Exact learners
# ============================================================================

def exact_learn_dtds(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    """
    Exact learner: the reduced Occam learner at eps = 1/2^(d+2) on uniform
    examples. Two different depth-d trees disagree on at least 2^-d of the
    cube, so an eps-close depth-d hypothesis is the target itself.
    """
    exact = replace(p, eps=1.0 / 2 ** (p.d + 2))
    return learn_dtds_reduced(UniformExampleOracle(o), exact, variables)


def exact_from_uniform(inner: Learner) -> Learner:
    """Turn any learner for depth-d trees into an exact one (eps = 1/2^(d+1), uniform examples)."""

    def learner(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
        return inner(UniformExampleOracle(o), replace(p, eps=1.0 / 2 ** (p.d + 1)), variables)

    learner.__name__ = f"exact_{getattr(inner, '__name__', 'learner')}"
    return learner


def universal_set_size(n: int, d: int, delta: float) -> int:
    return math.ceil(2 ** d * (d * math.log(max(n, 1)) + math.log(1.0 / delta)))


def verify_universal_set(points: Sequence[int], n: int, d: int) -> bool:
    """Every d coordinates see all 2^d patterns among the points."""
    if d == 0:
        return len(points) > 0
    if len(points) < 2 ** d:
        return False
    work = math.comb(n, d) * len(points)
    cap = 1 << setting("exact_cap")
    if work > cap:
        raise EnumerationCapError("universal set check", n, setting("exact_cap"))
    bits = np.array([[(x >> i) & 1 for i in range(n)] for x in points], dtype=np.int64)
    weights = 1 << np.arange(d, dtype=np.int64)
    for combo in combinations(range(n), d):
        codes = bits[:, list(combo)] @ weights
        if np.unique(codes).size < 2 ** d:
            return False
    return True


def gen_universal_set(n: int, d: int, delta: float, rng: np.random.Generator, verify: bool = True) -> UniversalSet:
    """
    (n, d)-universal set.

    n == d gives the full cube. Otherwise draws
    ceil(2^d (d ln n + ln(1/delta))) uniform points, which cover every
    pattern with probability at least 1 - delta.
    """
    if not 0 <= d <= n:
        raise ValueError(f"Invalid d: {d}. Valid values are 0..{n}")
    if d == n:
        points = tuple(range(1 << n))
    else:
        points = tuple(random_points(rng, n, universal_set_size(n, d, delta)))
    verified = verify_universal_set(points, n, d) if verify else False
    return UniversalSet(n, d, points, verified)


def exact_learn_universal(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    """
    Exact learner from a verified universal set.

    Finds the relevant variables V (at most 2^d for a depth-d tree), builds a
    verified (|V|, 2d)-universal set on V, queries f there and runs consis.
    Two different depth-d trees over V differ on a pattern of at most 2d
    coordinates, which the set hits, so only the target fits.
    """
    relevant = find_relevant_vars(o, ProbeParams(p.d, p.delta / 2), cap=2 ** p.d)
    if not relevant:
        return DecisionTree(o.n, leaf(o.query(0)))
    k = len(relevant)
    width = min(2 * p.d, k)
    universal = None
    for _ in range(setting("universal_set_attempts")):
        candidate = gen_universal_set(k, width, p.delta / 2, o.rng)
        if candidate.verified:
            universal = candidate
            break
    if universal is None:
        raise DtlabError(f"could not verify a ({k},{width})-universal set")
    points = []
    for local in universal.points:
        x = 0
        for j, v in enumerate(relevant):
            if (local >> j) & 1:
                x |= 1 << v
        points.append(x)
    sample = Sample(o.n, tuple((x, o.query(x)) for x in points))
    return _fit(sample, o.n, p.d, p.s, relevant)


def exact_learn_min_tree(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    """
    Exact minimal tree for a size-s target: project on uniform examples,
    read the full truth table over the kept variables, optimise it.
    """
    src = UniformExampleOracle(o)
    projection = find_close(src, p.s, 1.0 / 2 ** p.s, p.delta, c=2)
    relevant = projection.relevant
    k = len(relevant)
    values = np.zeros(1 << k, dtype=np.uint8)
    for local in range(1 << k):
        x = 0
        for j, v in enumerate(relevant):
            if (local >> j) & 1:
                x |= 1 << v
        values[local] = o.query(x)
    best = min_dt_from_truth_table(TruthTable(k, values))
    tree = DecisionTree(o.n, relabel(best.root, relevant))
    if tree.size() > p.s:
        raise NotInClassError(f"minimal tree has size {tree.size()} > {p.s}")
    return tree


# ============================================================================
# Truth-table optimiser
# ============================================================================

class _SubcubeDP:
    """Memoised search over subcubes (mask of fixed variables, their values)."""

    def __init__(self, tt: TruthTable):
        self.n = tt.n
        self.cube = tt.values.reshape((2,) * tt.n) if tt.n else tt.values
        self.depth_memo: Dict[Tuple[int, int], int] = {}
        self.size_memo: Dict[Tuple[int, int, int], Optional[Tuple[int, Node]]] = {}

    def _sub(self, mask: int, ones: int) -> np.ndarray:
        if self.n == 0:
            return self.cube
        index = tuple(
            ((ones >> (self.n - 1 - a)) & 1) if (mask >> (self.n - 1 - a)) & 1 else slice(None)
            for a in range(self.n)
        )
        return np.asarray(self.cube[index])

    def _split_vars(self, mask: int, ones: int, sub: np.ndarray) -> List[int]:
        """Free variables the subfunction depends on, ascending."""
        out = []
        free_axes = [a for a in range(self.n) if not (mask >> (self.n - 1 - a)) & 1]
        for pos, a in enumerate(free_axes):
            if not np.array_equal(np.take(sub, 0, axis=pos), np.take(sub, 1, axis=pos)):
                out.append(self.n - 1 - a)
        return sorted(out)

    def min_depth(self, mask: int = 0, ones: int = 0) -> int:
        key = (mask, ones)
        if key in self.depth_memo:
            return self.depth_memo[key]
        sub = self._sub(mask, ones)
        if sub.min() == sub.max():
            best = 0
        else:
            best = self.n + 1
            for v in self._split_vars(mask, ones, sub):
                bit = 1 << v
                lo = self.min_depth(mask | bit, ones)
                if lo + 1 >= best:
                    continue
                hi = self.min_depth(mask | bit, ones | bit)
                best = min(best, 1 + max(lo, hi))
        self.depth_memo[key] = best
        return best

    def min_size(self, mask: int, ones: int, budget: int) -> Optional[Tuple[int, Node]]:
        key = (mask, ones, budget)
        if key in self.size_memo:
            return self.size_memo[key]
        sub = self._sub(mask, ones)
        if sub.min() == sub.max():
            best: Optional[Tuple[int, Node]] = (1, leaf(int(sub.flat[0])))
        elif budget == 0:
            best = None
        else:
            best = None
            for v in self._split_vars(mask, ones, sub):
                bit = 1 << v
                lo = self.min_size(mask | bit, ones, budget - 1)
                if lo is None or (best is not None and lo[0] + 1 >= best[0]):
                    continue
                hi = self.min_size(mask | bit, ones | bit, budget - 1)
                if hi is None:
                    continue
                if best is None or lo[0] + hi[0] < best[0]:
                    best = (lo[0] + hi[0], Internal(v, lo[1], hi[1]))
        self.size_memo[key] = best
        return best


def min_dt_from_truth_table(tt: TruthTable, objective: Objective = Objective.MIN_SIZE) -> DecisionTree:
    """
    Globally minimal decision tree for a truth table.

    Args:
        tt: truth table, n <= truth_table_dp_cap
        objective: MIN_SIZE, or MIN_DEPTH_THEN_SIZE (smallest depth, then the
            smallest size at that depth)

    Returns:
        DecisionTree over tt.n variables
    """
    cap = setting("truth_table_dp_cap")
    if tt.n > cap:
        raise EnumerationCapError("truth-table DP", tt.n, cap)
    dp = _SubcubeDP(tt)
    if objective == Objective.MIN_SIZE:
        budget = tt.n
    elif objective in (Objective.MIN_DEPTH_THEN_SIZE, Objective.MIN_DEPTH):
        budget = dp.min_depth()
    else:
        raise ValueError(f"Invalid objective: {objective}")
    found = dp.min_size(0, 0, budget)
    return DecisionTree(tt.n, found[1])


def min_depth_from_truth_table(tt: TruthTable) -> int:
    cap = setting("truth_table_dp_cap")
    if tt.n > cap:
        raise EnumerationCapError("truth-table DP", tt.n, cap)
    return _SubcubeDP(tt).min_depth()


def compress_truth_table(tt: TruthTable) -> Tuple[TruthTable, Tuple[int, ...]]:
    """Truth table over the relevant variables only, and the variable map."""
    relevant = tt.relevant_variables()
    k = len(relevant)
    idx = np.arange(1 << k, dtype=np.int64)
    points = np.zeros(1 << k, dtype=np.int64)
    for j, v in enumerate(relevant):
        points |= ((idx >> j) & 1) << v
    return TruthTable(k, tt.values[points]), relevant


# ============================================================================
# Uniform-distribution learner for size-s trees
# ============================================================================

def selection_sample_size(eps: float, delta: float, candidates: int) -> int:
    return math.ceil((setting("selection_C") / eps) * math.log(2 * max(1, candidates) / delta))


def learn_dts_uniform(
    o: Oracle,
    p: LearnParams,
    variables: Optional[Sequence[int]] = None,
    stats: Optional[Dict[str, int]] = None,
) -> DecisionTree:
    """
    Size-s learner on uniform examples with a depth-2log(m) hypothesis.

    Each of ceil(log2(2/delta)) runs draws m examples (Occam at eps/10,
    confidence 1/2) and fits the smallest consistent tree of depth
    2 ceil(log2 m). A selection round on fresh examples keeps the candidate
    with the fewest disagreements.
    """
    variables = _variables(o.n, variables)
    runs = max(1, math.ceil(math.log2(2 / p.delta)))
    m = occam_sample_size(dt_log_size(len(variables), p.s), p.eps / 10, 0.5, p.occam_C)
    depth = min(2 * math.ceil(math.log2(max(2, m))), len(variables))
    candidates: List[DecisionTree] = []
    failures = 0
    for _ in range(runs):
        sample = Sample.draw(o, m)
        tree = consis(sample, o.n, depth, Objective.MIN_SIZE, variables)
        if tree is None or tree.size() > p.s:
            failures += 1
            continue
        candidates.append(tree)
    if stats is not None:
        stats.update({"runs": runs, "consis_failures": failures, "sample_size": m, "depth": depth})
    if not candidates:
        raise NotInClassError(f"no size-{p.s} tree of depth {depth} fit any of {runs} samples")
    if len(candidates) == 1:
        return candidates[0]
    q = selection_sample_size(p.eps, p.delta, len(candidates))
    check = Sample.draw(o, q)
    mistakes = [sum(t.evaluate(x) != y for x, y in check.pairs) for t in candidates]
    return candidates[int(np.argmin(mistakes))]


def learn_dts_uniform_reduced(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    return reduce_learner(learn_dts_uniform)(o, p, variables)


# ============================================================================
# Non-proper and exhaustive learners
# ============================================================================

def learn_nonproper_eh89(sample: Sample, s: int, variables: Optional[Sequence[int]] = None) -> Optional[DecisionTree]:
    """
    Consistent tree of size at most S(n, s) when a size-s tree fits.

    Guesses the root variable and which subtree is the small one (size at
    most floor(s/2)); builds the small side with budget floor(s/2), then the
    other side with budget s, each without the root variable.
    """
    cells = _Cells(sample, _variables(sample.n, variables))
    memo: Dict[Tuple[int, int, Tuple[int, ...]], Optional[Node]] = {}

    def build(cell: int, budget: int, avail: Tuple[int, ...]) -> Optional[Node]:
        key = (cell, budget, avail)
        if key in memo:
            return memo[key]
        const = cells.constant(cell)
        result: Optional[Node] = const
        if const is None and budget > 1:
            for v in avail:
                lo_cell, hi_cell = cells.split(cell, v)
                if not lo_cell or not hi_cell:
                    continue
                rest = tuple(u for u in avail if u != v)
                for small_cell, big_cell, small_is_lo in ((lo_cell, hi_cell, True), (hi_cell, lo_cell, False)):
                    small = build(small_cell, budget // 2, rest)
                    if small is None:
                        continue
                    big = build(big_cell, budget, rest)
                    if big is None:
                        continue
                    result = Internal(v, small, big) if small_is_lo else Internal(v, big, small)
                    break
                if result is not None:
                    break
        memo[key] = result
        return result

    root = build(cells.full, s, cells.variables)
    if root is None:
        return None
    return DecisionTree(sample.n, root)


def learn_nonproper_distfree(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    """PAC wrapper: Occam sample for trees of size S(n, s), then the root-guessing learner."""
    variables = _variables(o.n, variables)
    k = len(variables)
    logH = eh89_size_bound(k, p.s) * math.log2(setting("tree_count_base") * max(1, k))
    q = occam_sample_size(logH, p.eps, p.delta, p.occam_C)
    tree = learn_nonproper_eh89(Sample.draw(o, q), p.s, variables)
    if tree is None:
        raise NotInClassError(f"no size-{p.s} tree fits {q} examples")
    return tree


def learn_nonproper_reduced(o: Oracle, p: LearnParams, variables: Optional[Sequence[int]] = None) -> DecisionTree:
    return reduce_learner(learn_nonproper_distfree)(o, p, variables)


def exhaustive_learn(sample: Sample, s: int, variables: Optional[Sequence[int]] = None) -> Optional[DecisionTree]:
    """
    First consistent tree in order of increasing size, up to s leaves.

    Every (variable, left size) choice is tried at every node; cells prune
    subtrees that are already constant. Returns a minimum-size tree.
    """
    cells = _Cells(sample, _variables(sample.n, variables))
    memo: Dict[Tuple[int, int, Tuple[int, ...]], Optional[Tuple[int, Node]]] = {}

    def search(cell: int, k: int, avail: Tuple[int, ...]) -> Optional[Tuple[int, Node]]:
        key = (cell, k, avail)
        if key in memo:
            return memo[key]
        const = cells.constant(cell)
        found: Optional[Tuple[int, Node]] = (1, const) if const is not None else None
        if found is None and k > 1:
            for v in avail:
                lo_cell, hi_cell = cells.split(cell, v)
                if not lo_cell or not hi_cell:
                    continue
                rest = tuple(u for u in avail if u != v)
                for left in range(1, k):
                    lo = search(lo_cell, left, rest)
                    if lo is None:
                        continue
                    hi = search(hi_cell, k - lo[0], rest)
                    if hi is not None:
                        found = (lo[0] + hi[0], Internal(v, lo[1], hi[1]))
                        break
                if found is not None:
                    break
        memo[key] = found
        return found

    for k in range(1, s + 1):
        result = search(cells.full, k, cells.variables)
        if result is not None:
            return DecisionTree(sample.n, result[1])
    return None
