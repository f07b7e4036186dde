"""
Structural diagnostics on explicit functions.

Brute-force builders and checks used to validate the query algorithms:
the maximal-monomial tree T_f, the psize-greedy tree of a shift, route
oracles, and the counting statements behind the testers' analysis.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.algebra import cd, maximal_monomials
from src.boolfn import (
    DecisionTree,
    DisjointTermSum,
    F2Polynomial,
    Internal,
    Leaf,
    Node,
    RestrictionSeq,
    leaf,
    mask_vars,
    popcount,
    submasks,
    tree_to_poly,
)
from src.errors import NotWithinCapError
from src.learners import compress_truth_table, min_depth_from_truth_table
from src.testers import EXCEEDED, RouteTrace, greedy_variable


def _fix(g: F2Polynomial, var: int, bit: int) -> F2Polynomial:
    return g.restrict(RestrictionSeq(((var, bit),)))


def _first_maximal(g: F2Polynomial) -> int:
    return next(m for m in maximal_monomials(g) if m)


# ============================================================================
# Tree builders
# ============================================================================

def build_monomial_tree(f: F2Polynomial, n: Optional[int] = None) -> DecisionTree:
    """
    T_f over an explicit polynomial.

    At every node the first maximal monomial (canonical order) of the
    current restriction is expanded into a complete subtree over its
    variables; each of its leaves continues with the restricted polynomial.
    """
    n = f.n if n is None else n

    def build(g: F2Polynomial) -> Node:
        if g.is_constant():
            return leaf(g.constant_value())
        return expand(g, mask_vars(_first_maximal(g)), 0)

    def expand(g: F2Polynomial, variables: Tuple[int, ...], i: int) -> Node:
        if i == len(variables):
            return build(g)
        v = variables[i]
        return Internal(v, expand(_fix(g, v, 0), variables, i + 1), expand(_fix(g, v, 1), variables, i + 1))

    return DecisionTree(n, build(f))


def symbolic_route(f: F2Polynomial, b: int, cutoff: int) -> RouteTrace:
    """Route of b in build_monomial_tree(f), stopping once depth exceeds cutoff."""
    trace = RouteTrace(depth=0)
    g = f
    while not g.is_constant():
        monomial = _first_maximal(g)
        trace.monomials.append(monomial)
        for v in mask_vars(monomial):
            bit = (b >> v) & 1
            trace.q = trace.q.extend(v, bit)
            g = _fix(g, v, bit)
            trace.depth += 1
            if trace.depth > cutoff:
                trace.verdict = EXCEEDED
                return trace
    return trace


def build_psize_tree(f: F2Polynomial, a: int = 0, n: Optional[int] = None) -> DecisionTree:
    """T_{f,a}: the psize-greedy tree of g(x) = f(x XOR a); T_{f,a}(b XOR a) = f(b)."""
    n = max(f.n, a.bit_length()) if n is None else n

    def build(g: F2Polynomial) -> Node:
        if g.is_constant():
            return leaf(g.constant_value())
        v = greedy_variable(g)
        return Internal(v, build(_fix(g, v, 0)), build(_fix(g, v, 1)))

    return DecisionTree(n, build(f.shift(a)))


def zero_depth(tree: DecisionTree) -> int:
    """Largest number of 0-edges on a root-to-leaf path."""

    def walk(node: Node) -> int:
        if isinstance(node, Leaf):
            return 0
        return max(1 + walk(node.lo), walk(node.hi))

    return walk(tree.root)


# ============================================================================
# Bounds
# ============================================================================

def psize_tree_depth_bound(d: int, s: int) -> float:
    """Depth bound d^2 ln(d s) of the psize-greedy tree of a depth-d tree."""
    return d * d * math.log(max(1, d * s))


def random_path_bound(d: int, s: int, eps: float) -> float:
    """Random-path length bound 16 (d ln s + ln(1/eps))."""
    return 16 * (d * math.log(max(1, s)) + math.log(1 / eps))


def zero_depth_bound(d: int, s: int) -> float:
    return d * math.log(max(1, s)) + 1


def small_monomial_bound(s: int, eps: float, lam: int) -> float:
    """Bound s (s/eps)^(16 lam) on the monomials of size <= 4 lam r."""
    return s * (s / eps) ** (16 * lam)


# ============================================================================
# Checks
# ============================================================================

def depth_drop_violations(t: DecisionTree, d: int) -> List[Tuple[int, int]]:
    """
    (monomial, pattern) pairs where fixing a maximal monomial of a depth-d
    tree leaves a function of minimal depth above d - 1.
    """
    poly = tree_to_poly(t)
    table = t.truth_table()
    violations = []
    for monomial in maximal_monomials(poly):
        if not monomial:
            continue
        variables = mask_vars(monomial)
        for pattern in submasks(monomial):
            restricted = table.restrict(RestrictionSeq.from_point(variables, pattern))
            compressed, _ = compress_truth_table(restricted)
            if min_depth_from_truth_table(compressed) > d - 1:
                violations.append((monomial, pattern))
    return violations


@dataclass(frozen=True)
class TreePolyStats:
    monomials: int
    degree: int
    relevant: int

    def within(self, d: int) -> bool:
        return self.monomials <= 3 ** d and self.degree <= d and self.relevant <= 2 ** d


def tree_poly_stats(t: DecisionTree) -> TreePolyStats:
    poly = tree_to_poly(t)
    return TreePolyStats(len(poly), poly.degree(), len(t.variables()))


def shift_event(dts: DisjointTermSum, a: int, long_term: float, min_positive: float) -> bool:
    """
    Every term of the shifted sum with more than long_term literals keeps at
    least min_positive positive literals.

    Shifting by a flips the polarity of the literals on a's variables.
    """
    for t in dts.terms:
        if t.literal_count() <= long_term:
            continue
        positive = (t.pos & ~a) | (t.neg & a)
        if popcount(positive) < min_positive:
            return False
    return True


def shift_event_holds(dts: DisjointTermSum, a: int, s: int, eps: float, lam: int) -> bool:
    """The event at thresholds 16 lam r and 4 lam r with r = log2(s/eps)."""
    r = math.log2(s / eps)
    return shift_event(dts, a, 16 * lam * r, 4 * lam * r)


def shift_event_failure_bound(s: int, eps: float, lam: int) -> float:
    return s * (eps / s) ** lam


def small_monomial_count(f: F2Polynomial, size: float) -> int:
    return sum(1 for m in f.monomials if popcount(m) <= size)


def cd_within(f: F2Polynomial, h: int) -> bool:
    """cd(f) <= h."""
    try:
        cd(f, h)
    except NotWithinCapError:
        return False
    return True


def restricted_cd_trial(t: DecisionTree, a: int, q: RestrictionSeq, h: int) -> bool:
    """cd of the shifted tree under q is at most h."""
    return cd_within(tree_to_poly(t).shift(a).restrict(q), h)


def restricted_cd_failure_bound(s: int, h: int) -> float:
    return s * 2.0 ** (-h)
