"""
Membership-Query Algebra (algebra.py)

Query algorithms for low-degree GF(2) polynomials plus brute-force
diagnostics on explicit polynomials.

Features:
- probe_nonconstant: constancy test with ceil(2^d ln(1/delta)) uniform draws
- find_new_relevant_var / find_relevant_vars: paired queries against
  f_{|X'<-0} and a halving binary search
- maximal_monomial_step / find_maximal_monomial: the G-function test
  G(x) = 1 + sum over all 2^|M| settings of M's variables of f
- interpolate_poly: exact polynomial of a junta by querying all 2^k points
- cd, psize, low_degree_part, maximal monomial checks (diagnostics)

Confidence budgeting: a caller-level delta is split evenly across the
internal probabilistic calls (delta / K). Reported query counts are
f-queries; one query of g or G costs 2 or 2^|M| f-queries.
"""

import logging
import math
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from src.boolfn import (
    F2Polynomial,
    RestrictionSeq,
    mask_vars,
    monomial_key,
    popcount,
    submasks,
    subset_transform,
    vars_mask,
)
from src.config import setting
from src.errors import (
    AlgebraPreconditionError,
    EnumerationCapError,
    MonomialTooLargeError,
    NotWithinCapError,
    TooManyRelevantError,
)
from src.oracle import Oracle

log = logging.getLogger(__name__)


# ============================================================================
# Parameters and probe outcomes
# ============================================================================

@dataclass(frozen=True)
class ProbeParams:
    """Degree bound d and failure probability delta of one probe family."""

    d: int
    delta: float
    seed: Optional[int] = None

    def __post_init__(self):
        if self.d < 0:
            raise ValueError(f"Invalid degree bound: {self.d}. Valid bounds are >= 0")
        if not 0 < self.delta < 1:
            raise ValueError(f"Invalid delta: {self.delta}. Valid values are in (0, 1)")

    def split(self, k: int) -> "ProbeParams":
        """Per-call parameters for k union-bounded calls."""
        return replace(self, delta=self.delta / max(1, k))


@dataclass(frozen=True)
class Constant:
    value: int


@dataclass(frozen=True)
class Witness:
    point: int


@dataclass(frozen=True)
class AllFound:
    pass


@dataclass(frozen=True)
class NewVar:
    index: int


@dataclass(frozen=True)
class Maximal:
    pass


@dataclass(frozen=True)
class Extend:
    index: int


ProbeResult = Union[Constant, Witness]


def probe_sample_size(d: int, delta: float) -> int:
    """Smallest m with (1 - 2^-d)^m <= delta, via the e^(-m/2^d) bound."""
    return max(1, math.ceil((2 ** max(0, d)) * math.log(1.0 / delta)))


def _probe(query, points: Iterable[int], reference: int) -> Optional[int]:
    for x in points:
        if query(x) != reference:
            return x
    return None


def locate_relevant_variable(o: Oracle, lo: int, hi: int, lo_value: int) -> int:
    """
    Halving search between two points with different f values.

    Args:
        o: oracle for f
        lo: point with f(lo) = lo_value
        hi: point with f(hi) != lo_value
        lo_value: f(lo), already known

    Returns:
        int: a variable whose flip changes f; at most ceil(log2 v) queries for
        v differing positions

    Note:
        Each step flips the lexicographically first half of the remaining
        differing positions.
    """
    diff = mask_vars(lo ^ hi)
    while len(diff) > 1:
        half = diff[: len(diff) // 2]
        mid = lo ^ vars_mask(half)
        if o.query(mid) != lo_value:
            diff = half
        else:
            lo = mid
            diff = diff[len(half):]
    return diff[0]


# ============================================================================
# Relevant variables
# ============================================================================

def probe_nonconstant(o: Oracle, params: ProbeParams) -> ProbeResult:
    """
    Constancy probe for a degree-d polynomial.

    Example Usage:
        >>> probe_nonconstant(session, ProbeParams(d=3, delta=0.01))
        Witness(point=7)
    """
    y0 = o.query(0)
    m = probe_sample_size(params.d, params.delta)
    witness = _probe(o.query, o.random_points(m), y0)
    if witness is None:
        return Constant(y0)
    return Witness(witness)


def find_new_relevant_var(o: Oracle, known_mask: int, params: ProbeParams) -> Union[AllFound, NewVar]:
    """
    Find a relevant variable outside the known set, or report that none is left.

    g = f + f_{|X'<-0} (X' the complement of the known set) is probed with
    paired queries; a witness is walked back toward its projection by
    halving search. A returned variable is always relevant; AllFound can be
    wrong with probability at most params.delta.
    """
    m = probe_sample_size(params.d, params.delta)
    for x in o.random_points(m):
        if not x & ~known_mask:
            continue
        projected = x & known_mask
        fx = o.query(x)
        fp = o.query(projected)
        if fx != fp:
            var = locate_relevant_variable(o, projected, x, fp)
            log.debug("new relevant variable x%d", var + 1)
            return NewVar(var)
    return AllFound()


def find_relevant_vars(o: Oracle, params: ProbeParams, cap: int) -> Tuple[int, ...]:
    """
    All relevant variables of a degree-d polynomial, ascending.

    Args:
        o: oracle for f
        params: degree bound and overall failure probability
        cap: largest acceptable number of relevant variables

    Returns:
        tuple of 0-based variable indices

    Note:
        Raises TooManyRelevantError as soon as cap + 1 variables are found;
        testers read this as "not in the class".
    """
    per_call = params.split(cap + 1)
    known = 0
    while True:
        result = find_new_relevant_var(o, known, per_call)
        if isinstance(result, AllFound):
            return mask_vars(known)
        known |= 1 << result.index
        if popcount(known) > cap:
            raise TooManyRelevantError(mask_vars(known), cap)


# ============================================================================
# Maximal monomials
# ============================================================================

class _GOracle:
    """G(x) = 1 + sum_xi f(x with M's variables set to xi), x confined to `free`."""

    def __init__(self, o: Oracle, monomial: int, free: int):
        self.o = o
        self.monomial = monomial
        self.free = free
        self._settings = list(submasks(monomial))

    def query(self, x: int) -> int:
        base = x & self.free
        acc = 1
        for xi in self._settings:
            acc ^= self.o.query(base | xi)
        return acc


def maximal_monomial_step(
    o: Oracle, monomial: int, relevant_mask: int, params: ProbeParams, hint: Optional[int] = None
) -> Union[Maximal, Extend]:
    """
    One extension step of a sub-monomial M.

    G is a polynomial of degree at most d - |M| in the relevant variables
    outside M. G == 0 exactly when M is a maximal monomial of f; any relevant
    variable of G extends M to a sub-monomial of some monomial of f.
    A hint point where G differs from G(0) is used before any sampling.

    Raises:
        AlgebraPreconditionError: G is the constant 1, so M is not a
            sub-monomial of any monomial of f
    """
    free = relevant_mask & ~monomial
    g = _GOracle(o, monomial, free)
    g0 = g.query(0)
    witness = None
    if free and hint is not None and g.query(hint) != g0:
        witness = hint & free
    elif free:
        m = probe_sample_size(params.d - popcount(monomial), params.delta)
        witness = _probe(g.query, (x & free for x in o.random_points(m)), g0)
    if witness is not None:
        return Extend(locate_relevant_variable(g, 0, witness, g0))
    if g0 == 0:
        return Maximal()
    raise AlgebraPreconditionError("G is the constant 1: monomial is not part of any monomial of f", monomial)


def find_maximal_monomial(
    o: Oracle, relevant_mask: int, params: ProbeParams, size_cap: int, hint: Optional[int] = None
) -> int:
    """
    Grow a maximal monomial of f from the empty monomial.

    The first step, with M empty, tests G = 1 + f and so returns a relevant
    variable of f. Per-step confidence is delta / (size_cap + 1).
    A hint with f(hint) != f(0), such as a constancy-probe witness, seeds
    that first step.

    Returns:
        int: the monomial as a bitmask

    Raises:
        MonomialTooLargeError: the monomial would exceed size_cap variables
    """
    per_step = params.split(size_cap + 1)
    monomial = 0
    while True:
        step = maximal_monomial_step(o, monomial, relevant_mask, per_step, hint if monomial == 0 else None)
        if isinstance(step, Maximal):
            return monomial
        monomial |= 1 << step.index
        if popcount(monomial) > size_cap:
            raise MonomialTooLargeError(monomial, size_cap)


# ============================================================================
# Exact interpolation
# ============================================================================

def interpolate_poly(o: Oracle, variables: Iterable[int]) -> F2Polynomial:
    """
    Exact polynomial of a function that depends only on `variables`.

    Queries all 2^k points with the other variables at 0 and applies the
    GF(2) Moebius transform.

    Raises:
        EnumerationCapError: more variables than interpolation_cap
    """
    variables = sorted(set(variables))
    cap = setting("interpolation_cap")
    if len(variables) > cap:
        raise EnumerationCapError("interpolation", len(variables), cap)
    points = [0]
    for v in variables:
        bit = 1 << v
        points = points + [p | bit for p in points]
    values = np.fromiter((o.query(x) for x in points), dtype=np.uint8, count=len(points))
    coeffs = subset_transform(values, len(variables))
    return F2Polynomial(frozenset(points[int(i)] for i in np.flatnonzero(coeffs)), o.n)


# ============================================================================
# Diagnostics on explicit polynomials
# ============================================================================

@dataclass(frozen=True)
class Interval:
    """Integer interval with optionally open ends, e.g. (1, 2] = Interval(1, 2, lo_open=True)."""

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __contains__(self, k: int) -> bool:
        above = k > self.lo if self.lo_open else k >= self.lo
        below = k < self.hi if self.hi_open else k <= self.hi
        return above and below


@dataclass(frozen=True)
class CdResult:
    value: int
    witness: Tuple[int, ...]


@dataclass(frozen=True)
class PsizeResult:
    value: int
    witness: Tuple[int, ...]
    complemented: bool

    def rebuild(self, n: Optional[int] = None) -> F2Polynomial:
        """The function the witness describes."""
        monomials = set(self.witness)
        if self.complemented:
            monomials.add(0)
        return F2Polynomial(frozenset(monomials), n)


def low_degree_part(f: F2Polynomial, interval: Interval) -> F2Polynomial:
    """f^I: the monomials whose size lies in the interval."""
    return F2Polynomial(frozenset(m for m in f.monomials if popcount(m) in interval), f.n)


def cd(f: F2Polynomial, cap: int) -> CdResult:
    """
    Fewest variables whose zero-substitution makes f constant.

    Zeroing a set S kills exactly the monomials that meet S, so this is the
    smallest hitting set of the non-constant monomials, searched by size.
    """
    variables = f.variables()
    var_cap = setting("cd_var_cap")
    if len(variables) > var_cap:
        raise EnumerationCapError("cd", len(variables), var_cap)
    targets = f.nonconstant_monomials()
    if not targets:
        return CdResult(0, ())
    for size in range(1, min(cap, len(variables)) + 1):
        for combo in combinations(variables, size):
            mask = vars_mask(combo)
            if all(m & mask for m in targets):
                return CdResult(size, combo)
    raise NotWithinCapError(cap)


def psize(f: F2Polynomial) -> PsizeResult:
    """Number of non-constant monomials (the representation is unique)."""
    witness = tuple(sorted(f.nonconstant_monomials(), key=monomial_key))
    return PsizeResult(len(witness), witness, f.constant_value() == 1)


def poly_weight(f: F2Polynomial) -> int:
    """|f|: total number of variable occurrences over all monomials."""
    return sum(popcount(m) for m in f.monomials)


def is_sub_monomial(f: F2Polynomial, monomial: int) -> bool:
    return any(m & monomial == monomial for m in f.monomials)


def is_maximal_monomial(f: F2Polynomial, monomial: int) -> bool:
    if monomial not in f.monomials:
        return False
    return not any(m != monomial and m & monomial == monomial for m in f.monomials)


def maximal_monomials(f: F2Polynomial) -> List[int]:
    """All maximal monomials in canonical order."""
    return [m for m in f.sorted_monomials() if is_maximal_monomial(f, m)]


def g_polynomial(f: F2Polynomial, monomial: int) -> F2Polynomial:
    """Symbolic G = 1 + sum over xi of f restricted on M's variables to xi."""
    acc = F2Polynomial.one(f.n)
    variables = mask_vars(monomial)
    for xi in submasks(monomial):
        acc = acc + f.restrict(RestrictionSeq.from_point(variables, xi))
    return acc
