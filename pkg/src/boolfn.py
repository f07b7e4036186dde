"""
Boolean Function Representations (boolfn.py)

Core value types for Boolean functions on n variables and the conversions
between them.

Features:
- Points are Python ints: bit i holds x_{i+1} (0-based internally)
- DecisionTree: immutable binary tree over variable indices with 0/1 leaves
- DisjointTermSum: one term per 1-leaf of a tree
- F2Polynomial: canonical multilinear polynomial over GF(2), a set of
  monomial bitmasks
- TruthTable: numpy vector of 2^n output bits
- RestrictionSeq: ordered substitution list x_i <- b
- Distributions: uniform, explicit point masses, seeded samplers
- distance(): exact or sampled disagreement probability

Requirements:
- numpy for truth tables and the subset (zeta/Moebius) transform
- Exact enumeration is capped by the "exact_cap" configuration value
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import setting
from src.errors import EnumerationCapError, MalformedFunctionError

log = logging.getLogger(__name__)


# ============================================================================
# Bit helpers
# ============================================================================

def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_vars(mask: int) -> Tuple[int, ...]:
    """Indices of the set bits of mask, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def vars_mask(variables: Iterable[int]) -> int:
    mask = 0
    for v in variables:
        mask |= 1 << v
    return mask


def submasks(mask: int) -> Iterator[int]:
    """All submasks of mask, including mask itself and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def monomial_key(m: int) -> Tuple[int, Tuple[int, ...]]:
    """Canonical order: by size, then by sorted variable list."""
    return popcount(m), mask_vars(m)


def format_monomial(m: int) -> str:
    if m == 0:
        return "1"
    return "".join(f"x{v + 1}" for v in mask_vars(m))


def random_point(rng: np.random.Generator, n: int) -> int:
    """Uniform point of {0,1}^n drawn from rng."""
    if n == 0:
        return 0
    bits = rng.integers(0, 2, size=n, dtype=np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def random_points(rng: np.random.Generator, n: int, m: int) -> List[int]:
    """m uniform points drawn in one batch."""
    if m <= 0:
        return []
    if n == 0:
        return [0] * m
    bits = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    packed = np.packbits(bits, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _check_cap(n: int, what: str) -> None:
    cap = setting("exact_cap")
    if n > cap:
        raise EnumerationCapError(what, n, cap)


def subset_transform(values: np.ndarray, n: int) -> np.ndarray:
    """GF(2) zeta transform over the subset lattice; it is its own inverse."""
    arr = np.array(values, dtype=np.uint8, copy=True)
    for i in range(n):
        view = arr.reshape(-1, 2, 1 << i)
        view[:, 1, :] ^= view[:, 0, :]
    return arr


# ============================================================================
# Assignments and restrictions
# ============================================================================

@dataclass(frozen=True)
class Assignment:
    """A point of {0,1}^n; bit i of `bits` is the value of x_{i+1}."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise MalformedFunctionError(f"Invalid assignment: bits={self.bits} for n={self.n}")

    @classmethod
    def from_string(cls, text: str) -> "Assignment":
        """Character i of text (left to right) is x_{i+1}."""
        if any(ch not in "01" for ch in text):
            raise MalformedFunctionError(f"Invalid bitstring: {text!r}. Valid characters are: 0, 1")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    def to_string(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.n))

    def get(self, i: int) -> int:
        """Value of the 0-based variable i."""
        return (self.bits >> i) & 1


@dataclass(frozen=True)
class RestrictionSeq:
    """Ordered substitutions (var, bit); each variable appears at most once."""

    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for var, b in self.pairs:
            if var in seen:
                raise ValueError(f"Invalid restriction: variable x{var + 1} restricted twice")
            if b not in (0, 1):
                raise ValueError(f"Invalid restriction bit: {b}. Valid bits are: 0, 1")
            seen.add(var)

    @property
    def mask(self) -> int:
        return vars_mask(var for var, _ in self.pairs)

    @property
    def ones(self) -> int:
        return vars_mask(var for var, b in self.pairs if b)

    def extend(self, var: int, b: int) -> "RestrictionSeq":
        return RestrictionSeq(self.pairs + ((var, b),))

    def apply(self, x: int) -> int:
        """Point x with the restricted variables overwritten."""
        return (x & ~self.mask) | self.ones

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_point(cls, variables: Iterable[int], point: int) -> "RestrictionSeq":
        """Restrict each variable to its value in point."""
        return cls(tuple((v, (point >> v) & 1) for v in variables))


PointLike = Union[int, Assignment]


# ============================================================================
# Function base class
# ============================================================================

class BooleanFunction(ABC):
    """Anything that evaluates on int points and knows its variable count."""

    n: int

    @abstractmethod
    def evaluate(self, x: int) -> int:
        """Value at the point x."""

    @abstractmethod
    def support_mask(self) -> int:
        """Bitmask of the variables the representation mentions."""

    def truth_table(self, n: Optional[int] = None) -> "TruthTable":
        """Truth table over n variables (default self.n), by pointwise evaluation."""
        n = self.n if n is None else n
        _check_cap(n, "truth table")
        values = np.fromiter((self.evaluate(x) for x in range(1 << n)), dtype=np.uint8, count=1 << n)
        return TruthTable(n, values)

    def __call__(self, x: PointLike) -> int:
        return evaluate(self, x)


def evaluate(f: BooleanFunction, x: PointLike) -> int:
    """
    Evaluate any representation at a point.

    Args:
        f: DecisionTree, F2Polynomial, DisjointTermSum or TruthTable
        x: int point or Assignment

    Returns:
        int: 0 or 1

    Note:
        An Assignment shorter than the highest variable f mentions raises
        MalformedFunctionError.
    """
    if isinstance(x, Assignment):
        if f.support_mask() >> x.n:
            raise MalformedFunctionError(
                f"function mentions x{f.support_mask().bit_length()} but the point has n={x.n}"
            )
        x = x.bits
    return f.evaluate(x)


# ============================================================================
# Decision trees
# ============================================================================

@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Internal:
    var: int
    lo: "Node"
    hi: "Node"


Node = Union[Leaf, Internal]

LEAF0 = Leaf(0)
LEAF1 = Leaf(1)


def leaf(b: int) -> Leaf:
    return LEAF1 if b else LEAF0


def iter_nodes(root: Node) -> Iterator[Node]:
    """Preorder traversal."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Internal):
            stack.append(node.hi)
            stack.append(node.lo)


@dataclass(frozen=True)
class DecisionTree(BooleanFunction):
    """
    Decision tree over n variables.

    size = number of leaves, depth = longest root-to-leaf edge count.
    The file format stores the nodes as an arena (see fileformats).
    """

    n: int
    root: Node

    def __post_init__(self):
        for node in iter_nodes(self.root):
            if isinstance(node, Internal):
                if not 0 <= node.var < self.n:
                    raise MalformedFunctionError(
                        f"Invalid variable index x{node.var + 1}. Valid indices are 1..{self.n}"
                    )
            elif node.value not in (0, 1):
                raise MalformedFunctionError(f"Invalid leaf value: {node.value}. Valid values are: 0, 1")

    def evaluate(self, x: int) -> int:
        node = self.root
        while isinstance(node, Internal):
            node = node.hi if (x >> node.var) & 1 else node.lo
        return node.value

    def support_mask(self) -> int:
        return vars_mask(node.var for node in iter_nodes(self.root) if isinstance(node, Internal))

    def variables(self) -> Tuple[int, ...]:
        return mask_vars(self.support_mask())

    def size(self) -> int:
        return sum(1 for node in iter_nodes(self.root) if isinstance(node, Leaf))

    def depth(self) -> int:
        def _depth(node: Node) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(_depth(node.lo), _depth(node.hi))
        return _depth(self.root)

    def truth_table(self, n: Optional[int] = None) -> "TruthTable":
        n = self.n if n is None else n
        _check_cap(n, "truth table")
        idx = np.arange(1 << n, dtype=np.int64)

        def _table(node: Node) -> np.ndarray:
            if isinstance(node, Leaf):
                return np.full(1 << n, node.value, dtype=np.uint8)
            branch = (idx >> node.var) & 1
            return np.where(branch == 1, _table(node.hi), _table(node.lo)).astype(np.uint8)

        return TruthTable(n, _table(self.root))

    def with_n(self, n: int) -> "DecisionTree":
        return DecisionTree(n, self.root)


def tree_size(t: DecisionTree) -> int:
    return t.size()


def tree_depth(t: DecisionTree) -> int:
    return t.depth()


# ============================================================================
# Terms and disjoint-term sums
# ============================================================================

@dataclass(frozen=True)
class Term:
    """Conjunction of the variables in pos and the negations of those in neg."""

    pos: int
    neg: int

    def __post_init__(self):
        if self.pos & self.neg:
            raise MalformedFunctionError("term uses a variable both positively and negated")

    def evaluate(self, x: int) -> int:
        return int((x & self.pos) == self.pos and (x & self.neg) == 0)

    def literal_count(self) -> int:
        return popcount(self.pos) + popcount(self.neg)

    def contradicts(self, other: "Term") -> bool:
        return bool((self.pos & other.neg) | (self.neg & other.pos))

    def __str__(self) -> str:
        parts = [f"x{v + 1}" for v in mask_vars(self.pos)]
        parts += [f"~x{v + 1}" for v in mask_vars(self.neg)]
        return "".join(parts) or "1"


@dataclass(frozen=True)
class DisjointTermSum(BooleanFunction):
    """Sum of pairwise contradictory terms; XOR and OR coincide."""

    n: int
    terms: Tuple[Term, ...] = ()

    def __post_init__(self):
        for t in self.terms:
            if (t.pos | t.neg) >> self.n:
                raise MalformedFunctionError(f"term {t} mentions a variable beyond n={self.n}")
        for i, a in enumerate(self.terms):
            for b in self.terms[i + 1:]:
                if not a.contradicts(b):
                    raise MalformedFunctionError(f"terms {a} and {b} are not disjoint")

    def evaluate(self, x: int) -> int:
        return int(any(t.evaluate(x) for t in self.terms))

    def support_mask(self) -> int:
        mask = 0
        for t in self.terms:
            mask |= t.pos | t.neg
        return mask

    def truth_table(self, n: Optional[int] = None) -> "TruthTable":
        n = self.n if n is None else n
        _check_cap(n, "truth table")
        idx = np.arange(1 << n, dtype=np.int64)
        values = np.zeros(1 << n, dtype=bool)
        for t in self.terms:
            values |= ((idx & t.pos) == t.pos) & ((idx & t.neg) == 0)
        return TruthTable(n, values.astype(np.uint8))


def tree_to_dts(t: DecisionTree) -> DisjointTermSum:
    """
    One term per reachable 1-leaf, built from the path literals.

    On trees that test each variable at most once per path the literal count
    of a term equals its leaf depth. Branches that contradict an earlier test
    of the same variable are unreachable and produce no term.
    """
    terms: List[Term] = []
    stack: List[Tuple[Node, int, int]] = [(t.root, 0, 0)]
    while stack:
        node, pos, neg = stack.pop()
        if isinstance(node, Leaf):
            if node.value:
                terms.append(Term(pos, neg))
            continue
        b = 1 << node.var
        # hi pushed first so terms come out in left-to-right leaf order
        if not neg & b:
            stack.append((node.hi, pos | b, neg))
        if not pos & b:
            stack.append((node.lo, pos, neg | b))
    return DisjointTermSum(t.n, tuple(terms))


# ============================================================================
# Polynomials over GF(2)
# ============================================================================

@dataclass(frozen=True, eq=False)
class F2Polynomial(BooleanFunction):
    """
    Multilinear polynomial over GF(2) as a set of monomial bitmasks.

    The empty mask is the constant-1 monomial; the empty set is the zero
    polynomial. Equality is set equality, which is function equality.
    """

    monomials: FrozenSet[int]
    n: Optional[int] = None

    def __post_init__(self):
        monomials = frozenset(self.monomials)
        object.__setattr__(self, "monomials", monomials)
        needed = max((m.bit_length() for m in monomials), default=0)
        if self.n is None:
            object.__setattr__(self, "n", needed)
        elif needed > self.n:
            raise MalformedFunctionError(f"polynomial mentions x{needed} but n={self.n}")

    # --- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int = 0) -> "F2Polynomial":
        return cls(frozenset(), n)

    @classmethod
    def one(cls, n: int = 0) -> "F2Polynomial":
        return cls(frozenset({0}), n)

    @classmethod
    def var(cls, i: int, n: Optional[int] = None) -> "F2Polynomial":
        return cls(frozenset({1 << i}), n)

    @classmethod
    def from_vars(cls, monomials: Iterable[Iterable[int]], n: Optional[int] = None) -> "F2Polynomial":
        """Build from 0-based variable lists; repeated monomials cancel."""
        acc: set = set()
        for vs in monomials:
            acc ^= {vars_mask(vs)}
        return cls(frozenset(acc), n)

    # --- arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, F2Polynomial):
            return NotImplemented
        return self.monomials == other.monomials

    def __hash__(self) -> int:
        return hash(self.monomials)

    def __add__(self, other: "F2Polynomial") -> "F2Polynomial":
        return F2Polynomial(self.monomials ^ other.monomials, max(self.n, other.n))

    def __mul__(self, other: "F2Polynomial") -> "F2Polynomial":
        acc: set = set()
        for a in self.monomials:
            for b in other.monomials:
                acc ^= {a | b}
        return F2Polynomial(frozenset(acc), max(self.n, other.n))

    def __len__(self) -> int:
        return len(self.monomials)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        return " + ".join(format_monomial(m) for m in self.sorted_monomials())

    # --- queries ------------------------------------------------------------

    def evaluate(self, x: int) -> int:
        return sum(1 for m in self.monomials if m & x == m) & 1

    def support_mask(self) -> int:
        mask = 0
        for m in self.monomials:
            mask |= m
        return mask

    def variables(self) -> Tuple[int, ...]:
        return mask_vars(self.support_mask())

    def degree(self) -> int:
        return max((popcount(m) for m in self.monomials), default=0)

    def is_constant(self) -> bool:
        return self.monomials <= {0}

    def constant_value(self) -> int:
        """Value at the all-zero point."""
        return int(0 in self.monomials)

    def nonconstant_monomials(self) -> FrozenSet[int]:
        return self.monomials - {0}

    def sorted_monomials(self) -> List[int]:
        return sorted(self.monomials, key=monomial_key)

    def with_n(self, n: int) -> "F2Polynomial":
        return F2Polynomial(self.monomials, n)

    def restrict(self, q: RestrictionSeq) -> "F2Polynomial":
        return poly_restrict(self, q)

    def shift(self, a: int) -> "F2Polynomial":
        return poly_shift(self, a)

    def truth_table(self, n: Optional[int] = None) -> "TruthTable":
        n = self.n if n is None else n
        _check_cap(n, "truth table")
        coeffs = np.zeros(1 << n, dtype=np.uint8)
        for m in self.monomials:
            coeffs[m] = 1
        return TruthTable(n, subset_transform(coeffs, n))


def poly_add(f: F2Polynomial, g: F2Polynomial) -> F2Polynomial:
    return f + g


def poly_restrict(f: F2Polynomial, q: RestrictionSeq) -> F2Polynomial:
    """
    Substitute constants for the variables of q, cancelling over GF(2).

    Example Usage:
        >>> f = F2Polynomial.from_vars([[0, 1], [0]])
        >>> str(poly_restrict(f, RestrictionSeq(((0, 1),))))
        '1 + x2'
    """
    zeros = q.mask & ~q.ones
    ones = q.ones
    acc: set = set()
    for m in f.monomials:
        if m & zeros:
            continue
        acc ^= {m & ~ones}
    return F2Polynomial(frozenset(acc), f.n)


def poly_shift(f: F2Polynomial, a: PointLike) -> F2Polynomial:
    """g(x) = f(x XOR a); each shifted variable x_i becomes x_i + 1."""
    if isinstance(a, Assignment):
        a = a.bits
    acc: set = set()
    for m in f.monomials:
        fixed = m & ~a
        for sub in submasks(m & a):
            acc ^= {fixed | sub}
    return F2Polynomial(frozenset(acc), max(f.n, a.bit_length()))


def dts_to_poly(s: DisjointTermSum) -> F2Polynomial:
    """Expand every negated literal as (x_i + 1); duplicated monomials cancel."""
    acc: set = set()
    for t in s.terms:
        for sub in submasks(t.neg):
            acc ^= {t.pos | sub}
    return F2Polynomial(frozenset(acc), s.n)


def tree_to_poly(t: DecisionTree) -> F2Polynomial:
    """Direct conversion via f = x_i (f_0 + f_1) + f_0 at every internal node."""

    def _poly(node: Node) -> FrozenSet[int]:
        if isinstance(node, Leaf):
            return frozenset({0}) if node.value else frozenset()
        p0 = _poly(node.lo)
        p1 = _poly(node.hi)
        b = 1 << node.var
        acc = set(p0)
        for m in p0 ^ p1:
            acc ^= {m | b}
        return frozenset(acc)

    return F2Polynomial(_poly(t.root), t.n)


# ============================================================================
# Truth tables
# ============================================================================

@dataclass(frozen=True, eq=False)
class TruthTable(BooleanFunction):
    """values[x] = f(x) for every x in [0, 2^n)."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.uint8)
        if values.shape != (1 << self.n,):
            raise MalformedFunctionError(
                f"truth table for n={self.n} needs {1 << self.n} entries, got {values.shape}"
            )
        if values.size and values.max() > 1:
            raise MalformedFunctionError("truth table entries must be 0 or 1")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.n, self.values.tobytes()))

    @classmethod
    def from_int(cls, n: int, bits: int) -> "TruthTable":
        """Bit x of bits is f(x)."""
        if bits < 0 or bits >> (1 << n):
            raise MalformedFunctionError(f"truth table integer does not fit n={n}")
        raw = bits.to_bytes(max(1, ((1 << n) + 7) // 8), "little")
        values = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[: 1 << n]
        return cls(n, values)

    def to_int(self) -> int:
        return int.from_bytes(np.packbits(self.values, bitorder="little").tobytes(), "little")

    def evaluate(self, x: int) -> int:
        return int(self.values[x])

    def support_mask(self) -> int:
        return vars_mask(self.relevant_variables())

    def relevant_variables(self) -> Tuple[int, ...]:
        idx = np.arange(1 << self.n, dtype=np.int64)
        return tuple(i for i in range(self.n) if np.any(self.values != self.values[idx ^ (1 << i)]))

    def truth_table(self, n: Optional[int] = None) -> "TruthTable":
        n = self.n if n is None else n
        if n == self.n:
            return self
        if n < self.n:
            raise ValueError(f"Invalid n: {n}. Valid values are >= {self.n}")
        _check_cap(n, "truth table")
        idx = np.arange(1 << n, dtype=np.int64)
        return TruthTable(n, self.values[idx & ((1 << self.n) - 1)])

    def restrict(self, q: RestrictionSeq) -> "TruthTable":
        idx = np.arange(1 << self.n, dtype=np.int64)
        return TruthTable(self.n, self.values[(idx & ~q.mask) | q.ones])

    def shift(self, a: int) -> "TruthTable":
        idx = np.arange(1 << self.n, dtype=np.int64)
        return TruthTable(self.n, self.values[idx ^ a])

    def is_constant(self) -> bool:
        return bool(self.values.min() == self.values.max())

    def to_poly(self) -> F2Polynomial:
        coeffs = subset_transform(self.values, self.n)
        return F2Polynomial(frozenset(int(m) for m in np.flatnonzero(coeffs)), self.n)


def poly_from_truth_table(tt: TruthTable) -> F2Polynomial:
    return tt.to_poly()


# ============================================================================
# Distributions and distance
# ============================================================================

class Distribution(ABC):
    """Source of random example points."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, n: int) -> int:
        """Draw one point of {0,1}^n."""

    def sample_many(self, rng: np.random.Generator, n: int, m: int) -> List[int]:
        return [self.sample(rng, n) for _ in range(m)]


class UniformDistribution(Distribution):

    def sample(self, rng: np.random.Generator, n: int) -> int:
        return random_point(rng, n)

    def sample_many(self, rng: np.random.Generator, n: int, m: int) -> List[int]:
        return random_points(rng, n, m)

    def __repr__(self) -> str:
        return "UniformDistribution()"


UNIFORM = UniformDistribution()


@dataclass(frozen=True, eq=False)
class ExplicitDistribution(Distribution):
    """Finite support with explicit probabilities."""

    n: int
    points: Tuple[int, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.probs) or not self.points:
            raise MalformedFunctionError("explicit distribution needs one probability per point")
        if any(p < 0 for p in self.probs):
            raise MalformedFunctionError("explicit distribution has a negative probability")
        total = float(np.sum(self.probs))
        if abs(total - 1.0) > 1e-12:
            raise MalformedFunctionError(f"explicit probabilities sum to {total}, expected 1")
        if any(x < 0 or x >> self.n for x in self.points):
            raise MalformedFunctionError(f"explicit support point outside {{0,1}}^{self.n}")

    @classmethod
    def point_mass(cls, n: int, x: int) -> "ExplicitDistribution":
        return cls(n, (x,), (1.0,))

    def sample(self, rng: np.random.Generator, n: int) -> int:
        k = int(rng.choice(len(self.points), p=np.asarray(self.probs, dtype=float)))
        return self.points[k]

    def sample_many(self, rng: np.random.Generator, n: int, m: int) -> List[int]:
        ks = rng.choice(len(self.points), size=m, p=np.asarray(self.probs, dtype=float))
        return [self.points[int(k)] for k in ks]


@dataclass(frozen=True, eq=False)
class SamplerDistribution(Distribution):
    """Seeded sampler handle: sampler(rng) returns a point. Exact distance is unavailable."""

    sampler: Callable[[np.random.Generator], int]
    name: str = "sampler"
    bias: Tuple[float, ...] = ()

    def sample(self, rng: np.random.Generator, n: int) -> int:
        return self.sampler(rng)


def product_distribution(bias: Sequence[float]) -> SamplerDistribution:
    """
    Independent bits with Pr[x_i = 1] = bias[i].

    Example Usage:
        >>> product_distribution([1.0, 0.0, 1.0]).sample(np.random.default_rng(0), 3)
        5
    """
    p = np.asarray(bias, dtype=float)
    if p.ndim != 1 or np.any((p < 0) | (p > 1)):
        raise MalformedFunctionError(f"Invalid product bias: {list(bias)}. Valid biases are in [0, 1]")

    def sampler(rng: np.random.Generator) -> int:
        return sum(1 << int(i) for i in np.flatnonzero(rng.random(p.size) < p))

    return SamplerDistribution(sampler, "product", tuple(float(v) for v in p))


def distance(
    f: BooleanFunction,
    g: BooleanFunction,
    dist: Optional[Distribution] = None,
    mode: str = "exact",
    m: Optional[int] = None,
    seed: Optional[int] = None,
) -> float:
    """
    Disagreement probability Pr_D[f(x) != g(x)].

    Args:
        f, g: any representations
        dist: distribution (default uniform)
        mode: "exact" (enumerate) or "sampled" (m independent draws)
        m: sample count for sampled mode
        seed: seed for sampled mode

    Returns:
        float: probability in [0, 1]

    Note:
        Exact mode under the uniform distribution is limited to n <= exact_cap.
    """
    dist = dist or UNIFORM
    n = max(f.n, g.n)
    if mode == "exact":
        if isinstance(dist, ExplicitDistribution):
            return float(sum(p for x, p in zip(dist.points, dist.probs) if f.evaluate(x) != g.evaluate(x)))
        if not isinstance(dist, UniformDistribution):
            raise ValueError("Invalid mode for a sampler distribution: exact. Valid modes are: sampled")
        _check_cap(n, "exact distance")
        ft = f.truth_table(n).values
        gt = g.truth_table(n).values
        return float(np.mean(ft != gt))
    if mode == "sampled":
        if not m or m <= 0:
            raise ValueError(f"Invalid sample count: {m}. Valid counts are positive integers")
        rng = np.random.default_rng(seed)
        points = dist.sample_many(rng, n, m)
        return sum(1 for x in points if f.evaluate(x) != g.evaluate(x)) / m
    raise ValueError(f"Invalid mode: {mode}. Valid modes are: exact, sampled")
