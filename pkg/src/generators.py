"""
Random Instance Generators (generators.py)

Seeded generators for the function families the experiments run on.

Features:
- random_tree_depth: complete random tree of depth d, identical siblings merged
- random_tree_size: grow a random tree by splitting leaves until size s
- parity: XOR of the given variables as a polynomial
- random_truth_table: uniform random function of n variables
- random_poly / random_junta_poly: random degree-d polynomials with a
  bounded support embedded in n variables
- parse_generator / generate: "family:key=value,..." specs used by the CLI

Every generator takes a numpy Generator first; equal seeds give equal
functions.
"""

import logging
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from src.boolfn import (
    BooleanFunction,
    DecisionTree,
    F2Polynomial,
    Internal,
    Node,
    TruthTable,
    leaf,
    vars_mask,
)

log = logging.getLogger(__name__)


def _pick_var(rng: np.random.Generator, n: int, used: int) -> int:
    free = [v for v in range(n) if not (used >> v) & 1]
    return int(free[rng.integers(len(free))])


def _join(var: int, lo: Node, hi: Node) -> Node:
    return lo if lo == hi else Internal(var, lo, hi)


def random_tree_depth(rng: np.random.Generator, n: int, d: int) -> DecisionTree:
    """
    Random tree of depth at most d.

    Every path tests d distinct variables chosen uniformly; leaves are fair
    coins. Subtrees with equal children collapse, so the depth can be below d.
    """
    if not 0 <= d <= n:
        raise ValueError(f"Invalid depth: {d}. Valid depths are 0..{n}")

    def grow(depth: int, used: int) -> Node:
        if depth == 0:
            return leaf(int(rng.integers(2)))
        v = _pick_var(rng, n, used)
        used |= 1 << v
        return _join(v, grow(depth - 1, used), grow(depth - 1, used))

    return DecisionTree(n, grow(d, 0))


def random_tree_size(rng: np.random.Generator, n: int, s: int, max_depth: Optional[int] = None) -> DecisionTree:
    """
    Random tree of size at most s.

    Starts from one leaf and splits a uniformly chosen leaf s - 1 times on a
    variable not yet on its path; leaf values are fair coins, then equal
    siblings collapse.
    """
    if s < 1:
        raise ValueError(f"Invalid size: {s}. Valid sizes are >= 1")
    max_depth = n if max_depth is None else min(max_depth, n)
    # each leaf is its path of (var, bit) pairs
    leaves = [()]
    for _ in range(s - 1):
        open_leaves = [i for i, path in enumerate(leaves) if len(path) < max_depth]
        if not open_leaves:
            break
        i = open_leaves[rng.integers(len(open_leaves))]
        path = leaves.pop(i)
        v = _pick_var(rng, n, vars_mask(var for var, _ in path))
        leaves.extend([path + ((v, 0),), path + ((v, 1),)])
    values = {path: int(rng.integers(2)) for path in sorted(leaves)}

    def build(prefix: Tuple[Tuple[int, int], ...]) -> Node:
        if prefix in values:
            return leaf(values[prefix])
        v = next(path[len(prefix)][0] for path in values if path[: len(prefix)] == prefix and len(path) > len(prefix))
        return _join(v, build(prefix + ((v, 0),)), build(prefix + ((v, 1),)))

    return DecisionTree(n, build(()))


def parity(n: int, variables: Optional[Sequence[int]] = None) -> F2Polynomial:
    """x_{i1} + ... + x_{ik}; all n variables by default."""
    variables = range(n) if variables is None else variables
    return F2Polynomial(frozenset(1 << v for v in variables), n)


def random_truth_table(rng: np.random.Generator, n: int) -> TruthTable:
    return TruthTable(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def random_poly(
    rng: np.random.Generator,
    n: int,
    d: int,
    terms: int,
    support: Optional[Sequence[int]] = None,
) -> F2Polynomial:
    """
    Sum of `terms` random monomials of size 1..d over `support`.

    Repeated draws cancel, so the result can have fewer monomials.
    """
    support = list(range(n)) if support is None else sorted(support)
    if d < 1 or not support:
        return F2Polynomial.zero(n)
    acc: set = set()
    for _ in range(terms):
        size = int(rng.integers(1, min(d, len(support)) + 1))
        chosen = rng.choice(support, size=size, replace=False)
        acc ^= {vars_mask(int(v) for v in chosen)}
    if rng.integers(2):
        acc ^= {0}
    return F2Polynomial(frozenset(acc), n)


def random_junta_poly(rng: np.random.Generator, n: int, d: int, terms: Optional[int] = None) -> F2Polynomial:
    """Random degree-d polynomial over at most 2^d random variables out of n."""
    k = min(n, 2 ** d)
    support = sorted(int(v) for v in rng.choice(n, size=k, replace=False))
    return random_poly(rng, n, d, terms if terms is not None else k, support)


# ============================================================================
# Generator specs
# ============================================================================

GENERATORS: Dict[str, Tuple[Callable[..., BooleanFunction], Tuple[str, ...]]] = {
    "tree-depth": (lambda rng, n, d: random_tree_depth(rng, n, d), ("n", "d")),
    "tree-size": (lambda rng, n, s: random_tree_size(rng, n, s), ("n", "s")),
    "parity": (lambda rng, n, k: parity(n, range(k)), ("n", "k")),
    "truthtable": (lambda rng, n: random_truth_table(rng, n), ("n",)),
    "poly": (lambda rng, n, d, terms: random_poly(rng, n, d, terms), ("n", "d", "terms")),
    "junta-poly": (lambda rng, n, d: random_junta_poly(rng, n, d), ("n", "d")),
}


def parse_generator(spec: str) -> Tuple[str, Dict[str, int]]:
    """
    Parse "family:key=value,...".

    Example Usage:
        >>> parse_generator("tree-depth:n=64,d=3")
        ('tree-depth', {'n': 64, 'd': 3})
    """
    family, _, rest = spec.partition(":")
    if family not in GENERATORS:
        raise ValueError(f"Invalid generator: {family}. Valid generators are: {', '.join(GENERATORS)}")
    args: Dict[str, int] = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"Invalid generator argument: {item!r}. Valid arguments look like key=value")
        try:
            args[key.strip()] = int(value)
        except ValueError:
            raise ValueError(f"Invalid value for {key}: {value!r}. Valid values are integers")
    expected = GENERATORS[family][1]
    if family == "parity" and "k" not in args and "n" in args:
        args["k"] = args["n"]
    missing = [k for k in expected if k not in args]
    extra = [k for k in args if k not in expected]
    if missing or extra:
        raise ValueError(f"Invalid arguments for {family}: {sorted(args)}. Valid arguments are: {list(expected)}")
    return family, args


def generate(spec: str, rng: np.random.Generator) -> BooleanFunction:
    family, args = parse_generator(spec)
    fn, _ = GENERATORS[family]
    f = fn(rng, **args)
    log.debug("generated %s with n=%d", family, f.n)
    return f


def describe(spec: str) -> Dict[str, Any]:
    family, args = parse_generator(spec)
    return {"family": family, **args}
