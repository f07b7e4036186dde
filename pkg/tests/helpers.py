"""
Builders and hypothesis strategies shared by the test modules.

Trees and polynomials in tests are written with 1-based variable numbers,
the way they appear in files and on the command line.
"""

from typing import List

import numpy as np
from hypothesis import strategies as st

from src.boolfn import DecisionTree, F2Polynomial, Internal, Leaf, Node, leaf
from src.generators import random_tree_depth


def node(var: int, lo, hi) -> Internal:
    """Internal node on the 1-based variable `var`; ints become leaves."""
    lo = leaf(lo) if isinstance(lo, int) else lo
    hi = leaf(hi) if isinstance(hi, int) else hi
    return Internal(var - 1, lo, hi)


def poly(*monomials, n=None) -> F2Polynomial:
    """Polynomial from 1-based variable lists; () is the constant 1."""
    return F2Polynomial.from_vars([[v - 1 for v in m] for m in monomials], n)


def one_leaf_depths(t: DecisionTree) -> List[int]:
    """Depths of the 1-leaves, sorted."""
    out = []

    def walk(n: Node, depth: int) -> None:
        if isinstance(n, Leaf):
            if n.value:
                out.append(depth)
            return
        walk(n.lo, depth + 1)
        walk(n.hi, depth + 1)

    walk(t.root, 0)
    return sorted(out)


# ============================================================================
# hypothesis strategies
# ============================================================================

@st.composite
def depth_trees(draw, max_n: int = 8, max_d: int = 5):
    """Random trees from the depth-d generator, n and d drawn too."""
    n = draw(st.integers(min_value=1, max_value=max_n))
    d = draw(st.integers(min_value=0, max_value=min(n, max_d)))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    return random_tree_depth(np.random.default_rng(seed), n, d)


def polys(n: int = 6, max_terms: int = 12):
    return st.frozensets(st.integers(min_value=0, max_value=(1 << n) - 1), max_size=max_terms).map(
        lambda ms: F2Polynomial(ms, n)
    )


def points(n: int = 6):
    return st.integers(min_value=0, max_value=(1 << n) - 1)
