"""
Query Oracles (oracle.py)

Query-counting access to a hidden Boolean function. Learners and testers
receive an oracle handle only; they never see the hidden representation.

Features:
- OracleSession: black-box queries (bb) and random examples (rex) from a
  distribution, a seeded numpy Generator, optional query budget and
  transcript recording
- Views that rewrite queries without owning counters:
  ProjectedOracle (variables outside a kept set forced to 0),
  ShiftedOracle (x -> x XOR a), RestrictedOracle (x -> q(x)),
  UniformExampleOracle (examples simulated by uniform black-box queries)

Every view forwards to the session it wraps, so the session counters are the
single source of truth for reported query counts.
"""

import logging
from typing import Dict, List, Optional, Protocol, Tuple

import numpy as np

from src.boolfn import (
    UNIFORM,
    BooleanFunction,
    Distribution,
    RestrictionSeq,
    UniformDistribution,
    random_point,
    random_points,
)
from src.errors import BudgetExhaustedError

log = logging.getLogger(__name__)


class Oracle(Protocol):
    """What every algorithm in the library needs from its target."""

    n: int
    rng: np.random.Generator

    def query(self, x: int) -> int:
        ...

    def example(self) -> Tuple[int, int]:
        ...

    def random_point(self) -> int:
        ...

    def random_points(self, m: int) -> List[int]:
        ...


class OracleSession:
    """
    Stateful access to a hidden function.

    Args:
        hidden: function handle with evaluate(x) and n
        dist: example distribution (default uniform)
        seed: seed or SeedSequence for the session generator
        budget: maximum bb + rex queries; None means unlimited
        record: keep a transcript of (kind, x, y) triples

    Note:
        Two sessions with equal seeds that receive equal query sequences
        produce identical transcripts and counters.
    """

    def __init__(
        self,
        hidden: BooleanFunction,
        dist: Optional[Distribution] = None,
        seed=None,
        budget: Optional[int] = None,
        record: bool = False,
    ):
        if budget is not None and budget <= 0:
            raise ValueError(f"Invalid budget: {budget}. Valid budgets are positive integers")
        self._hidden = hidden
        self.n = hidden.n
        self.dist = dist or UNIFORM
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.budget = budget
        self.bb_count = 0
        self.rex_count = 0
        self.transcript: Optional[List[Tuple[str, int, int]]] = [] if record else None

    # ------------------------------------------------------------------

    def counters(self) -> Dict[str, int]:
        return {"bb": self.bb_count, "rex": self.rex_count}

    def _charge(self) -> None:
        if self.budget is not None and self.bb_count + self.rex_count >= self.budget:
            raise BudgetExhaustedError(self.budget, self.counters())

    def query(self, x: int) -> int:
        """Black-box query f(x)."""
        self._charge()
        self.bb_count += 1
        y = self._hidden.evaluate(x)
        if self.transcript is not None:
            self.transcript.append(("bb", x, y))
        return y

    def example(self) -> Tuple[int, int]:
        """Random example (x, f(x)) with x drawn from the session distribution."""
        self._charge()
        self.rex_count += 1
        x = self.dist.sample(self.rng, self.n)
        y = self._hidden.evaluate(x)
        if self.transcript is not None:
            self.transcript.append(("rex", x, y))
        return x, y

    def random_point(self) -> int:
        """Uniform internal coin flips; not a query."""
        return random_point(self.rng, self.n)

    def random_points(self, m: int) -> List[int]:
        return random_points(self.rng, self.n, m)

    @property
    def is_uniform(self) -> bool:
        return isinstance(self.dist, UniformDistribution)


class _View:
    """Base for oracles that rewrite queries and forward to another oracle."""

    def __init__(self, base: Oracle):
        self.base = base
        self.n = base.n
        self.rng = base.rng
        self.seed = getattr(base, "seed", None)

    def random_point(self) -> int:
        return self.base.random_point()

    def random_points(self, m: int) -> List[int]:
        return self.base.random_points(m)

    def counters(self) -> Dict[str, int]:
        return self.base.counters()


class ProjectedOracle(_View):
    """
    f_{|X<-0}: every variable outside `kept` reads as 0.

    Examples keep the base distribution's point and are relabeled with one
    extra black-box query.
    """

    def __init__(self, base: Oracle, kept_mask: int):
        super().__init__(base)
        self.kept_mask = kept_mask

    def query(self, x: int) -> int:
        return self.base.query(x & self.kept_mask)

    def example(self) -> Tuple[int, int]:
        x, _ = self.base.example()
        return x, self.base.query(x & self.kept_mask)


class ShiftedOracle(_View):
    """T(x) = f(x XOR a). Examples are uniform points queried through the shift."""

    def __init__(self, base: Oracle, a: int):
        super().__init__(base)
        self.a = a

    def query(self, x: int) -> int:
        return self.base.query(x ^ self.a)

    def example(self) -> Tuple[int, int]:
        x = self.base.random_point()
        return x, self.query(x)


class RestrictedOracle(_View):
    """f_{|q}: the variables of q are overwritten before every query."""

    def __init__(self, base: Oracle, q: RestrictionSeq):
        super().__init__(base)
        self.q = q
        self._mask = q.mask
        self._ones = q.ones

    def query(self, x: int) -> int:
        return self.base.query((x & ~self._mask) | self._ones)

    def example(self) -> Tuple[int, int]:
        x = self.base.random_point()
        return x, self.query(x)


class UniformExampleOracle(_View):
    """Random examples simulated by querying uniform points."""

    def query(self, x: int) -> int:
        return self.base.query(x)

    def example(self) -> Tuple[int, int]:
        x = self.base.random_point()
        return x, self.base.query(x)
