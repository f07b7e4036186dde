"""
Error types shared by the dtlab library.

Every failure that callers are expected to handle carries enough context to
be turned into a report (variables found so far, counters at exhaustion).
Argument validation still raises plain ValueError.
"""

from typing import Dict, Optional, Tuple


class DtlabError(Exception):
    """Base class for all library errors."""


class MalformedFunctionError(DtlabError, ValueError):
    """A function or distribution is structurally invalid (bad index, bad file)."""


class EnumerationCapError(DtlabError):
    """An exhaustive computation would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} needs {size} variables, cap is {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class NotWithinCapError(DtlabError):
    """cd search found no witness set up to the requested cap."""

    def __init__(self, cap: int):
        super().__init__(f"no zeroing set of size <= {cap} makes the function constant")
        self.cap = cap


class BudgetExhaustedError(DtlabError):
    """The oracle session ran out of queries."""

    def __init__(self, budget: int, counters: Dict[str, int]):
        super().__init__(f"query budget {budget} exhausted (bb={counters['bb']}, rex={counters['rex']})")
        self.budget = budget
        self.counters = dict(counters)


class NotInClassError(DtlabError):
    """No hypothesis in the target class is consistent with the data seen."""


class TooManyRelevantError(DtlabError):
    """More relevant variables were found than the caller allowed."""

    def __init__(self, found: Tuple[int, ...], cap: int):
        super().__init__(f"found {len(found)} relevant variables, cap is {cap}")
        self.found = tuple(found)
        self.cap = cap


class MonomialTooLargeError(DtlabError):
    """A maximal monomial search grew past its size cap."""

    def __init__(self, partial: int, cap: int):
        super().__init__(f"monomial grew beyond {cap} variables")
        self.partial = partial
        self.cap = cap


class AlgebraPreconditionError(DtlabError):
    """A membership-query routine was called outside its precondition."""

    def __init__(self, message: str, monomial: Optional[int] = None):
        super().__init__(message)
        self.monomial = monomial


class InvariantError(DtlabError, AssertionError):
    """A per-step algebraic identity failed; always a bug, never a verdict."""
