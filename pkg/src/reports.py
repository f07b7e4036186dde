"""
Tester reports.

A TesterReport is the single result type of every tester and of the CLI
test command. Reports serialize to one line of deterministic JSON;
elapsed_ms is only included when timing is requested.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.fileformats import dumps

ACCEPT = "accept"
REJECT = "reject"
INCONCLUSIVE = "inconclusive"

DECISIONS = (ACCEPT, REJECT, INCONCLUSIVE)


@dataclass
class TesterReport:
    decision: str
    reason: str
    queries: Dict[str, int]
    walks: List[Dict[str, Any]] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    elapsed_ms: Optional[float] = None

    def __post_init__(self):
        if self.decision not in DECISIONS:
            raise ValueError(f"Invalid decision: {self.decision}. Valid decisions are: {DECISIONS}")

    @property
    def accepted(self) -> bool:
        return self.decision == ACCEPT

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        out = {
            "decision": self.decision,
            "reason": self.reason,
            "queries": dict(self.queries),
            "walks": list(self.walks),
            "params": dict(self.params),
            "seed": self.seed,
        }
        if timing and self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out

    def to_json(self, pretty: bool = False, timing: bool = False) -> str:
        return dumps(self.to_dict(timing), pretty)


class Stopwatch:
    """Milliseconds since construction."""

    def __init__(self):
        self._start = time.perf_counter()

    def ms(self) -> float:
        return (time.perf_counter() - self._start) * 1000
