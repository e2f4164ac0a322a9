from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from concrete.nodes import ExprNode, Node, node_sort_key
from refinement import is_safe, render_type

from .engine import AnalysisResult

SAFE = "SAFE"
UNSAFE = "UNSAFE"


@dataclass(frozen=True)
class Verdict:
    status: str
    node: Optional[Node] = None
    reason: Optional[str] = None
    trace: List[str] = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return self.status == SAFE

    def render(self) -> str:
        if self.safe:
            return SAFE
        where = f" at {self.node.describe()}" if self.node is not None else ""
        return f"{UNSAFE}: {self.reason or 'type error'}{where}"


def check_safety(result: AnalysisResult) -> Verdict:
    """SAFE iff the map holds no ⊤err; otherwise point at the lowest location that does."""
    m = result.types
    if not result.converged:
        return Verdict(UNSAFE, reason=f"no fixpoint within {result.iterations} iterations")
    if m.is_safe():
        return Verdict(SAFE)
    bad = sorted((n for n, t in m.types.items() if not is_safe(t)), key=node_sort_key)
    node = bad[0] if bad else m.cause_node
    trace = [
        f"{n.describe()} : {render_type(t, result.lattice.domain)}"
        for n, t in m.items()
        if isinstance(n, ExprNode) and node is not None and n.env == getattr(node, "env", None)
    ]
    return Verdict(UNSAFE, node=node, reason=m.cause, trace=trace)
