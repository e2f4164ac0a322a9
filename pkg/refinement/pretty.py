from __future__ import annotations

from typing import Any, Dict

from domains.base import BaseDomain

from .stacks import render_stack
from .types import BOT, TOP, Base, Fun, RefType


def render_type(t: RefType, domain: BaseDomain) -> str:
    """``{ν | φ}`` for base types and ``x:[ŝ ◁ tᵢ → tₒ, ...]`` for tables."""
    if t is BOT:
        return "⊥"
    if t is TOP:
        return "⊤err"
    if isinstance(t, Base):
        return f"{t.kind.value}{{ν | {domain.render(t.ref)}}}"
    assert isinstance(t, Fun)
    parts = [
        f"{render_stack(s)} ◁ {render_type(i, domain)} → {render_type(o, domain)}"
        for s, (i, o) in t.table
    ]
    return f"{t.var}:[{', '.join(parts)}]"


def type_to_json(t: RefType, domain: BaseDomain) -> Dict[str, Any]:
    if t is BOT:
        return {"form": "bot"}
    if t is TOP:
        return {"form": "err"}
    if isinstance(t, Base):
        return {
            "form": "base",
            "kind": t.kind.value,
            "refinement": domain.render(t.ref),
            "constraints": sorted(str(c) for c in domain.constraints(t.ref)),
        }
    assert isinstance(t, Fun)
    return {
        "form": "fun",
        "var": t.var,
        "table": [
            {
                "stack": [loc.display for loc in s],
                "input": type_to_json(i, domain),
                "output": type_to_json(o, domain),
            }
            for s, (i, o) in t.table
        ],
    }
