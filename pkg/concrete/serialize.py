from __future__ import annotations

from typing import Any, Dict, List, Union

from .nodes import Env, ExprNode, Node, VarNode
from .semantics import Diverged, ExecMap
from .values import CBOT, ERR, Constant, Table, Value


def value_to_json(v: Value) -> Any:
    if v is CBOT:
        return {"form": "bot"}
    if v is ERR:
        return {"form": "err"}
    if isinstance(v, Constant):
        return {"form": "const", "kind": v.kind.value, "value": v.value}
    assert isinstance(v, Table)
    return {
        "form": "table",
        "entries": [
            {"stack": _stack(s), "in": value_to_json(i), "out": value_to_json(o)}
            for s, (i, o) in v.entries
        ],
    }


def _stack(stack) -> List[str]:
    return [loc.display for loc in stack]


def _env_path(env: Env) -> List[Dict[str, Any]]:
    return [{"var": name, "stack": _stack(node.stack)} for name, node in env]


def node_to_json(node: Node) -> Dict[str, Any]:
    if isinstance(node, ExprNode):
        return {"loc": node.loc.display, "env": _env_path(node.env)}
    assert isinstance(node, VarNode)
    return {"var": node.var, "env": _env_path(node.env), "stack": _stack(node.stack)}


def exec_map_to_json(result: Union[ExecMap, Diverged]) -> Dict[str, Any]:
    diverged = isinstance(result, Diverged)
    m = result.last if diverged else result
    out: Dict[str, Any] = {"diverged": diverged, "top": m.top}
    if diverged:
        out["iterations"] = result.iterations
    if m.top:
        out["cause"] = m.cause
        out["nodes"] = []
        return out
    out["nodes"] = [
        {"node": node_to_json(n), "value": value_to_json(m.values[n])}
        for n in m.nodes()
    ]
    return out
