from __future__ import annotations

import json
from dataclasses import asdict
from typing import Any, Dict, List, Optional

from concrete.nodes import ExprNode, VarNode
from concrete.serialize import node_to_json
from refinement import render_stack, render_type, type_to_json

from .engine import AnalysisResult
from .safety import Verdict


def config_to_json(result: AnalysisResult) -> Dict[str, Any]:
    cfg = asdict(result.config)
    cfg["thresholds"] = "auto" if cfg["thresholds"] is None else [str(c) for c in result.config.thresholds]
    cfg["qualifiers"] = None if cfg["qualifiers"] is None else [str(a) for a in result.config.qualifiers]
    return cfg


def types_by_location(result: AnalysisResult, structured: bool = True) -> List[Dict[str, Any]]:
    """Expression nodes grouped by source location, variable nodes by name and abstract stack."""
    domain = result.lattice.domain
    rows: List[Dict[str, Any]] = []
    for node, t in result.types.items():
        row: Dict[str, Any] = {"node": node.describe(), "type": render_type(t, domain)}
        if isinstance(node, ExprNode):
            row["loc"] = node.loc.display
        elif isinstance(node, VarNode):
            row["var"] = node.var
            row["stack"] = render_stack(node.stack)
        if structured:
            row["at"] = node_to_json(node)
            row["structured"] = type_to_json(t, domain)
        rows.append(row)
    return rows


def build_report(result: AnalysisResult, verdict: Verdict, source: Optional[str] = None,
                 oracle: Optional[Dict[str, Any]] = None, dump_types: bool = True) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "program": source,
        "config": config_to_json(result),
        "verdict": verdict.status,
        "iterations": result.iterations,
        "converged": result.converged,
        "max_depth": result.max_depth,
        "nodes": result.nodes,
        "timing": {"seconds": round(result.elapsed, 6)},
    }
    if not verdict.safe:
        out["reason"] = verdict.reason
        out["at"] = verdict.node.describe() if verdict.node is not None else None
        out["trace"] = list(verdict.trace)
    if dump_types:
        out["types"] = types_by_location(result)
    if oracle is not None:
        out["oracle"] = oracle
    return out


def render_text(result: AnalysisResult, verdict: Verdict, dump_types: bool = False) -> str:
    lines = [
        f"{verdict.render()}  [{result.config.describe()}, {result.iterations} iterations, "
        f"{result.elapsed:.3f}s]"
    ]
    if dump_types:
        for row in types_by_location(result, structured=False):
            lines.append(f"  {row['node']} : {row['type']}")
    for entry in verdict.trace:
        lines.append(f"  | {entry}")
    return "\n".join(lines)


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2)
