"""
concrete
========

Concrete data flow semantics used as the ground-truth oracle: execution
nodes, values with their computational order and propagation, the transformer
and its least fixpoint.

Public API (stable re-exports):
- Env, ExprNode, VarNode (from nodes)
- CBOT, ERR, Constant, Table, value_leq, value_join, value_prop (from values)
- ExecMap, Diverged, ConcreteEvaluator, concrete_step, run_concrete,
  concrete_safe, iterates (from semantics)
- exec_map_to_json (from serialize)
"""
from .nodes import EMPTY_ENV, Env, ExprNode, Node, VarNode
from .semantics import (
    ConcreteEvaluator, Diverged, ExecMap, apply_binop, concrete_safe, concrete_step, iterates, run_concrete,
)
from .serialize import exec_map_to_json, value_to_json
from .values import (
    CBOT, EMPTY_TABLE, ERR, Constant, Table, is_safe_value, join_all, render_value, value_join, value_leq,
    value_prop,
)

__all__ = [
    "EMPTY_ENV", "Env", "ExprNode", "Node", "VarNode",
    "ConcreteEvaluator", "Diverged", "ExecMap", "apply_binop", "concrete_safe", "concrete_step", "iterates",
    "run_concrete",
    "exec_map_to_json", "value_to_json",
    "CBOT", "EMPTY_TABLE", "ERR", "Constant", "Table", "is_safe_value", "join_all", "render_value",
    "value_join", "value_leq", "value_prop",
]
