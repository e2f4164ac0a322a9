from __future__ import annotations

from typing import Dict

from .ast import App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Rec, Var


def pretty(e: Expr) -> str:
    """Render an expression back to surface syntax; ``let`` sugar is restored where it applies."""
    return _expr(e, {})


def _expr(e: Expr, names: Dict[str, str]) -> str:
    if isinstance(e, App) and isinstance(e.fn, Lambda):
        return _let(e.fn, e.arg, names)
    if isinstance(e, Lambda):
        return f"fun {e.param} -> {_expr(e.body, names)}"
    if isinstance(e, Rec):
        return _let_rec(e.name, e, e.name, names)
    if isinstance(e, Ite):
        return f"if {_expr(e.cond, names)} then {_expr(e.then, names)} else {_expr(e.orelse, names)}"
    if isinstance(e, App):
        return f"{_operand(e.fn, names, head=True)} {_operand(e.arg, names)}"
    return _operand(e, names, head=True)


def _let(binder: Lambda, value: Expr, names: Dict[str, str]) -> str:
    body = _expr(binder.body, names)
    if isinstance(value, Rec):
        return _let_rec(binder.param, value, body, names)
    return f"let {binder.param} = {_expr(value, names)} in {body}"


def _let_rec(shown: str, rec: Rec, body: str, names: Dict[str, str]) -> str:
    # the recursive binder is printed under the let's name, which is how the parser introduced it
    inner = dict(names)
    inner[rec.name] = shown
    return f"let rec {shown} {rec.param} = {_expr(rec.body, inner)} in {body}"


def _operand(e: Expr, names: Dict[str, str], head: bool = False) -> str:
    if isinstance(e, Var):
        return names.get(e.name, e.name)
    if isinstance(e, Const):
        if e.value is None:
            return "()"
        if isinstance(e.value, bool):
            return "true" if e.value else "false"
        if e.value < 0 and not head:
            return f"({e.value})"
        return str(e.value)
    if isinstance(e, Input):
        return "read_int ()"
    if isinstance(e, BinOp):
        return f"({_operand(e.left, names, head=True)} {e.op} {_operand(e.right, names, head=True)})"
    if isinstance(e, Assert):
        return f"(assert ({_expr(e.expr, names)}))"
    if isinstance(e, App) and head and not isinstance(e.fn, Lambda):
        return _expr(e, names)
    return f"({_expr(e, names)})"
