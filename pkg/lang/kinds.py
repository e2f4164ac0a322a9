from __future__ import annotations

from enum import Enum
from typing import Dict, Optional

from .ast import (
    ARITH_OPS, LOGIC_OPS, App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Rec, Var, subexpressions,
)


class Kind(str, Enum):
    INT = "int"
    BOOL = "bool"
    UNIT = "unit"
    FUN = "fun"

    @property
    def numeric(self) -> bool:
        return self is not Kind.FUN


def const_kind(value) -> Kind:
    if value is None:
        return Kind.UNIT
    if isinstance(value, bool):
        return Kind.BOOL
    return Kind.INT


def expr_kind(e: Expr, kinds: Dict[str, Kind]) -> Optional[Kind]:
    if isinstance(e, Const):
        return const_kind(e.value)
    if isinstance(e, Var):
        return kinds.get(e.name)
    if isinstance(e, (Lambda, Rec)):
        return Kind.FUN
    if isinstance(e, BinOp):
        return Kind.INT if e.op in ARITH_OPS else Kind.BOOL
    if isinstance(e, Ite):
        return expr_kind(e.then, kinds) or expr_kind(e.orelse, kinds)
    if isinstance(e, Assert):
        return Kind.UNIT
    if isinstance(e, Input):
        return Kind.INT
    return None


def infer_kinds(program: Expr) -> Dict[str, Kind]:
    """
    Assign every binder a kind from its syntactic uses.

    The language is untyped, so this is a best guess: conflicting uses keep the
    first kind found and the analysis reports the resulting shape errors as ⊤err.
    Binders with no informative use default to int.
    """
    kinds: Dict[str, Kind] = {}
    params: Dict[str, str] = {}  # function-valued binder -> its parameter

    def assign(name: str, kind: Optional[Kind]) -> bool:
        if kind is None or name in kinds:
            return False
        kinds[name] = kind
        return True

    for sub in subexpressions(program):
        if isinstance(sub, Rec):
            assign(sub.name, Kind.FUN)
            params[sub.name] = sub.param
        elif isinstance(sub, App) and isinstance(sub.fn, Lambda) and isinstance(sub.arg, (Lambda, Rec)):
            params[sub.fn.param] = sub.arg.param

    changed = True
    while changed:
        changed = False
        for sub in subexpressions(program):
            if isinstance(sub, App):
                if isinstance(sub.fn, Var):
                    changed |= assign(sub.fn.name, Kind.FUN)
                    param = params.get(sub.fn.name)
                    if param is not None:
                        if isinstance(sub.arg, Var) and param in kinds:
                            changed |= assign(sub.arg.name, kinds[param])
                        changed |= assign(param, expr_kind(sub.arg, kinds))
                if isinstance(sub.fn, Lambda):
                    changed |= assign(sub.fn.param, expr_kind(sub.arg, kinds))
            elif isinstance(sub, BinOp):
                for side, other in ((sub.left, sub.right), (sub.right, sub.left)):
                    if not isinstance(side, Var):
                        continue
                    if sub.op in LOGIC_OPS:
                        changed |= assign(side.name, Kind.BOOL)
                    elif sub.op in ("=", "<>"):
                        changed |= assign(side.name, expr_kind(other, kinds))
                    else:
                        changed |= assign(side.name, Kind.INT)
            elif isinstance(sub, (Ite, Assert)):
                guard = sub.cond if isinstance(sub, Ite) else sub.expr
                if isinstance(guard, Var):
                    changed |= assign(guard.name, Kind.BOOL)
    for sub in subexpressions(program):
        if isinstance(sub, Lambda):
            kinds.setdefault(sub.param, Kind.INT)
        elif isinstance(sub, Rec):
            kinds.setdefault(sub.param, Kind.INT)
    return kinds
