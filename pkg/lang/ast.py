from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

ARITH_OPS = ("+", "-", "*")
COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")
LOGIC_OPS = ("&&", "||")
BINARY_OPS = ARITH_OPS + COMPARE_OPS + LOGIC_OPS


@dataclass(frozen=True, order=True)
class Loc:
    """A program location. Identity and ordering are by ``id`` only."""

    id: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    label: Optional[str] = field(default=None, compare=False)

    @property
    def display(self) -> str:
        if self.label:
            return self.label
        if self.line:
            return f"{self.line}:{self.column}"
        return f"#{self.id}"

    def __repr__(self) -> str:
        return f"Loc({self.display})"


@dataclass(frozen=True)
class Const:
    # None is the unit value
    value: Union[int, bool, None]
    loc: Loc

    @property
    def kind(self) -> str:
        if self.value is None:
            return "unit"
        if isinstance(self.value, bool):
            return "bool"
        return "int"


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"
    loc: Loc


@dataclass(frozen=True)
class Lambda:
    param: str
    body: "Expr"
    loc: Loc


@dataclass(frozen=True)
class Rec:
    name: str
    param: str
    body: "Expr"
    loc: Loc


@dataclass(frozen=True)
class Ite:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"
    loc: Loc


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    loc: Loc


@dataclass(frozen=True)
class Assert:
    expr: "Expr"
    loc: Loc


@dataclass(frozen=True)
class Input:
    """``read_int ()``: an unknown integer supplied by the environment."""

    loc: Loc


Expr = Union[Const, Var, App, Lambda, Rec, Ite, BinOp, Assert, Input]


def children(e: Expr) -> tuple:
    if isinstance(e, App):
        return (e.fn, e.arg)
    if isinstance(e, (Lambda, Rec)):
        return (e.body,)
    if isinstance(e, Ite):
        return (e.cond, e.then, e.orelse)
    if isinstance(e, BinOp):
        return (e.left, e.right)
    if isinstance(e, Assert):
        return (e.expr,)
    return ()


def subexpressions(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal, iterative so deep programs do not hit the recursion limit."""
    stack = [e]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(children(cur)))


def binders(e: Expr) -> Iterator[str]:
    for sub in subexpressions(e):
        if isinstance(sub, Lambda):
            yield sub.param
        elif isinstance(sub, Rec):
            yield sub.name
            yield sub.param


def free_vars(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Lambda):
        return free_vars(e.body) - {e.param}
    if isinstance(e, Rec):
        return free_vars(e.body) - {e.name, e.param}
    out: set = set()
    for c in children(e):
        out |= free_vars(c)
    return out


def locations(e: Expr) -> list:
    return [sub.loc for sub in subexpressions(e)]


def find_by_label(e: Expr, label: str) -> Expr:
    for sub in subexpressions(e):
        if sub.loc.label == label:
            return sub
    raise KeyError(label)


class LocFactory:
    """Hands out fresh locations; one factory per parsed program."""

    def __init__(self, start: int = 0):
        self._next = start

    def fresh(self, line: int = 0, column: int = 0, label: Optional[str] = None) -> Loc:
        loc = Loc(self._next, line, column, label)
        self._next += 1
        return loc
