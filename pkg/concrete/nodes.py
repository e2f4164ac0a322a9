"""
Execution nodes shared by the concrete semantics and the analysis.

An expression node pairs a location with the environment it is evaluated in;
a variable node is created when a function is entered at some call stack.
Variables are keyed by name since binders are alpha-unique.  The analysis
uses the same classes with stacks truncated to ``k`` call sites.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

from lang.ast import Loc

Stack = Tuple[Loc, ...]


@dataclass(frozen=True)
class Env:
    bindings: Tuple[Tuple[str, "VarNode"], ...] = ()

    def lookup(self, name: str) -> Optional["VarNode"]:
        for n, node in reversed(self.bindings):
            if n == name:
                return node
        return None

    def extend(self, name: str, node: "VarNode") -> "Env":
        return Env(self.bindings + ((name, node),))

    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.bindings)

    def __iter__(self) -> Iterator[Tuple[str, "VarNode"]]:
        return iter(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)


EMPTY_ENV = Env()


@dataclass(frozen=True)
class ExprNode:
    loc: Loc
    env: Env = EMPTY_ENV

    def describe(self) -> str:
        return f"{self.loc.display}{_env_suffix(self.env)}"


@dataclass(frozen=True)
class VarNode:
    var: str
    env: Env
    stack: Stack

    def describe(self) -> str:
        stack = "·".join(loc.display for loc in self.stack) or "ε"
        return f"{self.var}^{stack}{_env_suffix(self.env)}"


Node = Union[ExprNode, VarNode]


def _env_suffix(env: Env) -> str:
    if not env.bindings:
        return ""
    return "[" + ", ".join(f"{n}@{'·'.join(l.display for l in v.stack) or 'ε'}" for n, v in env) + "]"


def node_sort_key(node: Node) -> tuple:
    """Deterministic ordering: by location (variable nodes by name), then by depth of environment."""
    if isinstance(node, ExprNode):
        return (0, node.loc.id, len(node.env), node.describe())
    return (1, node.var, len(node.env), node.describe())
