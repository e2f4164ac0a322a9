"""
Data flow refinement types.

``BOT`` and ``TOP`` (the error type) are scope-polymorphic singletons.  A
``Base`` wraps a basic refinement of the active domain and owns its scope.  A
``Fun`` is a table indexed by abstract stacks; each entry holds an input type
over the enclosing scope and an output type over the enclosing scope extended
with the dependency variable ``var``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterator, Mapping, Optional, Tuple, Union

from domains.base import Scope
from lang.ast import Loc
from lang.kinds import Kind

from .stacks import AStack

Tag = Tuple[Loc, AStack]


class _Bot:
    __slots__ = ()

    def __repr__(self) -> str:
        return "⊥"

    def __reduce__(self):
        return "BOT"


class _Top:
    __slots__ = ()

    def __repr__(self) -> str:
        return "⊤err"

    def __reduce__(self):
        return "TOP"


BOT = _Bot()
TOP = _Top()


@dataclass(frozen=True)
class Base:
    kind: Kind
    ref: Any

    @property
    def scope(self) -> Scope:
        return self.ref.scope


Entry = Tuple["RefType", "RefType"]


@dataclass(frozen=True)
class Fun:
    var: str
    var_kind: Kind
    scope: Scope
    table: Tuple[Tuple[AStack, Entry], ...] = ()
    tags: FrozenSet[Tag] = field(default_factory=frozenset)

    @staticmethod
    def of(var: str, var_kind: Kind, scope: Scope, entries: Mapping[AStack, Entry],
           tags: FrozenSet[Tag] = frozenset()) -> "Fun":
        kept = tuple(sorted((s, e) for s, e in entries.items() if not (e[0] is BOT and e[1] is BOT)))
        return Fun(var, var_kind, scope, kept, frozenset(tags))

    @property
    def entries(self) -> Dict[AStack, Entry]:
        return dict(self.table)

    def get(self, stack: AStack) -> Entry:
        for s, e in self.table:
            if s == stack:
                return e
        return (BOT, BOT)

    @property
    def stacks(self) -> Tuple[AStack, ...]:
        return tuple(s for s, _ in self.table)

    @property
    def called(self) -> Tuple[AStack, ...]:
        """Stacks at which the function has been called (input not ⊥)."""
        return tuple(s for s, (i, _) in self.table if i is not BOT)

    @property
    def out_scope(self) -> Scope:
        return self.scope.add(self.var, self.var_kind)

    def __iter__(self) -> Iterator[Tuple[AStack, Entry]]:
        return iter(self.table)


RefType = Union[_Bot, _Top, Base, Fun]


def scope_of(t: RefType) -> Optional[Scope]:
    if isinstance(t, (Base, Fun)):
        return t.scope
    return None


def is_safe(t: RefType) -> bool:
    if t is TOP:
        return False
    if isinstance(t, Fun):
        return all(is_safe(i) and is_safe(o) for _, (i, o) in t.table)
    return True


def depth(t: RefType) -> int:
    if not isinstance(t, Fun):
        return 0
    inner = [max(depth(i), depth(o)) for _, (i, o) in t.table]
    return 1 + max(inner, default=0)


def nested_names(t: RefType) -> FrozenSet[str]:
    """All scope and dependency variable names mentioned anywhere in ``t``."""
    if isinstance(t, Base):
        return t.scope.names
    if isinstance(t, Fun):
        out = set(t.scope.names) | {t.var}
        for _, (i, o) in t.table:
            out |= nested_names(i) | nested_names(o)
        return frozenset(out)
    return frozenset()
