"""
Concrete values: ⊥, the error value ω, constants and call-stack indexed tables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Tuple, Union

from lang.kinds import Kind

from .nodes import Stack


class _CBot:
    __slots__ = ()

    def __repr__(self) -> str:
        return "⊥"


class _Err:
    __slots__ = ()

    def __repr__(self) -> str:
        return "ω"


CBOT = _CBot()
ERR = _Err()


@dataclass(frozen=True)
class Constant:
    # booleans are 0/1 and unit is 0, told apart by ``kind``
    value: int
    kind: Kind

    @staticmethod
    def of(value: Union[int, bool, None]) -> "Constant":
        if value is None:
            return Constant(0, Kind.UNIT)
        if isinstance(value, bool):
            return Constant(int(value), Kind.BOOL)
        return Constant(int(value), Kind.INT)

    def __repr__(self) -> str:
        if self.kind is Kind.UNIT:
            return "()"
        if self.kind is Kind.BOOL:
            return "true" if self.value else "false"
        return str(self.value)


CEntry = Tuple["Value", "Value"]


@dataclass(frozen=True)
class Table:
    entries: Tuple[Tuple[Stack, CEntry], ...] = ()

    @staticmethod
    def of(entries: Mapping[Stack, CEntry]) -> "Table":
        kept = tuple(sorted((s, e) for s, e in entries.items() if not (e[0] is CBOT and e[1] is CBOT)))
        return Table(kept)

    def get(self, stack: Stack) -> CEntry:
        for s, e in self.entries:
            if s == stack:
                return e
        return (CBOT, CBOT)

    def as_dict(self) -> Dict[Stack, CEntry]:
        return dict(self.entries)

    @property
    def stacks(self) -> Tuple[Stack, ...]:
        return tuple(s for s, _ in self.entries)

    @property
    def called(self) -> Tuple[Stack, ...]:
        return tuple(s for s, (i, _) in self.entries if i is not CBOT)

    def restrict(self, stack: Stack) -> "Table":
        return Table.of({stack: self.get(stack)})

    def __repr__(self) -> str:
        return render_value(self)


EMPTY_TABLE = Table()

Value = Union[_CBot, _Err, Constant, Table]


def value_leq(v1: Value, v2: Value) -> bool:
    if v1 is CBOT or v2 is ERR:
        return True
    if isinstance(v1, Constant) and isinstance(v2, Constant):
        return v1 == v2
    if isinstance(v1, Table) and isinstance(v2, Table):
        for s, (i1, o1) in v1.entries:
            i2, o2 = v2.get(s)
            if not (value_leq(i1, i2) and value_leq(o1, o2)):
                return False
        return True
    return False


def value_join(v1: Value, v2: Value) -> Value:
    if v1 is CBOT:
        return v2
    if v2 is CBOT:
        return v1
    if v1 is ERR or v2 is ERR:
        return ERR
    if isinstance(v1, Constant) and isinstance(v2, Constant):
        return v1 if v1 == v2 else ERR
    if isinstance(v1, Table) and isinstance(v2, Table):
        entries: Dict[Stack, CEntry] = {}
        for s in set(v1.stacks) | set(v2.stacks):
            i1, o1 = v1.get(s)
            i2, o2 = v2.get(s)
            entries[s] = (value_join(i1, i2), value_join(o1, o2))
        return Table.of(entries)
    return ERR


def join_all(values: Iterable[Value]) -> Value:
    out: Value = CBOT
    for v in values:
        out = value_join(out, v)
    return out


def value_prop(v1: Value, v2: Value) -> Tuple[Value, Value]:
    """Propagate ``v1`` into ``v2``; table inputs flow backwards and outputs forwards."""
    if isinstance(v1, Table):
        if v2 is CBOT:
            return v1, EMPTY_TABLE
        if v2 is ERR:
            return ERR, ERR
        if isinstance(v2, Table):
            e1 = v1.as_dict()
            e2 = v2.as_dict()
            for s, (i2, o2) in v2.entries:
                if i2 is CBOT:
                    continue
                i1, o1 = e1.get(s, (CBOT, CBOT))
                i2n, i1n = value_prop(i2, i1)
                o1n, o2n = value_prop(o1, o2)
                e1[s] = (i1n, o1n)
                e2[s] = (i2n, o2n)
            return Table.of(e1), Table.of(e2)
    return v1, value_join(v1, v2)


def is_safe_value(v: Value) -> bool:
    if v is ERR:
        return False
    if isinstance(v, Table):
        return all(is_safe_value(i) and is_safe_value(o) for _, (i, o) in v.entries)
    return True


def render_value(v: Value) -> str:
    if isinstance(v, Table):
        parts = []
        for s, (i, o) in v.entries:
            stack = "·".join(loc.display for loc in s) or "ε"
            parts.append(f"{stack}◁{render_value(i)}→{render_value(o)}")
        return "[" + ", ".join(parts) + "]"
    return repr(v)
