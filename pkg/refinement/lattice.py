"""
Lattice operations on refinement types, parameterized by a basic domain.

Function types are compared and combined modulo renaming of their dependency
variables: binary operations first rename the second operand's variable to the
first's.  Scopes are adapted with ``fit`` before base elements meet.
"""
from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from domains.base import BaseDomain, Scope
from domains.linear import NU, LinCons
from lang.kinds import Kind

from .stacks import AStack
from .types import BOT, TOP, Base, Entry, Fun, RefType, Tag, depth, is_safe, nested_names, scope_of

DEFAULT_DEPTH_CAP = 20


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    stem = base.split("~", 1)[0]
    taken = set(avoid)
    for n in itertools.count(1):
        name = f"{stem}~{n}"
        if name not in taken:
            return name
    raise AssertionError("unreachable")


class TypeLattice:
    def __init__(self, domain: BaseDomain, depth_cap: int = DEFAULT_DEPTH_CAP):
        self.domain = domain
        self.depth_cap = depth_cap

    # -- constructors -------------------------------------------------------
    def base(self, kind: Kind, ref) -> RefType:
        return BOT if self.domain.is_bottom(ref) else Base(kind, ref)

    def top_base(self, kind: Kind, scope: Scope) -> RefType:
        return Base(kind, self.domain.top(scope))

    def of_const(self, value: int, kind: Kind, scope: Scope) -> RefType:
        return Base(kind, self.domain.of_const(value, scope))

    def empty_fun(self, var: str, var_kind: Kind, scope: Scope, tags: FrozenSet[Tag] = frozenset()) -> Fun:
        return Fun.of(var, var_kind, scope, {}, tags)

    # -- scope plumbing -------------------------------------------------------
    def extend(self, t: RefType, var: str, kind: Kind) -> RefType:
        if isinstance(t, Base):
            if var in t.scope:
                return t
            return Base(t.kind, self.domain.extend(t.ref, var, kind))
        if isinstance(t, Fun):
            if var in t.scope:
                return t
            if t.var == var:
                t = self.rename_depvar(t, fresh_name(var, nested_names(t) | {var}))
            entries = {
                s: (self.extend(i, var, kind), self.extend(o, var, kind)) for s, (i, o) in t.table
            }
            return Fun.of(t.var, t.var_kind, t.scope.add(var, kind), entries, t.tags)
        return t

    def project(self, t: RefType, var: str) -> RefType:
        if isinstance(t, Base):
            if var != NU and var not in t.scope:
                return t
            return self.base(t.kind, self.domain.project(t.ref, var))
        if isinstance(t, Fun):
            if var not in t.scope:
                return t
            entries = {s: (self.project(i, var), self.project(o, var)) for s, (i, o) in t.table}
            return Fun.of(t.var, t.var_kind, t.scope.remove(var), entries, t.tags)
        return t

    def rename(self, t: RefType, old: str, new: str, kind: Optional[Kind] = None) -> RefType:
        """Rename scope variable ``old`` to the fresh ``new``."""
        if isinstance(t, Base):
            if old not in t.scope:
                return t
            return self.base(t.kind, self.domain.rename(t.ref, old, new, kind))
        if isinstance(t, Fun):
            if old not in t.scope:
                return t
            kind = kind or t.scope.kind_of(old)
            if t.var == new:
                t = self.rename_depvar(t, fresh_name(new, nested_names(t) | {new, old}))
            entries = {s: (self.rename(i, old, new, kind), self.rename(o, old, new, kind)) for s, (i, o) in t.table}
            return Fun.of(t.var, t.var_kind, t.scope.remove(old).add(new, kind), entries, t.tags)
        return t

    def rename_depvar(self, f: Fun, new: str, new_kind: Optional[Kind] = None) -> Fun:
        new_kind = new_kind or f.var_kind
        if new == f.var and new_kind == f.var_kind:
            return f
        same_sort = new_kind.numeric == f.var_kind.numeric
        entries: Dict[AStack, Entry] = {}
        for s, (i, o) in f.table:
            if same_sort:
                o = self.rename(o, f.var, new, new_kind)
            else:
                o = self.extend(self.project(o, f.var), new, new_kind)
            entries[s] = (i, o)
        return Fun.of(new, new_kind, f.scope, entries, f.tags)

    def fit(self, t: RefType, scope: Scope) -> RefType:
        """Adapt ``t`` to ``scope``: drop variables outside it and add the missing ones."""
        cur = scope_of(t)
        if cur is None or cur == scope:
            return t
        for name, kind in cur:
            if scope.kind_of(name) != kind:
                t = self.project(t, name)
        for name, kind in scope:
            if name not in scope_of(t):
                t = self.extend(t, name, kind)
        return t

    def _align(self, f1: Fun, f2: Fun) -> Fun:
        f2 = self.fit(f2, f1.scope)
        if f2.var == f1.var and f2.var_kind == f1.var_kind:
            return f2
        return self.rename_depvar(f2, f1.var, f1.var_kind)

    # -- order ----------------------------------------------------------------
    def leq(self, t1: RefType, t2: RefType) -> bool:
        if t1 is BOT or t2 is TOP:
            return True
        if t1 is TOP or t2 is BOT:
            return False
        if isinstance(t1, Base) and isinstance(t2, Base):
            return t1.kind == t2.kind and self.domain.leq(t1.ref, self.domain.fit(t2.ref, t1.scope))
        if isinstance(t1, Fun) and isinstance(t2, Fun):
            t2 = self._align(t1, t2)
            for s, (i1, o1) in t1.table:
                i2, o2 = t2.get(s)
                if not (self.leq(i1, i2) and self.leq(o1, o2)):
                    return False
            return True
        return False

    def equivalent(self, t1: RefType, t2: RefType) -> bool:
        return self.leq(t1, t2) and self.leq(t2, t1)

    def join(self, t1: RefType, t2: RefType) -> RefType:
        if t1 is BOT:
            return t2
        if t2 is BOT:
            return t1
        if t1 is TOP or t2 is TOP:
            return TOP
        if isinstance(t1, Base) and isinstance(t2, Base):
            if t1.kind != t2.kind:
                return TOP
            return Base(t1.kind, self.domain.join(t1.ref, self.domain.fit(t2.ref, t1.scope)))
        if isinstance(t1, Fun) and isinstance(t2, Fun):
            t2 = self._align(t1, t2)
            return self._pointwise(t1, t2, self.join, t1.tags | t2.tags)
        return TOP

    def meet(self, t1: RefType, t2: RefType) -> RefType:
        if t1 is BOT or t2 is BOT:
            return BOT
        if t1 is TOP:
            return t2
        if t2 is TOP:
            return t1
        if isinstance(t1, Base) and isinstance(t2, Base):
            if t1.kind != t2.kind:
                return BOT
            return self.base(t1.kind, self.domain.meet(t1.ref, self.domain.fit(t2.ref, t1.scope)))
        if isinstance(t1, Fun) and isinstance(t2, Fun):
            t2 = self._align(t1, t2)
            return self._pointwise(t1, t2, self.meet, t1.tags | t2.tags)
        return BOT

    def _pointwise(self, f1: Fun, f2: Fun, op, tags: FrozenSet[Tag]) -> Fun:
        entries: Dict[AStack, Entry] = {}
        for s in set(f1.stacks) | set(f2.stacks):
            i1, o1 = f1.get(s)
            i2, o2 = f2.get(s)
            entries[s] = (op(i1, i2), op(o1, o2))
        return Fun.of(f1.var, f1.var_kind, f1.scope, entries, tags)

    # -- strengthening ----------------------------------------------------------
    def strengthen(self, t: RefType, x: str, tx: RefType) -> RefType:
        """t[x ← tx]: constrain ``x`` in ``t`` by the type of the value bound to it."""
        if tx is BOT:
            return BOT
        if tx is TOP or isinstance(tx, Fun) or t is BOT or t is TOP:
            return t
        if isinstance(t, Base):
            kind = t.scope.kind_of(x)
            if kind is None or not kind.numeric:
                return t
            inner = self.fit(tx, t.scope.remove(x))
            if inner is BOT:
                return BOT
            sub = self.domain.subst_nu(inner.ref, x, kind)
            return self.base(t.kind, self.domain.meet(t.ref, sub))
        if isinstance(t, Fun):
            if x not in t.scope:
                return t
            entries = {s: (self.strengthen(i, x, tx), self.strengthen(o, x, tx)) for s, (i, o) in t.table}
            return Fun.of(t.var, t.var_kind, t.scope, entries, t.tags)
        return t

    def env_strengthen(self, t: RefType, env: Sequence[Tuple[str, RefType]], path=None) -> RefType:
        """Strengthen with every binding of a type environment, then with the path condition."""
        for name, tx in env:
            if t is BOT:
                return BOT
            t = self.strengthen(t, name, tx)
        if path is not None:
            t = self.assume_path(t, path)
        return t

    def assume_path(self, t: RefType, path) -> RefType:
        """Meet with a basic refinement over (a subset of) the scope that does not mention ν."""
        if isinstance(t, Base):
            cond = self.domain.fit(path, t.scope)
            return self.base(t.kind, self.domain.meet(t.ref, cond))
        if isinstance(t, Fun):
            entries = {s: (self.assume_path(i, path), self.assume_path(o, path)) for s, (i, o) in t.table}
            return Fun.of(t.var, t.var_kind, t.scope, entries, t.tags)
        return t

    def eq_var(self, t: RefType, x: str) -> RefType:
        """t⟨ν = x⟩ for base types over a numeric ``x``; other types pass through."""
        if isinstance(t, Base) and t.scope.is_numeric(x) and t.kind.numeric:
            return self.base(t.kind, self.domain.strengthen_eq_var(t.ref, NU, x))
        return t

    # -- subtyping and propagation ---------------------------------------------------
    def subtype(self, t1: RefType, t2: RefType) -> bool:
        if t1 is BOT:
            return t2 is not TOP
        if t1 is TOP or t2 is TOP or t2 is BOT:
            return False
        if isinstance(t1, Base) and isinstance(t2, Base):
            return t1.kind == t2.kind and self.domain.leq(t1.ref, self.domain.fit(t2.ref, t1.scope))
        if isinstance(t1, Fun) and isinstance(t2, Fun):
            t2 = self._align(t1, t2)
            for s in set(t1.stacks) | set(t2.stacks):
                i1, o1 = t1.get(s)
                i2, o2 = t2.get(s)
                if not self.subtype(i2, i1):
                    return False
                if not self.subtype(self.strengthen(o1, t1.var, i2), self.strengthen(o2, t1.var, i2)):
                    return False
            return True
        return False

    def prop(self, t1: RefType, t2: RefType) -> Tuple[RefType, RefType]:
        """Propagate ``t1`` towards ``t2``: inputs flow backwards, outputs forwards."""
        if isinstance(t1, Fun):
            if t2 is BOT:
                return t1, self.empty_fun(t1.var, t1.var_kind, t1.scope, t1.tags)
            if t2 is TOP:
                return TOP, TOP
            if isinstance(t2, Fun):
                return self._prop_fun(t1, t2)
        return t1, self.join(t1, t2)

    def _prop_fun(self, f1: Fun, f2: Fun) -> Tuple[RefType, RefType]:
        f2 = self._align(f1, f2)
        z = f1.var
        e1 = f1.entries
        e2 = f2.entries
        for s, (i2, o2) in f2.table:
            if i2 is BOT:
                continue
            i1, o1 = e1.get(s, (BOT, BOT))
            i2n, i1n = self.prop(i2, i1)
            o1n, o2n = self.prop(self.strengthen(o1, z, i2), self.strengthen(o2, z, i2))
            e1[s] = (i1n, self.join(o1, o1n))
            e2[s] = (i2n, self.join(o2, o2n))
        tags = f1.tags | f2.tags
        return (
            Fun.of(z, f1.var_kind, f1.scope, e1, tags),
            Fun.of(z, f1.var_kind, f1.scope, e2, tags),
        )

    # -- widening ---------------------------------------------------------------
    def shape(self, t: RefType) -> RefType:
        if isinstance(t, Base):
            return BOT
        if isinstance(t, Fun):
            entries = {s: (self.shape(i), self.shape(o)) for s, (i, o) in t.table}
            return Fun.of(t.var, t.var_kind, t.scope, entries, t.tags)
        return t

    def shape_widen(self, t1: RefType, t2: RefType) -> RefType:
        t = self.join(t1, t2)
        if depth(t) > self.depth_cap or _repeats_tags(t, ()):
            return TOP
        return t

    def widen_rel(self, t1: RefType, t2: RefType, thresholds: Sequence[LinCons] = ()) -> RefType:
        if isinstance(t1, Base) and isinstance(t2, Base) and t1.kind == t2.kind:
            return Base(t1.kind, self.domain.widen(t1.ref, self.domain.fit(t2.ref, t1.scope), thresholds))
        if isinstance(t1, Fun) and isinstance(t2, Fun):
            t2 = self._align(t1, t2)
            entries: Dict[AStack, Entry] = {}
            for s in set(t1.stacks) | set(t2.stacks):
                i1, o1 = t1.get(s)
                i2, o2 = t2.get(s)
                entries[s] = (self.widen_rel(i1, i2, thresholds), self.widen_rel(o1, o2, thresholds))
            return Fun.of(t1.var, t1.var_kind, t1.scope, entries, t1.tags | t2.tags)
        return self.join(t1, t2)

    def widen(self, t1: RefType, t2: RefType, thresholds: Sequence[LinCons] = ()) -> RefType:
        return self.widen_rel(t1, self.shape_widen(t1, t2), thresholds)

    # -- misc ----------------------------------------------------------------------
    def safe(self, t: RefType) -> bool:
        return is_safe(t)

    def depth(self, t: RefType) -> int:
        return depth(t)


def _repeats_tags(t: RefType, seen: Tuple[FrozenSet[Tag], ...]) -> bool:
    """True when a function type is nested inside another carrying the same non-empty tag set."""
    if not isinstance(t, Fun):
        return False
    if t.tags and t.tags in seen:
        return True
    inner = seen + (t.tags,) if t.tags else seen
    return any(_repeats_tags(i, inner) or _repeats_tags(o, inner) for _, (i, o) in t.table)
