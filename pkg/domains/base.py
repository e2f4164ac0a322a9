"""
Pluggable lattice of basic refinement types.

A ``BaseDomain`` is a strategy object; its elements are immutable values that
carry their own ``Scope``.  Every element implicitly mentions the value symbol
``ν`` in addition to the scope variables.  Function-kinded scope variables are
never constrained by any domain.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from lang.errors import AnalysisError
from lang.kinds import Kind

from . import linear, solver
from .linear import NU, Diseq, LinCons


class ScopeError(AnalysisError):
    pass


@dataclass(frozen=True)
class Scope:
    entries: Tuple[Tuple[str, Kind], ...] = ()

    @staticmethod
    def of(pairs: Iterable[Tuple[str, Kind]]) -> "Scope":
        merged: Dict[str, Kind] = {}
        for name, kind in pairs:
            if name == NU:
                raise ScopeError("ν cannot be a scope variable")
            merged[name] = kind
        return Scope(tuple(sorted(merged.items())))

    @property
    def names(self) -> FrozenSet[str]:
        return frozenset(n for n, _ in self.entries)

    @property
    def numeric(self) -> FrozenSet[str]:
        return frozenset(n for n, k in self.entries if k.numeric)

    def kind_of(self, name: str) -> Optional[Kind]:
        if name == NU:
            return Kind.INT
        for n, k in self.entries:
            if n == name:
                return k
        return None

    def is_numeric(self, name: str) -> bool:
        kind = self.kind_of(name)
        return kind is not None and kind.numeric

    def add(self, name: str, kind: Kind) -> "Scope":
        return Scope.of(self.entries + ((name, kind),))

    def remove(self, name: str) -> "Scope":
        return Scope(tuple(e for e in self.entries if e[0] != name))

    def union(self, other: "Scope") -> "Scope":
        return Scope.of(self.entries + other.entries)

    def __contains__(self, name: object) -> bool:
        return any(n == name for n, _ in self.entries)

    def __iter__(self) -> Iterator[Tuple[str, Kind]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "{" + ", ".join(n for n, _ in self.entries) + "}"


class BaseDomain(ABC):
    """Lattice interface shared by the predicate, octagon and polyhedra instances."""

    name: str = "base"

    # -- lattice ----------------------------------------------------------
    @abstractmethod
    def top(self, scope: Scope): ...

    @abstractmethod
    def bottom(self, scope: Scope): ...

    @abstractmethod
    def is_bottom(self, b) -> bool: ...

    @abstractmethod
    def leq(self, b1, b2) -> bool: ...

    @abstractmethod
    def join(self, b1, b2): ...

    @abstractmethod
    def meet(self, b1, b2): ...

    @abstractmethod
    def widen(self, b1, b2, thresholds: Sequence[LinCons] = ()): ...

    # -- constraint plumbing ----------------------------------------------
    @abstractmethod
    def assume(self, b, cons: Iterable[LinCons]):
        """Meet with linear constraints over the scope's numeric variables and ν."""

    @abstractmethod
    def project(self, b, var: str):
        """Existentially quantify ``var`` (a scope variable, or ν which stays implicit)."""

    @abstractmethod
    def extend(self, b, var: str, kind: Kind):
        """Add an unconstrained variable to the scope."""

    @abstractmethod
    def rename(self, b, old: str, new: str, kind: Optional[Kind] = None):
        """Rename ``old`` (a scope variable or ν) to ``new``, which must be fresh."""

    @abstractmethod
    def constraints(self, b) -> FrozenSet[LinCons]: ...

    def disequalities(self, b) -> Tuple[Diseq, ...]:
        return ()

    # -- derived operations -------------------------------------------------
    def is_top(self, b) -> bool:
        return self.leq(self.top(b.scope), b)

    def equivalent(self, b1, b2) -> bool:
        return self.leq(b1, b2) and self.leq(b2, b1)

    def of_const(self, value: int, scope: Scope):
        return self.assume(self.top(scope), linear.const_eq(NU, value))

    def strengthen_eq_var(self, b, x: str, y: str):
        if not (b.scope.is_numeric(x) and b.scope.is_numeric(y)):
            return b
        return self.assume(b, linear.var_eq(x, y))

    def strengthen_eq_const(self, b, x: str, c: int):
        if not b.scope.is_numeric(x):
            return b
        return self.assume(b, linear.const_eq(x, c))

    def subst_nu(self, b, x: str, kind: Kind = Kind.INT):
        """b[x/ν]: the value described by ν is now named x; ν is left unconstrained."""
        if x in b.scope:
            raise ScopeError(f"{x} already in scope {b.scope}")
        return self.rename(b, NU, x, kind)

    def forget_nu(self, b):
        return self.project(b, NU)

    def fit(self, b, scope: Scope):
        """Adapt ``b`` to ``scope``: drop variables not in it, add missing ones unconstrained."""
        for name, kind in b.scope:
            if scope.kind_of(name) != kind:
                b = self.project(b, name)
        for name, kind in scope:
            if name not in b.scope:
                b = self.extend(b, name, kind)
        return b

    def entails(self, b, c: LinCons) -> bool:
        if self.is_bottom(b):
            return True
        return solver.entails(self.constraints(b), c, self.disequalities(b))

    def bounds(self, b, var: str) -> Tuple[Optional[int], Optional[int]]:
        if self.is_bottom(b):
            return None, None
        cons = self.constraints(b)
        return solver.lower_bound(cons, ((var, 1),)), solver.upper_bound(cons, ((var, 1),))

    def member(self, b, assignment: Mapping[str, int]) -> bool:
        """Membership of an assignment (numeric entries only); unassigned variables are existential."""
        if self.is_bottom(b):
            return False
        allowed = b.scope.numeric | {NU}
        fixed: List[LinCons] = []
        for name, value in assignment.items():
            if name in allowed:
                fixed.extend(linear.const_eq(name, value))
        return solver.satisfiable(self.constraints(b) | frozenset(fixed), self.disequalities(b))

    def render(self, b) -> str:
        if self.is_bottom(b):
            return "⊥"
        cons = self.constraints(b)
        return linear.render_conjunction(cons) if cons else "⊤"

    # -- helpers for implementations ----------------------------------------
    @staticmethod
    def _same_scope(b1, b2) -> None:
        if b1.scope.names != b2.scope.names:
            raise ScopeError(f"scope mismatch: {b1.scope} vs {b2.scope}")

    @staticmethod
    def _admissible(scope: Scope, cons: Iterable[LinCons]) -> List[LinCons]:
        allowed = scope.numeric | {NU}
        return [c for c in cons if c.variables <= allowed]
