from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set

from lang.kinds import Kind

from . import linear, solver
from .base import BaseDomain, Scope
from .linear import NU, Coeffs, LinCons


@dataclass(frozen=True)
class Polyhedron:
    scope: Scope
    # None encodes the empty polyhedron
    cons: Optional[FrozenSet[LinCons]]


class PolyhedraDomain(BaseDomain):
    """
    Loose convex polyhedra as constraint systems.

    Joins are weak: the result keeps, for a fixed set of directions (the
    normals of both operands plus all octagonal directions), the larger of the
    two support values.  This is an upper bound of both operands and exact
    whenever the convex hull is expressible in those directions.
    """

    name = "poly"

    def _make(self, scope: Scope, cons: Iterable[LinCons]) -> Polyhedron:
        pruned = linear._prune(self._admissible(scope, cons))
        if pruned is None or not solver.satisfiable(pruned):
            return Polyhedron(scope, None)
        return Polyhedron(scope, pruned)

    def top(self, scope: Scope) -> Polyhedron:
        return Polyhedron(scope, frozenset())

    def bottom(self, scope: Scope) -> Polyhedron:
        return Polyhedron(scope, None)

    def is_bottom(self, b: Polyhedron) -> bool:
        return b.cons is None

    def leq(self, b1: Polyhedron, b2: Polyhedron) -> bool:
        self._same_scope(b1, b2)
        if b1.cons is None:
            return True
        if b2.cons is None:
            return False
        return all(solver.entails(b1.cons, c) for c in b2.cons - b1.cons)

    def _directions(self, b1: Polyhedron, b2: Polyhedron) -> List[Coeffs]:
        dirs: Set[Coeffs] = {c.coeffs for c in b1.cons | b2.cons}
        names = sorted(b1.scope.numeric | {NU})
        for v in names:
            dirs.add(((v, 1),))
            dirs.add(((v, -1),))
        for u, v in combinations(names, 2):
            for a in (1, -1):
                for c in (1, -1):
                    dirs.add(LinCons.of({u: a, v: c}, 0).coeffs)
        return sorted(dirs)

    def join(self, b1: Polyhedron, b2: Polyhedron) -> Polyhedron:
        self._same_scope(b1, b2)
        if b1.cons is None:
            return b2
        if b2.cons is None:
            return b1
        if self.leq(b1, b2):
            return b2
        if self.leq(b2, b1):
            return b1
        out: List[LinCons] = []
        for d in self._directions(b1, b2):
            u1 = solver.upper_bound(b1.cons, d)
            if u1 is None:
                continue
            u2 = solver.upper_bound(b2.cons, d)
            if u2 is None:
                continue
            out.append(LinCons(d, max(u1, u2)))
        return self._make(b1.scope, out)

    def meet(self, b1: Polyhedron, b2: Polyhedron) -> Polyhedron:
        self._same_scope(b1, b2)
        if b1.cons is None or b2.cons is None:
            return self.bottom(b1.scope)
        return self._make(b1.scope, b1.cons | b2.cons)

    def widen(self, b1: Polyhedron, b2: Polyhedron, thresholds: Sequence[LinCons] = ()) -> Polyhedron:
        self._same_scope(b1, b2)
        if b1.cons is None:
            return b2
        if b2.cons is None or self.leq(b2, b1):
            return b1
        j = self.join(b1, b2)
        kept = [c for c in b1.cons if solver.entails(j.cons, c)]
        kept += [t for t in self._admissible(b1.scope, thresholds) if solver.entails(j.cons, t)]
        return self._make(b1.scope, kept)

    def assume(self, b: Polyhedron, cons: Iterable[LinCons]) -> Polyhedron:
        if b.cons is None:
            return b
        return self._make(b.scope, b.cons | frozenset(cons))

    def project(self, b: Polyhedron, var: str) -> Polyhedron:
        scope = b.scope if var == NU else b.scope.remove(var)
        if b.cons is None:
            return self.bottom(scope)
        rest = linear.eliminate(b.cons, frozenset({var}))
        if rest is None:
            return self.bottom(scope)
        return Polyhedron(scope, rest)

    def extend(self, b: Polyhedron, var: str, kind: Kind) -> Polyhedron:
        return Polyhedron(b.scope.add(var, kind), b.cons)

    def rename(self, b: Polyhedron, old: str, new: str, kind: Optional[Kind] = None) -> Polyhedron:
        kind = kind or b.scope.kind_of(old) or Kind.INT
        scope = b.scope if old == NU else b.scope.remove(old)
        if new != NU:
            scope = scope.add(new, kind)
        if b.cons is None:
            return self.bottom(scope)
        mapping = {old: new}
        return self._make(scope, (c.rename(mapping) for c in b.cons))

    def constraints(self, b: Polyhedron) -> FrozenSet[LinCons]:
        if b.cons is None:
            return frozenset({LinCons((), -1)})
        return b.cons
