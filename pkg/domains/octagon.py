"""
Octagons over the integers as difference-bound matrices.

Signed literals ``(x, +1)`` and ``(x, -1)`` stand for ``x`` and ``-x``.  A
matrix entry ``(p, q) ↦ c`` reads ``q - p ≤ c``; unary bounds live on the
pair of opposite literals (``x ≤ c`` is ``((x,-1),(x,+1)) ↦ 2c``).  Missing
entries are +∞.  Non-octagonal constraints handed to ``assume`` are
linearized through the current interval bounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import inf
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from lang.kinds import Kind

from .base import BaseDomain, Scope
from .linear import NU, LinCons

Lit = Tuple[str, int]
Key = Tuple[Lit, Lit]
Table = Dict[Key, int]


@dataclass(frozen=True)
class Octagon:
    scope: Scope
    # None encodes the empty octagon
    entries: Optional[Tuple[Tuple[Key, int], ...]]
    closed: bool = True

    def table(self) -> Table:
        return dict(self.entries or ())


def _bar(lit: Lit) -> Lit:
    return (lit[0], -lit[1])


def _freeze(table: Table) -> Tuple[Tuple[Key, int], ...]:
    return tuple(sorted(table.items()))


def _put(table: Table, key: Key, c: int) -> None:
    p, q = key
    for k in (key, (_bar(q), _bar(p))):
        prev = table.get(k)
        if prev is None or c < prev:
            table[k] = c


def close(table: Table) -> Optional[Table]:
    """Tight closure; None when the constraints are unsatisfiable over the integers."""
    names = sorted({lit[0] for key in table for lit in key})
    if not names:
        return dict(table)
    lits: List[Lit] = [(v, s) for v in names for s in (1, -1)]
    idx = {lit: i for i, lit in enumerate(lits)}
    n = len(lits)
    m = [[inf] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 0
    for (p, q), c in table.items():
        i, j = idx[p], idx[q]
        m[i][j] = min(m[i][j], c)
    for _ in range(n + 1):
        before = [row[:] for row in m]
        for k in range(n):
            mk = m[k]
            for i in range(n):
                mik = m[i][k]
                if mik == inf:
                    continue
                mi = m[i]
                for j in range(n):
                    t = mik + mk[j]
                    if t < mi[j]:
                        mi[j] = t
        for i in range(n):
            if m[i][i] < 0:
                return None
            if m[i][i ^ 1] != inf:
                m[i][i ^ 1] = 2 * (m[i][i ^ 1] // 2)
        for i in range(n):
            for j in range(n):
                a, b = m[i][i ^ 1], m[j ^ 1][j]
                if a != inf and b != inf:
                    m[i][j] = min(m[i][j], (a + b) // 2)
        if any(m[i][i] < 0 for i in range(n)):
            return None
        if m == before:
            break
    return {
        (lits[i], lits[j]): int(m[i][j])
        for i in range(n) for j in range(n)
        if i != j and m[i][j] != inf
    }


def _as_entry(c: LinCons) -> Optional[Tuple[Key, int]]:
    if len(c.coeffs) == 1:
        (v, a), = c.coeffs
        s = 1 if a > 0 else -1
        if abs(a) != 1:
            return None
        return ((v, -s), (v, s)), 2 * c.bound
    if len(c.coeffs) == 2:
        (u, a), (v, b) = c.coeffs
        if abs(a) != 1 or abs(b) != 1:
            return None
        return ((u, -a), (v, b)), c.bound
    return None


def _to_cons(key: Key, c: int) -> LinCons:
    (pv, ps), (qv, qs) = key
    coeffs: Dict[str, int] = {qv: qs}
    coeffs[pv] = coeffs.get(pv, 0) - ps
    return LinCons.of(coeffs, c)


class OctagonDomain(BaseDomain):
    name = "oct"

    def _make(self, scope: Scope, table: Table) -> Octagon:
        closed = close(table)
        if closed is None:
            return Octagon(scope, None)
        return Octagon(scope, _freeze(closed))

    def _closed(self, b: Octagon) -> Optional[Table]:
        if b.entries is None:
            return None
        return b.table() if b.closed else close(b.table())

    def top(self, scope: Scope) -> Octagon:
        return Octagon(scope, ())

    def bottom(self, scope: Scope) -> Octagon:
        return Octagon(scope, None)

    def is_bottom(self, b: Octagon) -> bool:
        return b.entries is None or (not b.closed and close(b.table()) is None)

    def leq(self, b1: Octagon, b2: Octagon) -> bool:
        self._same_scope(b1, b2)
        t1 = self._closed(b1)
        if t1 is None:
            return True
        if self.is_bottom(b2):
            return False
        return all(t1.get(k, inf) <= c for k, c in b2.table().items())

    def join(self, b1: Octagon, b2: Octagon) -> Octagon:
        self._same_scope(b1, b2)
        t1, t2 = self._closed(b1), self._closed(b2)
        if t1 is None:
            return b2
        if t2 is None:
            return b1
        return Octagon(b1.scope, _freeze({k: max(c, t2[k]) for k, c in t1.items() if k in t2}))

    def meet(self, b1: Octagon, b2: Octagon) -> Octagon:
        self._same_scope(b1, b2)
        if b1.entries is None or b2.entries is None:
            return self.bottom(b1.scope)
        table = b1.table()
        for k, c in b2.table().items():
            _put(table, k, c)
        return self._make(b1.scope, table)

    def widen(self, b1: Octagon, b2: Octagon, thresholds: Sequence[LinCons] = ()) -> Octagon:
        self._same_scope(b1, b2)
        if self.is_bottom(b1):
            return b2
        t2 = self._closed(b2)
        if t2 is None:
            return b1
        ladder: Dict[Key, List[int]] = {}
        for t in self._admissible(b1.scope, thresholds):
            entry = _as_entry(t)
            if entry is None:
                continue
            key, c = entry
            ladder.setdefault(key, []).append(c)
            ladder.setdefault((_bar(key[1]), _bar(key[0])), []).append(c)
        out: Table = {}
        for k, c in b1.table().items():
            c2 = t2.get(k, inf)
            if c2 <= c:
                out[k] = c
                continue
            above = [t for t in ladder.get(k, ()) if t >= c2]
            if above:
                out[k] = min(above)
        return Octagon(b1.scope, _freeze(out), closed=False)

    def assume(self, b: Octagon, cons: Iterable[LinCons]) -> Octagon:
        if b.entries is None:
            return b
        table = self._closed(b)
        if table is None:
            return self.bottom(b.scope)
        pending: List[LinCons] = []
        for c in self._admissible(b.scope, cons):
            if c.trivial:
                if c.bound < 0:
                    return self.bottom(b.scope)
                continue
            entry = _as_entry(c)
            if entry is None:
                pending.append(c)
            else:
                _put(table, *entry)
        closed = close(table)
        if closed is None:
            return self.bottom(b.scope)
        if pending:
            for c in pending:
                for key, bound in self._linearize(closed, c):
                    _put(closed, key, bound)
            closed = close(closed)
            if closed is None:
                return self.bottom(b.scope)
        return Octagon(b.scope, _freeze(closed))

    @staticmethod
    def _linearize(table: Table, c: LinCons) -> List[Tuple[Key, int]]:
        """Octagonal consequences of ``c`` using the interval bounds in ``table``."""

        def sup(v: str, a: int) -> float:
            # max of a·v
            if a > 0:
                hi = table.get(((v, -1), (v, 1)))
                return inf if hi is None else a * (hi // 2)
            lo = table.get(((v, 1), (v, -1)))
            return inf if lo is None else -a * (lo // 2)

        out: List[Tuple[Key, int]] = []
        terms = dict(c.coeffs)
        for v, a in terms.items():
            rest = sum(sup(w, -b) for w, b in terms.items() if w != v)
            if rest == inf:
                continue
            # a·v ≤ bound + rest
            lim = c.bound + rest
            s = 1 if a > 0 else -1
            out.append((((v, -s), (v, s)), 2 * int(lim // abs(a))))
        for (u, a), (v, b) in combinations(terms.items(), 2):
            if abs(a) != abs(b):
                continue
            rest = sum(sup(w, -d) for w, d in terms.items() if w not in (u, v))
            if rest == inf:
                continue
            lim = int((c.bound + rest) // abs(a))
            out.append((((u, -(a // abs(a))), (v, b // abs(b))), lim))
        return out

    def project(self, b: Octagon, var: str) -> Octagon:
        scope = b.scope if var == NU else b.scope.remove(var)
        table = self._closed(b)
        if table is None:
            return self.bottom(scope)
        return Octagon(scope, _freeze({k: c for k, c in table.items() if var not in (k[0][0], k[1][0])}))

    def extend(self, b: Octagon, var: str, kind: Kind) -> Octagon:
        return Octagon(b.scope.add(var, kind), b.entries, b.closed)

    def rename(self, b: Octagon, old: str, new: str, kind: Optional[Kind] = None) -> Octagon:
        kind = kind or b.scope.kind_of(old) or Kind.INT
        scope = b.scope if old == NU else b.scope.remove(old)
        if new != NU:
            scope = scope.add(new, kind)
        if b.entries is None:
            return self.bottom(scope)
        if not kind.numeric:
            return Octagon(scope, self.project(b, old).entries, b.closed)

        def sub(lit: Lit) -> Lit:
            return (new, lit[1]) if lit[0] == old else lit

        return Octagon(scope, _freeze({(sub(p), sub(q)): c for (p, q), c in b.table().items()}), b.closed)

    def constraints(self, b: Octagon) -> FrozenSet[LinCons]:
        table = self._closed(b)
        if table is None:
            return frozenset({LinCons((), -1)})
        out = set()
        for key, c in table.items():
            cons = _to_cons(key, c)
            if not cons.trivial:
                out.add(cons)
        return frozenset(out)
