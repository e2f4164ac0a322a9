"""
Predicate abstraction over a finite qualifier set.

An element is the set of instantiated qualifiers (atoms) entailed by it, so
the order is reverse inclusion, join is intersection and the lattice has no
infinite ascending chains (widening is the join).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from lang.kinds import Kind

from . import linear, solver
from .base import BaseDomain, Scope
from .linear import NU, Coeffs, Diseq, LinCons

STAR = "⋆"

RELATIONS = ("le", "eq", "ne")

_FALSE = ("le", (), -1)


@dataclass(frozen=True, order=True)
class Atom:
    """``Σ c·x  rel  bound`` with rel one of le, eq, ne."""

    rel: str
    coeffs: Coeffs
    bound: int

    @staticmethod
    def make(rel: str, coeffs: Mapping[str, int], bound: int) -> Optional["Atom"]:
        """Normalized atom; None when trivially true."""
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        terms = {v: a for v, a in coeffs.items() if a}
        if not terms:
            holds = {"le": 0 <= bound, "eq": bound == 0, "ne": bound != 0}[rel]
            return None if holds else Atom(*_FALSE)
        if rel == "le":
            c = LinCons.of(terms, bound)
            return Atom(rel, c.coeffs, c.bound)
        g = reduce(gcd, (abs(a) for a in terms.values()))
        if bound % g:
            return None if rel == "ne" else Atom(*_FALSE)
        items = sorted((v, a // g) for v, a in terms.items())
        b = bound // g
        if items[0][1] < 0:
            items = [(v, -a) for v, a in items]
            b = -b
        return Atom(rel, tuple(items), b)

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(v for v, _ in self.coeffs)

    def linear(self) -> List[LinCons]:
        if self.rel == "le":
            return [LinCons(self.coeffs, self.bound)]
        if self.rel == "eq":
            return linear.eq(dict(self.coeffs), self.bound)
        return []

    def diseq(self) -> Optional[Diseq]:
        return (self.coeffs, self.bound) if self.rel == "ne" else None

    def rename(self, mapping: Mapping[str, str]) -> Optional["Atom"]:
        out: Dict[str, int] = {}
        for v, a in self.coeffs:
            w = mapping.get(v, v)
            out[w] = out.get(w, 0) + a
        return Atom.make(self.rel, out, self.bound)

    def __str__(self) -> str:
        rel = {"le": "≤", "eq": "=", "ne": "≠"}[self.rel]
        return linear.render_cons(self.coeffs, self.bound, rel)


def _entailed(cons: FrozenSet[LinCons], diseqs: Tuple[Diseq, ...], atom: Atom) -> bool:
    if atom.rel == "le":
        return solver.entails(cons, LinCons(atom.coeffs, atom.bound), diseqs)
    if atom.rel == "eq":
        return solver.entails_eq(cons, atom.coeffs, atom.bound, diseqs)
    return solver.excludes(cons, (atom.coeffs, atom.bound), diseqs)


@dataclass(frozen=True)
class PredSet:
    scope: Scope
    # None encodes ⊥
    atoms: Optional[FrozenSet[Atom]]


class PredicateDomain(BaseDomain):
    """Liquid-style conjunctions of qualifiers, instantiated per scope."""

    name = "pred"

    def __init__(self, qualifiers: Sequence[Atom]):
        self.qualifiers: Tuple[Atom, ...] = tuple(qualifiers)
        self._universe = lru_cache(maxsize=4096)(self._instantiate)

    def _instantiate(self, scope: Scope) -> FrozenSet[Atom]:
        subjects = [NU] + sorted(scope.numeric)
        stars = sorted(n for n, k in scope if k is Kind.INT)
        allowed = scope.numeric | {NU}
        out = set()
        for q in self.qualifiers:
            named = q.variables - {NU, STAR}
            if not named <= allowed:
                continue
            for subject in subjects:
                if subject in named:
                    continue
                fillers = stars if STAR in q.variables else [None]
                for star in fillers:
                    if star == subject or star in named:
                        continue
                    mapping = {NU: subject}
                    if star is not None:
                        mapping[STAR] = star
                    atom = q.rename(mapping)
                    if atom is not None and atom.coeffs:
                        out.add(atom)
        return frozenset(out)

    def universe(self, scope: Scope) -> FrozenSet[Atom]:
        return self._universe(scope)

    def _alpha(self, scope: Scope, atoms: Iterable[Atom], extra: Iterable[LinCons] = ()) -> PredSet:
        atoms = list(atoms)
        if any(not a.coeffs for a in atoms):
            return self.bottom(scope)
        cons = frozenset(c for a in atoms for c in a.linear()) | frozenset(extra)
        diseqs = tuple(sorted(d for d in (a.diseq() for a in atoms) if d is not None))
        if not solver.satisfiable(cons, diseqs):
            return self.bottom(scope)
        return PredSet(scope, frozenset(a for a in self.universe(scope) if _entailed(cons, diseqs, a)))

    def top(self, scope: Scope) -> PredSet:
        return self._alpha(scope, ())

    def bottom(self, scope: Scope) -> PredSet:
        return PredSet(scope, None)

    def is_bottom(self, b: PredSet) -> bool:
        return b.atoms is None

    def leq(self, b1: PredSet, b2: PredSet) -> bool:
        self._same_scope(b1, b2)
        if b1.atoms is None:
            return True
        if b2.atoms is None:
            return False
        return b2.atoms <= b1.atoms

    def join(self, b1: PredSet, b2: PredSet) -> PredSet:
        self._same_scope(b1, b2)
        if b1.atoms is None:
            return b2
        if b2.atoms is None:
            return b1
        return PredSet(b1.scope, b1.atoms & b2.atoms)

    def meet(self, b1: PredSet, b2: PredSet) -> PredSet:
        self._same_scope(b1, b2)
        if b1.atoms is None or b2.atoms is None:
            return self.bottom(b1.scope)
        return self._alpha(b1.scope, b1.atoms | b2.atoms)

    def widen(self, b1: PredSet, b2: PredSet, thresholds: Sequence[LinCons] = ()) -> PredSet:
        return self.join(b1, b2)

    def assume(self, b: PredSet, cons: Iterable[LinCons]) -> PredSet:
        if b.atoms is None:
            return b
        return self._alpha(b.scope, b.atoms, self._admissible(b.scope, cons))

    def project(self, b: PredSet, var: str) -> PredSet:
        scope = b.scope if var == NU else b.scope.remove(var)
        if b.atoms is None:
            return self.bottom(scope)
        return PredSet(scope, frozenset(a for a in b.atoms if var not in a.variables))

    def extend(self, b: PredSet, var: str, kind: Kind) -> PredSet:
        scope = b.scope.add(var, kind)
        if b.atoms is None:
            return self.bottom(scope)
        return self._alpha(scope, b.atoms)

    def rename(self, b: PredSet, old: str, new: str, kind: Optional[Kind] = None) -> PredSet:
        kind = kind or b.scope.kind_of(old) or Kind.INT
        scope = b.scope if old == NU else b.scope.remove(old)
        if new != NU:
            scope = scope.add(new, kind)
        if b.atoms is None:
            return self.bottom(scope)
        renamed = []
        for a in b.atoms:
            if old in a.variables and not kind.numeric:
                continue
            r = a.rename({old: new})
            if r is not None:
                renamed.append(r)
        return self._alpha(scope, renamed)

    def constraints(self, b: PredSet) -> FrozenSet[LinCons]:
        if b.atoms is None:
            return frozenset({LinCons((), -1)})
        return frozenset(c for a in b.atoms for c in a.linear())

    def disequalities(self, b: PredSet) -> Tuple[Diseq, ...]:
        if b.atoms is None:
            return ()
        return tuple(sorted(d for d in (a.diseq() for a in b.atoms) if d is not None))

    def render(self, b: PredSet) -> str:
        if b.atoms is None:
            return "⊥"
        # drop atoms implied by the rest of the set for readability
        shown = sorted(b.atoms, key=lambda a: (len(a.coeffs), a))
        kept: List[Atom] = []
        for a in shown:
            cons = frozenset(c for k in kept for c in k.linear())
            diseqs = tuple(d for d in (k.diseq() for k in kept) if d is not None)
            if not _entailed(cons, diseqs, a):
                kept.append(a)
        return " ∧ ".join(str(a) for a in kept) if kept else "⊤"
