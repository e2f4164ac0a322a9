"""
Linear integer constraints and Fourier-Motzkin projection.

Every numeric domain in this package speaks ``LinCons``: ``Σ cᵢ·xᵢ ≤ b`` with
integer, coprime coefficients.  Variables range over the integers, so bounds
are floored on normalization (integer tightening).  Projection stays here;
satisfiability, entailment and bounds go through ``solver``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import floor, gcd
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

NU = "ν"

Number = Union[int, Fraction]
Coeffs = Tuple[Tuple[str, int], ...]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True, order=True)
class LinCons:
    coeffs: Coeffs
    bound: int

    @staticmethod
    def of(coeffs: Mapping[str, Number], bound: Number) -> "LinCons":
        items = [(v, Fraction(c)) for v, c in coeffs.items() if c != 0]
        b = Fraction(bound)
        if not items:
            return LinCons((), floor(b))
        den = reduce(_lcm, (c.denominator for _, c in items), b.denominator)
        ints = [(v, int(c * den)) for v, c in items]
        g = reduce(gcd, (abs(c) for _, c in ints))
        return LinCons(tuple(sorted((v, c // g) for v, c in ints)), floor(b * den / g))

    def coeff(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(v for v, _ in self.coeffs)

    @property
    def trivial(self) -> bool:
        return not self.coeffs

    def negate(self) -> "LinCons":
        return LinCons.of({v: -c for v, c in self.coeffs}, -self.bound - 1)

    def opposite(self) -> Coeffs:
        return tuple((v, -c) for v, c in self.coeffs)

    def rename(self, mapping: Mapping[str, str]) -> "LinCons":
        out: Dict[str, int] = {}
        for v, c in self.coeffs:
            w = mapping.get(v, v)
            out[w] = out.get(w, 0) + c
        return LinCons.of(out, self.bound)

    def holds(self, assignment: Mapping[str, int]) -> bool:
        return sum(c * assignment[v] for v, c in self.coeffs) <= self.bound

    def __str__(self) -> str:
        return render_cons(self.coeffs, self.bound, "≤")


def le(lhs: Mapping[str, Number], rhs: Number = 0) -> LinCons:
    return LinCons.of(lhs, rhs)


def ge(lhs: Mapping[str, Number], rhs: Number = 0) -> LinCons:
    return LinCons.of({v: -c for v, c in lhs.items()}, -Fraction(rhs))


def eq(lhs: Mapping[str, Number], rhs: Number = 0) -> List[LinCons]:
    return [le(lhs, rhs), ge(lhs, rhs)]


def var_eq(x: str, y: str) -> List[LinCons]:
    return eq({x: 1, y: -1}, 0)


def const_eq(x: str, c: Number) -> List[LinCons]:
    return eq({x: 1}, c)


def _term(v: str, c: int) -> str:
    if c == 1:
        return v
    return f"{c}·{v}"


def render_cons(coeffs: Coeffs, bound: int, rel: str) -> str:
    left = [(v, c) for v, c in coeffs if c > 0]
    right = [(v, -c) for v, c in coeffs if c < 0]
    lhs = " + ".join(_term(v, c) for v, c in left)
    rhs = " + ".join(_term(v, c) for v, c in right)
    if not lhs and not rhs:
        return f"0 {rel} {bound}"
    if not lhs:
        return f"{-bound} {rel} {rhs}"
    if not rhs:
        return f"{lhs} {rel} {bound}"
    if bound == 0:
        return f"{lhs} {rel} {rhs}"
    sign = "+" if bound > 0 else "-"
    return f"{lhs} {rel} {rhs} {sign} {abs(bound)}"


def render_conjunction(cons: Iterable[LinCons]) -> str:
    """Render a constraint set, folding opposite pairs into equalities."""
    pending = sorted(c for c in set(cons) if c.coeffs)
    by_coeffs = {c.coeffs: c for c in pending}
    parts: List[str] = []
    done: set = set()
    for c in pending:
        if c in done:
            continue
        other = by_coeffs.get(c.opposite())
        if other is not None and other.bound == -c.bound and other not in done:
            # keep the variant whose leading coefficient is positive
            lead = c if c.coeffs[0][1] > 0 else other
            parts.append(render_cons(lead.coeffs, lead.bound, "="))
            done.update({c, other})
        else:
            parts.append(str(c))
            done.add(c)
    return " ∧ ".join(parts)


# -- Fourier-Motzkin projection ---------------------------------------------

def _prune(cons: Iterable[LinCons]) -> Optional[FrozenSet[LinCons]]:
    """Keep the tightest bound per direction; None when a contradiction is evident."""
    best: Dict[Coeffs, int] = {}
    for c in cons:
        if not c.coeffs:
            if c.bound < 0:
                return None
            continue
        prev = best.get(c.coeffs)
        if prev is None or c.bound < prev:
            best[c.coeffs] = c.bound
    for coeffs, b in best.items():
        ob = best.get(tuple((v, -a) for v, a in coeffs))
        if ob is not None and b + ob < 0:
            return None
    return frozenset(LinCons(k, b) for k, b in best.items())


def _eliminate(cons: FrozenSet[LinCons], var: str) -> Optional[FrozenSet[LinCons]]:
    pos: List[LinCons] = []
    neg: List[LinCons] = []
    out: List[LinCons] = []
    for c in cons:
        a = c.coeff(var)
        if a > 0:
            pos.append(c)
        elif a < 0:
            neg.append(c)
        else:
            out.append(c)
    for p in pos:
        ap = p.coeff(var)
        for n in neg:
            an = -n.coeff(var)
            combined: Dict[str, int] = {}
            for v, a in p.coeffs:
                combined[v] = combined.get(v, 0) + an * a
            for v, a in n.coeffs:
                combined[v] = combined.get(v, 0) + ap * a
            combined.pop(var, None)
            out.append(LinCons.of(combined, an * p.bound + ap * n.bound))
    return _prune(out)


def _pick(cons: FrozenSet[LinCons], among: Optional[FrozenSet[str]] = None) -> Optional[str]:
    counts: Dict[str, List[int]] = {}
    for c in cons:
        for v, a in c.coeffs:
            if among is not None and v not in among:
                continue
            slot = counts.setdefault(v, [0, 0])
            slot[0 if a > 0 else 1] += 1
    if not counts:
        return None
    # fewest generated constraints first, ties broken by name for determinism
    return min(counts, key=lambda v: (counts[v][0] * counts[v][1] - counts[v][0] - counts[v][1], v))


@lru_cache(maxsize=1 << 16)
def eliminate(cons: FrozenSet[LinCons], variables: FrozenSet[str]) -> Optional[FrozenSet[LinCons]]:
    """Existentially quantify ``variables``; None when the system is found infeasible."""
    cur = _prune(cons)
    while cur is not None:
        var = _pick(cur, variables)
        if var is None:
            return cur
        cur = _eliminate(cur, var)
    return None


# Σ c·x ≠ b
Diseq = Tuple[Coeffs, int]
