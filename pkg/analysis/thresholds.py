"""Widening thresholds collected from the program text."""
from __future__ import annotations

from itertools import permutations
from typing import Dict, List, Mapping, Optional, Tuple

from domains.linear import NU, LinCons
from lang.ast import Assert, BinOp, Const, Expr, Ite, Var, subexpressions
from lang.kinds import Kind

Linear = Tuple[Dict[str, int], int]


def linearize(e: Expr, kinds: Mapping[str, Kind]) -> Optional[Linear]:
    """``Σ c·x + c0`` for integer expressions built from variables, literals, + and -, and scaling."""
    if isinstance(e, Const) and type(e.value) is int:
        return {}, e.value
    if isinstance(e, Var) and kinds.get(e.name, Kind.INT) is Kind.INT:
        return {e.name: 1}, 0
    if isinstance(e, BinOp) and e.op in ("+", "-", "*"):
        left = linearize(e.left, kinds)
        right = linearize(e.right, kinds)
        if left is None or right is None:
            return None
        if e.op == "*":
            if not left[0]:
                left, right = right, left
            if right[0]:
                return None
            c = right[1]
            return {v: a * c for v, a in left[0].items()}, left[1] * c
        sign = 1 if e.op == "+" else -1
        coeffs = dict(left[0])
        for v, a in right[0].items():
            coeffs[v] = coeffs.get(v, 0) + sign * a
        return coeffs, left[1] + sign * right[1]
    return None


def _both_sides(coeffs: Dict[str, int], const: int) -> List[LinCons]:
    """Both orientations of ``Σ coeffs ⋈ -const`` together with their strict versions."""
    neg = {v: -a for v, a in coeffs.items()}
    return [
        LinCons.of(coeffs, -const),
        LinCons.of(coeffs, -const - 1),
        LinCons.of(neg, const),
        LinCons.of(neg, const - 1),
    ]


def auto_thresholds(program: Expr, kinds: Mapping[str, Kind]) -> Tuple[LinCons, ...]:
    out: List[LinCons] = []

    def add(cons: LinCons) -> None:
        if not cons.trivial and cons not in out:
            out.append(cons)

    for sub in subexpressions(program):
        guard = sub.cond if isinstance(sub, Ite) else sub.expr if isinstance(sub, Assert) else None
        if guard is None:
            continue
        for cmp in subexpressions(guard):
            if not (isinstance(cmp, BinOp) and cmp.op in ("=", "<>", "<", "<=", ">", ">=")):
                continue
            left = linearize(cmp.left, kinds)
            right = linearize(cmp.right, kinds)
            if left is None or right is None:
                continue
            coeffs = dict(left[0])
            for v, a in right[0].items():
                coeffs[v] = coeffs.get(v, 0) - a
            const = left[1] - right[1]
            for c in _both_sides(coeffs, const):
                add(c)
            # the same comparison about the value itself
            for v in list(coeffs):
                renamed = {NU if w == v else w: a for w, a in coeffs.items()}
                for c in _both_sides(renamed, const):
                    add(c)

    ints = sorted(n for n, k in kinds.items() if k is Kind.INT)
    for x in ints:
        add(LinCons.of({NU: 1, x: -1}, 0))
        add(LinCons.of({x: 1, NU: -1}, 0))
    for x, y in permutations(ints, 2):
        add(LinCons.of({x: 1, y: -1}, 0))
    for c in (0, 1, -1):
        add(LinCons.of({NU: 1}, c))
        add(LinCons.of({NU: -1}, -c))
    return tuple(out)
