"""
Integer decision procedures for linear constraint systems, backed by z3.

Constraints stay ``LinCons`` / ``Diseq`` everywhere else; this module is the
only place they are translated to z3 terms over ``Int`` variables.  z3
contexts are not thread-safe, so each thread (batch workers, the HTTP
executor) gets its own.  Answers are memoized on the frozen constraint sets.
"""
from __future__ import annotations

import threading
from functools import lru_cache
from typing import FrozenSet, Iterable, Optional

import z3

from .linear import Coeffs, Diseq, LinCons, eq

_local = threading.local()


def _ctx() -> z3.Context:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = z3.Context()
    return ctx


def _term(coeffs: Coeffs, ctx: z3.Context) -> z3.ArithRef:
    return z3.Sum([z3.IntVal(0, ctx)] + [c * z3.Int(v, ctx) for v, c in coeffs])


def _le(c: LinCons, ctx: z3.Context) -> z3.BoolRef:
    if not c.coeffs:
        return z3.BoolVal(c.bound >= 0, ctx)
    return _term(c.coeffs, ctx) <= c.bound


def _ne(d: Diseq, ctx: z3.Context) -> z3.BoolRef:
    coeffs, b = d
    if not coeffs:
        return z3.BoolVal(b != 0, ctx)
    return _term(coeffs, ctx) != b


def _solver(cons: Iterable[LinCons], diseqs: Iterable[Diseq]) -> z3.Solver:
    ctx = _ctx()
    s = z3.Solver(ctx=ctx)
    s.add([_le(c, ctx) for c in cons])
    s.add([_ne(d, ctx) for d in diseqs])
    return s


@lru_cache(maxsize=1 << 16)
def _check(cons: FrozenSet[LinCons], diseqs: FrozenSet[Diseq]) -> bool:
    result = _solver(cons, diseqs).check()
    if result == z3.unknown:
        raise RuntimeError(f"solver gave up on {sorted(cons)}")
    return result == z3.sat


def satisfiable(cons: Iterable[LinCons], diseqs: Iterable[Diseq] = ()) -> bool:
    return _check(frozenset(cons), frozenset(diseqs))


def entails(cons: Iterable[LinCons], c: LinCons, diseqs: Iterable[Diseq] = ()) -> bool:
    return not satisfiable(frozenset(cons) | {c.negate()}, diseqs)


def entails_eq(cons: Iterable[LinCons], coeffs: Coeffs, bound: int, diseqs: Iterable[Diseq] = ()) -> bool:
    lo, hi = eq(dict(coeffs), bound)
    return entails(cons, lo, diseqs) and entails(cons, hi, diseqs)


def excludes(cons: Iterable[LinCons], d: Diseq, diseqs: Iterable[Diseq] = ()) -> bool:
    """Whether ``Σ c·x = b`` is infeasible, i.e. the disequality ``d`` is entailed."""
    coeffs, b = d
    return not satisfiable(frozenset(cons) | frozenset(eq(dict(coeffs), b)), diseqs)


@lru_cache(maxsize=1 << 16)
def upper_bound(cons: FrozenSet[LinCons], direction: Coeffs) -> Optional[int]:
    """Largest integer value of ``Σ direction`` over ``cons``; None when unbounded or infeasible."""
    ctx = _ctx()
    opt = z3.Optimize(ctx=ctx)
    opt.add([_le(c, ctx) for c in cons])
    handle = opt.maximize(_term(direction, ctx))
    if opt.check() != z3.sat:
        return None
    value = handle.value()
    if not z3.is_int_value(value):
        return None
    return value.as_long()


def lower_bound(cons: FrozenSet[LinCons], direction: Coeffs) -> Optional[int]:
    ub = upper_bound(frozenset(cons), tuple((v, -c) for v, c in direction))
    return None if ub is None else -ub
