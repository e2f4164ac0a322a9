from __future__ import annotations

from .ast import Expr, Lambda, Rec, Var, binders, children, subexpressions
from .errors import WellFormednessError


def check_well_formed(e: Expr) -> None:
    """Raise WellFormednessError unless ``e`` is closed and its locations are pairwise distinct."""
    seen = {}
    for sub in subexpressions(e):
        other = seen.get(sub.loc)
        if other is not None:
            raise WellFormednessError(f"duplicate location {sub.loc.display} shared by two nodes")
        seen[sub.loc] = sub
    _check_closed(e, frozenset())


def _check_closed(e: Expr, bound: frozenset) -> None:
    stack = [(e, bound)]
    while stack:
        cur, scope = stack.pop()
        if isinstance(cur, Var):
            if cur.name not in scope:
                raise WellFormednessError(f"unbound variable {cur.name} at {cur.loc.display}")
            continue
        if isinstance(cur, Lambda):
            scope = scope | {cur.param}
        elif isinstance(cur, Rec):
            scope = scope | {cur.name, cur.param}
        for c in children(cur):
            stack.append((c, scope))


def check_unique_binders(e: Expr) -> None:
    """The semantics key variable nodes by name, so every binder must be distinct."""
    names = list(binders(e))
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise WellFormednessError(f"binder(s) not alpha-unique: {', '.join(sorted(dup))}")


def check_program(e: Expr) -> None:
    check_well_formed(e)
    check_unique_binders(e)
