"""Abstract call stacks: the k most recent pending call sites, newest first."""
from __future__ import annotations

from typing import Tuple

from lang.ast import Loc

AStack = Tuple[Loc, ...]

EMPTY: AStack = ()


def concat(loc: Loc, stack: AStack, k: int) -> AStack:
    return ((loc,) + stack)[:k]


def truncate(stack: AStack, k: int) -> AStack:
    return tuple(stack[:k])


def render_stack(stack: AStack) -> str:
    if not stack:
        return "ε"
    return "·".join(loc.display for loc in stack)
