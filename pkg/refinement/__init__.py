"""
refinement
==========

Data flow refinement types over abstract call stacks and their lattice
operations (order, strengthening, subtyping, propagation and widening).

Public API (stable re-exports):
- BOT, TOP, Base, Fun, RefType (from types)
- TypeLattice, fresh_name, DEFAULT_DEPTH_CAP (from lattice)
- AStack, concat, truncate, render_stack (from stacks)
- render_type, type_to_json (from pretty)
"""
from .lattice import DEFAULT_DEPTH_CAP, TypeLattice, fresh_name
from .pretty import render_type, type_to_json
from .stacks import AStack, concat, render_stack, truncate
from .types import BOT, TOP, Base, Fun, RefType, depth, is_safe, scope_of

__all__ = [
    "BOT", "TOP", "Base", "Fun", "RefType", "depth", "is_safe", "scope_of",
    "TypeLattice", "fresh_name", "DEFAULT_DEPTH_CAP",
    "AStack", "concat", "render_stack", "truncate",
    "render_type", "type_to_json",
]
