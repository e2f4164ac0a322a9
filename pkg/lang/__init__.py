"""
lang
====

Front end for the analyzed mini-ML language: located core AST, lexer and
recursive-descent parser (with ``let`` desugaring and alpha-renaming),
pretty-printer, well-formedness checks and the binder kind pre-pass.

Public API (stable re-exports):
- Loc, Expr and the node classes (from ast)
- parse_program (from parser)
- pretty (from pretty)
- check_well_formed, check_program (from wellformed)
- Kind, infer_kinds (from kinds)
- AnalysisError, ParseError, WellFormednessError (from errors)
"""
from .ast import (
    App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Loc, LocFactory, Rec, Var,
    find_by_label, free_vars, locations, subexpressions,
)
from .errors import AnalysisError, ParseError, WellFormednessError
from .kinds import Kind, expr_kind, infer_kinds
from .parser import parse_program
from .pretty import pretty
from .wellformed import check_program, check_well_formed

__all__ = [
    "App", "Assert", "BinOp", "Const", "Expr", "Input", "Ite", "Lambda", "Loc", "LocFactory", "Rec", "Var",
    "find_by_label", "free_vars", "locations", "subexpressions",
    "AnalysisError", "ParseError", "WellFormednessError",
    "Kind", "expr_kind", "infer_kinds",
    "parse_program", "pretty",
    "check_program", "check_well_formed",
]
