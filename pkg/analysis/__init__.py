"""
analysis
========

Data flow refinement type inference: the abstract transformer over type maps,
the widened fixpoint loop, safety verdicts, the concretization oracle and the
JSON/text report.

Public API (stable re-exports):
- AnalysisConfig, ConfigError (from config)
- TypeMap (from typemap)
- AbstractTransformer, abstract_step (from transformer)
- analyze, AnalysisResult, make_lattice, resolve_thresholds (from engine)
- check_safety, Verdict, SAFE, UNSAFE (from safety)
- gamma_member, gamma_violations (from oracle)
- auto_thresholds (from thresholds)
- build_report, render_text (from report)
"""
from .config import ELIMINATION_MODES, WIDENING_MODES, AnalysisConfig, ConfigError
from .engine import AnalysisResult, analyze, make_lattice, resolve_thresholds, widen_maps
from .oracle import gamma_member, gamma_violations, value_member
from .report import build_report, dumps, render_text, types_by_location
from .safety import SAFE, UNSAFE, Verdict, check_safety
from .thresholds import auto_thresholds, linearize
from .transformer import AbstractTransformer, abstract_step
from .typemap import TypeMap

__all__ = [
    "ELIMINATION_MODES", "WIDENING_MODES", "AnalysisConfig", "ConfigError",
    "AnalysisResult", "analyze", "make_lattice", "resolve_thresholds", "widen_maps",
    "gamma_member", "gamma_violations", "value_member",
    "build_report", "dumps", "render_text", "types_by_location",
    "SAFE", "UNSAFE", "Verdict", "check_safety",
    "auto_thresholds", "linearize",
    "AbstractTransformer", "abstract_step",
    "TypeMap",
]
