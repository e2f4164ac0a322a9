"""
checker
=======

Declarative typing rules checked against a witness type map, and the
cross-validation of analysis results against them.

Public API (stable re-exports):
- TypingJudgement, TypingChecker, derive_typing (from rules)
- verify_fixpoint_typing_equiv, EquivalenceReport, soundness_counterexamples,
  candidate_types, node_witnesses, tiny_programs (from equivalence)
"""
from .equivalence import (
    EquivalenceReport, candidate_types, node_witnesses, soundness_counterexamples, tiny_programs,
    verify_fixpoint_typing_equiv,
)
from .rules import TypingChecker, TypingJudgement, derive_typing

__all__ = [
    "EquivalenceReport", "candidate_types", "node_witnesses", "soundness_counterexamples", "tiny_programs",
    "verify_fixpoint_typing_equiv",
    "TypingChecker", "TypingJudgement", "derive_typing",
]
