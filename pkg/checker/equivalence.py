"""
Cross-validation of inferred type maps against the typing rules.

``verify_fixpoint_typing_equiv`` covers the completeness direction on real
programs: a safe analysis result is a fixpoint and the root judgement is
derivable from it, and knocking out a leaf entry breaks both properties
together.  ``soundness_counterexamples`` covers the other direction by brute
force on tiny expressions: every single-node candidate replacement of the
inferred map that still derives the root judgement must be a safe fixpoint.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import chain, combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from analysis.config import AnalysisConfig
from analysis.engine import analyze, make_lattice
from analysis.transformer import AbstractTransformer
from analysis.typemap import TypeMap
from concrete.nodes import EMPTY_ENV, ExprNode, Node
from domains import NU, Atom, PredicateDomain, Scope
from lang.ast import Const, Expr, Var, subexpressions
from lang.kinds import Kind, infer_kinds
from lang.parser import parse_program
from refinement import BOT, Base, Fun, RefType, TypeLattice, render_type

from .rules import TypingChecker, TypingJudgement, derive_typing


@dataclass
class EquivalenceReport:
    safe: bool
    fixpoint: bool = False
    derivable: bool = False
    perturbations: int = 0
    counterexamples: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if not self.safe:
            # the correspondence is only claimed for safe maps
            return True
        return self.fixpoint and self.derivable and not self.counterexamples


def _is_fixpoint(tr: AbstractTransformer, m: TypeMap) -> bool:
    return tr.step(m).leq(m, tr.lattice)


def _derivable(program: Expr, lattice: TypeLattice, m: TypeMap, config: AnalysisConfig, kinds) -> bool:
    root = m.get(ExprNode(program.loc, EMPTY_ENV))
    checker = TypingChecker(program, lattice, m, config, kinds)
    return checker.derive(TypingJudgement(EMPTY_ENV, (), program, root))


def verify_fixpoint_typing_equiv(program: Expr, config: AnalysisConfig) -> EquivalenceReport:
    result = analyze(program, config)
    m = result.types
    if not m.is_safe():
        return EquivalenceReport(safe=False)
    kinds = result.kinds
    lattice = result.lattice
    tr = AbstractTransformer(program, lattice, config, kinds)
    report = EquivalenceReport(
        safe=True,
        fixpoint=_is_fixpoint(tr, m),
        derivable=_derivable(program, lattice, m, config, kinds),
    )
    if not report.derivable:
        report.counterexamples.append(
            f"root judgement not derivable: {render_type(m.get(ExprNode(program.loc, EMPTY_ENV)), lattice.domain)}"
        )
    leaves = {sub.loc for sub in subexpressions(program) if isinstance(sub, (Const, Var))}
    for node, t in m.items():
        if not (isinstance(node, ExprNode) and node.loc in leaves) or t is BOT:
            continue
        weakened = m.copy()
        weakened.types[node] = BOT
        report.perturbations += 1
        fix = _is_fixpoint(tr, weakened)
        der = _derivable(program, lattice, weakened, config, kinds)
        if fix != der:
            report.counterexamples.append(
                f"{node.describe()} knocked out: fixpoint={fix} derivable={der}"
            )
    return report


# -- brute-forced soundness on tiny expressions -----------------------------------------

LEAVES = ("0", "1", "x")


def tiny_bodies() -> Iterator[str]:
    yield from LEAVES
    for op in ("+", "-"):
        for a in LEAVES:
            for b in LEAVES:
                yield f"({a} {op} {b})"
    for c in ("0", "1"):
        for a in LEAVES:
            for b in LEAVES:
                yield f"(if x <= {c} then {a} else {b})"


def tiny_programs() -> Iterator[str]:
    for body in tiny_bodies():
        for arg in ("0", "1"):
            yield f"(fun x -> {body}) {arg}"


def _subsets(items: Sequence[Atom]) -> Iterable[Sequence[Atom]]:
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def candidate_types(lattice: TypeLattice, qualifiers: Sequence[Atom], kind: Kind = Kind.INT,
                    scope: Scope = Scope()) -> List[RefType]:
    """⊥ and every conjunction of qualifier instances over ``scope``."""
    d = lattice.domain
    atoms = sorted(PredicateDomain(qualifiers).universe(scope))
    out: List[RefType] = [BOT]
    for subset in _subsets(atoms):
        cons = [c for q in subset for c in q.linear()]
        t = lattice.base(kind, d.assume(d.top(scope), cons))
        if t not in out:
            out.append(t)
    return out


def _fun_candidates(lattice: TypeLattice, qualifiers: Sequence[Atom], t: Fun) -> List[RefType]:
    """Single-entry tables at ``t``'s stack with every candidate input and output."""
    if len(t.stacks) != 1:
        return []
    (s,) = t.stacks
    i0, o0 = t.get(s)
    ins = candidate_types(lattice, qualifiers, i0.kind, t.scope) if isinstance(i0, Base) else [i0]
    outs = candidate_types(lattice, qualifiers, o0.kind, t.out_scope) if isinstance(o0, Base) else [o0]
    return [Fun.of(t.var, t.var_kind, t.scope, {s: (i, o)}, t.tags) for i in ins for o in outs]


def node_witnesses(lattice: TypeLattice, qualifiers: Sequence[Atom], m: TypeMap) -> Iterator[Tuple[Node, RefType]]:
    """Every single-node replacement of ``m`` by a candidate type of the same shape and scope."""
    for node, t in m.items():
        if isinstance(t, Base):
            pool = candidate_types(lattice, qualifiers, t.kind, t.scope)
        elif isinstance(t, Fun):
            pool = _fun_candidates(lattice, qualifiers, t)
        else:
            continue
        for c in pool:
            if c != t:
                yield node, c


def soundness_counterexamples(config: AnalysisConfig, sources: Optional[Iterable[str]] = None) -> List[str]:
    """Witness maps that derive the root judgement without being a safe fixpoint."""
    if config.qualifiers is None:
        config = replace(config, domain="pred", qualifiers=(
            Atom.make("le", {NU: 1}, 0), Atom.make("le", {NU: -1}, 0),
        ))
    lattice = make_lattice(config)
    out: List[str] = []
    for source in sources if sources is not None else tiny_programs():
        program = parse_program(source)
        kinds = infer_kinds(program)
        base = analyze(program, config).types
        if not base.is_safe():
            continue
        tr = AbstractTransformer(program, lattice, config, kinds)
        root = ExprNode(program.loc, EMPTY_ENV)
        for node, t in node_witnesses(lattice, config.qualifiers, base):
            witness = base.copy()
            witness.types[node] = t
            judgement = TypingJudgement(EMPTY_ENV, (), program, witness.get(root))
            if not derive_typing(judgement, witness, program, lattice, config, kinds):
                continue
            if not (_is_fixpoint(tr, witness) and witness.is_safe()):
                out.append(f"{source} : {node.describe()} ↦ {render_type(t, lattice.domain)} "
                           f"derivable but not a safe fixpoint")
    return out
