"""
Widened fixpoint iteration.

``analyze`` starts from the empty map and repeats ``M ← M ∇ step(M)`` with the
widening applied pointwise once per round, until the step no longer grows the
map.  Shape widening turns an unboundedly nesting table into ⊤err, so the
loop terminates on every program; ``max_iters`` is only a safety net.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Tuple

from domains import LinCons, make_domain
from lang.ast import Expr
from lang.kinds import Kind, infer_kinds
from refinement import TOP, TypeLattice, is_safe

from .config import TRACE_ENABLED, AnalysisConfig, logger
from .thresholds import auto_thresholds
from .transformer import AbstractTransformer
from .typemap import TypeMap

Progress = Callable[[int, TypeMap], None]


@dataclass
class AnalysisResult:
    program: Expr
    config: AnalysisConfig
    lattice: TypeLattice
    types: TypeMap
    iterations: int
    converged: bool
    max_depth: int
    elapsed: float
    kinds: Mapping[str, Kind] = field(default_factory=dict)

    @property
    def safe(self) -> bool:
        return self.types.is_safe()

    @property
    def nodes(self) -> int:
        return self.types.reached()

    @property
    def cause(self) -> Optional[str]:
        return self.types.cause


def make_lattice(config: AnalysisConfig) -> TypeLattice:
    return TypeLattice(make_domain(config.domain, config.qualifiers), config.depth_cap)


def resolve_thresholds(program: Expr, config: AnalysisConfig,
                       kinds: Optional[Mapping[str, Kind]] = None) -> Tuple[LinCons, ...]:
    if config.widening == "plain":
        return ()
    if config.thresholds is not None:
        return tuple(config.thresholds)
    return auto_thresholds(program, kinds if kinds is not None else infer_kinds(program))


def widen_maps(lattice: TypeLattice, m: TypeMap, m2: TypeMap, thresholds=()) -> TypeMap:
    if m2.top:
        return m2
    out = TypeMap()
    for n, t2 in m2.types.items():
        w = lattice.widen(m.get(n), t2, thresholds)
        out.types[n] = w
        if w is TOP or not is_safe(w):
            out.top = True
            if out.cause_node is None:
                out.cause, out.cause_node = "table nesting widened to ⊤err", n
    return out


def analyze(program: Expr, config: Optional[AnalysisConfig] = None,
            progress: Optional[Progress] = None) -> AnalysisResult:
    config = config or AnalysisConfig()
    kinds = infer_kinds(program)
    lattice = make_lattice(config)
    thresholds = resolve_thresholds(program, config, kinds)
    transformer = AbstractTransformer(program, lattice, config, kinds)

    started = time.perf_counter()
    m = TypeMap()
    converged = False
    max_depth = 0
    iterations = 0
    while iterations < config.max_iters:
        iterations += 1
        m2 = transformer.step(m)
        if progress is not None:
            progress(iterations, m2)
        if m2.top:
            m, converged = m2, True
            break
        if m2.leq(m, lattice):
            converged = True
            break
        m = widen_maps(lattice, m, m2, thresholds)
        max_depth = max(max_depth, m.max_depth())
        if TRACE_ENABLED:
            logger.debug("iteration %d: %d nodes, max depth %d", iterations, m.reached(), max_depth)
        if m.top:
            converged = True
            break
    else:
        logger.warning("analysis of %s stopped after %d iterations without converging",
                       config.describe(), iterations)

    return AnalysisResult(
        program=program,
        config=config,
        lattice=lattice,
        types=m,
        iterations=iterations,
        converged=converged,
        max_depth=max(max_depth, m.max_depth()),
        elapsed=time.perf_counter() - started,
        kinds=kinds,
    )
