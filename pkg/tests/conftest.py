from itertools import combinations
from pathlib import Path
from types import SimpleNamespace

import pytest

from analysis import AnalysisConfig
from concrete import CBOT, ERR, Constant, ExprNode, Table, VarNode
from domains import PredicateDomain, Scope, default_qualifiers, load_qualifiers, parse_qualifiers
from lang import Kind, check_program, parse_program
from lang.ast import Loc
from refinement import BOT, Fun, TypeLattice

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

# terminating programs whose concrete run reaches a fixpoint quickly
TERMINATING = (
    "arith_abs.ml", "arith_branch.ml", "arith_max.ml", "arith_simple.ml",
    "bool_guard.ml", "bool_unsafe.ml", "err_apply_int.ml", "fib_increasing.ml",
    "ho_apply.ml", "ho_apply_pos.ml", "ho_closure.ml", "ho_higher.ml",
    "ho_id.ml", "ho_twice.ml", "rec_even.ml", "rec_loop.ml", "rec_sum.ml",
)


def _labels(stack):
    return tuple(loc.label for loc in stack if loc.label)


def _shape(v):
    """Concrete value with stacks reduced to their labelled call sites."""
    if v is CBOT:
        return None
    if v is ERR:
        return "ω"
    if isinstance(v, Constant):
        return v.value
    assert isinstance(v, Table)
    return {_labels(s): (_shape(i), _shape(o)) for s, (i, o) in v.entries}


@pytest.fixture(scope="session")
def programs_dir() -> Path:
    return PROGRAMS


@pytest.fixture(scope="session")
def load_source():
    def _load(name: str) -> str:
        return (PROGRAMS / name).read_text(encoding="utf-8")
    return _load


@pytest.fixture(scope="session")
def load_program(load_source):
    def _load(name: str):
        program = parse_program(load_source(name))
        check_program(program)
        return program
    return _load


@pytest.fixture(scope="session")
def shape():
    return _shape


@pytest.fixture(scope="session")
def at_label():
    """Values of the expression nodes whose location carries ``label``."""
    def _find(values, label: str):
        return [v for n, v in values.items() if isinstance(n, ExprNode) and n.loc.label == label]
    return _find


@pytest.fixture(scope="session")
def at_var():
    def _find(values, name: str):
        return [v for n, v in values.items() if isinstance(n, VarNode) and n.var == name]
    return _find


@pytest.fixture(scope="session")
def id_qualifiers():
    return tuple(load_qualifiers(PROGRAMS / "quals" / "id.quals"))


@pytest.fixture(scope="session")
def configs():
    """The six domain/context combinations; pred takes the program's default qualifiers."""
    def _configs(program):
        out = []
        for domain in ("pred", "oct", "poly"):
            quals = tuple(default_qualifiers(program)) if domain == "pred" else None
            for k in (0, 1):
                out.append(AnalysisConfig(domain=domain, k=k, qualifiers=quals, label=f"{domain}/k={k}"))
        return out
    return _configs


@pytest.fixture(scope="session")
def pred_types():
    """Every predicate-domain type over Q = {ν ≤ 0, ν = ⋆} at one call stack, tables nested at most twice."""
    lat = TypeLattice(PredicateDomain(parse_qualifiers("nu <= 0\nnu = *")))
    d = lat.domain
    stack = (Loc(0),)

    def bases(scope):
        out = [BOT]
        universe = sorted(d.universe(scope))
        for r in range(len(universe) + 1):
            for subset in combinations(universe, r):
                t = lat.base(Kind.INT, d.assume(d.top(scope), [c for a in subset for c in a.linear()]))
                if t not in out:
                    out.append(t)
        return out

    ints = bases(Scope())
    shallow = [
        Fun.of("z", Kind.INT, Scope(), {stack: (i, o)})
        for i in ints for o in bases(Scope.of([("z", Kind.INT)]))
    ]
    nested = [
        Fun.of("f", Kind.FUN, Scope(), {stack: (i, o)})
        for i in [BOT] + shallow for o in bases(Scope.of([("f", Kind.FUN)]))
    ]
    return SimpleNamespace(lattice=lat, ints=ints, shallow=shallow, nested=nested)
