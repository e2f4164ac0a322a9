"""
Concrete data flow semantics.

``ConcreteEvaluator.step`` is one application of the transformer to an
execution map; ``run_concrete`` iterates it from the empty map until the map
stops changing.  Errors never raise: an unsafe update turns the whole map
into the top map (every node ω) and the evaluation of that step stops.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from lang.ast import (
    ARITH_OPS, COMPARE_OPS, LOGIC_OPS, App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Loc, Rec, Var,
)
from lang.kinds import Kind

from .config import DEFAULT_FUEL, logger
from .nodes import EMPTY_ENV, Env, ExprNode, Node, Stack, VarNode, node_sort_key
from .values import (
    CBOT, EMPTY_TABLE, ERR, Constant, Table, Value, is_safe_value, join_all, render_value, value_join, value_leq,
    value_prop,
)


@dataclass
class ExecMap:
    values: Dict[Node, Value] = field(default_factory=dict)
    top: bool = False
    cause: Optional[str] = None

    def get(self, node: Node) -> Value:
        if self.top:
            return ERR
        return self.values.get(node, CBOT)

    def copy(self) -> "ExecMap":
        return ExecMap(dict(self.values), self.top, self.cause)

    def nodes(self):
        return sorted(self.values, key=node_sort_key)

    def leq(self, other: "ExecMap") -> bool:
        if other.top:
            return True
        if self.top:
            return False
        return all(value_leq(v, other.get(n)) for n, v in self.values.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExecMap):
            return NotImplemented
        if self.top or other.top:
            return self.top == other.top
        return _strip(self.values) == _strip(other.values)

    def render(self) -> str:
        if self.top:
            return "M⊤"
        return "\n".join(f"{n.describe()} ↦ {render_value(self.values[n])}" for n in self.nodes())


def _strip(values: Mapping[Node, Value]) -> Dict[Node, Value]:
    return {n: v for n, v in values.items() if v is not CBOT}


@dataclass
class Diverged:
    """Fuel ran out before the iterates stabilized."""

    last: ExecMap
    iterations: int


class _Unsafe(Exception):
    def __init__(self, node: Node, reason: str):
        self.node = node
        self.reason = reason
        super().__init__(f"{reason} at {node.describe()}")


InputMap = Mapping[Union[int, str], int]


class ConcreteEvaluator:
    def __init__(self, program: Expr, inputs: Optional[InputMap] = None):
        self.program = program
        self.inputs: InputMap = dict(inputs or {})
        self.m: ExecMap = ExecMap()

    # -- map primitives ------------------------------------------------------
    def read(self, node: Node) -> Value:
        return self.m.get(node)

    def update(self, node: Node, v: Value) -> Value:
        cur = self.m.get(node)
        new = value_join(cur, v)
        if not is_safe_value(new):
            raise _Unsafe(node, f"unsafe value {render_value(new)}")
        if new != cur:
            self.m.values[node] = new
        return new

    # -- driver ------------------------------------------------------------------
    def step(self, m: ExecMap) -> ExecMap:
        if m.top:
            return m
        self.m = m.copy()
        try:
            self.eval(self.program, EMPTY_ENV, ())
        except _Unsafe as exc:
            logger.debug("concrete step unsafe: %s", exc)
            return ExecMap(self.m.values, top=True, cause=str(exc))
        return self.m

    def eval(self, e: Expr, env: Env, stack: Stack) -> Value:
        n = ExprNode(e.loc, env)
        if isinstance(e, Const):
            return self.update(n, Constant.of(e.value))
        if isinstance(e, Input):
            return self.update(n, Constant(self._input(e.loc), Kind.INT))
        if isinstance(e, Var):
            return self._var(e, n, env)
        if isinstance(e, App):
            return self._app(e, n, env, stack)
        if isinstance(e, (Lambda, Rec)):
            return self._fun(e, n, env)
        if isinstance(e, Ite):
            return self._ite(e, n, env, stack)
        if isinstance(e, BinOp):
            return self._binop(e, n, env, stack)
        if isinstance(e, Assert):
            v = self.eval(e.expr, env, stack)
            if v is CBOT:
                return self.read(n)
            if not (isinstance(v, Constant) and v.kind is Kind.BOOL and v.value):
                raise _Unsafe(n, "assertion failed")
            return self.update(n, Constant.of(None))
        raise TypeError(f"unknown expression {e!r}")

    def _input(self, loc: Loc) -> int:
        for key in (loc.id, loc.label):
            if key is not None and key in self.inputs:
                return int(self.inputs[key])
        return 0

    def _var(self, e: Var, n: ExprNode, env: Env) -> Value:
        nx = env.lookup(e.name)
        if nx is None:
            raise _Unsafe(n, f"unbound variable {e.name}")
        vx, v = value_prop(self.read(nx), self.read(n))
        self.update(nx, vx)
        return self.update(n, v)

    def _app(self, e: App, n: ExprNode, env: Env, stack: Stack) -> Value:
        v = self.read(n)
        vi = self.eval(e.fn, env, stack)
        if vi is CBOT:
            return v
        if not isinstance(vi, Table):
            raise _Unsafe(n, "application of a non-function")
        vj = self.eval(e.arg, env, stack)
        s = (e.fn.loc,) + stack
        vi2, call = value_prop(vi, Table.of({s: (vj, v)}))
        vj2, v2 = call.get(s)
        self.update(ExprNode(e.fn.loc, env), vi2)
        self.update(ExprNode(e.arg.loc, env), vj2)
        return self.update(n, v2)

    def _fun(self, e: Union[Lambda, Rec], n: ExprNode, env: Env) -> Value:
        t = self.update(n, EMPTY_TABLE)
        if not isinstance(t, Table):
            raise _Unsafe(n, "function value expected")
        results = [t]
        for s in t.called:
            nx = VarNode(e.param, env, s)
            body_env = env
            if isinstance(e, Rec):
                nf = VarNode(e.name, env, s)
                t_self, vf = value_prop(t, self.read(nf))
                self.update(nf, vf)
                results.append(t_self)
                body_env = body_env.extend(e.name, nf)
            body_env = body_env.extend(e.param, nx)
            vb = self.eval(e.body, body_env, s)
            local, out = value_prop(Table.of({s: (self.read(nx), vb)}), t.restrict(s))
            vx2, vb2 = local.get(s)
            self.update(nx, vx2)
            self.update(ExprNode(e.body.loc, body_env), vb2)
            results.append(out)
        return self.update(n, join_all(results))

    def _ite(self, e: Ite, n: ExprNode, env: Env, stack: Stack) -> Value:
        v = self.read(n)
        vc = self.eval(e.cond, env, stack)
        if vc is CBOT:
            return v
        if not (isinstance(vc, Constant) and vc.kind is Kind.BOOL):
            raise _Unsafe(n, "non-boolean guard")
        branch = e.then if vc.value else e.orelse
        vb = self.eval(branch, env, stack)
        vb2, v2 = value_prop(vb, v)
        self.update(ExprNode(branch.loc, env), vb2)
        return self.update(n, v2)

    def _binop(self, e: BinOp, n: ExprNode, env: Env, stack: Stack) -> Value:
        vl = self.eval(e.left, env, stack)
        if vl is CBOT:
            return self.read(n)
        vr = self.eval(e.right, env, stack)
        if vr is CBOT:
            return self.read(n)
        if not (isinstance(vl, Constant) and isinstance(vr, Constant)):
            raise _Unsafe(n, f"operator {e.op} applied to a function")
        return self.update(n, apply_binop(e.op, vl, vr, n))


def apply_binop(op: str, vl: Constant, vr: Constant, node: Optional[Node] = None) -> Constant:
    def fail() -> _Unsafe:
        return _Unsafe(node or ExprNode(Loc(-1)), f"operator {op} applied to {vl.kind.value} and {vr.kind.value}")

    a, b = vl.value, vr.value
    if op in ARITH_OPS:
        if vl.kind is not Kind.INT or vr.kind is not Kind.INT:
            raise fail()
        return Constant(a + b if op == "+" else a - b if op == "-" else a * b, Kind.INT)
    if op in LOGIC_OPS:
        if vl.kind is not Kind.BOOL or vr.kind is not Kind.BOOL:
            raise fail()
        return Constant.of(bool(a and b) if op == "&&" else bool(a or b))
    if op in COMPARE_OPS:
        if op in ("=", "<>"):
            if vl.kind is not vr.kind:
                raise fail()
            return Constant.of(a == b if op == "=" else a != b)
        if vl.kind is not Kind.INT or vr.kind is not Kind.INT:
            raise fail()
        return Constant.of({"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op])
    raise ValueError(f"unknown operator {op!r}")


def concrete_step(e: Expr, env: Env, stack: Stack, m: ExecMap, inputs: Optional[InputMap] = None) -> Tuple[Value, ExecMap]:
    """One transformer application at ``e`` under ``env`` and ``stack``; returns (value, new map)."""
    ev = ConcreteEvaluator(e, inputs)
    if m.top:
        return ERR, m
    ev.m = m.copy()
    try:
        v = ev.eval(e, env, stack)
    except _Unsafe as exc:
        return ERR, ExecMap(ev.m.values, top=True, cause=str(exc))
    return v, ev.m


def iterates(e: Expr, inputs: Optional[InputMap] = None) -> Iterator[ExecMap]:
    """The (infinite) sequence of transformer iterates starting from the empty map."""
    ev = ConcreteEvaluator(e, inputs)
    m = ExecMap()
    while True:
        m = ev.step(m)
        yield m


def run_concrete(e: Expr, fuel: int = DEFAULT_FUEL, inputs: Optional[InputMap] = None) -> Union[ExecMap, Diverged]:
    prev = ExecMap()
    for i, m in enumerate(iterates(e, inputs), start=1):
        if m == prev:
            logger.debug("concrete fixpoint after %d iterations", i)
            return m
        if i >= fuel:
            logger.debug("concrete run out of fuel after %d iterations", i)
            return Diverged(m, i)
        prev = m
    raise AssertionError("unreachable")


def concrete_safe(m: Union[ExecMap, Diverged]) -> bool:
    if isinstance(m, Diverged):
        m = m.last
    if m.top:
        return False
    return all(is_safe_value(v) for v in m.values.values())
