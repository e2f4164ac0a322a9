"""
Abstract transformer over type maps.

Follows ``concrete.semantics`` case by case with refinement types in place of
values: stacks are truncated to ``k`` call sites, the var and const cases
strengthen with the type environment, and conditionals thread a path
condition (a basic refinement over the scope that never mentions ν) into the
strengthening of each branch.  An unsafe update unwinds to ``step``, which
returns the top map.
"""
from __future__ import annotations

from functools import reduce
from itertools import product
from typing import Dict, List, Mapping, Optional, Tuple, Union

from concrete.nodes import EMPTY_ENV, Env, ExprNode, Node, VarNode
from domains import NU, LinCons, Scope
from domains import linear
from lang.ast import (
    ARITH_OPS, COMPARE_OPS, LOGIC_OPS, App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Rec, Var,
)
from lang.kinds import Kind, const_kind, infer_kinds
from refinement import BOT, Base, Fun, RefType, TypeLattice, concat, is_safe
from refinement.stacks import AStack

from .config import TRACE_ENABLED, AnalysisConfig, logger
from .typemap import TypeMap

# operand temporaries used while building binary operator refinements
LEFT = "#l"
RIGHT = "#r"


class _Unsafe(Exception):
    def __init__(self, node: Node, reason: str):
        self.node = node
        self.reason = reason
        super().__init__(f"{reason} at {node.describe()}")


def _relation(op: str, polarity: bool) -> List[List[LinCons]]:
    """Alternatives (a disjunction of conjunctions) for ``#l op #r`` being ``polarity``."""
    lt = [linear.le({LEFT: 1, RIGHT: -1}, -1)]
    le = [linear.le({LEFT: 1, RIGHT: -1}, 0)]
    gt = [linear.le({RIGHT: 1, LEFT: -1}, -1)]
    ge = [linear.le({RIGHT: 1, LEFT: -1}, 0)]
    eq = linear.eq({LEFT: 1, RIGHT: -1}, 0)
    table = {
        "<": ([lt], [ge]),
        "<=": ([le], [gt]),
        ">": ([gt], [le]),
        ">=": ([ge], [lt]),
        "=": ([eq], [lt, gt]),
        "<>": ([lt, gt], [eq]),
    }
    yes, no = table[op]
    return yes if polarity else no


def _result_kind(op: str, left: Kind, right: Kind) -> Optional[Kind]:
    if op in ARITH_OPS:
        return Kind.INT if left is Kind.INT and right is Kind.INT else None
    if op in LOGIC_OPS:
        return Kind.BOOL if left is Kind.BOOL and right is Kind.BOOL else None
    if op in ("=", "<>"):
        return Kind.BOOL if left is right else None
    return Kind.BOOL if left is Kind.INT and right is Kind.INT else None


class AbstractTransformer:
    def __init__(self, program: Expr, lattice: TypeLattice, config: Optional[AnalysisConfig] = None,
                 kinds: Optional[Mapping[str, Kind]] = None):
        self.program = program
        self.lattice = lattice
        self.domain = lattice.domain
        self.config = config or AnalysisConfig()
        self.kinds: Dict[str, Kind] = dict(kinds) if kinds is not None else infer_kinds(program)
        self.m = TypeMap()
        self._scopes: Dict[Env, Scope] = {}

    # -- map primitives ------------------------------------------------------
    def scope(self, env: Env) -> Scope:
        s = self._scopes.get(env)
        if s is None:
            s = Scope.of((name, self.kinds.get(name, Kind.INT)) for name in env.names())
            self._scopes[env] = s
        return s

    def read(self, node: Node) -> RefType:
        return self.m.get(node)

    def update(self, node: Node, t: RefType) -> RefType:
        cur = self.m.get(node)
        new = self.lattice.join(cur, self.lattice.fit(t, self.scope(node.env)))
        if not is_safe(new):
            raise _Unsafe(node, "type error")
        if new != cur:
            self.m.types[node] = new
        return new

    def env_types(self, env: Env) -> List[Tuple[str, RefType]]:
        return [(name, self.read(node)) for name, node in env]

    def strengthen(self, t: RefType, env: Env, path) -> RefType:
        return self.lattice.env_strengthen(t, self.env_types(env), path)

    # -- driver ------------------------------------------------------------------
    def step(self, m: TypeMap) -> TypeMap:
        if m.top:
            return m
        self.m = m.copy()
        try:
            self.eval(self.program, EMPTY_ENV, (), None)
        except _Unsafe as exc:
            if TRACE_ENABLED:
                logger.debug("abstract step unsafe: %s", exc)
            return TypeMap(self.m.types, top=True, cause=exc.reason, cause_node=exc.node)
        return self.m

    def eval(self, e: Expr, env: Env, stack: AStack, path) -> RefType:
        n = ExprNode(e.loc, env)
        if isinstance(e, Const):
            value = 0 if e.value is None else int(e.value)
            t = self.lattice.of_const(value, const_kind(e.value), self.scope(env))
            return self.update(n, self.strengthen(t, env, path))
        if isinstance(e, Input):
            t = self.lattice.top_base(Kind.INT, self.scope(env))
            return self.update(n, self.strengthen(t, env, path))
        if isinstance(e, Var):
            return self._var(e, n, env, path)
        if isinstance(e, App):
            return self._app(e, n, env, stack, path)
        if isinstance(e, (Lambda, Rec)):
            return self._fun(e, n, env, path)
        if isinstance(e, Ite):
            return self._ite(e, n, env, stack, path)
        if isinstance(e, BinOp):
            return self._binop(e, n, env, stack, path)
        if isinstance(e, Assert):
            return self._assert(e, n, env, stack, path)
        raise TypeError(f"unknown expression {e!r}")

    # -- cases ---------------------------------------------------------------------
    def _var(self, e: Var, n: ExprNode, env: Env, path) -> RefType:
        nx = env.lookup(e.name)
        if nx is None:
            raise _Unsafe(n, f"unbound variable {e.name}")
        lat = self.lattice
        tx = lat.eq_var(lat.fit(self.read(nx), self.scope(env)), e.name)
        t = lat.eq_var(self.read(n), e.name)
        tx2, t2 = lat.prop(self.strengthen(tx, env, path), self.strengthen(t, env, path))
        self.update(nx, tx2)
        return self.update(n, t2)

    def _app(self, e: App, n: ExprNode, env: Env, stack: AStack, path) -> RefType:
        lat = self.lattice
        t = self.read(n)
        ti = self.eval(e.fn, env, stack, path)
        if ti is BOT:
            return t
        if not isinstance(ti, Fun):
            raise _Unsafe(n, "application of a non-function")
        tj = self.eval(e.arg, env, stack, path)
        s = concat(e.fn.loc, stack, self.config.k)
        # the callee's own dependency variable is never in scope here
        z, zkind = ti.var, ti.var_kind
        call = Fun.of(z, zkind, self.scope(env), {s: (tj, lat.extend(t, z, zkind))},
                      frozenset({(e.fn.loc, stack)}))
        ti2, call2 = lat.prop(ti, call)
        if not isinstance(call2, Fun):
            raise _Unsafe(n, "application of a non-function")
        tj2, out = call2.get(s)
        self.update(ExprNode(e.fn.loc, env), ti2)
        self.update(ExprNode(e.arg.loc, env), tj2)
        return self.update(n, self._eliminate(out, call2.var, tj2))

    def _eliminate(self, out: RefType, z: str, tz: RefType) -> RefType:
        if self.config.depvar_elimination == "project":
            out = self.lattice.strengthen(out, z, tz)
        return self.lattice.project(out, z)

    def _fun(self, e: Union[Lambda, Rec], n: ExprNode, env: Env, path) -> RefType:
        lat = self.lattice
        kind = self.kinds.get(e.param, Kind.INT)
        t = self.update(n, lat.empty_fun(e.param, kind, self.scope(env)))
        if not isinstance(t, Fun):
            raise _Unsafe(n, "function type expected")
        results: List[RefType] = [t]
        for s in t.called:
            nx = VarNode(e.param, env, s)
            body_env = env
            nf = VarNode(e.name, env, s) if isinstance(e, Rec) else None
            if nf is not None:
                results.append(self._tie(t, nf))
                body_env = body_env.extend(e.name, nf)
            body_env = body_env.extend(e.param, nx)
            tb = self.eval(e.body, body_env, s, path)
            local, out = lat.prop(self._local(t, e, s, self.read(nx), tb), self._restrict(t, s))
            tx2, tb2 = local.get(s)
            self.update(nx, tx2)
            if t.var != e.param:
                tb2 = lat.rename(tb2, t.var, e.param)
            self.update(ExprNode(e.body.loc, body_env), tb2)
            if nf is not None:
                # calls the body made through the self-binding
                results.append(self._tie(t, nf))
            results.append(out)
        return self.update(n, reduce(lat.join, results, BOT))

    def _tie(self, t: Fun, nf: VarNode) -> RefType:
        t_self, tf = self.lattice.prop(t, self.read(nf))
        self.update(nf, tf)
        return t_self

    def _local(self, t: Fun, e: Union[Lambda, Rec], s: AStack, tx: RefType, tb: RefType) -> Fun:
        """The single-entry table a body evaluation at ``s`` contributes, over the lambda's own scope."""
        if isinstance(e, Rec):
            tb = self.lattice.project(tb, e.name)
        if t.var != e.param:
            tb = self.lattice.rename(tb, e.param, t.var)
        return Fun.of(t.var, t.var_kind, t.scope, {s: (tx, tb)}, t.tags)

    @staticmethod
    def _restrict(t: Fun, s: AStack) -> Fun:
        return Fun.of(t.var, t.var_kind, t.scope, {s: t.get(s)}, t.tags)

    def _ite(self, e: Ite, n: ExprNode, env: Env, stack: AStack, path) -> RefType:
        lat = self.lattice
        t = self.read(n)
        tc = self.eval(e.cond, env, stack, path)
        if tc is BOT:
            return t
        if not (isinstance(tc, Base) and tc.kind is Kind.BOOL):
            raise _Unsafe(n, "non-boolean guard")
        for branch, polarity in ((e.then, True), (e.orelse, False)):
            reachable, branch_path = self.branch_path(e.cond, polarity, tc, env, path)
            if not reachable:
                continue
            tb = self.eval(branch, env, stack, branch_path)
            tb2, t2 = lat.prop(tb, self.read(n))
            self.update(ExprNode(branch.loc, env), tb2)
            t = self.update(n, t2)
        return t

    def _binop(self, e: BinOp, n: ExprNode, env: Env, stack: AStack, path) -> RefType:
        tl = self.eval(e.left, env, stack, path)
        if tl is BOT:
            return self.read(n)
        tr = self.eval(e.right, env, stack, path)
        if tr is BOT:
            return self.read(n)
        return self.update(n, self.binop_type(n, e.op, tl, tr, path))

    def binop_type(self, n: Node, op: str, tl: RefType, tr: RefType, path) -> RefType:
        """The most precise result refinement the domain can express for ``tl op tr``."""
        if not (isinstance(tl, Base) and isinstance(tr, Base)):
            raise _Unsafe(n, f"operator {op} applied to a function")
        kind = _result_kind(op, tl.kind, tr.kind)
        if kind is None:
            raise _Unsafe(n, f"operator {op} applied to {tl.kind.value} and {tr.kind.value}")
        d = self.domain
        joint = self._operands(tl, tr)
        outcomes = [d.assume(joint, cons) for cons in self._outcomes(op, joint)]
        t = self.lattice.base(kind, self._drop_operands(reduce(d.join, outcomes)))
        if path is not None:
            t = self.lattice.assume_path(t, path)
        return t

    def _assert(self, e: Assert, n: ExprNode, env: Env, stack: AStack, path) -> RefType:
        tg = self.eval(e.expr, env, stack, path)
        if tg is BOT:
            return self.read(n)
        if not (isinstance(tg, Base) and tg.kind is Kind.BOOL):
            raise _Unsafe(n, "non-boolean assertion")
        may_fail, _ = self.branch_path(e.expr, False, tg, env, path)
        if may_fail:
            raise _Unsafe(n, "assertion may fail")
        t = self.lattice.of_const(0, Kind.UNIT, self.scope(env))
        return self.update(n, self.strengthen(t, env, path))

    # -- operators and guards -----------------------------------------------------------
    def _operands(self, tl: Base, tr: Base):
        """Both operand refinements over scope + {#l, #r}, ν left free."""
        d = self.domain
        left = d.extend(d.subst_nu(tl.ref, LEFT, tl.kind), RIGHT, tr.kind)
        right = d.extend(d.subst_nu(tr.ref, RIGHT, tr.kind), LEFT, tl.kind)
        return d.meet(left, right)

    def _drop_operands(self, b):
        return self.domain.project(self.domain.project(b, LEFT), RIGHT)

    def _outcomes(self, op: str, joint) -> List[List[LinCons]]:
        if op == "+":
            return [linear.eq({NU: 1, LEFT: -1, RIGHT: -1})]
        if op == "-":
            return [linear.eq({NU: 1, LEFT: -1, RIGHT: 1})]
        if op == "*":
            for const_side, other in ((LEFT, RIGHT), (RIGHT, LEFT)):
                lo, hi = self.domain.bounds(joint, const_side)
                if lo is not None and lo == hi:
                    return [linear.eq({NU: 1, other: -lo})]
            return [[]]
        if op in COMPARE_OPS:
            true = [alt + linear.const_eq(NU, 1) for alt in _relation(op, True)]
            false = [alt + linear.const_eq(NU, 0) for alt in _relation(op, False)]
            return true + false
        out = []
        for a, b in product((0, 1), repeat=2):
            v = (a and b) if op == "&&" else (a or b)
            out.append(linear.const_eq(LEFT, a) + linear.const_eq(RIGHT, b) + linear.const_eq(NU, v))
        return out

    def branch_path(self, guard: Expr, polarity: bool, tg: Base, env: Env, path) -> Tuple[bool, object]:
        """Whether ``guard`` may evaluate to ``polarity`` and the path condition under which it does."""
        d = self.domain
        scope = self.scope(env)
        cond = d.project(d.assume(tg.ref, linear.const_eq(NU, int(polarity))), NU)
        if d.is_bottom(cond):
            return False, path
        if not self.config.path_sensitive:
            return True, path
        cond = d.meet(cond, self._cond(guard, polarity, env, scope))
        if path is not None:
            cond = d.meet(cond, d.fit(path, scope))
        if d.is_bottom(cond):
            return False, path
        return True, cond

    def _cond(self, e: Expr, polarity: bool, env: Env, scope: Scope):
        d = self.domain
        if isinstance(e, Const) and isinstance(e.value, bool):
            return d.top(scope) if e.value == polarity else d.bottom(scope)
        if isinstance(e, BinOp) and e.op in LOGIC_OPS:
            left = self._cond(e.left, polarity, env, scope)
            right = self._cond(e.right, polarity, env, scope)
            if (e.op == "&&") == polarity:
                return d.meet(left, right)
            return d.join(left, right)
        if isinstance(e, BinOp) and e.op in COMPARE_OPS:
            tl = self.read(ExprNode(e.left.loc, env))
            tr = self.read(ExprNode(e.right.loc, env))
            if isinstance(tl, Base) and isinstance(tr, Base):
                joint = self._operands(tl, tr)
                alts = [d.assume(joint, cons) for cons in _relation(e.op, polarity)]
                return self._drop_operands(reduce(d.join, alts))
        return d.top(scope)


def abstract_step(e: Expr, env: Env, stack: AStack, m: TypeMap, lattice: TypeLattice,
                  config: Optional[AnalysisConfig] = None,
                  kinds: Optional[Mapping[str, Kind]] = None, path=None) -> Tuple[RefType, TypeMap]:
    """One transformer application at ``e`` under ``env`` and ``stack``; returns (type, new map)."""
    tr = AbstractTransformer(e, lattice, config, kinds)
    if m.top:
        return m.get(ExprNode(e.loc, env)), m
    tr.m = m.copy()
    try:
        t = tr.eval(e, env, stack, path)
    except _Unsafe as exc:
        return _top(tr.m, exc)
    return t, tr.m


def _top(m: TypeMap, exc: _Unsafe) -> Tuple[RefType, TypeMap]:
    top = TypeMap(m.types, top=True, cause=exc.reason, cause_node=exc.node)
    return top.get(exc.node), top
