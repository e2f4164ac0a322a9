"""
Declarative typing rules, checked against a witness type map.

The rules are nondeterministic in the types of subexpressions; the checker
reads those from the witness (the type at the matching abstract node), which
makes derivability decidable.  Every premise is a subtyping check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from analysis.config import AnalysisConfig
from analysis.transformer import AbstractTransformer, _Unsafe
from analysis.typemap import TypeMap
from concrete.nodes import Env, ExprNode, VarNode
from lang.ast import App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Rec, Var
from lang.kinds import Kind, const_kind
from refinement import BOT, TOP, Base, Fun, RefType, TypeLattice, concat
from refinement.stacks import AStack


@dataclass(frozen=True)
class TypingJudgement:
    """``Γ, ŝ ⊢ e : t`` where Γ is read from the witness at the variable nodes of ``env``."""

    env: Env
    stack: AStack
    expr: Expr
    type: RefType
    path: object = None


class TypingChecker:
    def __init__(self, program: Expr, lattice: TypeLattice, witness: TypeMap,
                 config: Optional[AnalysisConfig] = None, kinds: Optional[Mapping[str, Kind]] = None):
        self.lattice = lattice
        self.tr = AbstractTransformer(program, lattice, config, kinds)
        self.tr.m = witness
        self.k = self.tr.config.k

    def w(self, e: Expr, env: Env) -> RefType:
        return self.tr.read(ExprNode(e.loc, env))

    def sub(self, t1: RefType, t2: RefType) -> bool:
        return self.lattice.subtype(t1, t2)

    def derive(self, j: TypingJudgement) -> bool:
        if j.type is TOP or self.tr.m.top:
            return False
        try:
            return self._derive(j.expr, j.env, j.stack, j.path, j.type)
        except _Unsafe:
            return False

    def _derive(self, e: Expr, env: Env, stack: AStack, path, t: RefType) -> bool:
        lat = self.lattice
        tr = self.tr
        scope = tr.scope(env)
        if isinstance(e, Const):
            value = 0 if e.value is None else int(e.value)
            return self.sub(tr.strengthen(lat.of_const(value, const_kind(e.value), scope), env, path), t)
        if isinstance(e, Input):
            return self.sub(tr.strengthen(lat.top_base(Kind.INT, scope), env, path), t)
        if isinstance(e, Var):
            nx = env.lookup(e.name)
            if nx is None:
                return False
            tx = lat.eq_var(lat.fit(tr.read(nx), scope), e.name)
            return self.sub(tr.strengthen(tx, env, path), tr.strengthen(lat.eq_var(t, e.name), env, path))
        if isinstance(e, App):
            return self._app(e, env, stack, path, t)
        if isinstance(e, (Lambda, Rec)):
            return self._abs(e, env, path, t)
        if isinstance(e, Ite):
            tc = self.w(e.cond, env)
            if not self._derive(e.cond, env, stack, path, tc):
                return False
            if tc is BOT:
                return True
            if not (isinstance(tc, Base) and tc.kind is Kind.BOOL):
                return False
            for branch, polarity in ((e.then, True), (e.orelse, False)):
                reachable, branch_path = tr.branch_path(e.cond, polarity, tc, env, path)
                if not reachable:
                    continue
                tb = self.w(branch, env)
                if not (self._derive(branch, env, stack, branch_path, tb) and self.sub(tb, t)):
                    return False
            return True
        if isinstance(e, BinOp):
            tl, tr_ = self.w(e.left, env), self.w(e.right, env)
            if not (self._derive(e.left, env, stack, path, tl) and self._derive(e.right, env, stack, path, tr_)):
                return False
            if tl is BOT or tr_ is BOT:
                return True
            return self.sub(tr.binop_type(ExprNode(e.loc, env), e.op, tl, tr_, path), t)
        if isinstance(e, Assert):
            tg = self.w(e.expr, env)
            if not self._derive(e.expr, env, stack, path, tg):
                return False
            if tg is BOT:
                return True
            if not (isinstance(tg, Base) and tg.kind is Kind.BOOL):
                return False
            may_fail, _ = tr.branch_path(e.expr, False, tg, env, path)
            if may_fail:
                return False
            return self.sub(tr.strengthen(lat.of_const(0, Kind.UNIT, scope), env, path), t)
        raise TypeError(f"unknown expression {e!r}")

    def _app(self, e: App, env: Env, stack: AStack, path, t: RefType) -> bool:
        ti, tj = self.w(e.fn, env), self.w(e.arg, env)
        if not self._derive(e.fn, env, stack, path, ti):
            return False
        if ti is BOT:
            return True
        if not isinstance(ti, Fun):
            return False
        if not self._derive(e.arg, env, stack, path, tj):
            return False
        s = concat(e.fn.loc, stack, self.k)
        z, zkind = ti.var, ti.var_kind
        target = Fun.of(z, zkind, self.tr.scope(env), {s: (tj, self.lattice.extend(t, z, zkind))})
        return self.sub(ti, target)

    def _abs(self, e: Union[Lambda, Rec], env: Env, path, t: RefType) -> bool:
        """t-abs: one body derivation per stack the table was called at; vacuous for the empty table."""
        if t is BOT:
            return True
        if not isinstance(t, Fun):
            return False
        lat = self.lattice
        for s in t.called:
            nx = VarNode(e.param, env, s)
            body_env = env
            if isinstance(e, Rec):
                nf = VarNode(e.name, env, s)
                if not self.sub(t, lat.fit(self.tr.read(nf), t.scope)):
                    return False
                body_env = body_env.extend(e.name, nf)
            body_env = body_env.extend(e.param, nx)
            tb = self.w(e.body, body_env)
            if not self._derive(e.body, body_env, s, path, tb):
                return False
            local = self.tr._local(t, e, s, self.tr.read(nx), tb)
            if not self.sub(local, self.tr._restrict(t, s)):
                return False
        return True


def derive_typing(j: TypingJudgement, witness: TypeMap, program: Expr, lattice: TypeLattice,
                  config: Optional[AnalysisConfig] = None, kinds: Optional[Mapping[str, Kind]] = None) -> bool:
    return TypingChecker(program, lattice, witness, config, kinds).derive(j)
