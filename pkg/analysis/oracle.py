"""
Concretization check linking a concrete execution map to an inferred type map.

Concrete nodes are abstracted by truncating every call stack (including the
ones inside environments) to the ``k`` most recent call sites; the value at
each concrete node must then lie in the concretization of the abstract type at
the abstracted node, under the assignment of the constants bound in its
environment.
"""
from __future__ import annotations

from typing import Dict, List, Mapping, Union

from concrete.nodes import Env, ExprNode, Node, VarNode
from concrete.semantics import Diverged, ExecMap
from concrete.values import CBOT, ERR, Constant, Table, Value, render_value
from domains import NU, BaseDomain
from refinement import BOT, TOP, Base, Fun, RefType, render_type, truncate

from .typemap import TypeMap


class _Abstractor:
    def __init__(self, k: int):
        self.k = k
        self._envs: Dict[Env, Env] = {}

    def env(self, env: Env) -> Env:
        out = self._envs.get(env)
        if out is None:
            out = Env(tuple((name, self.node(vn)) for name, vn in env))
            self._envs[env] = out
        return out

    def node(self, n: Node) -> Node:
        if isinstance(n, ExprNode):
            return ExprNode(n.loc, self.env(n.env))
        return VarNode(n.var, self.env(n.env), truncate(n.stack, self.k))


def value_member(v: Value, t: RefType, assignment: Mapping[str, int], domain: BaseDomain, k: int) -> bool:
    if v is CBOT or t is TOP:
        return True
    if v is ERR or t is BOT:
        return False
    if isinstance(v, Constant):
        if not (isinstance(t, Base) and t.kind == v.kind):
            return False
        return domain.member(t.ref, {**assignment, NU: v.value})
    assert isinstance(v, Table)
    if not isinstance(t, Fun):
        return False
    for s, (vi, vo) in v.entries:
        ti, to = t.get(truncate(s, k))
        if not value_member(vi, ti, assignment, domain, k):
            return False
        inner = dict(assignment)
        inner.pop(t.var, None)
        if isinstance(vi, Constant):
            inner[t.var] = vi.value
        if not value_member(vo, to, inner, domain, k):
            return False
    return True


def gamma_violations(concrete: Union[ExecMap, Diverged], abstract: TypeMap, domain: BaseDomain,
                     k: int) -> List[str]:
    """Every concrete node whose value escapes the abstract type at its abstracted node."""
    m = concrete.last if isinstance(concrete, Diverged) else concrete
    if abstract.top:
        return []
    if m.top:
        return [f"concrete run reaches ω ({m.cause}) but the type map is safe"]
    rho = _Abstractor(k)
    out: List[str] = []
    for n in m.nodes():
        v = m.values[n]
        assignment: Dict[str, int] = {}
        for name, vn in n.env:
            bound = m.get(vn)
            if isinstance(bound, Constant):
                assignment[name] = bound.value
        t = abstract.get(rho.node(n))
        if not value_member(v, t, assignment, domain, k):
            out.append(f"{n.describe()}: {render_value(v)} ∉ {render_type(t, domain)}")
    return out


def gamma_member(concrete: Union[ExecMap, Diverged], abstract: TypeMap, domain: BaseDomain, k: int) -> bool:
    return not gamma_violations(concrete, abstract, domain, k)
