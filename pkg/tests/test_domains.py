import pytest

from domains import (
    NU, Atom, LinCons, OctagonDomain, PolyhedraDomain, PredicateDomain, QualifierError, Scope, ScopeError,
    default_qualifiers, make_domain, parse_qualifiers, parse_thresholds,
)
from domains import linear, solver
from lang import Kind, parse_program

SCOPE_X = Scope.of([("x", Kind.INT)])


def _pred():
    return PredicateDomain(parse_qualifiers("nu <= 2\nnu <= 1\n0 <= nu\nnu = *\nnu = 1\nnu = 2\nnu <= *\n* <= nu"))


DOMAINS = {
    "poly": PolyhedraDomain,
    "oct": OctagonDomain,
    "pred": _pred,
}


@pytest.fixture(params=sorted(DOMAINS))
def domain(request):
    return DOMAINS[request.param]()


class TestLinear:
    def test_normalization_divides_and_floors(self):
        c = LinCons.of({"x": 2, "y": 4}, 5)
        assert c.coeffs == (("x", 1), ("y", 2))
        assert c.bound == 2

    def test_negate_is_integer_complement(self):
        c = linear.le({"x": 1}, 2)
        assert c.negate() == linear.ge({"x": 1}, 3)

    def test_entailment(self):
        cons = frozenset([linear.le({"x": 1}, 2), linear.le({"y": 1, "x": -1}, 0)])
        assert solver.entails(cons, linear.le({"y": 1}, 3))
        assert not solver.entails(cons, linear.le({"y": 1}, 1))

    def test_unsatisfiable_system(self):
        cons = frozenset(linear.const_eq("x", 1) + linear.const_eq("x", 2))
        assert not solver.satisfiable(cons)

    def test_integer_feasibility(self):
        # rationally feasible (x = 1/2) but without integer points
        cons = frozenset([linear.le({"x": 2}, 1), linear.ge({"x": 2}, 1)])
        assert not solver.satisfiable(cons)
        odd = frozenset(linear.eq({"x": 2, "y": -1}, 0) + linear.const_eq("y", 3))
        assert not solver.satisfiable(odd)

    def test_disequalities(self):
        cons = frozenset([linear.ge({"x": 1}, 0), linear.le({"x": 1}, 0)])
        assert not solver.satisfiable(cons, [((("x", 1),), 0)])
        wide = frozenset([linear.ge({"x": 1}, 0), linear.le({"x": 1}, 1)])
        assert solver.satisfiable(wide, [((("x", 1),), 0)])

    def test_every_disequality_counts(self):
        box = frozenset([linear.ge({"x": 1}, 0), linear.le({"x": 1}, 4)])
        holes = [((("x", 1),), k) for k in range(5)]
        assert not solver.satisfiable(box, holes)
        assert solver.satisfiable(box, holes[:4])
        assert solver.excludes(box, ((("x", 1),), 4), holes[:4]) is False
        assert solver.entails(box, linear.ge({"x": 1}, 4), holes[:4])

    def test_bounds(self):
        cons = frozenset([linear.le({"x": 2}, 7), linear.ge({"x": 1}, -1)])
        assert solver.upper_bound(cons, (("x", 1),)) == 3
        assert solver.lower_bound(cons, (("x", 1),)) == -1
        assert solver.upper_bound(frozenset([linear.ge({"x": 1}, 0)]), (("x", 1),)) is None
        assert solver.upper_bound(frozenset(linear.const_eq("x", 1) + linear.const_eq("x", 2)), (("x", 1),)) is None

    def test_projection(self):
        cons = frozenset(linear.var_eq(NU, "x") + [linear.le({"x": 1}, 2)])
        rest = linear.eliminate(cons, frozenset({"x"}))
        assert rest == frozenset([linear.le({NU: 1}, 2)])

    def test_rendering(self):
        assert str(linear.le({NU: 1, "x": -1}, 0)) == "ν ≤ x"
        assert linear.render_conjunction(linear.const_eq(NU, 3)) == "ν = 3"


class TestBaseDomains:
    def test_bottom_and_top(self, domain):
        top = domain.top(SCOPE_X)
        bot = domain.bottom(SCOPE_X)
        assert domain.is_bottom(bot)
        assert domain.leq(bot, top)
        assert not domain.leq(top, bot)
        assert domain.is_top(top)

    def test_constants_and_join(self, domain):
        one = domain.of_const(1, Scope())
        two = domain.of_const(2, Scope())
        joined = domain.join(one, two)
        assert domain.leq(one, joined) and domain.leq(two, joined)
        assert domain.member(joined, {NU: 1}) and domain.member(joined, {NU: 2})
        assert domain.entails(joined, linear.le({NU: 1}, 2))
        assert not domain.member(one, {NU: 2})

    def test_meet_of_disjoint_constants_is_bottom(self, domain):
        assert domain.is_bottom(domain.meet(domain.of_const(1, Scope()), domain.of_const(2, Scope())))

    def test_project_after_relation(self, domain):
        b = domain.assume(domain.top(SCOPE_X), linear.var_eq(NU, "x") + linear.const_eq("x", 2))
        assert domain.entails(b, linear.le({NU: 1}, 2))
        p = domain.project(b, "x")
        assert p.scope == Scope()
        assert domain.member(p, {NU: 2})
        assert domain.entails(p, linear.le({NU: 1}, 2))

    def test_equality_strengthening(self, domain):
        b = domain.strengthen_eq_const(domain.top(SCOPE_X), "x", 2)
        assert domain.entails(b, linear.le({"x": 1}, 2))
        assert not domain.member(b, {NU: 0, "x": 1})
        c = domain.strengthen_eq_var(b, NU, "x")
        assert domain.entails(c, linear.le({NU: 1}, 2))
        top = domain.top(Scope())
        assert domain.strengthen_eq_const(top, "x", 2) == top

    def test_subst_nu_moves_the_value_into_scope(self, domain):
        b = domain.assume(domain.top(Scope()), [linear.le({NU: 1}, 2)])
        moved = domain.subst_nu(b, "y")
        assert "y" in moved.scope
        assert domain.entails(moved, linear.le({"y": 1}, 2))
        with pytest.raises(ScopeError):
            domain.subst_nu(moved, "y")

    def test_rename_and_fit(self, domain):
        b = domain.assume(domain.top(SCOPE_X), linear.var_eq(NU, "x"))
        r = domain.rename(b, "x", "z")
        assert r.scope.names == frozenset({"z"})
        assert domain.entails(r, linear.le({NU: 1, "z": -1}, 0))
        fitted = domain.fit(r, Scope.of([("w", Kind.INT)]))
        assert fitted.scope.names == frozenset({"w"})
        assert domain.is_top(fitted)

    def test_scope_mismatch_is_reported(self, domain):
        with pytest.raises(ScopeError):
            domain.leq(domain.top(SCOPE_X), domain.top(Scope()))

    def test_join_is_an_upper_bound_of_relations(self, domain):
        s = Scope.of([("x", Kind.INT)])
        b1 = domain.assume(domain.top(s), linear.var_eq(NU, "x") + linear.const_eq("x", 1))
        b2 = domain.assume(domain.top(s), linear.var_eq(NU, "x") + linear.const_eq("x", 2))
        j = domain.join(b1, b2)
        assert domain.leq(b1, j) and domain.leq(b2, j)
        assert domain.entails(j, linear.le({NU: 1, "x": -1}, 0))


class TestNumericDomains:
    @pytest.mark.parametrize("make", [PolyhedraDomain, OctagonDomain])
    def test_bounds(self, make):
        d = make()
        b = d.assume(d.top(Scope()), [linear.ge({NU: 1}, -3), linear.le({NU: 1}, 7)])
        assert d.bounds(b, NU) == (-3, 7)

    @pytest.mark.parametrize("make", [PolyhedraDomain, OctagonDomain])
    def test_widening_keeps_stable_bounds_and_thresholds(self, make):
        d = make()
        s = Scope()
        b1 = d.assume(d.top(s), [linear.ge({NU: 1}, 0), linear.le({NU: 1}, 1)])
        b2 = d.assume(d.top(s), [linear.ge({NU: 1}, 0), linear.le({NU: 1}, 2)])
        plain = d.widen(b1, b2)
        assert d.bounds(plain, NU) == (0, None)
        capped = d.widen(b1, b2, [linear.le({NU: 1}, 10)])
        assert d.bounds(capped, NU) == (0, 10)

    def test_polyhedra_keeps_non_octagonal_relations(self):
        d = PolyhedraDomain()
        s = Scope.of([("y", Kind.INT)])
        b = d.assume(d.top(s), linear.eq({NU: 1, "y": -2}))
        assert d.entails(b, linear.le({NU: 1, "y": -2}, 0))
        assert d.member(b, {"y": 3, NU: 6})
        assert not d.member(b, {"y": 3, NU: 5})

    def test_octagon_drops_non_octagonal_relations_soundly(self):
        d = OctagonDomain()
        s = Scope.of([("y", Kind.INT)])
        b = d.assume(d.top(s), linear.eq({NU: 1, "y": -2}) + linear.const_eq("y", 3))
        assert d.bounds(b, NU) == (6, 6)


class TestPredicates:
    def test_join_intersects_atoms(self):
        d = PredicateDomain(parse_qualifiers("nu <= 2\nnu <= 1\nnu = 1\nnu = 2"))
        j = d.join(d.of_const(1, Scope()), d.of_const(2, Scope()))
        assert j.atoms == frozenset({Atom.make("le", {NU: 1}, 2)})

    def test_wildcard_instantiates_over_scope(self):
        d = PredicateDomain(parse_qualifiers("nu = *"))
        universe = d.universe(Scope.of([("x", Kind.INT), ("f", Kind.FUN)]))
        assert Atom.make("eq", {NU: 1, "x": -1}, 0) in universe
        assert all("f" not in a.variables for a in universe)

    def test_disequality_atoms(self):
        d = PredicateDomain(parse_qualifiers("nu != 0\n0 <= nu"))
        b = d.assume(d.top(Scope()), [linear.ge({NU: 1}, 1)])
        assert Atom.make("ne", {NU: 1}, 0) in b.atoms
        assert not d.member(b, {NU: 0})

    def test_membership_honours_every_disequality(self):
        d = PredicateDomain(parse_qualifiers("nu != 0\nnu != 1\nnu != 2\nnu != 3"))
        b = d.assume(d.top(Scope()), [linear.ge({NU: 1}, 4)])
        assert b.atoms == frozenset(Atom.make("ne", {NU: 1}, k) for k in range(4))
        for k in range(4):
            assert not d.member(b, {NU: k})
        assert d.member(b, {NU: 5})
        assert d.member(b, {NU: -1})

    def test_widen_is_join(self):
        d = _pred()
        a, b = d.of_const(0, Scope()), d.of_const(2, Scope())
        assert d.widen(a, b) == d.join(a, b)


class TestQualifierFiles:
    def test_parse_forms(self):
        atoms = parse_qualifiers("# comment\n\nnu <= 2\nx - nu >= 1\nν = ⋆\n2 * nu < 7\nnu <> 0\n")
        assert atoms[0] == Atom.make("le", {NU: 1}, 2)
        assert atoms[1] == Atom.make("le", {NU: 1, "x": -1}, -1)
        assert atoms[2].rel == "eq"
        assert atoms[3] == Atom.make("le", {NU: 1}, 3)
        assert atoms[4].rel == "ne"

    def test_errors_carry_line_numbers(self):
        with pytest.raises(QualifierError, match="line 2"):
            parse_qualifiers("nu <= 1\nnu <= <= 2")
        with pytest.raises(QualifierError, match="constant"):
            parse_qualifiers("1 <= 2")

    def test_thresholds_expand_equalities(self):
        cons = parse_thresholds("nu = 3\nnu <> 1")
        assert set(cons) == set(linear.const_eq(NU, 3))
        with pytest.raises(QualifierError):
            parse_thresholds("nu <= *")

    def test_default_qualifiers_use_literals(self):
        quals = default_qualifiers(parse_program("let x = 5 in x + (-2)"))
        assert Atom.make("le", {NU: 1}, 5) in quals
        assert Atom.make("le", {NU: -1}, 2) in quals
        assert Atom.make("le", {NU: 1}, 0) in quals


class TestRegistry:
    def test_make_domain(self):
        assert isinstance(make_domain("poly"), PolyhedraDomain)
        assert isinstance(make_domain("oct"), OctagonDomain)
        with pytest.raises(QualifierError):
            make_domain("pred")
        with pytest.raises(ValueError):
            make_domain("intervals")

    def test_scope_rejects_value_symbol(self):
        with pytest.raises(ScopeError):
            Scope.of([(NU, Kind.INT)])
