import pytest

from analysis import AnalysisConfig, TypeMap, analyze, make_lattice
from checker import (
    TypingJudgement, candidate_types, derive_typing, node_witnesses, soundness_counterexamples, tiny_programs,
    verify_fixpoint_typing_equiv,
)
from concrete import EMPTY_ENV, ExprNode, VarNode
from domains import NU, PolyhedraDomain, Scope, default_qualifiers, parse_qualifiers
from domains import linear
from lang import Kind, parse_program
from lang.ast import LocFactory, Var
from refinement import BOT, Base, Fun, TypeLattice

from conftest import TERMINATING

X = Scope.of([("x", Kind.INT)])


@pytest.fixture
def lat():
    return TypeLattice(PolyhedraDomain())


def _bounded(lat, scope, hi):
    d = lat.domain
    return Base(Kind.INT, d.assume(d.top(scope), [linear.le({NU: 1}, hi)]))


class TestRules:
    def test_constant(self, lat):
        program = parse_program("1")
        assert derive_typing(TypingJudgement(EMPTY_ENV, (), program, lat.of_const(1, Kind.INT, Scope())),
                             TypeMap(), program, lat)
        assert derive_typing(TypingJudgement(EMPTY_ENV, (), program, _bounded(lat, Scope(), 2)),
                             TypeMap(), program, lat)
        assert not derive_typing(TypingJudgement(EMPTY_ENV, (), program, lat.of_const(2, Kind.INT, Scope())),
                                 TypeMap(), program, lat)

    def test_variable(self, lat):
        e = Var("x", LocFactory().fresh())
        nx = VarNode("x", EMPTY_ENV, ())
        env = EMPTY_ENV.extend("x", nx)
        witness = TypeMap()
        witness.types[nx] = lat.of_const(1, Kind.INT, Scope())
        kinds = {"x": Kind.INT}
        assert derive_typing(TypingJudgement(env, (), e, _bounded(lat, X, 2)), witness, e, lat, kinds=kinds)
        assert not derive_typing(TypingJudgement(env, (), e, _bounded(lat, X, 0)), witness, e, lat, kinds=kinds)

    def test_application_needs_a_function(self, lat):
        program = parse_program("1 2")
        witness = TypeMap()
        witness.types[ExprNode(program.fn.loc, EMPTY_ENV)] = lat.of_const(1, Kind.INT, Scope())
        witness.types[ExprNode(program.arg.loc, EMPTY_ENV)] = lat.of_const(2, Kind.INT, Scope())
        j = TypingJudgement(EMPTY_ENV, (), program, lat.top_base(Kind.INT, Scope()))
        assert not derive_typing(j, witness, program, lat)

    def test_empty_table_is_vacuous(self, lat):
        program = parse_program("fun x -> x + 1")
        t = lat.empty_fun("x", Kind.INT, Scope())
        assert derive_typing(TypingJudgement(EMPTY_ENV, (), program, t), TypeMap(), program, lat)
        assert not derive_typing(TypingJudgement(EMPTY_ENV, (), program, lat.of_const(0, Kind.INT, Scope())),
                                 TypeMap(), program, lat)

    def test_analysis_result_derives_the_root(self, load_program, id_qualifiers):
        program = load_program("ho_id.ml")
        result = analyze(program, AnalysisConfig(domain="pred", k=0, qualifiers=id_qualifiers))
        root = result.types.get(ExprNode(program.loc, EMPTY_ENV))
        assert root is not BOT
        j = TypingJudgement(EMPTY_ENV, (), program, root)
        assert derive_typing(j, result.types, program, result.lattice, result.config, result.kinds)


class TestEquivalence:
    def test_identity_program(self, load_program, id_qualifiers):
        report = verify_fixpoint_typing_equiv(
            load_program("ho_id.ml"), AnalysisConfig(domain="pred", k=0, qualifiers=id_qualifiers),
        )
        assert report.safe and report.fixpoint and report.derivable
        assert report.perturbations > 0
        assert report.ok, report.counterexamples

    def test_unsafe_maps_claim_nothing(self, load_program):
        program = load_program("bool_unsafe.ml")
        report = verify_fixpoint_typing_equiv(
            program, AnalysisConfig(domain="pred", k=1, qualifiers=tuple(default_qualifiers(program))),
        )
        assert not report.safe
        assert report.ok

    @pytest.mark.slow
    @pytest.mark.parametrize("name", TERMINATING)
    @pytest.mark.parametrize("k", (0, 1))
    def test_corpus_completeness(self, name, k, load_program):
        program = load_program(name)
        cfg = AnalysisConfig(domain="pred", k=k, qualifiers=tuple(default_qualifiers(program)))
        report = verify_fixpoint_typing_equiv(program, cfg)
        assert report.ok, report.counterexamples


class TestSoundness:
    def test_tiny_programs_parse(self):
        sources = list(tiny_programs())
        assert len(sources) == len(set(sources)) == 78
        for source in sources[:5]:
            parse_program(source)

    def test_candidate_types(self):
        cfg = AnalysisConfig(domain="pred", qualifiers=tuple(parse_qualifiers("nu <= 0\n0 <= nu")))
        types = candidate_types(make_lattice(cfg), cfg.qualifiers)
        assert types[0] is BOT
        assert len(types) == 5

    def test_node_witnesses(self):
        program = parse_program("(fun x -> (x + 1)) 0")
        cfg = AnalysisConfig(domain="pred", k=0, qualifiers=tuple(parse_qualifiers("nu <= 0\n0 <= nu")))
        result = analyze(program, cfg)
        m, lat = result.types, result.lattice
        witnesses = list(node_witnesses(lat, cfg.qualifiers, m))
        assert {n for n, _ in witnesses} == {n for n, t in m.items() if t is not BOT}

        root = ExprNode(program.loc, EMPTY_ENV)

        def derives(node, t):
            w = m.copy()
            w.types[node] = t
            return derive_typing(TypingJudgement(EMPTY_ENV, (), program, w.get(root)), w, program, lat, cfg, result.kinds)

        # a weaker root type still derives; a lambda that was never called does not
        assert any(derives(n, t) for n, t in witnesses if n == root)
        uncalled = [(n, t) for n, t in witnesses if isinstance(t, Fun) and not t.called]
        assert uncalled
        assert not any(derives(n, t) for n, t in uncalled)
        assert soundness_counterexamples(cfg, ["(fun x -> (x + 1)) 0"]) == []

    @pytest.mark.slow
    def test_brute_force(self):
        assert soundness_counterexamples(AnalysisConfig(domain="poly", k=0)) == []
