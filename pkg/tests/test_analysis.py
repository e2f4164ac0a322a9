import pytest

from analysis import (
    SAFE, UNSAFE, AnalysisConfig, ConfigError, abstract_step, analyze, auto_thresholds, build_report, check_safety,
    TypeMap, dumps, gamma_member, gamma_violations, linearize, render_text, resolve_thresholds,
)
from concrete import EMPTY_ENV, ExprNode, VarNode, run_concrete
from domains import NU, Atom
from domains import linear
from lang import Rec, infer_kinds, parse_program, subexpressions
from refinement import Fun
from server.runner import load_expected, run_batch

from conftest import TERMINATING


def _var_types(result, name):
    return [t for n, t in result.types.types.items() if isinstance(n, VarNode) and n.var == name]


def _label_types(result, label):
    return [t for n, t in result.types.types.items() if isinstance(n, ExprNode) and n.loc.label == label]


def _entails(result, t, cons):
    return result.lattice.domain.entails(t.ref, cons)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            AnalysisConfig(domain="pred")
        with pytest.raises(ConfigError):
            AnalysisConfig(domain="intervals")
        with pytest.raises(ConfigError):
            AnalysisConfig(k=-1)
        with pytest.raises(ConfigError):
            AnalysisConfig(widening="narrowing")
        with pytest.raises(ConfigError):
            AnalysisConfig(depvar_elimination="keep")

    def test_describe(self):
        assert AnalysisConfig(domain="oct", k=0, widening="plain").describe() == "oct/k=0/plain"
        assert AnalysisConfig(label="x").describe() == "x"


class TestThresholds:
    def test_linearize(self):
        e = parse_program("let x = 1 in 2 * x + 1")
        body = e.fn.body
        assert linearize(body, infer_kinds(e)) == ({"x": 2}, 1)

    def test_guards_become_thresholds(self):
        e = parse_program("let x = read_int () in if x < 10 then 0 else 1")
        cons = auto_thresholds(e, infer_kinds(e))
        assert linear.le({"x": 1}, 9) in cons
        assert linear.le({NU: 1}, 9) in cons
        assert linear.le({NU: 1, "x": -1}, 0) in cons

    def test_resolution(self):
        e = parse_program("let x = read_int () in if x < 10 then 0 else 1")
        assert resolve_thresholds(e, AnalysisConfig(widening="plain")) == ()
        explicit = (linear.le({NU: 1}, 3),)
        assert resolve_thresholds(e, AnalysisConfig(thresholds=explicit)) == explicit


class TestInference:
    def test_fib_output_is_increasing(self, load_program):
        result = analyze(load_program("fib_increasing.ml"), AnalysisConfig(domain="poly", k=0))
        assert check_safety(result).safe
        (fib,) = _var_types(result, "fib")
        assert isinstance(fib, Fun)
        (stack,) = fib.called
        out = fib.get(stack)[1]
        assert _entails(result, out, linear.le({fib.var: 1, NU: -1}, 0))
        assert _entails(result, out, linear.ge({NU: 1}, 1))

    @pytest.mark.parametrize("k, verdict, sites", [(1, SAFE, 2), (0, UNSAFE, 1)])
    def test_context_sensitivity_separates_call_sites(self, load_program, k, verdict, sites):
        result = analyze(load_program("ho_apply.ml"), AnalysisConfig(domain="poly", k=k))
        assert check_safety(result).status == verdict
        if verdict != SAFE:
            return
        (apply,) = _var_types(result, "apply")
        assert len(apply.called) == sites
        d = result.lattice.domain
        # column of the call site: `apply g z` (doubling) and `apply h z` (negated doubling)
        expected = {
            26: lambda x: linear.eq({NU: 1, x: -2}) + [linear.ge({x: 1}, 0)],
            41: lambda x: linear.eq({NU: 1, x: 2}) + [linear.le({x: 1}, -1)],
        }
        seen = set()
        for stack in apply.called:
            (site,) = stack
            inner = apply.get(stack)[1]
            assert isinstance(inner, Fun)
            (call,) = inner.called
            assert call[0].column == site.column
            out = inner.get(call)[1]
            pinned = d.assume(d.top(out.ref.scope), expected[site.column](inner.var))
            assert d.leq(out.ref, pinned) and d.leq(pinned, out.ref)
            seen.add(site.column)
        assert seen == set(expected)

    def test_liquid_instantiation(self, load_program, id_qualifiers):
        cfg = AnalysisConfig(domain="pred", k=0, qualifiers=id_qualifiers)
        result = analyze(load_program("ho_id.ml"), cfg)
        assert check_safety(result).safe

        (ident,) = _var_types(result, "id")
        x = ident.var
        i, o = ident.get(())
        assert i.ref.atoms == frozenset({Atom.make("le", {NU: 1}, 2)})
        assert o.ref.atoms == frozenset({
            Atom.make("eq", {NU: 1, x: -1}, 0),
            Atom.make("le", {NU: 1}, 2),
            Atom.make("le", {x: 1}, 2),
        })

        for label, value in (("q", 1), ("a", 2)):
            (site,) = _label_types(result, label)
            i, o = site.get(())
            assert _entails(result, i, linear.le({NU: 1}, value))
            assert _entails(result, i, linear.ge({NU: 1}, value))
            assert _entails(result, o, linear.le({NU: 1, site.var: -1}, 0))

    def test_hungry_program_widens_to_error(self, load_program, configs):
        program = load_program("ho_hungry.ml")
        for cfg in configs(program):
            result = analyze(program, cfg)
            assert result.converged, cfg.describe()
            assert result.iterations <= cfg.max_iters
            assert not check_safety(result).safe
            assert result.max_depth <= cfg.depth_cap

    def test_path_sensitivity(self, load_program):
        program = load_program("bool_guard.ml")
        assert check_safety(analyze(program, AnalysisConfig(domain="poly", k=1))).safe
        blind = AnalysisConfig(domain="poly", k=1, path_sensitive=False)
        assert not check_safety(analyze(program, blind)).safe

    def test_step_at_the_root_is_stable_on_the_fixpoint(self, load_program):
        program = load_program("arith_simple.ml")
        result = analyze(program, AnalysisConfig(domain="oct", k=1))
        t, m = abstract_step(program, EMPTY_ENV, (), result.types, result.lattice, result.config, result.kinds)
        assert result.lattice.equivalent(t, result.types.get(ExprNode(program.loc, EMPTY_ENV)))
        assert m.leq(result.types, result.lattice)

    def test_recursive_calls_reach_the_function_in_the_same_step(self, load_program):
        program = load_program("rec_sum.ml")
        result = analyze(program, AnalysisConfig(domain="oct", k=1))
        (rec,) = [e for e in subexpressions(program) if isinstance(e, Rec)]
        m, checked = TypeMap(), 0
        for _ in range(result.iterations):
            _, m = abstract_step(program, EMPTY_ENV, (), m, result.lattice, result.config, result.kinds)
            if m.top:
                break
            for n, t in m.types.items():
                if not (isinstance(n, ExprNode) and n.loc == rec.loc and isinstance(t, Fun)):
                    continue
                for s in t.called:
                    self_binding = m.get(VarNode(rec.name, n.env, s))
                    if isinstance(self_binding, Fun):
                        assert set(self_binding.called) <= set(t.called)
                        checked += 1
        assert checked

    def test_forgetting_the_dependency_variable(self, load_program):
        cfg = AnalysisConfig(domain="poly", k=1, depvar_elimination="forget")
        assert check_safety(analyze(load_program("arith_simple.ml"), cfg)).safe


class TestVerdicts:
    def test_applying_a_constant(self):
        verdict = check_safety(analyze(parse_program("1 2"), AnalysisConfig(domain="poly")))
        assert verdict.status == UNSAFE
        assert verdict.reason == "application of a non-function"
        assert verdict.render().startswith("UNSAFE: application of a non-function")

    def test_failed_assertion_points_at_a_node(self, load_program):
        verdict = check_safety(analyze(load_program("bool_unsafe.ml"), AnalysisConfig(domain="oct")))
        assert not verdict.safe
        assert verdict.node is not None
        assert verdict.reason == "assertion may fail"

    def test_iteration_budget(self, load_program):
        result = analyze(load_program("ho_id.ml"), AnalysisConfig(domain="poly", max_iters=1))
        assert not result.converged
        assert "no fixpoint" in check_safety(result).reason

    def test_report(self, load_source, load_program):
        result = analyze(load_program("arith_simple.ml"), AnalysisConfig(domain="poly", k=1))
        verdict = check_safety(result)
        report = build_report(result, verdict, load_source("arith_simple.ml"))
        assert report["verdict"] == SAFE
        assert report["config"]["thresholds"] == "auto"
        assert {"program", "iterations", "converged", "timing", "types"} <= set(report)
        assert any(row.get("var") == "y" for row in report["types"])
        assert '"verdict": "SAFE"' in dumps(report)
        assert render_text(result, verdict).startswith("SAFE")

    def test_progress_callback(self, load_program):
        seen = []
        analyze(load_program("ho_id.ml"), AnalysisConfig(domain="oct"), lambda n, m: seen.append(n))
        assert seen == list(range(1, len(seen) + 1))


class TestOracle:
    def test_identity_program(self, load_program, id_qualifiers):
        program = load_program("ho_id.ml")
        result = analyze(program, AnalysisConfig(domain="pred", k=0, qualifiers=id_qualifiers))
        assert gamma_member(run_concrete(program), result.types, result.lattice.domain, 0)

    def test_concrete_error_against_a_safe_map(self, load_program):
        safe = analyze(load_program("arith_simple.ml"), AnalysisConfig(domain="poly"))
        crash = run_concrete(load_program("bool_unsafe.ml"))
        assert gamma_violations(crash, safe.types, safe.lattice.domain, 1)

    def test_error_map_contains_everything(self, load_program):
        program = load_program("bool_unsafe.ml")
        result = analyze(program, AnalysisConfig(domain="poly"))
        assert result.types.top
        assert gamma_member(run_concrete(program), result.types, result.lattice.domain, 1)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", TERMINATING)
    def test_soundness_on_corpus(self, name, load_program, configs):
        program = load_program(name)
        concrete = run_concrete(program)
        for cfg in configs(program):
            result = analyze(program, cfg)
            assert gamma_violations(concrete, result.types, result.lattice.domain, cfg.k) == [], cfg.describe()


@pytest.mark.slow
def test_corpus_verdicts(programs_dir):
    expected = load_expected(programs_dir / "expected.json")
    summary = run_batch(sorted(programs_dir.glob("*.ml")), AnalysisConfig(domain="poly", k=1), expected, 4)
    failures = [(r.file, r.expected, r.observed) for r in summary.results if not r.ok]
    assert failures == []
    assert summary.totals["count"] == len(expected)
