import pytest

from lang import (
    App, Assert, BinOp, Const, Input, Ite, Kind, Lambda, ParseError, Rec, Var, WellFormednessError,
    check_program, find_by_label, infer_kinds, parse_program, pretty,
)
from lang.ast import LocFactory, binders


class TestParser:
    def test_let_desugars_to_application(self):
        e = parse_program("let id x = x in (id 1) + (id 2)")
        assert isinstance(e, App) and isinstance(e.fn, Lambda)
        assert e.fn.param == "id"
        body = e.fn.body
        assert isinstance(body, BinOp) and body.op == "+"
        assert isinstance(body.left, App) and isinstance(body.left.fn, Var)
        assert body.left.fn.name == "id" and body.left.arg == Const(1, body.left.arg.loc)
        assert isinstance(e.arg, Lambda) and isinstance(e.arg.body, Var)
        assert e.arg.body.name == e.arg.param

    def test_let_rec_becomes_rec_node(self):
        e = parse_program("let rec fib x = if x >= 2 then fib (x - 1) + fib (x - 2) else 1 in fib")
        assert isinstance(e, App) and isinstance(e.arg, Rec)
        rec = e.arg
        assert rec.param == "x"
        assert isinstance(rec.body, Ite)
        # the recursive occurrences refer to the inner binder, not the let
        inner_calls = [sub.fn.name for sub in _walk(rec.body) if isinstance(sub, App) and isinstance(sub.fn, Var)]
        assert inner_calls == [rec.name, rec.name]
        assert rec.name != e.fn.param

    def test_unbound_variable(self):
        with pytest.raises(ParseError, match="unbound variable y"):
            parse_program("let x = 1 in y")

    def test_mutual_recursion_rejected(self):
        with pytest.raises(ParseError):
            parse_program("let rec f x = g x and g y = f y in f 1")

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse_program("let x = in x")
        assert info.value.line == 1 and info.value.column == 9

    def test_binders_are_alpha_renamed(self):
        e = parse_program("let x = 1 in let x = x + 1 in x")
        names = list(binders(e))
        assert len(names) == len(set(names)) == 2
        check_program(e)

    def test_curried_multi_argument_function(self):
        e = parse_program("let add a b = a + b in add 1 2")
        fn = e.arg
        assert isinstance(fn, Lambda) and isinstance(fn.body, Lambda)
        assert (fn.param, fn.body.param) == ("a", "b")

    def test_literals_and_builtins(self):
        e = parse_program("let u = () in let n = read_int () in assert (n >= -2)")
        kinds = {type(sub) for sub in _walk(e)}
        assert Input in kinds and Assert in kinds
        consts = [sub.value for sub in _walk(e) if isinstance(sub, Const)]
        assert None in consts and -2 in consts

    def test_comments_are_skipped(self):
        e = parse_program("(* a (* nested *) comment *) 1 + 2")
        assert isinstance(e, BinOp)

    def test_unterminated_comment(self):
        with pytest.raises(ParseError, match="unterminated comment"):
            parse_program("(* open")

    def test_labels_attach_to_locations(self):
        e = parse_program("let id x = x@k in (id@q 1@f)@g")
        assert isinstance(find_by_label(e, "k"), Var)
        assert find_by_label(e, "f").value == 1
        assert isinstance(find_by_label(e, "g"), App)
        with pytest.raises(KeyError):
            find_by_label(e, "missing")

    def test_locations_are_distinct(self):
        e = parse_program("let f x = x + 1 in f (f 2)")
        locs = [sub.loc for sub in _walk(e)]
        assert len(locs) == len(set(locs))

    def test_pretty_restores_let(self):
        text = pretty(parse_program("let x = 1 in x + 2"))
        assert text.startswith("let x = 1 in")
        assert parse_program(text) is not None


class TestWellFormedness:
    def test_open_term_rejected(self):
        loc = LocFactory()
        with pytest.raises(WellFormednessError, match="unbound"):
            check_program(Var("y", loc.fresh()))

    def test_duplicate_binders_rejected(self):
        loc = LocFactory()
        e = App(Lambda("x", Lambda("x", Var("x", loc.fresh()), loc.fresh()), loc.fresh()), Const(1, loc.fresh()),
                loc.fresh())
        with pytest.raises(WellFormednessError, match="alpha-unique"):
            check_program(e)

    def test_shared_location_rejected(self):
        loc = LocFactory()
        shared = loc.fresh()
        with pytest.raises(WellFormednessError, match="duplicate location"):
            check_program(BinOp("+", Const(1, shared), Const(2, shared), loc.fresh()))


class TestKinds:
    def test_kinds_follow_uses(self):
        e = parse_program("let f g = g 1 in let b = true in let n = 3 in if b && n > 0 then f (fun y -> y) else 0")
        kinds = infer_kinds(e)
        assert kinds["g"] is Kind.FUN
        assert kinds["f"] is Kind.FUN
        assert kinds["b"] is Kind.BOOL
        assert kinds["n"] is Kind.INT
        assert kinds["y"] is Kind.INT

    def test_numeric_kinds(self):
        assert Kind.INT.numeric and Kind.BOOL.numeric
        assert not Kind.FUN.numeric


def _walk(e):
    from lang import subexpressions
    return list(subexpressions(e))
