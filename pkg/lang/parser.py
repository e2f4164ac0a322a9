from __future__ import annotations

import dataclasses
from typing import Dict, List, Optional, Tuple

from .ast import (
    App, Assert, BinOp, Const, Expr, Input, Ite, Lambda, Loc, LocFactory, Rec, Var,
)
from .errors import ParseError
from .lexer import Token, tokenize

_COMPARE = ("=", "<>", "<", "<=", ">", ">=")


class Parser:
    """
    Recursive-descent parser for the mini-ML surface language.

    Binders are alpha-renamed on the fly so every binder in the result is
    unique; ``let`` forms are desugared into applications of lambdas.
    """

    def __init__(self, source: str):
        self.tokens: List[Token] = tokenize(source)
        self.pos = 0
        self.locs = LocFactory()
        self.identifiers = {t.text for t in self.tokens if t.kind == "ident"}
        self.used: set = set()
        self.env: Dict[str, str] = {}
        self.rec_siblings: frozenset = frozenset()

    # -- token helpers -------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def _accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            return self._advance()
        return None

    def _expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self._accept(kind, text)
        if t is None:
            want = text if text is not None else kind
            got = self.tok.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", self.tok.line, self.tok.column)
        return t

    def _loc(self, t: Token) -> Loc:
        return self.locs.fresh(t.line, t.column)

    # -- binders -------------------------------------------------------
    def _bind(self, name: str) -> str:
        cand = name
        while cand in self.used or (cand != name and cand in self.identifiers):
            cand += "'"
        self.used.add(cand)
        return cand

    def _resolve(self, t: Token) -> str:
        if t.text in self.rec_siblings:
            raise ParseError(f"mutually recursive definitions are not supported ({t.text})", t.line, t.column)
        if t.text not in self.env:
            raise ParseError(f"unbound variable {t.text}", t.line, t.column)
        return self.env[t.text]

    def _with_bindings(self, pairs: List[Tuple[str, str]], parse):
        saved = self.env
        self.env = dict(saved)
        self.env.update(pairs)
        try:
            return parse()
        finally:
            self.env = saved

    # -- grammar -------------------------------------------------------
    def parse_program(self) -> Expr:
        e = self.parse_expr()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.line, self.tok.column)
        return e

    def parse_expr(self) -> Expr:
        t = self.tok
        if t.is_("kw", "let"):
            return self._parse_let()
        if t.is_("kw", "fun"):
            self._advance()
            params = [self._expect("ident")]
            while self.tok.kind == "ident":
                params.append(self._advance())
            self._expect("sym", "->")
            internal = [(p.text, self._bind(p.text)) for p in params]
            body = self._with_bindings(internal, self.parse_expr)
            return self._curry(t, [name for _, name in internal], body)
        if t.is_("kw", "if"):
            self._advance()
            cond = self.parse_expr()
            self._expect("kw", "then")
            then = self.parse_expr()
            self._expect("kw", "else")
            orelse = self.parse_expr()
            return Ite(cond, then, orelse, self._loc(t))
        if t.is_("kw", "assert"):
            self._advance()
            return Assert(self._parse_atom(first=True), self._loc(t))
        return self._parse_or()

    def _curry(self, t: Token, params: List[str], body: Expr) -> Expr:
        for p in reversed(params):
            body = Lambda(p, body, self._loc(t))
        return body

    def _parse_let(self) -> Expr:
        let_tok = self._expect("kw", "let")
        is_rec = self._accept("kw", "rec") is not None
        group: List[Tuple[str, str, Expr]] = []
        seen: List[str] = []
        while True:
            name_tok = self._expect("ident")
            if name_tok.text in seen:
                raise ParseError(f"duplicate binding {name_tok.text}", name_tok.line, name_tok.column)
            params = []
            while self.tok.kind == "ident":
                params.append(self._advance())
            self._expect("sym", "=")
            outer = self._bind(name_tok.text)
            if is_rec:
                if not params:
                    raise ParseError("let rec requires a function binding", name_tok.line, name_tok.column)
                inner = self._bind(name_tok.text)
                internal = [(p.text, self._bind(p.text)) for p in params]
                saved_siblings = self.rec_siblings
                self.rec_siblings = frozenset(seen)
                try:
                    body = self._with_bindings([(name_tok.text, inner)] + internal, self.parse_expr)
                finally:
                    self.rec_siblings = saved_siblings
                rest = self._curry(name_tok, [n for _, n in internal[1:]], body)
                value: Expr = Rec(inner, internal[0][1], rest, self._loc(name_tok))
            else:
                internal = [(p.text, self._bind(p.text)) for p in params]
                body = self._with_bindings(internal, self.parse_expr)
                value = self._curry(name_tok, [n for _, n in internal], body)
            group.append((name_tok.text, outer, value))
            seen.append(name_tok.text)
            if not self._accept("kw", "and"):
                break
        self._expect("kw", "in")
        body = self._with_bindings([(src, outer) for src, outer, _ in group], self.parse_expr)
        for _, outer, value in reversed(group):
            body = App(Lambda(outer, body, self._loc(let_tok)), value, self._loc(let_tok))
        return body

    def _parse_or(self) -> Expr:
        left = self._parse_and()
        while self.tok.is_("sym", "||"):
            op = self._advance()
            left = BinOp("||", left, self._parse_and(), self._loc(op))
        return left

    def _parse_and(self) -> Expr:
        left = self._parse_cmp()
        while self.tok.is_("sym", "&&"):
            op = self._advance()
            left = BinOp("&&", left, self._parse_cmp(), self._loc(op))
        return left

    def _parse_cmp(self) -> Expr:
        left = self._parse_add()
        if self.tok.kind == "sym" and self.tok.text in _COMPARE:
            op = self._advance()
            left = BinOp(op.text, left, self._parse_add(), self._loc(op))
        return left

    def _parse_add(self) -> Expr:
        left = self._parse_mul()
        while self.tok.kind == "sym" and self.tok.text in ("+", "-"):
            op = self._advance()
            left = BinOp(op.text, left, self._parse_mul(), self._loc(op))
        return left

    def _parse_mul(self) -> Expr:
        left = self._parse_app()
        while self.tok.is_("sym", "*"):
            op = self._advance()
            left = BinOp("*", left, self._parse_app(), self._loc(op))
        return left

    def _starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("int", "ident"):
            return True
        if t.kind == "kw" and t.text in ("true", "false", "read_int"):
            return True
        return t.is_("sym", "(")

    def _parse_app(self) -> Expr:
        start = self.tok
        fn = self._parse_atom(first=True)
        while self._starts_atom():
            arg = self._parse_atom(first=False)
            fn = App(fn, arg, self._loc(start))
        return fn

    def _parse_atom(self, first: bool) -> Expr:
        t = self.tok
        if first and t.is_("sym", "-") and self.tokens[self.pos + 1].kind == "int":
            self._advance()
            num = self._advance()
            node: Expr = Const(-int(num.text), self._loc(t))
        elif t.kind == "int":
            self._advance()
            node = Const(int(t.text), self._loc(t))
        elif t.is_("kw", "true") or t.is_("kw", "false"):
            self._advance()
            node = Const(t.text == "true", self._loc(t))
        elif t.is_("kw", "read_int"):
            self._advance()
            self._expect("sym", "(")
            self._expect("sym", ")")
            node = Input(self._loc(t))
        elif t.kind == "ident":
            self._advance()
            node = Var(self._resolve(t), self._loc(t))
        elif t.is_("sym", "("):
            self._advance()
            if self._accept("sym", ")"):
                node = Const(None, self._loc(t))
            else:
                node = self.parse_expr()
                self._expect("sym", ")")
        else:
            got = t.text or "end of input"
            raise ParseError(f"unexpected {got!r}", t.line, t.column)
        return self._maybe_label(node)

    def _maybe_label(self, node: Expr) -> Expr:
        # `e@name` attaches a display label to the node's location (used by fixtures)
        if self.tok.is_("sym", "@"):
            self._advance()
            label = self._expect("ident").text
            node = dataclasses.replace(node, loc=dataclasses.replace(node.loc, label=label))
        return node


def parse_program(source: str) -> Expr:
    """Parse, alpha-rename and desugar a mini-ML program into the core AST."""
    return Parser(source).parse_program()
