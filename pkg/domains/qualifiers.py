"""
Qualifier and threshold files.

One linear (in)equality per line, e.g. ``nu <= 2``, ``nu = *`` or
``x - nu >= 1``.  ``nu``/``ν`` is the value symbol and a bare ``*``/``⋆`` is
the wildcard filled with every int-kinded scope variable.  ``#`` starts a
comment.  Strict comparisons are tightened over the integers.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from lang.ast import Const, Expr, subexpressions
from lang.errors import AnalysisError

from .linear import NU, LinCons
from .predicates import STAR, Atom


class QualifierError(AnalysisError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_TOKEN = re.compile(r"\s*(?:(\d+)|(<=|>=|<>|!=|[<>=≤≥≠+\-*⋆])|([A-Za-z_ν][A-Za-z0-9_']*))")

_RELS = {
    "<=": "le", "≤": "le", "<": "lt",
    ">=": "ge", "≥": "ge", ">": "gt",
    "=": "eq", "<>": "ne", "!=": "ne", "≠": "ne",
}


def _tokens(text: str, line: int) -> List[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise QualifierError(f"unexpected character {text[pos:].strip()[:1]!r}", line)
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


def _side(tokens: List[str], line: int) -> Tuple[Dict[str, int], int]:
    """Parse ``[±] term (± term)*`` where a term is ``n``, ``x``, ``n * x``, ``n x`` or the wildcard."""
    coeffs: Dict[str, int] = {}
    const = 0
    i, sign = 0, 1
    expect_term = True
    while i < len(tokens):
        tok = tokens[i]
        if tok in ("+", "-"):
            if not expect_term:
                expect_term, sign = True, 1
            if tok == "-":
                sign = -sign
            i += 1
            continue
        if not expect_term:
            raise QualifierError(f"expected an operator before {tok!r}", line)
        if tok.isdigit():
            n = int(tok)
            i += 1
            if i < len(tokens) and tokens[i] == "*" and i + 1 < len(tokens) and tokens[i + 1] not in ("+", "-"):
                i += 1
            if i < len(tokens) and tokens[i] not in ("+", "-"):
                var = _var(tokens[i], line)
                coeffs[var] = coeffs.get(var, 0) + sign * n
                i += 1
            else:
                const += sign * n
        else:
            var = _var(tok, line)
            coeffs[var] = coeffs.get(var, 0) + sign
            i += 1
        expect_term = False
    if expect_term:
        raise QualifierError("incomplete expression", line)
    return coeffs, const


def _var(tok: str, line: int) -> str:
    if tok in ("nu", NU):
        return NU
    if tok in ("*", STAR):
        return STAR
    if tok.isdigit() or tok in _RELS or tok in ("+", "-"):
        raise QualifierError(f"expected a variable, found {tok!r}", line)
    return tok


def parse_atom(text: str, line: int = 0) -> Atom:
    tokens = _tokens(text, line)
    rels = [i for i, t in enumerate(tokens) if t in _RELS]
    if len(rels) != 1:
        raise QualifierError(f"expected exactly one comparison in {text.strip()!r}", line)
    at = rels[0]
    lhs, lc = _side(tokens[:at], line)
    rhs, rc = _side(tokens[at + 1:], line)
    rel = _RELS[tokens[at]]
    # normalize to  Σ (lhs - rhs)·x  rel  rc - lc
    coeffs = dict(lhs)
    for v, a in rhs.items():
        coeffs[v] = coeffs.get(v, 0) - a
    bound = rc - lc
    if rel in ("ge", "gt"):
        coeffs = {v: -a for v, a in coeffs.items()}
        bound = -bound
        rel = "le" if rel == "ge" else "lt"
    if rel == "lt":
        rel, bound = "le", bound - 1
    atom = Atom.make(rel, coeffs, bound)
    if atom is None or not atom.coeffs:
        raise QualifierError(f"qualifier {text.strip()!r} is constant", line)
    return atom


def _lines(source: str) -> Iterable[Tuple[int, str]]:
    for no, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield no, text


def parse_qualifiers(source: str) -> List[Atom]:
    out: List[Atom] = []
    for no, text in _lines(source):
        atom = parse_atom(text, no)
        if atom not in out:
            out.append(atom)
    return out


def parse_thresholds(source: str) -> List[LinCons]:
    """Threshold constraints; equalities contribute both halves and disequalities nothing."""
    out: List[LinCons] = []
    for no, text in _lines(source):
        atom = parse_atom(text, no)
        if STAR in atom.variables:
            raise QualifierError("wildcards are not allowed in thresholds", no)
        out.extend(c for c in atom.linear() if c not in out)
    return out


def load_qualifiers(path: Union[str, Path]) -> List[Atom]:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise QualifierError(f"cannot read qualifier file {path}: {exc.strerror}") from exc
    return parse_qualifiers(source)


def load_thresholds(path: Union[str, Path]) -> List[LinCons]:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise QualifierError(f"cannot read threshold file {path}: {exc.strerror}") from exc
    return parse_thresholds(source)


def default_qualifiers(program: Expr) -> List[Atom]:
    """ν against every variable and zero, plus ν against each integer literal of the program."""
    out: List[Atom] = [
        Atom.make("le", {NU: 1, STAR: -1}, 0),
        Atom.make("le", {STAR: 1, NU: -1}, 0),
        Atom.make("eq", {NU: 1, STAR: -1}, 0),
        Atom.make("le", {NU: -1}, 0),
        Atom.make("le", {NU: 1}, 0),
    ]
    literals = sorted({
        sub.value for sub in subexpressions(program)
        if isinstance(sub, Const) and type(sub.value) is int and sub.value != 0
    })
    for c in literals:
        for atom in (Atom.make("le", {NU: 1}, c), Atom.make("le", {NU: -1}, -c)):
            if atom not in out:
                out.append(atom)
    return out
