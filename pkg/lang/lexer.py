from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, List

from .errors import ParseError

KEYWORDS = frozenset(
    {"let", "rec", "and", "in", "fun", "if", "then", "else", "assert", "true", "false", "read_int"}
)

# Longest symbols first so "<=" wins over "<".
_SYMBOLS = ("->", "<=", ">=", "<>", "!=", "&&", "||", "(", ")", "=", "<", ">", "+", "-", "*", "@")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "kw", "sym", "eof"
    text: str
    line: int
    column: int

    def is_(self, kind: str, text: str) -> bool:
        return self.kind == kind and self.text == text


def tokenize(source: str) -> List[Token]:
    return list(_scan(source))


def _scan(source: str) -> Iterator[Token]:
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(text: str) -> None:
        nonlocal i, line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += len(text)

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(ch)
            continue
        if source.startswith("(*", i):
            depth, j = 0, i
            while j < n:
                if source.startswith("(*", j):
                    depth += 1
                    j += 2
                elif source.startswith("*)", j):
                    depth -= 1
                    j += 2
                    if depth == 0:
                        break
                else:
                    j += 1
            if depth != 0:
                raise ParseError("unterminated comment", line, col)
            advance(source[i:j])
            continue
        m = _INT.match(source, i)
        if m:
            yield Token("int", m.group(), line, col)
            advance(m.group())
            continue
        m = _IDENT.match(source, i)
        if m:
            word = m.group()
            yield Token("kw" if word in KEYWORDS else "ident", word, line, col)
            advance(word)
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                yield Token("sym", "<>" if sym == "!=" else sym, line, col)
                advance(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    yield Token("eof", "", line, col)
