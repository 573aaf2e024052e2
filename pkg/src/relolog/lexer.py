"""Tokenizer shared by every text format."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import OlogError


class ParseError(OlogError):
    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        msg = f"line {line}, column {col}: expected {expected}"
        if found:
            msg += f", found {found}"
        super().__init__(msg)
        self.line = line
        self.col = col
        self.expected = expected


@dataclass(frozen=True)
class Token:
    kind: str       # NAME, STRING, SYM, EOF
    text: str
    line: int
    col: int

    def describe(self):
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "STRING":
            return f'"{self.text}"'
        return repr(self.text)


_SYMBOLS = ["|-", "->", "=>", "==", ":=", "(", ")", ",", ";", "*", "+", "{", "}",
            "[", "]", "<", ">", ":", ".", "|", "&", "=", "/", "-"]
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")
_SPACE = re.compile(r"[ \t\r]+")


def tokenize(text: str) -> list:
    tokens = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        m = _SPACE.match(text, i)
        if m:
            col += m.end() - i
            i = m.end()
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    buf.append(text[j + 1])
                    j += 2
                    continue
                if text[j] == "\n":
                    break
                buf.append(text[j])
                j += 1
            if j >= n or text[j] != '"':
                raise ParseError(line, col, "closing quote")
            tokens.append(Token("STRING", "".join(buf), line, col))
            col += j + 1 - i
            i = j + 1
            continue
        m = _NAME.match(text, i)
        if m:
            tokens.append(Token("NAME", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("SYM", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(line, col, "a token", repr(ch))
    tokens.append(Token("EOF", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("SYM", "NAME") and t.text == text

    def at_keyword(self, *words) -> bool:
        return self.tok.kind == "NAME" and self.tok.text in words

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.line, t.col, expected, t.describe())

    def name(self, what="a name") -> str:
        """A bare identifier or a quoted string."""
        t = self.tok
        if t.kind in ("NAME", "STRING"):
            self.advance()
            return t.text
        self.fail(what)

    def at_end(self) -> bool:
        return self.tok.kind == "EOF"

    def expect_end(self):
        if not self.at_end():
            self.fail("end of input")
