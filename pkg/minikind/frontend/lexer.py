from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Union

from minikind.errors import LexError
from minikind.frontend.span import SourceSpan


class TokenKind(str, Enum):
    IDENT = "IDENT"
    INT = "INT"
    REAL = "REAL"
    BOOL = "BOOL"
    NODE = "node"
    RETURNS = "returns"
    VAR = "var"
    LET = "let"
    TEL = "tel"
    IF = "if"
    THEN = "then"
    ELSE = "else"
    PRE = "pre"
    NOT = "not"
    AND = "and"
    OR = "or"
    XOR = "xor"
    DIV = "div"
    MOD = "mod"
    ASSERT = "assert"
    TYPE_INT = "int"
    TYPE_REAL = "real"
    TYPE_BOOL = "bool"
    ARROW = "->"
    IMPLIES = "=>"
    LE = "<="
    GE = ">="
    NEQ = "<>"
    EQ = "="
    LT = "<"
    GT = ">"
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    COLON = ":"
    SEMI = ";"
    PRAGMA_PROPERTY = "--%PROPERTY"
    PRAGMA_MAIN = "--%MAIN"


KEYWORDS = {
    kind.value: kind
    for kind in (
        TokenKind.NODE,
        TokenKind.RETURNS,
        TokenKind.VAR,
        TokenKind.LET,
        TokenKind.TEL,
        TokenKind.IF,
        TokenKind.THEN,
        TokenKind.ELSE,
        TokenKind.PRE,
        TokenKind.NOT,
        TokenKind.AND,
        TokenKind.OR,
        TokenKind.XOR,
        TokenKind.DIV,
        TokenKind.MOD,
        TokenKind.ASSERT,
        TokenKind.TYPE_INT,
        TokenKind.TYPE_REAL,
        TokenKind.TYPE_BOOL,
    )
}

# longest first
SYMBOLS = [
    TokenKind.ARROW,
    TokenKind.IMPLIES,
    TokenKind.LE,
    TokenKind.GE,
    TokenKind.NEQ,
    TokenKind.EQ,
    TokenKind.LT,
    TokenKind.GT,
    TokenKind.PLUS,
    TokenKind.MINUS,
    TokenKind.STAR,
    TokenKind.SLASH,
    TokenKind.LPAREN,
    TokenKind.RPAREN,
    TokenKind.COMMA,
    TokenKind.COLON,
    TokenKind.SEMI,
]

PRAGMAS = {"PROPERTY": TokenKind.PRAGMA_PROPERTY, "MAIN": TokenKind.PRAGMA_MAIN}

# identifiers may be dotted so flattened names (main.f1.x) lex as one token
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*")
NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+(?:[eE][+-]?[0-9]+)?)?")
PRAGMA_RE = re.compile(r"--%([A-Za-z]+)")

TokenValue = Union[None, bool, int, Fraction, str]


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan
    value: TokenValue = None

    def __str__(self) -> str:
        if self.kind in (TokenKind.IDENT, TokenKind.INT, TokenKind.REAL, TokenKind.BOOL):
            return f"{self.kind.value} {self.text}"
        return self.kind.name


class _Cursor:
    def __init__(self, source: str, file: str):
        self.source = source
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def at_end(self) -> bool:
        return self.pos >= len(self.source)

    def peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.source[index] if index < len(self.source) else ""

    def startswith(self, text: str) -> bool:
        return self.source.startswith(text, self.pos)

    def advance(self, count: int = 1):
        for _ in range(count):
            if self.source[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def span_from(self, line: int, col: int) -> SourceSpan:
        return SourceSpan(self.file, line, col, self.line, self.col)


def lex(source: str, file: str = "<input>") -> List[Token]:
    cursor = _Cursor(source, file)
    tokens: List[Token] = []
    while not cursor.at_end():
        ch = cursor.peek()
        line, col = cursor.line, cursor.col
        if ch.isspace():
            cursor.advance()
            continue
        if cursor.startswith("--"):
            pragma = PRAGMA_RE.match(source, cursor.pos)
            if pragma is not None and pragma.group(1) in PRAGMAS:
                cursor.advance(len(pragma.group(0)))
                kind = PRAGMAS[pragma.group(1)]
                tokens.append(Token(kind, pragma.group(0), cursor.span_from(line, col)))
                continue
            while not cursor.at_end() and cursor.peek() != "\n":
                cursor.advance()
            continue
        if cursor.startswith("(*"):
            cursor.advance(2)
            while not cursor.startswith("*)"):
                if cursor.at_end():
                    raise LexError(cursor.span_from(line, col), "unterminated block comment")
                cursor.advance()
            cursor.advance(2)
            continue
        token = _lex_word(cursor, source, line, col) or _lex_symbol(cursor, line, col)
        if token is None:
            cursor.advance()
            raise LexError(cursor.span_from(line, col), f"illegal character {ch!r}")
        tokens.append(token)
    return tokens


def _lex_word(cursor: _Cursor, source: str, line: int, col: int) -> Optional[Token]:
    ch = cursor.peek()
    if ch.isdigit():
        match = NUMBER_RE.match(source, cursor.pos)
        assert match is not None
        text = match.group(0)
        cursor.advance(len(text))
        trailing = cursor.peek()
        if trailing.isalpha() or trailing == "_" or trailing == ".":
            while not cursor.at_end() and (cursor.peek().isalnum() or cursor.peek() in "._"):
                cursor.advance()
            raise LexError(cursor.span_from(line, col), "malformed numeric literal")
        span = cursor.span_from(line, col)
        if "." in text:
            return Token(TokenKind.REAL, text, span, Fraction(text))
        return Token(TokenKind.INT, text, span, int(text))
    if ch.isalpha() or ch == "_":
        match = IDENT_RE.match(source, cursor.pos)
        assert match is not None
        text = match.group(0)
        cursor.advance(len(text))
        span = cursor.span_from(line, col)
        if text in ("true", "false"):
            return Token(TokenKind.BOOL, text, span, text == "true")
        if text in KEYWORDS:
            return Token(KEYWORDS[text], text, span)
        return Token(TokenKind.IDENT, text, span, text)
    return None


def _lex_symbol(cursor: _Cursor, line: int, col: int) -> Optional[Token]:
    for kind in SYMBOLS:
        if cursor.startswith(kind.value):
            cursor.advance(len(kind.value))
            return Token(kind, kind.value, cursor.span_from(line, col))
    return None
