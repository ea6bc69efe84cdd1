from fractions import Fraction

import pytest

from minikind.errors import LexError
from minikind.frontend import TokenKind, lex


def kinds(source: str):
    return [token.kind for token in lex(source)]


def test_comments_are_dropped():
    assert kinds("-- comment\ntrue") == [TokenKind.BOOL]
    assert kinds("(* block\n comment *) false") == [TokenKind.BOOL]


def test_pragmas_are_tokens():
    assert kinds("--%PROPERTY ok;") == [TokenKind.PRAGMA_PROPERTY, TokenKind.IDENT, TokenKind.SEMI]
    assert kinds("--%MAIN;") == [TokenKind.PRAGMA_MAIN, TokenKind.SEMI]
    assert kinds("--%OTHER note") == []


def test_longest_symbol_wins():
    assert kinds("-> => <= >= <> - =") == [
        TokenKind.ARROW,
        TokenKind.IMPLIES,
        TokenKind.LE,
        TokenKind.GE,
        TokenKind.NEQ,
        TokenKind.MINUS,
        TokenKind.EQ,
    ]


def test_literal_values():
    tokens = lex("42 2.5 1.0e2 true")
    assert [t.value for t in tokens] == [42, Fraction(5, 2), Fraction(100), True]
    assert tokens[1].kind is TokenKind.REAL


def test_keywords_and_dotted_identifiers():
    tokens = lex("node pre main.inc1.y")
    assert [t.kind for t in tokens] == [TokenKind.NODE, TokenKind.PRE, TokenKind.IDENT]
    assert tokens[2].text == "main.inc1.y"


def test_spans_are_one_based():
    token = lex("let\n  x", file="m.lus")[1]
    assert (token.span.file, token.span.start_line, token.span.start_col) == ("m.lus", 2, 3)
    assert str(token.span) == "m.lus:2:3"


@pytest.mark.parametrize("source", ["x # y", "12abc", "(* open"])
def test_lex_errors(source):
    with pytest.raises(LexError):
        lex(source)
