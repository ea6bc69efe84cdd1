from __future__ import annotations

from fractions import Fraction
from typing import List, Union

from minikind.errors import ProtocolError
from minikind.term import Sort, Value

SExpr = Union[str, List["SExpr"]]


def is_complete(text: str) -> bool:
    """True once text holds at least one balanced S-expression."""
    depth = 0
    seen_token = False
    in_string = in_quote = False
    for ch in text:
        if in_string:
            in_string = ch != '"'
            continue
        if in_quote:
            in_quote = ch != "|"
            continue
        if ch == '"':
            in_string = seen_token = True
        elif ch == "|":
            in_quote = seen_token = True
        elif ch == "(":
            depth += 1
            seen_token = True
        elif ch == ")":
            depth -= 1
        elif not ch.isspace():
            seen_token = True
    return seen_token and depth <= 0 and not in_string and not in_quote


def tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append(ch)
            i += 1
        elif ch == '"':
            end = i + 1
            while end < len(text):
                if text[end] == '"':
                    if end + 1 < len(text) and text[end + 1] == '"':
                        end += 2
                        continue
                    break
                end += 1
            tokens.append(text[i : end + 1])
            i = end + 1
        elif ch == "|":
            end = text.find("|", i + 1)
            if end < 0:
                raise ProtocolError(f"unterminated quoted symbol in {text!r}")
            tokens.append(text[i + 1 : end])
            i = end + 1
        elif ch == ";":
            end = text.find("\n", i)
            i = len(text) if end < 0 else end
        else:
            end = i
            while end < len(text) and not text[end].isspace() and text[end] not in '()";':
                end += 1
            tokens.append(text[i:end])
            i = end
    return tokens


def parse(text: str) -> SExpr:
    tokens = tokenize(text)
    if not tokens:
        raise ProtocolError("empty solver response")
    expr, pos = _read(tokens, 0, text)
    if pos != len(tokens):
        raise ProtocolError(f"trailing data in solver response {text!r}")
    return expr


def _read(tokens: List[str], pos: int, text: str):
    if pos >= len(tokens):
        raise ProtocolError(f"truncated solver response {text!r}")
    token = tokens[pos]
    if token == ")":
        raise ProtocolError(f"unbalanced solver response {text!r}")
    if token != "(":
        return token, pos + 1
    items: List[SExpr] = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise ProtocolError(f"truncated solver response {text!r}")
        if tokens[pos] == ")":
            return items, pos + 1
        item, pos = _read(tokens, pos, text)
        items.append(item)


def _number(expr: SExpr) -> Fraction:
    if isinstance(expr, str):
        try:
            return Fraction(expr)
        except ValueError:
            raise ProtocolError(f"not a numeral: {expr!r}")
    if len(expr) == 2 and expr[0] == "-":
        return -_number(expr[1])
    if len(expr) == 3 and expr[0] == "/":
        return _number(expr[1]) / _number(expr[2])
    if len(expr) == 2 and expr[0] == "to_real":
        return _number(expr[1])
    raise ProtocolError(f"unsupported value term {expr!r}")


def parse_value(expr: SExpr, sort: Sort) -> Value:
    if sort is Sort.BOOL:
        if expr == "true":
            return True
        if expr == "false":
            return False
        raise ProtocolError(f"not a boolean value: {expr!r}")
    number = _number(expr)
    if sort is Sort.INT:
        if number.denominator != 1:
            raise ProtocolError(f"non-integral value {expr!r} for an int symbol")
        return int(number)
    return number


def is_error(expr: SExpr) -> bool:
    return isinstance(expr, list) and len(expr) >= 1 and expr[0] == "error"


def render(expr: SExpr) -> str:
    if isinstance(expr, str):
        return expr
    return "(" + " ".join(render(e) for e in expr) + ")"
