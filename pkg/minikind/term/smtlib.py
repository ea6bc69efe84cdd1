from __future__ import annotations

import re
from fractions import Fraction
from typing import List

from minikind.term.term import App, Const, Op, Sort, Term, Value, Var

SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*$")

SMT_SORTS = {Sort.BOOL: "Bool", Sort.INT: "Int", Sort.REAL: "Real"}

_OP_SYMBOLS = {
    Op.NOT: "not",
    Op.AND: "and",
    Op.OR: "or",
    Op.XOR: "xor",
    Op.IMPLIES: "=>",
    Op.ITE: "ite",
    Op.EQ: "=",
    Op.LT: "<",
    Op.LE: "<=",
    Op.GT: ">",
    Op.GE: ">=",
    Op.ADD: "+",
    Op.SUB: "-",
    Op.MUL: "*",
    Op.NEG: "-",
    Op.DIV: "div",
    Op.MOD: "mod",
    Op.RDIV: "/",
}


def quote_symbol(name: str) -> str:
    if SIMPLE_SYMBOL.match(name):
        return name
    return f"|{name}|"


def value_to_smtlib(value: Value, sort: Sort) -> str:
    if sort is Sort.BOOL:
        return "true" if value else "false"
    if sort is Sort.INT:
        n = int(value)
        return str(n) if n >= 0 else f"(- {-n})"
    q = Fraction(value)
    magnitude = abs(q)
    if magnitude.denominator == 1:
        text = f"{magnitude.numerator}.0"
    else:
        text = f"(/ {magnitude.numerator} {magnitude.denominator})"
    return text if q >= 0 else f"(- {text})"


def to_smtlib(term: Term) -> str:
    """Deterministic S-expression for an already step-instantiated term."""
    out: List[str] = []
    _emit(term, out)
    return "".join(out)


def _emit(term: Term, out: List[str]):
    if isinstance(term, Const):
        out.append(value_to_smtlib(term.value, term.sort))
    elif isinstance(term, Var):
        if term.prev:
            raise ValueError(f"uninstantiated prev reference {term}")
        out.append(quote_symbol(term.name))
    elif isinstance(term, App):
        out.append("(")
        out.append(_OP_SYMBOLS[term.op])
        for arg in term.args:
            out.append(" ")
            _emit(arg, out)
        out.append(")")
    else:
        raise TypeError(f"not a term: {term!r}")


def declare_fun(name: str, sort: Sort) -> str:
    return f"(declare-fun {quote_symbol(name)} () {SMT_SORTS[sort]})"
