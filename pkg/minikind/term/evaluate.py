from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from minikind.errors import MissingVar
from minikind.term.term import (
    App,
    Const,
    Op,
    Sort,
    Term,
    Value,
    Var,
    euclidean_div,
    euclidean_mod,
)

Valuation = Mapping[str, Value]


def _normalize(value: Value, sort: Sort) -> Value:
    if sort is Sort.BOOL:
        return bool(value)
    if sort is Sort.INT:
        return int(value)
    return Fraction(value)


def evaluate(term: Term, valuation: Valuation, previous: Optional[Valuation] = None) -> Value:
    """Exact evaluation with SMT-LIB2 semantics.

    Current-step variables are read from `valuation`, prev references from
    `previous`. `ite`, `and`, `or` and `=>` evaluate lazily, so a prev read
    guarded by the init flag is never looked up at step 0.
    """
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Var):
        source = previous if term.prev else valuation
        if source is None or term.name not in source:
            raise MissingVar(f"prev({term.name})" if term.prev else term.name)
        return _normalize(source[term.name], term.sort)
    assert isinstance(term, App)
    op, args = term.op, term.args

    def ev(t: Term) -> Value:
        return evaluate(t, valuation, previous)

    if op is Op.ITE:
        return ev(args[1]) if ev(args[0]) else ev(args[2])
    if op is Op.AND:
        return all(ev(a) for a in args)
    if op is Op.OR:
        return any(ev(a) for a in args)
    if op is Op.IMPLIES:
        return (not ev(args[0])) or bool(ev(args[1]))
    if op is Op.NOT:
        return not ev(args[0])
    if op is Op.XOR:
        return bool(ev(args[0])) != bool(ev(args[1]))

    values = [ev(a) for a in args]
    if op is Op.EQ:
        return values[0] == values[1]
    if op is Op.LT:
        return values[0] < values[1]  # type: ignore[operator]
    if op is Op.LE:
        return values[0] <= values[1]  # type: ignore[operator]
    if op is Op.GT:
        return values[0] > values[1]  # type: ignore[operator]
    if op is Op.GE:
        return values[0] >= values[1]  # type: ignore[operator]
    if op is Op.ADD:
        return _normalize(sum(values), term.sort)  # type: ignore[arg-type]
    if op is Op.SUB:
        return _normalize(values[0] - values[1], term.sort)  # type: ignore[operator]
    if op is Op.NEG:
        return _normalize(-values[0], term.sort)  # type: ignore[operator]
    if op is Op.MUL:
        return _normalize(values[0] * values[1], term.sort)  # type: ignore[operator]
    if op is Op.DIV:
        return euclidean_div(int(values[0]), int(values[1]))
    if op is Op.MOD:
        return euclidean_mod(int(values[0]), int(values[1]))
    if op is Op.RDIV:
        return Fraction(values[0]) / Fraction(values[1])  # type: ignore[arg-type]
    raise ValueError(f"unknown operator {op}")
