from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Set, Tuple, Union

from minikind.errors import NonlinearError, SortError

Value = Union[bool, int, Fraction]

STEP_SEPARATOR = "$"


class Sort(str, Enum):
    BOOL = "bool"
    INT = "int"
    REAL = "real"

    @property
    def is_numeric(self) -> bool:
        return self is not Sort.BOOL


class Op(str, Enum):
    NOT = "not"
    AND = "and"
    OR = "or"
    XOR = "xor"
    IMPLIES = "=>"
    ITE = "ite"
    EQ = "="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    ADD = "+"
    SUB = "-"
    MUL = "*"
    NEG = "neg"
    DIV = "div"
    MOD = "mod"
    RDIV = "/"


BOOLEAN_OPS = {Op.NOT, Op.AND, Op.OR, Op.XOR, Op.IMPLIES}
COMPARISON_OPS = {Op.LT, Op.LE, Op.GT, Op.GE}


class Term:
    """Immutable sorted term. Build instances with the mk_* constructors only."""

    sort: Sort


@dataclass(frozen=True)
class Const(Term):
    value: Value
    sort: Sort

    def __str__(self) -> str:
        if self.sort is Sort.BOOL:
            return "true" if self.value else "false"
        return str(self.value)


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: Sort
    prev: bool = False

    def __str__(self) -> str:
        return f"prev({self.name})" if self.prev else self.name


@dataclass(frozen=True)
class App(Term):
    op: Op
    args: Tuple[Term, ...]
    sort: Sort

    def __str__(self) -> str:
        return f"({self.op.value} {' '.join(str(a) for a in self.args)})"


TRUE = Const(True, Sort.BOOL)
FALSE = Const(False, Sort.BOOL)


def euclidean_div(n: int, d: int) -> int:
    if d > 0:
        return n // d
    return -((-n) // d)


def euclidean_mod(n: int, d: int) -> int:
    return n - d * euclidean_div(n, d)


def _require_sort(term: Term, sort: Sort, op: str):
    if term.sort is not sort:
        raise SortError(f"{op}: expected {sort.value} operand, got {term.sort.value} ({term})")


def _require_numeric(terms: Iterable[Term], op: str) -> Sort:
    terms = list(terms)
    if not terms:
        raise SortError(f"{op}: no operands")
    sort = terms[0].sort
    if not sort.is_numeric:
        raise SortError(f"{op}: expected numeric operands, got {sort.value}")
    for term in terms[1:]:
        if term.sort is not sort:
            raise SortError(f"{op}: mixed operand sorts {sort.value} and {term.sort.value}")
    return sort


def _all_const(terms: Iterable[Term]) -> bool:
    return all(isinstance(t, Const) for t in terms)


def _numeric_const(value: Value, sort: Sort) -> Const:
    if sort is Sort.INT:
        return Const(int(value), Sort.INT)
    return Const(Fraction(value), Sort.REAL)


# leaves


def mk_bool(value: bool) -> Const:
    return TRUE if value else FALSE


def mk_int(value: int) -> Const:
    return Const(int(value), Sort.INT)


def mk_real(value: Union[int, str, Fraction]) -> Const:
    return Const(Fraction(value), Sort.REAL)


def mk_const(value: Value, sort: Sort) -> Const:
    if sort is Sort.BOOL:
        return mk_bool(bool(value))
    return _numeric_const(value, sort)


def mk_var(name: str, sort: Sort) -> Var:
    return Var(name, sort)


def mk_prev(var: Var) -> Var:
    return Var(var.name, var.sort, prev=True)


# boolean connectives


def mk_not(a: Term) -> Term:
    _require_sort(a, Sort.BOOL, "not")
    if isinstance(a, Const):
        return mk_bool(not a.value)
    if isinstance(a, App) and a.op is Op.NOT:
        return a.args[0]
    return App(Op.NOT, (a,), Sort.BOOL)


def _mk_nary(op: Op, unit: Const, absorbing: Const, args: Iterable[Term]) -> Term:
    flat: List[Term] = []
    for arg in args:
        _require_sort(arg, Sort.BOOL, op.value)
        children = arg.args if isinstance(arg, App) and arg.op is op else (arg,)
        for child in children:
            if child == absorbing:
                return absorbing
            if child == unit:
                continue
            flat.append(child)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return App(op, tuple(flat), Sort.BOOL)


def mk_and(*args: Term) -> Term:
    return _mk_nary(Op.AND, TRUE, FALSE, args)


def mk_or(*args: Term) -> Term:
    return _mk_nary(Op.OR, FALSE, TRUE, args)


def mk_xor(a: Term, b: Term) -> Term:
    _require_sort(a, Sort.BOOL, "xor")
    _require_sort(b, Sort.BOOL, "xor")
    if isinstance(a, Const) and isinstance(b, Const):
        return mk_bool(a.value != b.value)
    return App(Op.XOR, (a, b), Sort.BOOL)


def mk_implies(a: Term, b: Term) -> Term:
    _require_sort(a, Sort.BOOL, "=>")
    _require_sort(b, Sort.BOOL, "=>")
    if isinstance(a, Const) and isinstance(b, Const):
        return mk_bool((not a.value) or bool(b.value))
    return App(Op.IMPLIES, (a, b), Sort.BOOL)


def mk_ite(cond: Term, then: Term, orelse: Term) -> Term:
    _require_sort(cond, Sort.BOOL, "ite")
    if then.sort is not orelse.sort:
        raise SortError(f"ite: branch sorts differ ({then.sort.value}, {orelse.sort.value})")
    if isinstance(cond, Const) and isinstance(then, Const) and isinstance(orelse, Const):
        return then if cond.value else orelse
    return App(Op.ITE, (cond, then, orelse), then.sort)


# comparisons


def mk_eq(a: Term, b: Term) -> Term:
    if a.sort is not b.sort:
        raise SortError(f"=: operand sorts differ ({a.sort.value}, {b.sort.value})")
    if isinstance(a, Const) and isinstance(b, Const):
        return mk_bool(a.value == b.value)
    return App(Op.EQ, (a, b), Sort.BOOL)


def mk_neq(a: Term, b: Term) -> Term:
    return mk_not(mk_eq(a, b))


_COMPARE: Dict[Op, Callable[[Value, Value], bool]] = {
    Op.LT: lambda x, y: x < y,
    Op.LE: lambda x, y: x <= y,
    Op.GT: lambda x, y: x > y,
    Op.GE: lambda x, y: x >= y,
}


def _mk_compare(op: Op, a: Term, b: Term) -> Term:
    _require_numeric((a, b), op.value)
    if isinstance(a, Const) and isinstance(b, Const):
        return mk_bool(_COMPARE[op](a.value, b.value))
    return App(op, (a, b), Sort.BOOL)


def mk_lt(a: Term, b: Term) -> Term:
    return _mk_compare(Op.LT, a, b)


def mk_le(a: Term, b: Term) -> Term:
    return _mk_compare(Op.LE, a, b)


def mk_gt(a: Term, b: Term) -> Term:
    return _mk_compare(Op.GT, a, b)


def mk_ge(a: Term, b: Term) -> Term:
    return _mk_compare(Op.GE, a, b)


# arithmetic


def mk_add(*args: Term) -> Term:
    sort = _require_numeric(args, "+")
    if _all_const(args):
        return _numeric_const(sum(a.value for a in args), sort)  # type: ignore[attr-defined]
    return App(Op.ADD, tuple(args), sort)


def mk_sub(a: Term, b: Term) -> Term:
    sort = _require_numeric((a, b), "-")
    if isinstance(a, Const) and isinstance(b, Const):
        return _numeric_const(a.value - b.value, sort)  # type: ignore[operator]
    return App(Op.SUB, (a, b), sort)


def mk_neg(a: Term) -> Term:
    sort = _require_numeric((a,), "-")
    if isinstance(a, Const):
        return _numeric_const(-a.value, sort)  # type: ignore[operator]
    return App(Op.NEG, (a,), sort)


def mk_mul(a: Term, b: Term) -> Term:
    sort = _require_numeric((a, b), "*")
    if not isinstance(a, Const) and not isinstance(b, Const):
        raise NonlinearError(f"nonlinear product {a} * {b}")
    if isinstance(a, Const) and isinstance(b, Const):
        return _numeric_const(a.value * b.value, sort)  # type: ignore[operator]
    return App(Op.MUL, (a, b), sort)


def _require_divisor(op: Op, b: Term):
    if not isinstance(b, Const):
        raise NonlinearError(f"{op.value}: divisor {b} is not a constant")
    if b.value == 0:
        raise NonlinearError(f"{op.value}: division by zero")


def mk_div(a: Term, b: Term) -> Term:
    _require_sort(a, Sort.INT, "div")
    _require_sort(b, Sort.INT, "div")
    _require_divisor(Op.DIV, b)
    if isinstance(a, Const):
        return mk_int(euclidean_div(a.value, b.value))  # type: ignore[arg-type, attr-defined]
    return App(Op.DIV, (a, b), Sort.INT)


def mk_mod(a: Term, b: Term) -> Term:
    _require_sort(a, Sort.INT, "mod")
    _require_sort(b, Sort.INT, "mod")
    _require_divisor(Op.MOD, b)
    if isinstance(a, Const):
        return mk_int(euclidean_mod(a.value, b.value))  # type: ignore[arg-type, attr-defined]
    return App(Op.MOD, (a, b), Sort.INT)


def mk_rdiv(a: Term, b: Term) -> Term:
    _require_sort(a, Sort.REAL, "/")
    _require_sort(b, Sort.REAL, "/")
    _require_divisor(Op.RDIV, b)
    if isinstance(a, Const):
        return mk_real(Fraction(a.value) / Fraction(b.value))  # type: ignore[arg-type, attr-defined]
    return App(Op.RDIV, (a, b), Sort.REAL)


def mk_app(op: Op, args: Tuple[Term, ...]) -> Term:
    """Rebuild a node through its smart constructor."""
    if op is Op.NOT:
        return mk_not(args[0])
    if op is Op.AND:
        return mk_and(*args)
    if op is Op.OR:
        return mk_or(*args)
    if op is Op.XOR:
        return mk_xor(*args)
    if op is Op.IMPLIES:
        return mk_implies(*args)
    if op is Op.ITE:
        return mk_ite(*args)
    if op is Op.EQ:
        return mk_eq(*args)
    if op in COMPARISON_OPS:
        return _mk_compare(op, *args)
    if op is Op.ADD:
        return mk_add(*args)
    if op is Op.SUB:
        return mk_sub(*args)
    if op is Op.NEG:
        return mk_neg(args[0])
    if op is Op.MUL:
        return mk_mul(*args)
    if op is Op.DIV:
        return mk_div(*args)
    if op is Op.MOD:
        return mk_mod(*args)
    return mk_rdiv(*args)


# traversal


def iter_subterms(term: Term):
    stack = [term]
    while stack:
        current = stack.pop()
        yield current
        if isinstance(current, App):
            stack.extend(reversed(current.args))


def free_vars(term: Term) -> Set[Var]:
    return {t for t in iter_subterms(term) if isinstance(t, Var)}


def substitute_vars(term: Term, fn: Callable[[Var], Term]) -> Term:
    """Replace every variable leaf by fn(leaf), keeping the node structure."""
    if isinstance(term, Var):
        return fn(term)
    if isinstance(term, App):
        return App(term.op, tuple(substitute_vars(a, fn) for a in term.args), term.sort)
    return term


def step_name(name: str, step: int) -> str:
    return f"{name}{STEP_SEPARATOR}{step}"


def instantiate(term: Term, step: int) -> Term:
    """Map var(v, curr) to v$step and var(v, prev) to v$(step-1)."""

    def indexed(var: Var) -> Term:
        return Var(step_name(var.name, step - 1 if var.prev else step), var.sort)

    return substitute_vars(term, indexed)
