from __future__ import annotations

from fractions import Fraction
from typing import List

from minikind.frontend.ast import (
    Arrow,
    Binary,
    BoolLit,
    Call,
    Expr,
    IfThenElse,
    IntLit,
    NodeDecl,
    Pre,
    Program,
    RealLit,
    Unary,
    VarDecl,
    VarRef,
)
from minikind.term.term import App, Const, Op, Sort, Term, Var

# binding strength, loosest first
ARROW_LEVEL = 0
IMPLIES_LEVEL = 1
OR_LEVEL = 2
AND_LEVEL = 3
NOT_LEVEL = 4
COMPARISON_LEVEL = 5
ADDITIVE_LEVEL = 6
MULTIPLICATIVE_LEVEL = 7
UNARY_LEVEL = 8
ATOM_LEVEL = 9

BINARY_LEVELS = {
    "=>": IMPLIES_LEVEL,
    "or": OR_LEVEL,
    "xor": OR_LEVEL,
    "and": AND_LEVEL,
    "=": COMPARISON_LEVEL,
    "<>": COMPARISON_LEVEL,
    "<": COMPARISON_LEVEL,
    "<=": COMPARISON_LEVEL,
    ">": COMPARISON_LEVEL,
    ">=": COMPARISON_LEVEL,
    "+": ADDITIVE_LEVEL,
    "-": ADDITIVE_LEVEL,
    "*": MULTIPLICATIVE_LEVEL,
    "/": MULTIPLICATIVE_LEVEL,
    "div": MULTIPLICATIVE_LEVEL,
    "mod": MULTIPLICATIVE_LEVEL,
}


def format_real(value: Fraction) -> str:
    """Exact decimal text when one exists, else a parenthesized quotient."""
    value = Fraction(value)
    if value < 0:
        return f"(-{format_real(-value)})"
    denominator = value.denominator
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"({value.numerator}.0 / {value.denominator}.0)"
    scale = max(twos, fives)
    if scale == 0:
        return f"{value.numerator}.0"
    digits = value.numerator * 10**scale // value.denominator
    whole, frac = divmod(digits, 10**scale)
    return f"{whole}.{str(frac).rjust(scale, '0')}"


def _level(expr: Expr) -> int:
    if isinstance(expr, (IfThenElse, Arrow)):
        return ARROW_LEVEL
    if isinstance(expr, Binary):
        return BINARY_LEVELS[expr.op]
    if isinstance(expr, Unary):
        return NOT_LEVEL if expr.op == "not" else UNARY_LEVEL
    if isinstance(expr, Pre):
        return UNARY_LEVEL
    return ATOM_LEVEL


def print_expr(expr: Expr, minimum: int = ARROW_LEVEL) -> str:
    text = _print(expr)
    return f"({text})" if _level(expr) < minimum else text


def _print(expr: Expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value) if expr.value >= 0 else f"(-{-expr.value})"
    if isinstance(expr, RealLit):
        return format_real(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, Unary):
        if expr.op == "not":
            return f"not {print_expr(expr.operand, NOT_LEVEL)}"
        operand = print_expr(expr.operand, UNARY_LEVEL)
        return f"-({operand})" if operand.startswith("-") else f"-{operand}"
    if isinstance(expr, Pre):
        return f"pre {print_expr(expr.operand, UNARY_LEVEL)}"
    if isinstance(expr, Binary):
        level = BINARY_LEVELS[expr.op]
        if expr.op == "=>":
            left, right = level + 1, level
        elif level == COMPARISON_LEVEL:
            left, right = level + 1, level + 1
        else:
            left, right = level, level + 1
        return f"{print_expr(expr.left, left)} {expr.op} {print_expr(expr.right, right)}"
    if isinstance(expr, Arrow):
        return f"{print_expr(expr.first, IMPLIES_LEVEL)} -> {print_expr(expr.rest, ARROW_LEVEL)}"
    if isinstance(expr, IfThenElse):
        return (
            f"if {print_expr(expr.cond)} then {print_expr(expr.then)} "
            f"else {print_expr(expr.orelse)}"
        )
    if isinstance(expr, Call):
        return f"{expr.node}({', '.join(print_expr(arg) for arg in expr.args)})"
    raise TypeError(f"not an expression: {expr!r}")


def _print_decls(decls: List[VarDecl]) -> str:
    return "; ".join(f"{decl.name}: {decl.sort.value}" for decl in decls)


def print_node(node: NodeDecl) -> str:
    lines = [
        f"node {node.name}({_print_decls(list(node.inputs))}) "
        f"returns ({_print_decls(list(node.outputs))});"
    ]
    if node.locals:
        lines.append("var")
        lines.extend(f"  {decl.name}: {decl.sort.value};" for decl in node.locals)
    lines.append("let")
    lines.extend(f"  {eq.lhs} = {print_expr(eq.rhs)};" for eq in node.equations)
    lines.extend(f"  assert {print_expr(a.expr)};" for a in node.assertions)
    lines.extend(f"  --%PROPERTY {print_expr(p.expr)};" for p in node.properties)
    if node.is_main:
        lines.append("  --%MAIN;")
    lines.append("tel;")
    return "\n".join(lines)


def print_program(program: Program) -> str:
    return "\n\n".join(print_node(node) for node in program.nodes) + "\n"


_TERM_BINARY = {
    Op.AND: "and",
    Op.OR: "or",
    Op.XOR: "xor",
    Op.IMPLIES: "=>",
    Op.EQ: "=",
    Op.LT: "<",
    Op.LE: "<=",
    Op.GT: ">",
    Op.GE: ">=",
    Op.ADD: "+",
    Op.SUB: "-",
    Op.MUL: "*",
    Op.DIV: "div",
    Op.MOD: "mod",
    Op.RDIV: "/",
}


def term_to_expr(term: Term) -> Expr:
    """Lower a current-step term over flat names back to concrete syntax."""
    if isinstance(term, Const):
        if term.sort is Sort.BOOL:
            return BoolLit(bool(term.value), sort=Sort.BOOL)
        magnitude = abs(term.value)  # type: ignore[arg-type]
        lit: Expr = (
            IntLit(int(magnitude), sort=Sort.INT)
            if term.sort is Sort.INT
            else RealLit(Fraction(magnitude), sort=Sort.REAL)
        )
        return Unary("-", lit, sort=term.sort) if term.value < 0 else lit  # type: ignore[operator]
    if isinstance(term, Var):
        ref = VarRef(term.name, sort=term.sort)
        return Pre(ref, sort=term.sort) if term.prev else ref
    assert isinstance(term, App)
    args = [term_to_expr(arg) for arg in term.args]
    if term.op is Op.NOT:
        return Unary("not", args[0], sort=Sort.BOOL)
    if term.op is Op.NEG:
        return Unary("-", args[0], sort=term.sort)
    if term.op is Op.ITE:
        return IfThenElse(args[0], args[1], args[2], sort=term.sort)
    symbol = _TERM_BINARY[term.op]
    result = args[0]
    for arg in args[1:]:
        result = Binary(symbol, result, arg, sort=term.sort)
    return result


def print_term(term: Term) -> str:
    return print_expr(term_to_expr(term))
