from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Tuple

from minikind.frontend.span import SourceSpan
from minikind.term.term import Sort

# Spans and sorts are annotations: structural equality ignores them, so a
# reparsed pretty-print compares equal to the original tree.


@dataclass(frozen=True)
class Expr:
    def children(self) -> Tuple["Expr", ...]:
        return ()


def _span() -> Optional[SourceSpan]:
    return field(default=None, compare=False, repr=False)  # type: ignore[return-value]


def _sort() -> Optional[Sort]:
    return field(default=None, compare=False)  # type: ignore[return-value]


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()


@dataclass(frozen=True)
class RealLit(Expr):
    value: Fraction
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()


@dataclass(frozen=True)
class VarRef(Expr):
    name: str
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "not" | "-"
    operand: Expr
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class IfThenElse(Expr):
    cond: Expr
    then: Expr
    orelse: Expr
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()

    def children(self):
        return (self.cond, self.then, self.orelse)


@dataclass(frozen=True)
class Arrow(Expr):
    first: Expr
    rest: Expr
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()

    def children(self):
        return (self.first, self.rest)


@dataclass(frozen=True)
class Pre(Expr):
    operand: Expr
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Call(Expr):
    node: str
    args: Tuple[Expr, ...]
    span: Optional[SourceSpan] = _span()
    sort: Optional[Sort] = _sort()

    def children(self):
        return self.args


ARITHMETIC_OPS = {"+", "-", "*", "/", "div", "mod"}
COMPARISON_OPS = {"<", "<=", ">", ">="}
EQUALITY_OPS = {"=", "<>"}
LOGICAL_OPS = {"and", "or", "xor", "=>"}


def walk(expr: Expr) -> Iterator[Expr]:
    yield expr
    for child in expr.children():
        yield from walk(child)


@dataclass(frozen=True)
class VarDecl:
    name: str
    sort: Sort
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Equation:
    lhs: str
    rhs: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Assertion:
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PropertyPragma:
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class NodeDecl:
    name: str
    inputs: Tuple[VarDecl, ...]
    outputs: Tuple[VarDecl, ...]
    locals: Tuple[VarDecl, ...]
    equations: Tuple[Equation, ...]
    assertions: Tuple[Assertion, ...] = ()
    properties: Tuple[PropertyPragma, ...] = ()
    is_main: bool = False
    span: Optional[SourceSpan] = _span()

    def declarations(self) -> Tuple[VarDecl, ...]:
        return self.inputs + self.outputs + self.locals


@dataclass(frozen=True)
class Program:
    nodes: Tuple[NodeDecl, ...]
    main: str

    def node(self, name: str) -> NodeDecl:
        for node in self.nodes:
            if node.name == name:
                return node
        raise KeyError(name)


@dataclass(frozen=True)
class TypedProgram(Program):
    """A Program whose every expression carries its sort."""
