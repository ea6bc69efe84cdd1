from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Tuple

from minikind.frontend.ast import (
    Call,
    Expr,
    NodeDecl,
    Program,
    TypedProgram,
    VarDecl,
    VarRef,
)
from minikind.frontend.printer import print_expr
from minikind.frontend.span import SourceSpan


@dataclass(frozen=True)
class Provenance:
    span: Optional[SourceSpan]
    path: str


@dataclass(frozen=True)
class FlatEquation:
    lhs: str
    rhs: Expr
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class FlatProperty:
    name: str
    expr: Expr
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class FlatNode:
    """Main node with every call replaced by the renamed callee body."""

    name: str
    inputs: Tuple[VarDecl, ...]
    variables: Tuple[VarDecl, ...]
    equations: Tuple[FlatEquation, ...]
    assertions: Tuple[Expr, ...]
    properties: Tuple[FlatProperty, ...]
    provenance: Mapping[str, Provenance]
    unused_inputs: Tuple[str, ...] = field(default=())

    def declarations(self) -> Tuple[VarDecl, ...]:
        return self.inputs + self.variables


def rename(expr: Expr, names: Mapping[str, str]) -> Expr:
    if isinstance(expr, VarRef):
        return replace(expr, name=names.get(expr.name, expr.name))
    children = expr.children()
    if not children:
        return expr
    return _rebuild(expr, [rename(child, names) for child in children])


class _Inliner:
    def __init__(self, program: Program):
        self.nodes: Dict[str, NodeDecl] = {node.name: node for node in program.nodes}
        self.variables: List[VarDecl] = []
        self.equations: List[FlatEquation] = []
        self.assertions: List[Expr] = []
        self.provenance: Dict[str, Provenance] = {}
        # per caller path, per callee: calls seen so far
        self.counters: Dict[str, Dict[str, int]] = defaultdict(lambda: defaultdict(int))

    def inline_calls(self, expr: Expr, path: str) -> Expr:
        """Replace every call in expr by the output variable of a fresh callee copy."""
        if isinstance(expr, Call):
            args = tuple(self.inline_calls(arg, path) for arg in expr.args)
            counters = self.counters[path]
            counters[expr.node] += 1
            callee = self.nodes[expr.node]
            callee_path = f"{path}.{callee.name}{counters[expr.node]}"
            names = self.expand(callee, callee_path, f"{callee_path}.")
            for param, arg in zip(callee.inputs, args):
                self.equations.append(FlatEquation(names[param.name], arg, expr.span))
            return VarRef(names[callee.outputs[0].name], span=expr.span, sort=expr.sort)
        children = expr.children()
        if not children:
            return expr
        rewritten = [self.inline_calls(child, path) for child in children]
        if rewritten == list(children):
            return expr
        return _rebuild(expr, rewritten)

    def expand(self, node: NodeDecl, path: str, prefix: str) -> Dict[str, str]:
        """Emit the renamed body of node; return its local-to-flat name map."""
        names = {decl.name: f"{prefix}{decl.name}" for decl in node.declarations()}
        for decl in node.declarations():
            flat = names[decl.name]
            self.provenance[flat] = Provenance(decl.span, flat if prefix else f"{path}.{flat}")
        if prefix:
            self.variables.extend(replace(d, name=names[d.name]) for d in node.inputs)
        self.variables.extend(replace(d, name=names[d.name]) for d in node.outputs + node.locals)
        for eq in node.equations:
            rhs = self.inline_calls(rename(eq.rhs, names), path)
            self.equations.append(FlatEquation(names[eq.lhs], rhs, eq.span))
        for assertion in node.assertions:
            self.assertions.append(self.inline_calls(rename(assertion.expr, names), path))
        return names


def _rebuild(expr: Expr, children: List[Expr]) -> Expr:
    if isinstance(expr, Call):
        return replace(expr, args=tuple(children))
    fields = {
        "Unary": ("operand",),
        "Pre": ("operand",),
        "Binary": ("left", "right"),
        "Arrow": ("first", "rest"),
        "IfThenElse": ("cond", "then", "orelse"),
    }[type(expr).__name__]
    return replace(expr, **dict(zip(fields, children)))


def property_name(expr: Expr) -> str:
    if isinstance(expr, VarRef):
        return expr.name
    return print_expr(expr)


def inline_nodes(program: TypedProgram) -> FlatNode:
    """Flatten the main node; properties of called nodes are not checked."""
    main = program.node(program.main)
    inliner = _Inliner(program)
    names = inliner.expand(main, main.name, "")
    properties: List[FlatProperty] = []
    seen = set()
    for prop in main.properties:
        name = property_name(prop.expr)
        if name in seen:
            continue
        seen.add(name)
        expr = inliner.inline_calls(rename(prop.expr, names), main.name)
        properties.append(FlatProperty(name, expr, prop.span))
    return FlatNode(
        name=main.name,
        inputs=tuple(main.inputs),
        variables=tuple(inliner.variables),
        equations=tuple(inliner.equations),
        assertions=tuple(inliner.assertions),
        properties=tuple(properties),
        provenance=inliner.provenance,
    )
