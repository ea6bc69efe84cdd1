from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Set, Union

from minikind.errors import CycleError, LinearityError, LustreTypeError, NodeRecursionError
from minikind.frontend.ast import (
    ARITHMETIC_OPS,
    COMPARISON_OPS,
    EQUALITY_OPS,
    LOGICAL_OPS,
    Arrow,
    Assertion,
    Binary,
    BoolLit,
    Call,
    Equation,
    Expr,
    IfThenElse,
    IntLit,
    NodeDecl,
    Pre,
    Program,
    PropertyPragma,
    RealLit,
    TypedProgram,
    Unary,
    VarRef,
    walk,
)
from minikind.term.term import Sort, euclidean_div, euclidean_mod

Number = Union[int, Fraction]
SortEnv = Mapping[str, Sort]


def constant_value(expr: Expr) -> Optional[Number]:
    """Fold literal-only arithmetic; None when the expression is not constant."""
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, RealLit):
        return expr.value
    if isinstance(expr, Unary) and expr.op == "-":
        inner = constant_value(expr.operand)
        return None if inner is None else -inner
    if isinstance(expr, Binary) and expr.op in ARITHMETIC_OPS:
        left, right = constant_value(expr.left), constant_value(expr.right)
        if left is None or right is None:
            return None
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        if right == 0:
            return None
        if expr.op == "div":
            return euclidean_div(int(left), int(right))
        if expr.op == "mod":
            return euclidean_mod(int(left), int(right))
        return Fraction(left) / Fraction(right)
    return None


class _ExprChecker:
    """Annotates one expression tree with sorts against a variable environment."""

    def __init__(self, env: SortEnv, nodes: Mapping[str, NodeDecl], allow_calls: bool = True):
        self.env = env
        self.nodes = nodes
        self.allow_calls = allow_calls

    def check(self, expr: Expr) -> Expr:
        if isinstance(expr, IntLit):
            return replace(expr, sort=Sort.INT)
        if isinstance(expr, RealLit):
            return replace(expr, sort=Sort.REAL)
        if isinstance(expr, BoolLit):
            return replace(expr, sort=Sort.BOOL)
        if isinstance(expr, VarRef):
            if expr.name not in self.env:
                raise LustreTypeError(expr.span, f"undeclared identifier '{expr.name}'")
            return replace(expr, sort=self.env[expr.name])
        if isinstance(expr, Unary):
            operand = self.check(expr.operand)
            if expr.op == "not":
                self._require(operand, Sort.BOOL, "not")
                return replace(expr, operand=operand, sort=Sort.BOOL)
            self._require_numeric(operand, "unary -")
            return replace(expr, operand=operand, sort=operand.sort)
        if isinstance(expr, Binary):
            return self._check_binary(expr)
        if isinstance(expr, IfThenElse):
            cond = self.check(expr.cond)
            self._require(cond, Sort.BOOL, "if condition")
            then, orelse = self.check(expr.then), self.check(expr.orelse)
            self._same_sort(expr, then, orelse, "if branches")
            return replace(expr, cond=cond, then=then, orelse=orelse, sort=then.sort)
        if isinstance(expr, Arrow):
            first, rest = self.check(expr.first), self.check(expr.rest)
            self._same_sort(expr, first, rest, "->")
            return replace(expr, first=first, rest=rest, sort=first.sort)
        if isinstance(expr, Pre):
            operand = self.check(expr.operand)
            return replace(expr, operand=operand, sort=operand.sort)
        if isinstance(expr, Call):
            return self._check_call(expr)
        raise LustreTypeError(getattr(expr, "span", None), f"unknown expression {expr!r}")

    def _check_binary(self, expr: Binary) -> Expr:
        left, right = self.check(expr.left), self.check(expr.right)
        op = expr.op
        if op in LOGICAL_OPS:
            self._require(left, Sort.BOOL, op)
            self._require(right, Sort.BOOL, op)
            return replace(expr, left=left, right=right, sort=Sort.BOOL)
        if op in EQUALITY_OPS:
            self._same_sort(expr, left, right, op)
            return replace(expr, left=left, right=right, sort=Sort.BOOL)
        self._require_numeric(left, op)
        self._same_sort(expr, left, right, op)
        if op in COMPARISON_OPS:
            return replace(expr, left=left, right=right, sort=Sort.BOOL)
        if op in ("div", "mod"):
            self._require(left, Sort.INT, op)
            self._require_constant_divisor(expr, right)
        elif op == "/":
            self._require(left, Sort.REAL, op)
            self._require_constant_divisor(expr, right)
        elif op == "*":
            if constant_value(left) is None and constant_value(right) is None:
                raise LinearityError(expr.span, "nonlinear product: neither operand is constant")
        return replace(expr, left=left, right=right, sort=left.sort)

    def _check_call(self, expr: Call) -> Expr:
        if not self.allow_calls:
            raise LustreTypeError(expr.span, f"node call '{expr.node}' not allowed here")
        callee = self.nodes.get(expr.node)
        if callee is None:
            raise LustreTypeError(expr.span, f"unknown node '{expr.node}'")
        if len(expr.args) != len(callee.inputs):
            raise LustreTypeError(
                expr.span,
                f"node '{callee.name}' expects {len(callee.inputs)} arguments, got {len(expr.args)}",
            )
        if len(callee.outputs) != 1:
            raise LustreTypeError(
                expr.span,
                f"node '{callee.name}' has {len(callee.outputs)} outputs; "
                "only single-output nodes can be called in expressions",
            )
        args = tuple(self.check(arg) for arg in expr.args)
        for arg, param in zip(args, callee.inputs):
            if arg.sort is not param.sort:  # type: ignore[attr-defined]
                raise LustreTypeError(
                    arg.span,  # type: ignore[attr-defined]
                    f"argument for '{param.name}' of '{callee.name}' must be "
                    f"{param.sort.value}, got {arg.sort.value}",  # type: ignore[attr-defined]
                )
        return replace(expr, args=args, sort=callee.outputs[0].sort)

    @staticmethod
    def _require(expr: Expr, sort: Sort, context: str):
        actual = expr.sort  # type: ignore[attr-defined]
        if actual is not sort:
            raise LustreTypeError(
                expr.span,  # type: ignore[attr-defined]
                f"{context}: expected {sort.value}, got {actual.value}",
            )

    @staticmethod
    def _require_numeric(expr: Expr, context: str):
        actual = expr.sort  # type: ignore[attr-defined]
        if not actual.is_numeric:
            raise LustreTypeError(
                expr.span,  # type: ignore[attr-defined]
                f"{context}: expected int or real, got {actual.value}",
            )

    @staticmethod
    def _same_sort(parent: Expr, left: Expr, right: Expr, context: str):
        if left.sort is not right.sort:  # type: ignore[attr-defined]
            raise LustreTypeError(
                parent.span,  # type: ignore[attr-defined]
                f"{context}: operand sorts differ "
                f"({left.sort.value}, {right.sort.value})",  # type: ignore[attr-defined]
            )

    @staticmethod
    def _require_constant_divisor(expr: Binary, divisor: Expr):
        value = constant_value(divisor)
        if value is None:
            raise LinearityError(expr.span, f"{expr.op}: divisor must be a constant")
        if value == 0:
            raise LinearityError(expr.span, f"{expr.op}: division by zero")


def typecheck_expression(
    expr: Expr, env: SortEnv, nodes: Optional[Mapping[str, NodeDecl]] = None
) -> Expr:
    """Sort-annotate a standalone expression; node calls are rejected unless nodes are given."""
    return _ExprChecker(env, nodes or {}, allow_calls=nodes is not None).check(expr)


def typecheck(program: Program) -> TypedProgram:
    nodes: Dict[str, NodeDecl] = {}
    for node in program.nodes:
        if node.name in nodes:
            raise LustreTypeError(node.span, f"duplicate node '{node.name}'")
        nodes[node.name] = node
    if program.main not in nodes:
        raise LustreTypeError(None, f"main node '{program.main}' is not declared")

    order = _callee_first_order(program, nodes)
    typed: Dict[str, NodeDecl] = {}
    instant_inputs: Dict[str, Set[int]] = {}
    for name in order:
        node = _check_node(nodes[name], nodes)
        instant_inputs[name] = _check_cycles(node, instant_inputs)
        typed[name] = node
    return TypedProgram(nodes=tuple(typed[node.name] for node in program.nodes), main=program.main)


def _calls(node: NodeDecl) -> List[Call]:
    roots = [eq.rhs for eq in node.equations]
    roots += [a.expr for a in node.assertions] + [p.expr for p in node.properties]
    return [e for root in roots for e in walk(root) if isinstance(e, Call)]


def _callee_first_order(program: Program, nodes: Mapping[str, NodeDecl]) -> List[str]:
    order: List[str] = []
    state: Dict[str, str] = {}

    def visit(name: str, path: List[str]):
        if state.get(name) == "done":
            return
        if state.get(name) == "active":
            cycle = path[path.index(name) :] + [name]
            raise NodeRecursionError(nodes[name].span, f"recursive node calls: {' -> '.join(cycle)}")
        state[name] = "active"
        for call in _calls(nodes[name]):
            if call.node in nodes:
                visit(call.node, path + [name])
        state[name] = "done"
        order.append(name)

    for node in program.nodes:
        visit(node.name, [])
    return order


def _check_node(node: NodeDecl, nodes: Mapping[str, NodeDecl]) -> NodeDecl:
    env: Dict[str, Sort] = {}
    for decl in node.declarations():
        if decl.name in env:
            raise LustreTypeError(decl.span, f"duplicate variable '{decl.name}' in node '{node.name}'")
        env[decl.name] = decl.sort

    definable = {decl.name for decl in node.outputs + node.locals}
    defined: Set[str] = set()
    checker = _ExprChecker(env, nodes)
    equations: List[Equation] = []
    for eq in node.equations:
        if eq.lhs not in env:
            raise LustreTypeError(eq.span, f"undeclared identifier '{eq.lhs}'")
        if eq.lhs not in definable:
            raise LustreTypeError(eq.span, f"input '{eq.lhs}' cannot be defined")
        if eq.lhs in defined:
            raise LustreTypeError(eq.span, f"'{eq.lhs}' is defined more than once")
        defined.add(eq.lhs)
        rhs = checker.check(eq.rhs)
        if rhs.sort is not env[eq.lhs]:  # type: ignore[attr-defined]
            raise LustreTypeError(
                eq.span,
                f"'{eq.lhs}' is {env[eq.lhs].value} but its definition is "
                f"{rhs.sort.value}",  # type: ignore[attr-defined]
            )
        equations.append(replace(eq, rhs=rhs))
    for name in sorted(definable - defined):
        raise LustreTypeError(node.span, f"'{name}' in node '{node.name}' has no definition")

    assertions: List[Assertion] = []
    for assertion in node.assertions:
        expr = checker.check(assertion.expr)
        _ExprChecker._require(expr, Sort.BOOL, "assert")
        assertions.append(replace(assertion, expr=expr))
    properties: List[PropertyPragma] = []
    for prop in node.properties:
        expr = checker.check(prop.expr)
        _ExprChecker._require(expr, Sort.BOOL, "property")
        properties.append(replace(prop, expr=expr))
    return replace(
        node, equations=tuple(equations), assertions=tuple(assertions), properties=tuple(properties)
    )


def instant_refs(expr: Expr, instant_inputs: Mapping[str, Set[int]]) -> Set[str]:
    """Variables read at the current instant, i.e. not under a `pre`."""
    if isinstance(expr, VarRef):
        return {expr.name}
    if isinstance(expr, Pre):
        return set()
    if isinstance(expr, Call):
        used = instant_inputs.get(expr.node, set(range(len(expr.args))))
        refs: Set[str] = set()
        for index in sorted(used):
            refs |= instant_refs(expr.args[index], instant_inputs)
        return refs
    refs = set()
    for child in expr.children():
        refs |= instant_refs(child, instant_inputs)
    return refs


def _check_cycles(node: NodeDecl, instant_inputs: Mapping[str, Set[int]]) -> Set[int]:
    """Reject instantaneous dependency cycles; return the input positions outputs read instantly."""
    graph: Dict[str, List[str]] = {}
    spans = {}
    for eq in node.equations:
        graph[eq.lhs] = sorted(instant_refs(eq.rhs, instant_inputs))
        spans[eq.lhs] = eq.span

    state: Dict[str, str] = {}
    reaches: Dict[str, Set[str]] = {}

    def visit(name: str, path: List[str]) -> Set[str]:
        if state.get(name) == "done":
            return reaches[name]
        if state.get(name) == "active":
            cycle = path[path.index(name) :]
            raise CycleError(spans.get(name), cycle)
        state[name] = "active"
        found = {name}
        for dep in graph.get(name, []):
            found |= visit(dep, path + [name])
        state[name] = "done"
        reaches[name] = found
        return found

    for eq in node.equations:
        visit(eq.lhs, [])

    input_index = {decl.name: i for i, decl in enumerate(node.inputs)}
    used: Set[int] = set()
    for output in node.outputs:
        for name in reaches.get(output.name, set()):
            if name in input_index:
                used.add(input_index[name])
    return used


def sort_env(node: NodeDecl) -> Dict[str, Sort]:
    return {decl.name: decl.sort for decl in node.declarations()}
