from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from minikind.elaboration.inline import FlatNode, Provenance
from minikind.errors import LustreTypeError
from minikind.frontend.ast import (
    Arrow,
    Binary,
    BoolLit,
    Expr,
    IfThenElse,
    IntLit,
    Pre,
    RealLit,
    Unary,
    VarRef,
    walk,
)
from minikind.frontend.span import SourceSpan
from minikind.term import (
    Sort,
    Term,
    Var,
    free_vars,
    mk_add,
    mk_and,
    mk_bool,
    mk_div,
    mk_eq,
    mk_ge,
    mk_gt,
    mk_implies,
    mk_int,
    mk_ite,
    mk_le,
    mk_lt,
    mk_mod,
    mk_mul,
    mk_neg,
    mk_neq,
    mk_not,
    mk_or,
    mk_rdiv,
    mk_real,
    mk_sub,
    mk_var,
    mk_xor,
)

INIT_FLAG = "%init"
AUX_PREFIX = "%pre"


@dataclass(frozen=True)
class Equation:
    id: str
    lhs: str
    rhs: Term
    span: Optional[SourceSpan] = None
    # id of the source equation an auxiliary `pre` equation was split from
    origin: str = ""

    @property
    def group(self) -> str:
        return self.origin or self.id


@dataclass(frozen=True)
class Property:
    name: str
    term: Term
    span: Optional[SourceSpan] = None


@dataclass(frozen=True)
class TransitionSystem:
    vars: Tuple[Tuple[str, Sort], ...]
    inputs: Tuple[str, ...]
    equations: Tuple[Equation, ...]
    assertions: Tuple[Term, ...]
    properties: Tuple[Property, ...]
    provenance: Mapping[str, Provenance] = field(default_factory=dict)
    unused_inputs: Tuple[str, ...] = ()
    init_flag: str = INIT_FLAG

    def __post_init__(self):
        sorts = dict(self.vars)
        defined = [eq.lhs for eq in self.equations]
        if len(set(defined)) != len(defined):
            raise ValueError("variable defined by more than one equation")
        if self.init_flag in defined or any(name in defined for name in self.inputs):
            raise ValueError("inputs and the init flag cannot be defined")
        for term in self.all_terms():
            for var in free_vars(term):
                if sorts.get(var.name) is not var.sort:
                    raise ValueError(f"free symbol {var.name} is not a declared variable")
        for term in list(self.assertions) + [p.term for p in self.properties]:
            if term.sort is not Sort.BOOL:
                raise ValueError(f"assertion or property {term} is not bool")

    def all_terms(self) -> Iterable[Term]:
        yield from (eq.rhs for eq in self.equations)
        yield from self.assertions
        yield from (p.term for p in self.properties)

    @property
    def sorts(self) -> Dict[str, Sort]:
        return dict(self.vars)

    def variables(self) -> List[Var]:
        return [mk_var(name, sort) for name, sort in self.vars]

    def state_vars(self, include_generated: bool = True) -> List[Var]:
        """Every variable but the init flag; generated `%` names optionally excluded."""
        return [
            mk_var(name, sort)
            for name, sort in self.vars
            if name != self.init_flag and (include_generated or not name.startswith("%"))
        ]

    def property(self, name: str) -> Property:
        for prop in self.properties:
            if prop.name == name:
                return prop
        raise KeyError(name)

    def equation(self, lhs: str) -> Equation:
        for eq in self.equations:
            if eq.lhs == lhs:
                return eq
        raise KeyError(lhs)

    def groups(self) -> List[str]:
        """Equation groups in source order; an auxiliary joins its origin."""
        seen: Dict[str, None] = {}
        for eq in self.equations:
            seen.setdefault(eq.group, None)
        return list(seen)

    def restricted(self, groups: Iterable[str]) -> "TransitionSystem":
        """Drop equations outside groups; their variables become free inputs."""
        keep = set(groups)
        equations = tuple(eq for eq in self.equations if eq.group in keep)
        freed = tuple(eq.lhs for eq in self.equations if eq.group not in keep)
        return TransitionSystem(
            vars=self.vars,
            inputs=self.inputs + freed,
            equations=equations,
            assertions=self.assertions,
            properties=self.properties,
            provenance=self.provenance,
            unused_inputs=self.unused_inputs,
            init_flag=self.init_flag,
        )

    def with_properties(self, names: Sequence[str]) -> "TransitionSystem":
        wanted = set(names)
        return TransitionSystem(
            vars=self.vars,
            inputs=self.inputs,
            equations=self.equations,
            assertions=self.assertions,
            properties=tuple(p for p in self.properties if p.name in wanted),
            provenance=self.provenance,
            unused_inputs=self.unused_inputs,
            init_flag=self.init_flag,
        )

    def to_dict(self) -> dict:
        def span_text(span: Optional[SourceSpan]) -> Optional[str]:
            return None if span is None else str(span)

        return {
            "init_flag": self.init_flag,
            "vars": [{"name": name, "sort": sort.value} for name, sort in self.vars],
            "inputs": list(self.inputs),
            "unused_inputs": list(self.unused_inputs),
            "equations": [
                {
                    "id": eq.id,
                    "lhs": eq.lhs,
                    "rhs": str(eq.rhs),
                    "origin": eq.group,
                    "span": span_text(eq.span),
                }
                for eq in self.equations
            ],
            "assertions": [str(term) for term in self.assertions],
            "properties": [{"name": p.name, "term": str(p.term)} for p in self.properties],
            "provenance": {
                name: {"path": origin.path, "span": span_text(origin.span)}
                for name, origin in sorted(self.provenance.items())
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _Translator:
    def __init__(self, sorts: Dict[str, Sort]):
        self.sorts = sorts
        self.aux: List[Equation] = []
        self.aux_count = 0
        self.origin = ""
        self.span: Optional[SourceSpan] = None

    def translate(self, expr: Expr) -> Term:
        if isinstance(expr, IntLit):
            return mk_int(expr.value)
        if isinstance(expr, RealLit):
            return mk_real(expr.value)
        if isinstance(expr, BoolLit):
            return mk_bool(expr.value)
        if isinstance(expr, VarRef):
            return mk_var(expr.name, self.sorts[expr.name])
        if isinstance(expr, Unary):
            operand = self.translate(expr.operand)
            return mk_not(operand) if expr.op == "not" else mk_neg(operand)
        if isinstance(expr, Binary):
            return BINARY[expr.op](self.translate(expr.left), self.translate(expr.right))
        if isinstance(expr, IfThenElse):
            return mk_ite(
                self.translate(expr.cond), self.translate(expr.then), self.translate(expr.orelse)
            )
        if isinstance(expr, Arrow):
            return mk_ite(
                mk_var(INIT_FLAG, Sort.BOOL), self.translate(expr.first), self.translate(expr.rest)
            )
        if isinstance(expr, Pre):
            return self.translate_pre(expr)
        raise TypeError(f"cannot translate {expr!r}")

    def translate_pre(self, expr: Pre) -> Term:
        if isinstance(expr.operand, VarRef):
            return Var(expr.operand.name, self.sorts[expr.operand.name], prev=True)
        body = self.translate(expr.operand)
        self.aux_count += 1
        name = f"{AUX_PREFIX}{self.aux_count}"
        self.sorts[name] = body.sort
        self.aux.append(Equation(name, name, body, self.span, origin=self.origin))
        return Var(name, body.sort, prev=True)


BINARY = {
    "+": lambda a, b: mk_add(a, b),
    "-": mk_sub,
    "*": mk_mul,
    "/": mk_rdiv,
    "div": mk_div,
    "mod": mk_mod,
    "<": mk_lt,
    "<=": mk_le,
    ">": mk_gt,
    ">=": mk_ge,
    "=": mk_eq,
    "<>": mk_neq,
    "and": lambda a, b: mk_and(a, b),
    "or": lambda a, b: mk_or(a, b),
    "xor": mk_xor,
    "=>": mk_implies,
}


def to_transition_system(node: FlatNode) -> TransitionSystem:
    """Translate temporal operators over the sliced flat node.

    `e1 -> e2` becomes `ite(%init, e1, e2)`; `pre v` becomes prev(v); `pre e`
    of a compound e gets an auxiliary `%preN = e` equation.
    """
    sorts: Dict[str, Sort] = {INIT_FLAG: Sort.BOOL}
    for decl in node.declarations():
        sorts[decl.name] = decl.sort
    translator = _Translator(sorts)

    equations: List[Equation] = []
    for flat in node.equations:
        translator.origin, translator.span = flat.lhs, flat.span
        rhs = translator.translate(flat.rhs)
        equations.append(Equation(flat.lhs, flat.lhs, rhs, flat.span))

    assertions: List[Term] = []
    for expr in node.assertions:
        translator.origin, translator.span = "", None
        assertions.append(translator.translate(expr))

    properties: List[Property] = []
    for prop in node.properties:
        translator.origin, translator.span = "", prop.span
        properties.append(Property(prop.name, translator.translate(prop.expr), prop.span))

    provenance = dict(node.provenance)
    for aux in translator.aux:
        provenance[aux.lhs] = Provenance(aux.span, aux.lhs)

    variables = [(INIT_FLAG, Sort.BOOL)]
    variables += [(decl.name, decl.sort) for decl in node.inputs]
    variables += [(decl.name, decl.sort) for decl in node.variables]
    variables += [(aux.lhs, sorts[aux.lhs]) for aux in translator.aux]

    return TransitionSystem(
        vars=tuple(variables),
        inputs=tuple(decl.name for decl in node.inputs),
        equations=tuple(equations + translator.aux),
        assertions=tuple(assertions),
        properties=tuple(properties),
        provenance=provenance,
        unused_inputs=node.unused_inputs,
    )


def expression_to_term(expr: Expr, sorts: Mapping[str, Sort]) -> Term:
    """Translate a sort-annotated expression that mentions no temporal operator."""
    for node in walk(expr):
        if isinstance(node, (Arrow, Pre)):
            raise LustreTypeError(node.span, "temporal operators are not allowed here")
    return _Translator(dict(sorts)).translate(expr)
