from __future__ import annotations

from dataclasses import replace
from typing import Dict, List, Set

from loguru import logger

from minikind.elaboration.inline import FlatNode
from minikind.frontend.ast import Expr, VarRef, walk


def referenced(expr: Expr) -> Set[str]:
    """Every variable read by expr, through `pre` or not."""
    return {e.name for e in walk(expr) if isinstance(e, VarRef)}


def slice_node(node: FlatNode) -> FlatNode:
    """Keep the cone of influence of the properties and assertions.

    Equations survive iff their left-hand side is reachable by data
    dependence from a property or assertion. Inputs always stay declared;
    those outside the cone are reported in `unused_inputs`.
    """
    definitions: Dict[str, Set[str]] = {eq.lhs: referenced(eq.rhs) for eq in node.equations}
    worklist: List[str] = []
    for expr in [p.expr for p in node.properties] + list(node.assertions):
        worklist.extend(sorted(referenced(expr)))
    reached: Set[str] = set()
    while worklist:
        name = worklist.pop()
        if name in reached:
            continue
        reached.add(name)
        worklist.extend(sorted(definitions.get(name, set()) - reached))

    equations = tuple(eq for eq in node.equations if eq.lhs in reached)
    variables = tuple(decl for decl in node.variables if decl.name in reached)
    unused = tuple(decl.name for decl in node.inputs if decl.name not in reached)
    dropped = len(node.equations) - len(equations)
    if dropped:
        logger.debug(f"slicing removed {dropped} of {len(node.equations)} equations")
    if unused:
        logger.info(f"inputs outside every property's cone: {', '.join(unused)}")
    provenance = {
        name: origin
        for name, origin in node.provenance.items()
        if name in reached or any(decl.name == name for decl in node.inputs)
    }
    return replace(
        node,
        variables=variables,
        equations=equations,
        provenance=provenance,
        unused_inputs=unused,
    )
