from minikind.elaboration.inline import FlatNode, Provenance, inline_nodes
from minikind.elaboration.slicing import slice_node
from minikind.elaboration.transition_system import (
    INIT_FLAG,
    Equation,
    Property,
    TransitionSystem,
    expression_to_term,
    to_transition_system,
)
from minikind.frontend.ast import TypedProgram


def elaborate(program: TypedProgram) -> TransitionSystem:
    return to_transition_system(slice_node(inline_nodes(program)))
