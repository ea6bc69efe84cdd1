from enum import Enum
from typing import List, Optional

from minikind.term import Term

from .model import TypedModel
from .result import Trace, Verdict


class MessageType(str, Enum):
    BASE = "message_base"
    INVARIANTS = "message_invariants"
    BASE_STEP = "message_base_step"
    VALID = "message_valid"
    FALSIFIED = "message_falsified"
    INDUCTIVE_ONLY = "message_inductive_only"
    DONE = "message_done"
    RESOLVED = "message_resolved"
    ADVICE_CHECKED = "message_advice_checked"


class Message(TypedModel, type=MessageType.BASE.value):  # type: ignore
    engine: str


class InvariantsMessage(Message, type=MessageType.INVARIANTS.value):  # type: ignore
    invariants: List[Term]


class BaseStepMessage(Message, type=MessageType.BASE_STEP.value):  # type: ignore
    k: int


class ValidMessage(Message, type=MessageType.VALID.value):  # type: ignore
    property_name: str
    k: int
    invariants: List[Term] = []


class FalsifiedMessage(Message, type=MessageType.FALSIFIED.value):  # type: ignore
    property_name: str
    trace: Trace


class InductiveOnlyMessage(Message, type=MessageType.INDUCTIVE_ONLY.value):  # type: ignore
    property_name: str
    k: int
    invariants: List[Term] = []


class DoneMessage(Message, type=MessageType.DONE.value):  # type: ignore
    diagnostic: Optional[str] = None


class ResolvedMessage(Message, type=MessageType.RESOLVED.value):  # type: ignore
    """Published by the director once a verdict is accepted."""

    property_name: str
    verdict: Verdict


class AdviceCheckedMessage(Message, type=MessageType.ADVICE_CHECKED.value):  # type: ignore
    """Every advice candidate has been proved or discarded."""

    proved: int
