from __future__ import annotations

from typing import Iterable, List, Optional, Set, Tuple

from loguru import logger

from minikind.models.message import InvariantsMessage, Message, MessageType
from minikind.term import Term
from minikind.utils.worker import AbstractWorker


class MessageBus:
    """Broadcasts engine messages to every subscribed worker.

    Delivery is a nonblocking put on each subscriber's queue, so messages
    from one sender arrive in publication order. Invariants are delivered
    once per distinct term.
    """

    def __init__(self):
        self.subscribers: List[Tuple[AbstractWorker[Message], Optional[Set[MessageType]]]] = []
        self.invariants: List[Term] = []
        self._seen_invariants: Set[Term] = set()
        self.published = 0

    def subscribe(
        self,
        worker: AbstractWorker[Message],
        subscriptions: Optional[Iterable[MessageType]] = None,
    ):
        """`subscriptions` of None receives every message type."""
        types = None if subscriptions is None else set(subscriptions)
        self.subscribers.append((worker, types))

    def publish(self, message: Message):
        if isinstance(message, InvariantsMessage):
            fresh = []
            for invariant in message.invariants:
                if invariant not in self._seen_invariants:
                    self._seen_invariants.add(invariant)
                    self.invariants.append(invariant)
                    fresh.append(invariant)
            if not fresh:
                return
            message = message.copy(update={"invariants": fresh})
        self.published += 1
        logger.debug(f"bus: {message.type} from {message.engine}")
        for worker, types in self.subscribers:
            if types is not None and MessageType(message.type) not in types:
                continue
            if not worker.alive:
                continue
            worker.consume_nonblocking(message)
