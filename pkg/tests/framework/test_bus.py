import asyncio

import pytest

from minikind.framework.bus import MessageBus
from minikind.models.message import BaseStepMessage, InvariantsMessage, MessageType
from minikind.term import Sort, mk_ge, mk_int, mk_var
from minikind.utils.worker import QueueConsumer

x_nonneg = mk_ge(mk_var("x", Sort.INT), mk_int(0))
x_small = mk_ge(mk_int(5), mk_var("x", Sort.INT))


def drain(consumer: QueueConsumer):
    items = []
    while not consumer.input_queue.empty():
        items.append(consumer.input_queue.get_nowait())
    return items


@pytest.mark.asyncio
async def test_invariants_are_delivered_once():
    bus = MessageBus()
    consumer = QueueConsumer()
    bus.subscribe(consumer)

    bus.publish(InvariantsMessage(engine="invgen", invariants=[x_nonneg]))
    bus.publish(InvariantsMessage(engine="pdr:ok", invariants=[x_nonneg, x_small]))
    bus.publish(InvariantsMessage(engine="ivc", invariants=[x_small]))

    messages = drain(consumer)
    assert [m.invariants for m in messages] == [[x_nonneg], [x_small]]
    assert [m.engine for m in messages] == ["invgen", "pdr:ok"]
    assert bus.invariants == [x_nonneg, x_small]


@pytest.mark.asyncio
async def test_subscriptions_filter_by_type():
    bus = MessageBus()
    everything, steps_only = QueueConsumer(), QueueConsumer()
    bus.subscribe(everything)
    bus.subscribe(steps_only, [MessageType.BASE_STEP])

    bus.publish(InvariantsMessage(engine="invgen", invariants=[x_nonneg]))
    for k in range(3):
        bus.publish(BaseStepMessage(engine="bmc", k=k))

    assert len(drain(everything)) == 4
    assert [m.k for m in drain(steps_only)] == [0, 1, 2]
    assert bus.published == 4


@pytest.mark.asyncio
async def test_finished_workers_are_skipped():
    class Finished(QueueConsumer):
        @property
        def alive(self) -> bool:
            return False

    bus = MessageBus()
    finished = Finished(asyncio.Queue())
    bus.subscribe(finished)
    bus.publish(BaseStepMessage(engine="bmc", k=0))
    assert finished.input_queue.empty()
