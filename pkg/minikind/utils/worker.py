from __future__ import annotations

import asyncio
from abc import ABC, abstractmethod
from typing import Generic, List, Optional, TypeVar

from loguru import logger

from minikind.utils.create_task import asyncio_create_task

WorkerInputType = TypeVar("WorkerInputType")


class AbstractWorker(Generic[WorkerInputType], ABC):
    """Consumes typed items pushed by the bus; start() before use, terminate() when done."""

    @abstractmethod
    def start(self):
        raise NotImplementedError

    @abstractmethod
    def consume_nonblocking(self, item: WorkerInputType):
        raise NotImplementedError

    @property
    def alive(self) -> bool:
        return True

    async def terminate(self):
        pass


class QueueConsumer(AbstractWorker[WorkerInputType]):
    def __init__(
        self,
        input_queue: Optional[asyncio.Queue[WorkerInputType]] = None,
    ) -> None:
        self.input_queue: asyncio.Queue[WorkerInputType] = input_queue or asyncio.Queue()

    def consume_nonblocking(self, item: WorkerInputType):
        self.input_queue.put_nowait(item)

    def start(self):
        pass


class AsyncWorker(AbstractWorker[WorkerInputType]):
    def __init__(
        self,
    ) -> None:
        self.worker_task: Optional[asyncio.Task] = None
        self._input_queue: asyncio.Queue[WorkerInputType] = asyncio.Queue()

    @property
    def task_name(self) -> str:
        return type(self).__name__

    def start(self) -> asyncio.Task:
        self.worker_task = asyncio_create_task(self._run_loop(), name=self.task_name)
        return self.worker_task

    @property
    def alive(self) -> bool:
        return self.worker_task is None or not self.worker_task.done()

    def consume_nonblocking(self, item: WorkerInputType):
        self._input_queue.put_nowait(item)

    def drain_nonblocking(self) -> List[WorkerInputType]:
        """Everything queued so far, without waiting."""
        items: List[WorkerInputType] = []
        while True:
            try:
                items.append(self._input_queue.get_nowait())
            except asyncio.QueueEmpty:
                return items

    async def _run_loop(self):
        raise NotImplementedError

    async def terminate(self):
        if self.worker_task:
            return self.worker_task.cancel()

        return False

    async def wait_terminated(self):
        """Cancel the task and wait for its cleanup to finish."""
        if self.worker_task is None:
            return
        self.worker_task.cancel()
        try:
            await self.worker_task
        except asyncio.CancelledError:
            pass
        except Exception:
            logger.exception("worker failed while terminating")

