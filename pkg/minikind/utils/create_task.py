import asyncio
from typing import Any, Coroutine, Optional, Set

# strong references until each task finishes
tasks_registry: Set[asyncio.Task] = set()


def asyncio_create_task(
    coro: Coroutine[Any, Any, Any],
    name: Optional[str] = None,
) -> asyncio.Task:
    task = asyncio.create_task(coro, name=name)
    tasks_registry.add(task)
    task.add_done_callback(tasks_registry.discard)
    return task
