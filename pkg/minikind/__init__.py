from contextlib import contextmanager
from contextvars import ContextVar, Token
from typing import Dict, Iterator, List, Optional

from loguru import logger

logger.disable("minikind")


class ContextWrapper:
    """A named context variable whose value is attached to every log record."""

    _instances: List["ContextWrapper"] = []

    def __init__(self, var: ContextVar) -> None:
        self.var = var
        ContextWrapper._instances.append(self)

    @property
    def name(self) -> str:
        return self.var.name

    @property
    def value(self) -> Optional[str]:
        return self.var.get()

    def set(self, value: Optional[str]) -> Token:
        return self.var.set(value)

    def reset(self, token: Token) -> None:
        self.var.reset(token)

    @contextmanager
    def scoped(self, value: Optional[str]) -> Iterator[None]:
        token = self.set(value)
        try:
            yield
        finally:
            self.reset(token)

    @classmethod
    def serialize_instances(cls) -> Dict[str, str]:
        """Current values of every wrapper that is set in this context."""
        return {
            wrapper.name: wrapper.value
            for wrapper in cls._instances
            if isinstance(wrapper.value, str)
        }


engine_name = ContextWrapper(ContextVar("engine", default=None))
property_name = ContextWrapper(ContextVar("property", default=None))
get_serialized_ctx_wrappers = ContextWrapper.serialize_instances
