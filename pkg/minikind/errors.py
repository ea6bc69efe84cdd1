from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, List, Optional, Sequence

if TYPE_CHECKING:
    from minikind.frontend.span import SourceSpan


class MiniKindError(Exception):
    pass


class ConfigError(MiniKindError):
    pass


# frontend


class FrontendError(MiniKindError):
    def __init__(self, span: Optional["SourceSpan"], message: str):
        self.span = span
        self.message = message
        super().__init__(f"{span}: {message}" if span is not None else message)


class LexError(FrontendError):
    pass


class ParseError(FrontendError):
    def __init__(self, span: Optional["SourceSpan"], expected: Iterable[str], found: str):
        self.expected: List[str] = sorted(set(expected))
        self.found = found
        super().__init__(span, f"expected one of {', '.join(self.expected)} but found {found}")


class LustreTypeError(FrontendError):
    pass


class LinearityError(FrontendError):
    pass


class CycleError(FrontendError):
    def __init__(self, span: Optional["SourceSpan"], cycle: Sequence[str]):
        self.cycle = list(cycle)
        super().__init__(span, f"dependency cycle: {' -> '.join(self.cycle)}")


class NodeRecursionError(FrontendError):
    pass


# term


class SortError(MiniKindError):
    pass


class NonlinearError(MiniKindError):
    pass


class MissingVar(MiniKindError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no value for variable {name}")


# solver


class SolverError(MiniKindError):
    pass


class SolverSpawnError(SolverError):
    pass


class HandshakeError(SolverError):
    pass


class SessionDead(SolverError):
    pass


class LabelClash(SolverError):
    pass


class ProtocolError(SolverError):
    pass


class CapabilityError(SolverError):
    pass


# advice


class AdviceFormatError(MiniKindError):
    pass


class AdviceIoError(MiniKindError):
    pass
