from __future__ import annotations

import asyncio
import re
from collections import Counter
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import (
    AsyncIterator,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    TextIO,
    Tuple,
    Union,
)

from loguru import logger

from minikind.errors import (
    CapabilityError,
    HandshakeError,
    LabelClash,
    ProtocolError,
    SessionDead,
    SolverError,
    SolverSpawnError,
)
from minikind.models.solver import SolverConfig
from minikind.solver import sexpr
from minikind.term import Sort, Term, Value, Var, declare_fun, free_vars, quote_symbol, to_smtlib

HANDSHAKE_TIMEOUT_SECONDS = 10.0


@dataclass(frozen=True)
class Sat:
    model: Dict[str, Value] = field(default_factory=dict)


@dataclass(frozen=True)
class Unsat:
    core: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class Unknown:
    reason: str = "unknown"


CheckResult = Union[Sat, Unsat, Unknown]


class SolverStats:
    """check-sat calls per engine, shared by every session of a run."""

    def __init__(self):
        self.per_engine: Counter = Counter()

    def record(self, engine: str):
        self.per_engine[engine] += 1

    @property
    def total(self) -> int:
        return sum(self.per_engine.values())


@dataclass
class _Frame:
    commands: List[str] = field(default_factory=list)
    declared: Set[str] = field(default_factory=set)
    labels: Set[str] = field(default_factory=set)


def _file_safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


class SolverSession:
    """One SMT-LIB2 solver subprocess owned by a single engine task.

    Symbols are declared on first use and forgotten with the scope that
    declared them. Every command that changes solver state is recorded per
    scope so the session can be rebuilt after a timeout.
    """

    def __init__(
        self,
        config: SolverConfig,
        name: str = "solver",
        transcript_dir: Optional[Union[str, Path]] = None,
        stats: Optional[SolverStats] = None,
        engine: Optional[str] = None,
    ):
        self.config = config
        self.name = name
        # stats key; several sessions of one engine share it
        self.engine = engine or name
        self.stats = stats
        self.process: Optional[asyncio.subprocess.Process] = None
        self.check_count = 0
        self._frames: List[_Frame] = [_Frame()]
        self._sorts: Dict[str, Sort] = {}
        self._transcript: Optional[TextIO] = None
        if transcript_dir is not None:
            directory = Path(transcript_dir)
            directory.mkdir(parents=True, exist_ok=True)
            self._transcript = (directory / f"{_file_safe(name)}.smt2").open(
                "w", encoding="utf-8", newline="\n"
            )

    async def __aenter__(self) -> "SolverSession":
        await self.start()
        return self

    async def __aexit__(self, *exc):
        await self.close()

    @property
    def depth(self) -> int:
        """Number of open scopes."""
        return len(self._frames) - 1

    @property
    def alive(self) -> bool:
        return self.process is not None and self.process.returncode is None

    # lifecycle

    async def start(self):
        await self._spawn()
        await self._handshake()
        await self._configure()
        logger.debug(f"solver session {self.name} started ({self.config.name})")

    async def _spawn(self):
        try:
            self.process = await asyncio.create_subprocess_exec(
                *self.config.command,
                stdin=asyncio.subprocess.PIPE,
                stdout=asyncio.subprocess.PIPE,
                stderr=asyncio.subprocess.DEVNULL,
            )
        except OSError as e:
            raise SolverSpawnError(f"cannot start {self.config.executable}: {e}") from e

    async def _handshake(self):
        try:
            await self._write("(get-info :name)")
            response = await self._read(HANDSHAKE_TIMEOUT_SECONDS)
        except (SessionDead, ProtocolError, asyncio.TimeoutError) as e:
            await self._kill()
            raise HandshakeError(f"{self.config.executable} did not answer (get-info :name)") from e
        if not (isinstance(response, list) and len(response) == 2 and response[0] == ":name"):
            await self._kill()
            raise HandshakeError(f"malformed banner from {self.config.executable}: {response!r}")

    async def _configure(self):
        await self._write("(set-option :produce-models true)")
        if self.config.supports_unsat_cores:
            await self._write("(set-option :produce-unsat-cores true)")
        await self._write(f"(set-logic {self.config.logic})")

    async def close(self):
        if self.alive:
            try:
                await self._write("(exit)")
                await asyncio.wait_for(self.process.wait(), 2.0)  # type: ignore[union-attr]
            except (SessionDead, asyncio.TimeoutError):
                pass
        await self._kill()
        if self._transcript is not None:
            self._transcript.close()
            self._transcript = None

    async def _kill(self):
        if self.process is not None and self.process.returncode is None:
            self.process.kill()
            await self.process.wait()

    async def _recycle(self):
        """Kill, restart and replay every open scope."""
        logger.warning(f"solver session {self.name}: query timed out, restarting")
        await self._kill()
        if self._transcript is not None:
            self._transcript.write("; restarted after timeout\n")
        await self.start()
        for level, frame in enumerate(self._frames):
            if level > 0:
                await self._write("(push 1)")
            for command in frame.commands:
                await self._write(command)

    def require_unsat_cores(self):
        if not self.config.supports_unsat_cores:
            raise CapabilityError(f"solver {self.config.name} does not produce unsat cores")

    # protocol

    async def _write(self, command: str):
        if not self.alive:
            raise SessionDead(f"solver session {self.name} is not running")
        if self._transcript is not None:
            self._transcript.write(command + "\n")
        try:
            self.process.stdin.write((command + "\n").encode())  # type: ignore[union-attr]
            await self.process.stdin.drain()  # type: ignore[union-attr]
        except (BrokenPipeError, ConnectionResetError) as e:
            raise SessionDead(f"solver session {self.name} closed its input") from e

    async def _read(self, timeout: Optional[float]) -> sexpr.SExpr:
        return await asyncio.wait_for(self._read_response(), timeout)

    async def _read_response(self) -> sexpr.SExpr:
        while True:
            buffer = ""
            while not sexpr.is_complete(buffer):
                line = await self.process.stdout.readline()  # type: ignore[union-attr]
                if not line:
                    raise SessionDead(f"solver session {self.name} exited")
                buffer += line.decode()
            response = sexpr.parse(buffer)
            if sexpr.is_error(response):
                raise ProtocolError(f"solver error: {sexpr.render(response)}")
            # acknowledgements some solvers print for set-option
            if response not in ("success", "unsupported"):
                return response

    async def _record(self, command: str):
        await self._write(command)
        self._frames[-1].commands.append(command)

    # assertions

    def is_declared(self, name: str) -> bool:
        return any(name in frame.declared for frame in self._frames)

    async def declare(self, name: str, sort: Sort):
        if self.is_declared(name):
            return
        await self._record(declare_fun(name, sort))
        self._frames[-1].declared.add(name)
        self._sorts[name] = sort

    async def declare_term(self, term: Term):
        for var in sorted(free_vars(term), key=lambda v: v.name):
            if var.prev:
                raise ValueError(f"uninstantiated prev reference {var}")
            await self.declare(var.name, var.sort)

    async def assert_term(self, term: Term, label: Optional[str] = None):
        await self.declare_term(term)
        if label is None:
            await self._record(f"(assert {to_smtlib(term)})")
            return
        if any(label in frame.labels for frame in self._frames):
            raise LabelClash(f"label {label} is already in use")
        await self._record(f"(assert (! {to_smtlib(term)} :named {quote_symbol(label)}))")
        self._frames[-1].labels.add(label)

    # scopes

    async def push(self):
        await self._write("(push 1)")
        self._frames.append(_Frame())

    async def pop(self):
        if self.depth == 0:
            raise SolverError("pop without a matching push")
        await self._write("(pop 1)")
        self._frames.pop()

    @asynccontextmanager
    async def scoped(self) -> AsyncIterator["SolverSession"]:
        await self.push()
        try:
            yield self
        finally:
            if self.alive:
                await self.pop()

    # queries

    async def check(
        self,
        assumptions: Sequence[Tuple[str, Term]] = (),
        values: Iterable[Var] = (),
        core: bool = True,
    ) -> CheckResult:
        """check-sat (or check-sat-assuming) and fetch the model or core.

        `assumptions` pairs a label with a bool literal; `values` lists the
        step-indexed variables to read from a model.
        """
        literals: Dict[str, str] = {}
        texts: List[str] = []
        wanted = list(values)
        # symbols read from the model must exist before check-sat
        for var in wanted:
            await self.declare(var.name, var.sort)
        for label, literal in assumptions:
            await self.declare_term(literal)
            text = to_smtlib(literal)
            texts.append(text)
            # cores come back with |quotes| stripped
            literals[sexpr.render(sexpr.parse(text))] = label
        if texts:
            command = f"(check-sat-assuming ({' '.join(texts)}))"
        else:
            command = "(check-sat)"
        await self._write(command)
        self.check_count += 1
        if self.stats is not None:
            self.stats.record(self.engine)
        try:
            answer = await self._read(self.config.timeout_seconds)
        except asyncio.TimeoutError:
            await self._recycle()
            return Unknown("timeout")
        logger.debug(f"{self.name}: {command} -> {sexpr.render(answer)}")
        if answer == "sat":
            return Sat(await self._get_values(wanted))
        if answer == "unsat":
            if core and self.config.supports_unsat_cores:
                return Unsat(await self._get_core(literals))
            return Unsat()
        if answer == "unknown":
            return Unknown("unknown")
        raise ProtocolError(f"unexpected check-sat answer {sexpr.render(answer)}")

    async def _get_values(self, variables: List[Var]) -> Dict[str, Value]:
        if not variables:
            return {}
        names = [var.name for var in variables]
        await self._write(f"(get-value ({' '.join(quote_symbol(n) for n in names)}))")
        response = await self._read(self.config.timeout_seconds)
        if not isinstance(response, list):
            raise ProtocolError(f"malformed get-value response {response!r}")
        model: Dict[str, Value] = {}
        for pair in response:
            if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str)):
                raise ProtocolError(f"malformed get-value entry {pair!r}")
            name = pair[0]
            if name not in self._sorts:
                raise ProtocolError(f"value for unknown symbol {name}")
            model[name] = sexpr.parse_value(pair[1], self._sorts[name])
        missing = [n for n in names if n not in model]
        if missing:
            raise ProtocolError(f"get-value omitted {', '.join(missing)}")
        return model

    async def _get_core(self, literals: Dict[str, str]) -> FrozenSet[str]:
        labels = set().union(*(frame.labels for frame in self._frames))
        if not labels and not literals:
            return frozenset()
        await self._write("(get-unsat-core)")
        response = await self._read(self.config.timeout_seconds)
        if not isinstance(response, list):
            raise ProtocolError(f"malformed unsat core {response!r}")
        core: Set[str] = set()
        for entry in response:
            text = sexpr.render(entry)
            if text in labels:
                core.add(text)
            elif text in literals:
                core.add(literals[text])
        return frozenset(core)
