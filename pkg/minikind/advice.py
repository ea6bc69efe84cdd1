from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Union

from loguru import logger

from minikind.elaboration import TransitionSystem, expression_to_term
from minikind.errors import AdviceFormatError, AdviceIoError, MiniKindError
from minikind.frontend import parse_expression_source, print_term, typecheck_expression
from minikind.term import Sort, Term, free_vars

ADVICE_TAG = "mini-kind-advice"
ADVICE_VERSION = 1
HEADER = f"{ADVICE_TAG} {ADVICE_VERSION}"


@dataclass
class LoadedAdvice:
    candidates: List[Term] = field(default_factory=list)
    # entries that no longer parse, type-check or name existing variables
    dropped: int = 0


def _storable(term: Term, ts: TransitionSystem) -> bool:
    sorts = ts.sorts
    return term.sort is Sort.BOOL and all(
        not var.prev and not var.name.startswith("%") and var.name in sorts
        for var in free_vars(term)
    )


def advice_entries(invariants: Iterable[Term], ts: TransitionSystem) -> List[str]:
    return sorted({print_term(term) for term in invariants if _storable(term, ts)})


def save_advice(path: Union[str, Path], invariants: Iterable[Term], ts: TransitionSystem):
    """Write proven invariants as sorted concrete-syntax lines, replacing path atomically."""
    path = Path(path)
    entries = advice_entries(invariants, ts)
    text = "".join(line + "\n" for line in [HEADER, *entries])
    try:
        fd, temp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(temp, path)
        except BaseException:
            Path(temp).unlink(missing_ok=True)
            raise
    except OSError as e:
        raise AdviceIoError(f"cannot write advice file {path}: {e}") from e
    logger.info(f"wrote {len(entries)} advice entries to {path}")


def load_advice(path: Union[str, Path], ts: TransitionSystem) -> LoadedAdvice:
    """Candidate invariants from an advice file.

    Entries that fail to parse or type-check against the variables of `ts`
    are dropped; the rest still have to be proved before anything uses them.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").split("\n")
    except OSError as e:
        raise AdviceIoError(f"cannot read advice file {path}: {e}") from e
    header = lines[0].split()
    if len(header) != 2 or header[0] != ADVICE_TAG:
        raise AdviceFormatError(f"{path}: missing '{ADVICE_TAG}' header")
    if header[1] != str(ADVICE_VERSION):
        raise AdviceFormatError(f"{path}: unsupported advice version {header[1]}")

    sorts = {name: sort for name, sort in ts.vars if not name.startswith("%")}
    loaded = LoadedAdvice()
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            expr = typecheck_expression(parse_expression_source(line, file=path.name), sorts)
            term = expression_to_term(expr, sorts)
        except MiniKindError as e:
            logger.warning(f"{path.name}:{number}: dropping advice entry: {e}")
            loaded.dropped += 1
            continue
        if term.sort is not Sort.BOOL:
            logger.warning(f"{path.name}:{number}: dropping non-bool advice entry")
            loaded.dropped += 1
            continue
        if term not in loaded.candidates:
            loaded.candidates.append(term)
    logger.info(f"loaded {len(loaded.candidates)} advice candidates, dropped {loaded.dropped}")
    return loaded
