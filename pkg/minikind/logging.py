import json
import logging
import sys
from typing import Any, Dict, Optional

from loguru import logger
from loguru._handler import Handler

from minikind import get_serialized_ctx_wrappers


def _exception_fields(exception) -> Optional[Dict[str, Any]]:
    if exception is None:
        return None
    return {
        "type": None if exception.type is None else exception.type.__name__,
        "value": exception.value,
        "traceback": bool(exception.traceback),
    }


def _serialize_record(text: str, record: dict) -> str:
    """
    Serializes a loguru record into one JSON line.

    `ctx` holds the current values of every ContextWrapper (the running engine
    and the property it works on), so interleaved output from concurrent
    engines can be told apart.
    """
    line = {
        "severity": record["level"].name,
        "timestamp": record["time"].timestamp(),
        "message": record["message"],
        "ctx": get_serialized_ctx_wrappers(),
        "extra": record["extra"],
        "exception": _exception_fields(record["exception"]),
        "source": f"{record['name']}:{record['function']}:{record['line']}",
        "elapsed_seconds": record["elapsed"].total_seconds(),
    }
    return json.dumps(line, default=str, ensure_ascii=False) + "\n"


Handler._serialize_record = staticmethod(_serialize_record)  # type: ignore


class InterceptHandler(logging.Handler):
    """Forwards stdlib logging records to loguru, keeping the original caller."""

    def emit(self, record: logging.LogRecord) -> None:  # pragma: no cover
        try:
            level: str | int = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find caller from where originated the logged message
        frame, depth = logging.currentframe(), 2
        while frame.f_code.co_filename in (logging.__file__, __file__):
            frame = frame.f_back  # type: ignore
            depth += 1
        logger.opt(depth=depth, exception=record.exc_info).log(
            level,
            record.getMessage(),
        )


def configure_intercepter(level: int = logging.INFO) -> None:
    """Routes records of the stdlib logging module (asyncio included) into loguru."""
    intercept_handler = InterceptHandler()
    logging.basicConfig(handlers=[intercept_handler], level=level, force=True)
    logging.getLogger("asyncio").handlers = [intercept_handler]


def _engine_context(record: dict) -> None:
    record["extra"].update(get_serialized_ctx_wrappers())
    record["extra"].setdefault("engine", "-")


def configure_pretty_logging(level: int = logging.INFO) -> None:
    """
    Colored human-readable logs on stderr; stdout is left to the report.

    Every line is prefixed with the engine that emitted it.
    """
    logger.enable("minikind")

    configure_intercepter(level)

    logger.remove()
    logger.configure(patcher=_engine_context)  # type: ignore[arg-type]
    logger.add(
        sys.stderr,
        level=level,
        format=(
            "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
            "<cyan>{extra[engine]: <12}</cyan> | <level>{message}</level>"
        ),
        backtrace=False,
        diagnose=False,
        serialize=False,
        colorize=True,
    )


def configure_json_logging(level: int = logging.INFO) -> None:
    """One JSON object per line on stderr, including the engine context."""
    logger.enable("minikind")

    configure_intercepter(level)

    logger.remove()
    logger.add(
        sys.stderr,
        format="{message}",
        level=level,
        backtrace=False,
        diagnose=False,
        serialize=True,
    )
