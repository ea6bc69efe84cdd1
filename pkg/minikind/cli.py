import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from loguru import logger

from minikind.advice import load_advice
from minikind.elaboration import TransitionSystem, elaborate
from minikind.errors import AdviceFormatError, ConfigError, MiniKindError
from minikind.framework.director import Director
from minikind.frontend import load_program
from minikind.logging import configure_json_logging, configure_pretty_logging
from minikind.models.engine import (
    DEFAULT_BMC_DEPTH,
    DEFAULT_MAX_K,
    DEFAULT_TIMEOUT_SECONDS,
    BmcEngineConfig,
    EngineConfig,
    InvariantGenerationEngineConfig,
    KInductionEngineConfig,
    PdrEngineConfig,
    RunConfig,
)
from minikind.models.result import RunReport, Verdict
from minikind.models.settings import MiniKindSettings
from minikind.report import render_json, render_text
from minikind.solver import get_solver_config, is_available

EXIT_VALID = 0
EXIT_ERROR = 1
EXIT_FALSIFIED = 10
EXIT_UNKNOWN = 20


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mini-kind",
        description="Multi-engine k-induction model checker for a Lustre subset.",
    )
    parser.add_argument("model", type=Path, help="Lustre source file (.lus)")
    parser.add_argument("--solver", help="solver name from the solver config (default z3)")
    parser.add_argument("--solver-config", help="TOML file of solver tables")
    parser.add_argument(
        "--n", type=int, default=DEFAULT_BMC_DEPTH, metavar="DEPTH", help="maximum BMC depth"
    )
    parser.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="maximum induction depth")
    parser.add_argument(
        "--timeout",
        type=float,
        default=DEFAULT_TIMEOUT_SECONDS,
        metavar="SECONDS",
        help="wall-clock limit for the whole run",
    )
    parser.add_argument("--no-bmc", action="store_true", help="disable bounded model checking")
    parser.add_argument("--no-kind", action="store_true", help="disable k-induction")
    parser.add_argument(
        "--no-invgen", action="store_true", help="disable template invariant generation"
    )
    parser.add_argument("--no-pdr", action="store_true", help="disable PDR")
    parser.add_argument("--ivc", action="store_true", help="compute inductive validity cores")
    parser.add_argument("--smooth", action="store_true", help="smooth counterexamples")
    parser.add_argument(
        "--minimal-cex",
        action="store_true",
        help="report PDR counterexamples only once BMC rules out shorter ones",
    )
    parser.add_argument("--read-advice", metavar="PATH", help="replay invariants from PATH")
    parser.add_argument("--write-advice", metavar="PATH", help="save proven invariants to PATH")
    parser.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    parser.add_argument(
        "--dump-ts", action="store_true", help="print the transition system as JSON and exit"
    )
    parser.add_argument("--dump-smt", metavar="DIR", help="write one SMT-LIB2 transcript per session")
    parser.add_argument("--log-format", choices=["pretty", "json"])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def engine_configs(args: argparse.Namespace) -> List[EngineConfig]:
    engines: List[EngineConfig] = []
    if not args.no_bmc:
        engines.append(BmcEngineConfig(max_depth=args.n))
    if not args.no_kind:
        engines.append(KInductionEngineConfig(max_k=args.max_k))
    if not args.no_invgen:
        engines.append(InvariantGenerationEngineConfig())
    if not args.no_pdr:
        engines.append(PdrEngineConfig())
    return engines


def build_run_config(args: argparse.Namespace, settings: MiniKindSettings) -> RunConfig:
    solver = get_solver_config(
        args.solver or settings.solver, args.solver_config or settings.solver_config
    )
    if not is_available(solver):
        raise ConfigError(f"solver executable '{solver.executable}' not found")
    if args.n < 0 or args.max_k < 1:
        raise ConfigError("--n must be non-negative and --max-k at least 1")
    try:
        return RunConfig(
            engines=engine_configs(args),
            solver=solver,
            timeout_seconds=args.timeout,
            ivc=args.ivc,
            smooth=args.smooth,
            minimal_cex=args.minimal_cex,
            dump_smt_dir=args.dump_smt,
            read_advice=args.read_advice,
            write_advice=args.write_advice,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def exit_code(report: RunReport) -> int:
    verdicts = set(report.verdicts.values())
    if Verdict.FALSIFIED in verdicts:
        return EXIT_FALSIFIED
    if Verdict.UNKNOWN in verdicts:
        return EXIT_UNKNOWN
    return EXIT_VALID


def configure_logging(args: argparse.Namespace, settings: MiniKindSettings):
    level = logging.DEBUG if args.verbose else logging.INFO
    if (args.log_format or settings.log_format) == "json":
        configure_json_logging(level)
    else:
        configure_pretty_logging(level)


def _write_json(target: str, report: RunReport, ts: TransitionSystem):
    text = render_json(report, ts)
    if target == "-":
        sys.stdout.write(text)
        return
    try:
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise ConfigError(f"cannot write report {target}: {e}") from e


def check(args: argparse.Namespace, settings: MiniKindSettings) -> int:
    try:
        program = load_program(args.model)
    except OSError as e:
        raise ConfigError(f"cannot read {args.model}: {e}") from e
    ts = elaborate(program)
    if args.dump_ts:
        sys.stdout.write(ts.dumps() + "\n")
        return EXIT_VALID
    config = build_run_config(args, settings)

    advice = []
    if config.read_advice:
        try:
            loaded = load_advice(config.read_advice, ts)
        except AdviceFormatError as e:
            logger.warning(f"ignoring advice file: {e}")
        else:
            if loaded.dropped:
                logger.warning(f"dropped {loaded.dropped} stale advice entries")
            advice = loaded.candidates

    director = Director(ts, config, advice=advice, model=args.model.name)
    report = asyncio.run(director.run())

    if args.json != "-":
        sys.stdout.write(render_text(report, ts))
    if args.json:
        _write_json(args.json, report, ts)
    return exit_code(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors
        return EXIT_VALID if e.code == 0 else EXIT_ERROR
    settings = MiniKindSettings()
    configure_logging(args, settings)
    try:
        return check(args, settings)
    except MiniKindError as e:
        print(f"mini-kind: {e}", file=sys.stderr)
        return EXIT_ERROR


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
