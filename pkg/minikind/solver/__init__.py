from minikind.solver.config import get_solver_config, is_available, load_solver_configs
from minikind.solver.session import (
    CheckResult,
    Sat,
    SolverSession,
    SolverStats,
    Unknown,
    Unsat,
)


async def start_session(
    config, name: str = "solver", transcript_dir=None, stats=None, engine=None
) -> SolverSession:
    session = SolverSession(
        config, name=name, transcript_dir=transcript_dir, stats=stats, engine=engine
    )
    await session.start()
    return session
