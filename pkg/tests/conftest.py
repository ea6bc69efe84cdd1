
import pytest
import pytest_asyncio

from minikind.errors import ConfigError
from minikind.models.settings import MiniKindSettings
from minikind.solver import is_available, start_session
from tests.support import configured_solver


def _solver_available() -> bool:
    try:
        return is_available(configured_solver())
    except ConfigError:
        return False


SOLVER_AVAILABLE = _solver_available()
FULL_SCHEDULES = MiniKindSettings().full_schedules


def pytest_configure(config):
    config.addinivalue_line("markers", "requires_solver: needs the configured SMT solver on PATH")


def pytest_collection_modifyitems(config, items):
    if SOLVER_AVAILABLE:
        return
    skip = pytest.mark.skip(reason="configured SMT solver not found")
    for item in items:
        if "requires_solver" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def solver_config():
    return configured_solver()


@pytest_asyncio.fixture
async def session(solver_config):
    session = await start_session(solver_config, name="test")
    yield session
    await session.close()
