import shutil
import sys
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic.v1 import ValidationError

from minikind.errors import ConfigError
from minikind.models.solver import SolverConfig

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

DEFAULT_SOLVERS_FILE = Path(__file__).resolve().parent.parent / "solvers.toml"


def load_solver_configs(path: Optional[Union[str, Path]] = None) -> Dict[str, SolverConfig]:
    """Read every `[name]` table of a solvers file into a SolverConfig."""
    path = Path(path) if path is not None else DEFAULT_SOLVERS_FILE
    try:
        with path.open("rb") as f:
            tables = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read solver config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed solver config {path}: {e}") from e
    configs: Dict[str, SolverConfig] = {}
    for name, table in tables.items():
        if not isinstance(table, dict):
            raise ConfigError(f"{path}: entry '{name}' is not a table")
        try:
            configs[name] = SolverConfig(name=name, **table)
        except (ValidationError, TypeError) as e:
            raise ConfigError(f"{path}: invalid solver '{name}': {e}") from e
    return configs


def get_solver_config(name: str, path: Optional[Union[str, Path]] = None) -> SolverConfig:
    configs = load_solver_configs(path)
    if name not in configs:
        known = ", ".join(sorted(configs)) or "none"
        raise ConfigError(f"unknown solver '{name}' (configured: {known})")
    return configs[name]


def is_available(config: SolverConfig) -> bool:
    return Path(config.executable).is_file() or shutil.which(config.executable) is not None
