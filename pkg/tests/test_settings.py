import pytest
from pydantic import ValidationError

from minikind.models.settings import MiniKindSettings


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("MINIKIND_SOLVER", "cvc5")
    monkeypatch.setenv("MINIKIND_LOG_FORMAT", "json")
    monkeypatch.setenv("MINIKIND_FULL_SCHEDULES", "1")
    settings = MiniKindSettings()
    assert settings.solver == "cvc5"
    assert settings.log_format == "json"
    assert settings.full_schedules is True


def test_defaults_without_environment(monkeypatch):
    for name in ("MINIKIND_SOLVER", "MINIKIND_SOLVER_CONFIG", "MINIKIND_LOG_FORMAT"):
        monkeypatch.delenv(name, raising=False)
    settings = MiniKindSettings()
    assert settings.solver == "z3"
    assert settings.solver_config is None
    assert settings.log_format == "pretty"


def test_unknown_log_format_is_rejected(monkeypatch):
    monkeypatch.setenv("MINIKIND_LOG_FORMAT", "xml")
    with pytest.raises(ValidationError):
        MiniKindSettings()
