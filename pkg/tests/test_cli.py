import json

import jsonschema
import pytest

from minikind.cli import EXIT_ERROR, EXIT_FALSIFIED, EXIT_UNKNOWN, EXIT_VALID, build_parser, main
from minikind.report import load_output_schema, strip_runtime
from tests.support import CORPUS_DIR

CTR = str(CORPUS_DIR / "ctr.lus")


def test_defaults():
    args = build_parser().parse_args([CTR])
    assert args.n == 200
    assert args.max_k == 20
    assert args.timeout == 60
    assert not (args.no_bmc or args.no_kind or args.no_invgen or args.no_pdr)


def test_missing_model(tmp_path, capsys):
    assert main([str(tmp_path / "nope.lus")]) == EXIT_ERROR
    assert "mini-kind: cannot read" in capsys.readouterr().err


def test_syntax_error(tmp_path, capsys):
    model = tmp_path / "broken.lus"
    model.write_text("node main(a: bool) returns (b: bool); let b = a tel\n")
    assert main([str(model)]) == EXIT_ERROR
    assert "broken.lus:1" in capsys.readouterr().err


def test_usage_error():
    assert main(["--no-such-flag", CTR]) == EXIT_ERROR
    assert main(["--help"]) == EXIT_VALID


def test_unknown_solver(capsys):
    assert main([CTR, "--solver", "no-such-solver"]) == EXIT_ERROR
    assert "unknown solver" in capsys.readouterr().err


def test_bad_bounds():
    assert main([CTR, "--n", "-1"]) == EXIT_ERROR
    assert main([CTR, "--max-k", "0"]) == EXIT_ERROR


def test_dump_ts(capsys):
    assert main([CTR, "--dump-ts"]) == EXIT_VALID
    data = json.loads(capsys.readouterr().out)
    assert [eq["lhs"] for eq in data["equations"]] == ["x", "ok1", "ok2"]


@pytest.mark.requires_solver
def test_falsified_exit_code(capsys):
    assert main([CTR]) == EXIT_FALSIFIED
    out = capsys.readouterr().out
    assert "ok1: VALID" in out
    assert "ok2: FALSIFIED (length 4" in out


@pytest.mark.requires_solver
def test_valid_exit_code(capsys):
    assert main([str(CORPUS_DIR / "unused_input.lus")]) == EXIT_VALID
    assert "unused inputs: b" in capsys.readouterr().out


@pytest.mark.requires_solver
def test_unknown_exit_code():
    model = str(CORPUS_DIR / "looping_counter.lus")
    assert main([model, "--no-invgen", "--no-pdr", "--max-k", "3", "--n", "5"]) == EXIT_UNKNOWN


@pytest.mark.requires_solver
def test_no_engines_enabled(capsys):
    flags = ["--no-bmc", "--no-kind", "--no-invgen", "--no-pdr"]
    assert main([CTR, *flags]) == EXIT_ERROR
    assert "no engines" in capsys.readouterr().err


@pytest.mark.requires_solver
def test_json_on_stdout_replaces_the_text_report(capsys):
    assert main([CTR, "--json", "-", "--ivc", "--smooth"]) == EXIT_FALSIFIED
    data = json.loads(capsys.readouterr().out)
    jsonschema.validate(data, load_output_schema())
    ok1, ok2 = data["properties"]
    assert ok1["ivc"]["minimal"] is True
    assert {entry["path"] for entry in ok1["ivc"]["core"]} == {"main.x", "main.ok1"}
    assert ok2["counterexample"]["length"] == 4
    assert ok2["smoothed_counterexample"]["length"] == 4


@pytest.mark.requires_solver
@pytest.mark.parametrize("name", ["countdown", "parity", "modulo_counter"])
def test_reports_are_deterministic(tmp_path, name):
    model = str(CORPUS_DIR / f"{name}.lus")
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert main([model, "--json", str(first)]) == main([model, "--json", str(second)])
    assert strip_runtime(json.loads(first.read_text())) == strip_runtime(
        json.loads(second.read_text())
    )


@pytest.mark.requires_solver
def test_advice_round_trip(tmp_path, capsys):
    advice = tmp_path / "ctr.advice"
    assert main([CTR, "--write-advice", str(advice)]) == EXIT_FALSIFIED
    assert advice.read_text().startswith("mini-kind-advice 1\n")
    capsys.readouterr()
    assert main([CTR, "--read-advice", str(advice), "--no-invgen"]) == EXIT_FALSIFIED
    assert "ok1: VALID" in capsys.readouterr().out


@pytest.mark.requires_solver
def test_corrupt_advice_is_ignored(tmp_path):
    advice = tmp_path / "ctr.advice"
    advice.write_text("not an advice file\n")
    assert main([CTR, "--read-advice", str(advice)]) == EXIT_FALSIFIED


@pytest.mark.requires_solver
def test_transcripts_are_written(tmp_path):
    assert main([CTR, "--dump-smt", str(tmp_path), "--no-pdr", "--no-invgen"]) == EXIT_FALSIFIED
    names = {path.name for path in tmp_path.glob("*.smt2")}
    assert "bmc.smt2" in names
    assert "kind.smt2" in names


def test_missing_solver_executable(mocker, capsys):
    mocker.patch("minikind.cli.is_available", return_value=False)
    assert main([CTR]) == EXIT_ERROR
    assert "not found" in capsys.readouterr().err
