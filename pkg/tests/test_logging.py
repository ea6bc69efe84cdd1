import json

from loguru import logger

from minikind import engine_name, get_serialized_ctx_wrappers, property_name
from minikind.logging import configure_json_logging


def test_json_lines_carry_the_engine(capsys):
    configure_json_logging()
    try:
        with engine_name.scoped("bmc"):
            logger.info("base case holds through depth 3")
    finally:
        logger.remove()
        logger.disable("minikind")
    record = json.loads(capsys.readouterr().err.splitlines()[-1])
    assert record["message"] == "base case holds through depth 3"
    assert record["severity"] == "INFO"
    assert record["ctx"]["engine"] == "bmc"


def test_context_is_restored_after_a_scope():
    with engine_name.scoped("ivc"), property_name.scoped("ok1"):
        assert get_serialized_ctx_wrappers() == {"engine": "ivc", "property": "ok1"}
    assert get_serialized_ctx_wrappers() == {}
