import json
import logging

import pytest
from click.testing import CliRunner
from pydantic import ValidationError

from ddbar.core.config import Settings
from ddbar.core.logging_config import JSONFormatter, LoggerMixin, log_value
from ddbar.main import cli
from ddbar.models.bicomplex import Flavor
from ddbar.models.scalars import Scalar
from tests.conftest import FIXTURES


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("DDBAR_DEFAULT_FIELD", "Qi")
    monkeypatch.setenv("DDBAR_LOG_LEVEL", "debug")
    monkeypatch.setenv("DDBAR_MAX_WORKERS", "2")
    configured = Settings()
    assert configured.DEFAULT_FIELD == "Qi"
    assert configured.LOG_LEVEL == "DEBUG"
    assert configured.MAX_WORKERS == 2


@pytest.mark.parametrize(
    "name, value",
    [
        ("DDBAR_DEFAULT_FIELD", "R"),
        ("DDBAR_LOG_LEVEL", "LOUD"),
        ("DDBAR_DEFAULT_FORMAT", "yaml"),
        ("DDBAR_QISO_METHOD", "guess"),
        ("DDBAR_DEFAULT_TRUNCATION", "0"),
    ],
)
def test_invalid_settings(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings()


class WindowBuilder(LoggerMixin):
    pass


def test_structured_log_records(caplog):
    with caplog.at_level(logging.INFO):
        WindowBuilder().log_info("Window built", window=4, dims={"2": 1})
    record = caplog.records[-1]
    entry = json.loads(JSONFormatter().format(record))
    assert entry["message"] == "Window built"
    assert entry["window"] == 4
    assert entry["level"] == "INFO"


def test_log_values_are_plain_json():
    assert log_value({(1, 0): 2, (0, 1): 1}) == {"1,0": 2, "0,1": 1}
    assert log_value(Flavor.BC) == "BC"
    assert log_value(Scalar.rational(-3, 2)) == "-3/2"
    assert log_value(frozenset({2, 0})) == [0, 2]
    assert log_value((1, 1)) == [1, 1]


def test_cli_log_level_reaches_stderr():
    result = CliRunner().invoke(
        cli, ["--log-level", "info", "ddbar", "--input", str(FIXTURES / "bicomplexes" / "square.json")]
    )
    assert result.exit_code == 0, result.output
    records = [json.loads(line) for line in result.stderr.splitlines() if line.startswith("{")]
    verdicts = [r for r in records if r["message"] == "ddbar verdict"]
    assert verdicts and verdicts[0]["verdict"] is True
    assert verdicts[0]["function"] == "ddbar_property"
