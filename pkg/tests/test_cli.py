import json

import pytest
from click.testing import CliRunner

from ddbar.main import cli
from tests.conftest import FIXTURES


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


def test_ddbar_holds_on_the_square(runner):
    result = invoke(runner, "ddbar", "--input", FIXTURES / "bicomplexes" / "square.json")
    assert result.exit_code == 0, result.output


def test_ddbar_fails_on_the_zigzag(runner):
    result = invoke(runner, "ddbar", "--input", FIXTURES / "bicomplexes" / "zigzag.json", "--format", "json")
    assert result.exit_code == 1
    report = json.loads(result.stdout)
    assert report["verdict"] is False
    assert report["certificates"]["kernel_witness"]["degree"] == 1
    assert report["details"] == {"counts_hold": False, "injective": False}


def test_malformed_input_exits_with_two(runner, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "bicomplex",')
    result = invoke(runner, "ddbar", "--input", broken)
    assert result.exit_code == 2
    assert "error:" in result.stderr


def test_json_errors_go_to_stderr(runner, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "fan", "rank": 2}')
    result = invoke(runner, "--format", "json", "toric", "ordinary", "--input", broken)
    assert result.exit_code == 2
    assert result.stdout == ""
    assert '"error": "SchemaValidationError"' in result.stderr


def test_cohomology_tables(runner):
    result = invoke(
        runner, "cohomology", "--input", FIXTURES / "bicomplexes" / "dot.json", "--flavor", "BC", "--format", "json"
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["verdict"] is None
    assert report["tables"] == {"BC": [{"bidegree": [1, 1], "dim": 1}]}


def test_toric_ordinary(runner):
    result = invoke(runner, "toric", "ordinary", "--input", FIXTURES / "fans" / "cp2.json", "--format", "json")
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["details"]["betti"] == [1, 0, 1, 0, 1]
    assert report["command"]["subcommand"] == "ordinary"


def test_toric_splitting_reports_the_weight_bound(runner):
    args = ("toric", "splitting", "--input", FIXTURES / "fans" / "cp1.json", "--format", "json")
    report = json.loads(invoke(runner, *args).stdout)
    assert report["verdict"] is True
    assert report["details"]["max_weight"] == 2
    report = json.loads(invoke(runner, *args, "--max-weight", 3).stdout)
    assert report["details"]["max_weight"] == 3
    assert report["command"]["options"]["max_weight"] == 3


def test_json_reports_are_reproducible(runner):
    args = ("toric", "ordinary", "--input", FIXTURES / "fans" / "cp1.json", "--format", "json")
    assert invoke(runner, *args).stdout == invoke(runner, *args).stdout


def test_cartan_extension(runner):
    result = invoke(
        runner, "cartan", "extend", "--input", FIXTURES / "tcbba" / "square.json", "--theta", "v*R", "--format", "json"
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["verdict"] is True


def test_extension_class(runner):
    result = invoke(runner, "replicate", "mhs", "--format", "json")
    assert result.exit_code == 0, result.output
    details = json.loads(result.stdout)["details"]
    assert details["trivial"] is False
    assert details["cokernel_dim"] == 1


def test_parameter_outside_the_field(runner):
    result = invoke(runner, "replicate", "mhs", "--lambda", "lambda", "--field", "Q")
    assert result.exit_code == 2


def test_validate_selected_cases(runner):
    result = invoke(
        runner, "validate", "--case", "fan-cp2-betti", "--case", "bicomplex-zigzag-ddbar", "--format", "json"
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["details"] == {"passed": 2, "total": 2}


def test_validate_a_document(runner):
    result = invoke(runner, "validate", "--input", FIXTURES / "algebras" / "flag.json")
    assert result.exit_code == 0, result.output


def test_validate_needs_a_target(runner):
    assert invoke(runner, "validate").exit_code == 2


@pytest.mark.slow
def test_counterexample_run(runner):
    result = invoke(runner, "replicate", "section5", "--lambda", "lambda", "--format", "json")
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["verdict"] is True
    assert report["command"]["subcommand"] == "section5"
    details = report["details"]
    assert details["lambda"] == "lambda"
    assert details["obstruction"]["obstructed"] is True
    assert details["obstruction"]["coefficients"]["p3"] == "lambda"
    assert details["lambda_w"]["window"] == 4
    assert "through total degree 4" in details["lambda_w"]["certified"]
    assert all(entry["vanishes"] for entry in details["massey"].values())


def test_pipeline_names_the_same_command(runner):
    result = invoke(runner, "replicate", "pipeline", "--help")
    assert result.exit_code == 0
    assert "--lambda" in result.output
