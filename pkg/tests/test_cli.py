import json

import pytest
from click.testing import CliRunner

from qint.cli import JobSpec, main, run


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args, env=None):
    return runner.invoke(main, list(args), env=env)


def test_integrate_identity(runner):
    res = invoke(runner, "integrate", "--measure", "lebesgue2", "--fn", "monomial:1", "--to", "1")
    assert res.exit_code == 0, res.output
    doc = json.loads(res.stdout)
    assert doc["result"]["decimal"] == pytest.approx(1 / 3, abs=1e-9)
    assert "qint_version" in doc


def test_integrate_restricted_destructive(runner):
    res = invoke(runner, "integrate", "--measure", "destructive:3/4", "--to", "0.75", "--format", "text")
    assert res.exit_code == 0
    value = float(res.stdout.splitlines()[0].split("=")[1])
    assert value == pytest.approx(9 / 32, abs=1e-9)


def test_coin_measure_is_exact(runner):
    res = invoke(runner, "integrate", "--measure", "coin:2", "--fn", "heads", "--format", "csv")
    assert res.exit_code == 0
    header, row = res.stdout.splitlines()
    assert header.split(",")[:2] == ["value", "exact"]
    assert row.split(",")[:2] == ["5/8", "True"]
    centered = invoke(runner, "integrate", "--measure", "coin:2", "--center", "3")
    assert json.loads(centered.stdout)["result"]["value"] == "-13/8"


def test_coin_table(runner):
    res = invoke(runner, "coin", "--n-max", "7", "--digits", "4", "--format", "csv")
    assert res.exit_code == 0
    lines = res.stdout.split("\n")
    assert lines[0] == "n,a_n,ratio_2a_n_over_n"
    assert lines[3] == "3,33/32,0.6875"
    assert lines[7].endswith(",0.7905")
    assert "\r" not in res.stdout and res.stdout.endswith("\n")


def test_verify_passes_on_a_correct_build(runner):
    res = invoke(runner, "verify", "--format", "json")
    doc = json.loads(res.stdout)
    assert doc["result"]["catalog_covered"] == doc["result"]["catalog_size"]
    failing = [r["case_id"] for r in doc["result"]["reports"] if not r["ok"]]
    assert res.exit_code == 0, f"unexpected outcomes: {failing}"


def test_verify_text_reports_coverage(runner):
    res = invoke(runner, "verify", "--format", "text")
    assert "catalog coverage 20/20" in res.stdout
    assert "witness_nonlinearity" in res.stdout


def test_ftc_command(runner):
    res = invoke(runner, "ftc", "--fn", "exp", "--b", "0.5")
    assert res.exit_code == 0
    result = json.loads(res.stdout)["result"]
    assert abs(float(result["difference"])) < 1e-3


@pytest.mark.parametrize(
    "args, field",
    [
        (("integrate", "--measure", "bogus"), "measure"),
        (("integrate", "--fn", "nope"), "fn"),
        (("integrate", "--from", "0.8", "--to", "0.2"), "from/to"),
        (("integrate", "--measure", "destructive:0.3"), "measure"),
        (("integrate", "--tol", "-1"), "tol"),
        (("integrate", "--measure", "coin:2", "--fn", "exp"), "fn"),
        (("ftc", "--b", "0.01"), "b"),
    ],
)
def test_spec_errors_exit_2_and_name_field(runner, args, field):
    res = invoke(runner, *args)
    assert res.exit_code == 2
    assert res.stderr.startswith(f"error: {field}:")


def test_computation_error_exits_1(runner):
    res = invoke(runner, "integrate", "--fn", "exp", "--tol", "1e-300")
    assert res.exit_code == 1
    assert "computation failed" in res.stderr


def test_env_tolerance_default(runner):
    res = invoke(runner, "integrate", env={"QINT_TOL": "1e-6"})
    assert json.loads(res.stdout)["job"]["tol"] == 1e-6
    res = invoke(runner, "integrate", "--tol", "1e-9", env={"QINT_TOL": "1e-6"})
    assert json.loads(res.stdout)["job"]["tol"] == 1e-9


def test_output_file(runner, tmp_path):
    out = tmp_path / "table.csv"
    res = invoke(runner, "coin", "--n-max", "3", "--format", "csv", "--out", str(out))
    assert res.exit_code == 0 and res.stdout == ""
    assert out.read_bytes().startswith(b"n,a_n,ratio_2a_n_over_n\n1,1/4,")


def test_json_is_deterministic_and_echo_round_trips():
    spec = JobSpec("integrate", "destructive:1/2", "poly:0,1,-1", 0.1, 0.9, 0.05)
    code1, doc1 = run(spec)
    code2, doc2 = run(spec)
    assert code1 == code2 == 0 and doc1 == doc2
    echoed = JobSpec.from_dict(json.loads(doc1)["job"])
    assert echoed == spec
    assert run(echoed) == (code1, doc1)


def test_from_dict_rejects_unknown_fields():
    from qint import SpecError

    with pytest.raises(SpecError) as info:
        JobSpec.from_dict({"command": "coin", "colour": "red"})
    assert info.value.field == "colour"


def test_shortest_decimal_unless_digits():
    _, doc = run(JobSpec("integrate", "lebesgue2", "const:1", 0.2, 0.7))
    assert json.loads(doc)["result"]["value"] == repr(json.loads(doc)["result"]["decimal"])
    _, doc = run(JobSpec("integrate", "lebesgue2", "const:1", 0.2, 0.7, digits=3))
    assert json.loads(doc)["result"]["value"] == "0.250"
