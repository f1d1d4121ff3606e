import json

import pytest
from click.testing import CliRunner

from aelin.cli import main

SPACE = {"points": ["a", "b"], "dist": [["a", "b", "1"]]}
ACTION = {"monoid": True, "generators": [{"name": "s", "map": {"a": "b", "b": "b"}}]}
SHIFT = {"space": {"implicit": True, "seeds": [[0]], "metric": "l1"},
         "action": {"generators": [{"name": "s", "rule": "n -> n+1"}]}}


@pytest.fixture
def runner():
    return CliRunner()


def test_validate_ok_exit_zero(runner):
    result = runner.invoke(main, ["validate", "-i", "-"], input=json.dumps(SPACE))
    assert result.exit_code == 0
    assert json.loads(result.output)["status"] == "ok"


def test_validate_violation_exit_one(runner):
    bad = {"points": ["a", "b", "c"],
           "dist": [["a", "b", 3], ["b", "c", 1], ["a", "c", 1]]}
    result = runner.invoke(main, ["validate", "-i", "-"], input=json.dumps(bad))
    assert result.exit_code == 1


def test_structural_error_exit_three(runner):
    bad = {"points": ["a", "b"], "dist": []}
    result = runner.invoke(main, ["validate", "-i", "-"], input=json.dumps(bad))
    assert result.exit_code == 3
    result = runner.invoke(main, ["validate", "-i", "-"], input="not json")
    assert result.exit_code == 3


def test_orbit_exit_codes(runner):
    doc = json.dumps({"space": SPACE, "action": ACTION})
    result = runner.invoke(main, ["orbit", "-i", "-", "--point", "a"], input=doc)
    assert result.exit_code == 0
    assert json.loads(result.output)["orbit"]["points"] == ["a", "b"]
    result = runner.invoke(
        main, ["orbit", "-i", "-", "--point", "0", "--budget", "10"],
        input=json.dumps(SHIFT))
    assert result.exit_code == 2


def test_extend_writes_extension(runner, tmp_path):
    doc = json.dumps({"space": SPACE, "action": ACTION})
    out = tmp_path / "ext.json"
    result = runner.invoke(
        main, ["extend", "-i", "-", "-o", str(out), "--budget", "50"], input=doc)
    assert result.exit_code == 0
    body = json.loads(out.read_text())
    assert body["extension"]["z"] == "__z"


def test_norm_subcommand(runner, tmp_path):
    ext_doc = json.loads(CliRunner().invoke(
        main, ["extend", "-i", "-", "--budget", "50"],
        input=json.dumps({"space": SPACE, "action": ACTION})).output)["extension"]
    payload = {"space": ext_doc,
               "combination": {"terms": [{"c": "1", "x": "a", "y": "__z"}]}}
    result = runner.invoke(main, ["norm", "-i", "-"], input=json.dumps(payload))
    assert result.exit_code == 0
    assert json.loads(result.output)["result"]["value"] == "1"


def test_hausdorff_subcommand(runner):
    payload = {"space": SPACE, "a": ["a"], "b": ["a", "b"]}
    result = runner.invoke(main, ["hausdorff", "-i", "-"], input=json.dumps(payload))
    assert result.exit_code == 0
    assert json.loads(result.output)["distance"] == "1"
    payload = {"space": SPACE, "action": ACTION}
    result = runner.invoke(main, ["hausdorff", "-i", "-"], input=json.dumps(payload))
    assert result.exit_code == 1  # non-group finding


def test_linearize_certify_round_trip(runner, tmp_path):
    doc = json.dumps({"space": SPACE, "action": ACTION})
    out = tmp_path / "bundle.json"
    result = runner.invoke(
        main, ["linearize", "-i", "-", "-o", str(out), "--budget", "100"], input=doc)
    assert result.exit_code == 0
    bundle = json.loads(out.read_text())
    assert bundle["status"] == "certified"
    result = runner.invoke(main, ["certify", "-i", str(out)])
    assert result.exit_code == 0


def test_linearize_refusal_exit_two(runner):
    result = runner.invoke(
        main, ["linearize", "-i", "-", "--budget", "100"], input=json.dumps(SHIFT))
    assert result.exit_code == 2
    assert json.loads(result.output)["refusal"]["point"] == "0"


def test_certify_tampered_bundle_exit_one(runner, tmp_path):
    doc = json.dumps({"space": SPACE, "action": ACTION})
    out = tmp_path / "bundle.json"
    runner.invoke(main, ["linearize", "-i", "-", "-o", str(out), "--budget", "100"],
                  input=doc)
    bundle = json.loads(out.read_text())
    for cert in bundle["certificates"]:
        if cert["claim"] == "embedding_isometry":
            cert["witness"]["norms"]["a"] = "3/2"
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(bundle))
    result = runner.invoke(main, ["certify", "-i", str(tampered)])
    assert result.exit_code == 1


def test_linearize_deterministic_bytes(runner, tmp_path):
    doc = json.dumps({"space": SPACE, "action": ACTION})
    one = tmp_path / "one.json"
    two = tmp_path / "two.json"
    runner.invoke(main, ["linearize", "-i", "-", "-o", str(one), "--budget", "100"],
                  input=doc)
    runner.invoke(main, ["linearize", "-i", "-", "-o", str(two), "--budget", "100"],
                  input=doc)
    assert one.read_bytes() == two.read_bytes()


def test_budget_env_override(runner, monkeypatch):
    monkeypatch.setenv("AELIN_BUDGET", "10")
    result = runner.invoke(main, ["linearize", "-i", "-"], input=json.dumps(SHIFT))
    assert result.exit_code == 2
    body = json.loads(result.output)
    assert body["inputs"]["budget"] == 10


def test_float_mode_flag(runner):
    result = runner.invoke(
        main, ["validate", "-i", "-", "--mode", "float", "--tolerance", "1e-6"],
        input=json.dumps(SPACE))
    assert result.exit_code == 0


def test_help_documents_formats_and_serve(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    assert "n -> n+1" in result.output
    assert "serve" in result.output
    result = runner.invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
