"""CLI behavior: exit codes, reports, and deterministic JSON output."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from taxunify.cli import run

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
WORKSPACE = FIXTURES / "workspace"


def invoke(capsys, *argv: str):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- validate ----------------------------------------------------------------

def test_validate_valid_project_exits_zero(capsys):
    code, out, _ = invoke(capsys, "validate",
                          str(WORKSPACE / "projects" / "identity.json"))
    assert code == 0
    assert "PASS" in out


def test_validate_dangling_mapping_exits_one(capsys, tmp_path):
    for name in ("schemes/unified-solo.json", "schemes/prev-solo.json"):
        (tmp_path / Path(name).parent.name).mkdir(exist_ok=True)
        (tmp_path / name).write_bytes((WORKSPACE / name).read_bytes())
    project_dir = tmp_path / "projects"
    project_dir.mkdir()
    bad = {
        "schemaVersion": 1, "kind": "project", "id": "bad",
        "unifiedSchemeId": "unified-solo", "previousSchemeIds": ["prev-solo"],
        "mapping": {"pairs": [{"unifiedNodeId": "cX", "previousSchemeId":
                               "prev-solo", "previousNodeId": "d1"}]},
        "revision": 0}
    path = project_dir / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = invoke(capsys, "validate", str(path))
    assert code == 1
    assert "UnknownUnifiedNode" in out


def test_validate_missing_file_exits_two(capsys):
    code, _, err = invoke(capsys, "validate", "no/such/file.json")
    assert code == 2
    assert "error" in err


def test_validate_json_report(capsys):
    code, out, _ = invoke(capsys, "validate",
                          str(WORKSPACE / "schemes" / "prev-basic.json"),
                          "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["kind"] == "validation-report"
    assert report["ok"] is True
    assert report["inputs"][0]["kind"] == "scheme"


def test_validate_annotations_and_sus_csv(capsys):
    code, _, _ = invoke(capsys, "validate", str(FIXTURES / "annotations.csv"),
                        str(FIXTURES / "sus.csv"), str(FIXTURES / "gold.json"))
    assert code == 0


# --- metrics -----------------------------------------------------------------

def test_metrics_identity_passes_thresholds(capsys):
    code, out, _ = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "identity.json"))
    assert code == 0
    assert "1/1" in out and "1.0000" in out


def test_metrics_fan_fails_default_completeness_threshold(capsys):
    code, out, _ = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "fan.json"))
    assert code == 1
    assert "2/3" in out
    assert "FAIL" in out
    assert "merge-candidates" in out


def test_metrics_bijection_passes(capsys):
    code, _, _ = invoke(capsys, "metrics",
                        str(WORKSPACE / "projects" / "bijection.json"))
    assert code == 0


def test_metrics_threshold_override_flips_exit(capsys):
    code, _, _ = invoke(capsys, "metrics",
                        str(WORKSPACE / "projects" / "fan.json"),
                        "--threshold", "completeness=0.5",
                        "--threshold", "laconicity=0.5",
                        "--threshold", "lucidity=0.5")
    assert code == 0


def test_metrics_json_round_trips(capsys):
    code, out, _ = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "fan.json"),
                          "--format", "json")
    assert code == 1
    report = json.loads(out)
    assert report["metrics"]["completeness"]["numerator"] == 2
    assert report["metrics"]["completeness"]["denominator"] == 3
    assert report["metrics"]["lucidity"]["fraction"] == "1/2"
    assert report["allThresholdsPassed"] is False
    kinds = [advice["kind"] for advice in report["advice"]]
    assert kinds == ["merge-candidates", "split-candidate", "missing-coverage"]


def test_metrics_json_is_byte_deterministic(capsys):
    _, first, _ = invoke(capsys, "metrics",
                         str(WORKSPACE / "projects" / "fan.json"),
                         "--format", "json")
    _, second, _ = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "fan.json"),
                          "--format", "json")
    assert first == second


def test_metrics_empty_previous_exits_two(capsys, tmp_path):
    (tmp_path / "schemes").mkdir()
    (tmp_path / "schemes" / "unified-solo.json").write_bytes(
        (WORKSPACE / "schemes" / "unified-solo.json").read_bytes())
    document = {"schemaVersion": 1, "kind": "project", "id": "empty",
                "unifiedSchemeId": "unified-solo", "previousSchemeIds": [],
                "mapping": {"pairs": []}, "revision": 0}
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(document))
    code, _, err = invoke(capsys, "metrics", str(path),
                          "--workspace", str(tmp_path))
    assert code == 2
    assert "previous" in err


def test_metrics_out_flag_writes_file(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "identity.json"),
                          "--format", "json", "--out", str(out_file))
    assert code == 0
    assert out == ""
    assert json.loads(out_file.read_text())["projectId"] == "identity"


# --- agreement -----------------------------------------------------------------

def test_agreement_perfect_fixture(capsys, tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("unit,A,B\nu1,x,x\nu2,y,y\nu3,x,x\nu4,y,y\n")
    code, out, _ = invoke(capsys, "agreement", str(path))
    assert code == 0
    assert "1.000" in out


def test_agreement_spec_fixture_prints_three_places(capsys):
    code, out, _ = invoke(capsys, "agreement", str(FIXTURES / "annotations.csv"))
    assert code == 0
    assert "0.533" in out
    assert "D_o" in out and "D_e" in out


def test_agreement_with_gold_and_sus(capsys):
    code, out, _ = invoke(capsys, "agreement", str(FIXTURES / "annotations.csv"),
                          "--gold", str(FIXTURES / "gold.json"),
                          "--sus", str(FIXTURES / "sus.csv"))
    assert code == 0
    assert "majority" in out
    assert "SUS" in out


def test_agreement_gold_with_unknown_unit_exits_two(capsys, tmp_path):
    gold = tmp_path / "gold.json"
    gold.write_text(json.dumps({"schemaVersion": 1, "kind": "gold",
                                "labels": {"u1": "x"}}))
    code, _, err = invoke(capsys, "agreement", str(FIXTURES / "annotations.csv"),
                          "--gold", str(gold))
    assert code == 2
    assert "u2" in err


def test_agreement_insufficient_data_exits_two(capsys, tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("unit,A,B\nu1,x,\nu2,,y\n")
    code, _, err = invoke(capsys, "agreement", str(path))
    assert code == 2
    assert "undefined" in err or "labels" in err


def test_agreement_json_document(capsys):
    code, out, _ = invoke(capsys, "agreement", str(FIXTURES / "annotations.csv"),
                          "--gold", str(FIXTURES / "gold.json"),
                          "--format", "json")
    assert code == 0
    document = json.loads(out)
    assert document["alpha"]["alpha"] == "8/15"
    assert document["alpha"]["alphaDecimal"] == "0.533"
    assert document["correctness"]["majority"]["accuracy"] == "1"
    assert document["correctness"]["tieUnits"] == ["u3"]


# --- stats ----------------------------------------------------------------------

def test_stats_by_year_text(capsys):
    code, out, _ = invoke(capsys, "stats", str(WORKSPACE / "catalog.json"))
    assert code == 0
    assert "2019" in out and "2020" in out
    assert "total" in out


def test_stats_json(capsys):
    code, out, _ = invoke(capsys, "stats", str(WORKSPACE / "catalog.json"),
                          "--by", "area", "--format", "json")
    assert code == 0
    document = json.loads(out)
    assert document["total"] == 3
    assert sum(row["count"] for row in document["rows"]) == document["total"]


def test_validate_catalog_resolves_scheme_ids(capsys):
    code, out, _ = invoke(capsys, "validate", str(WORKSPACE / "catalog.json"))
    assert code == 0
    assert "(catalog)" in out


# --- usage ----------------------------------------------------------------------

def test_unknown_subcommand_exits_two(capsys):
    assert run(["frobnicate"]) == 2


def test_no_color_environment_variable(monkeypatch):
    from taxunify.cli import _color_enabled

    monkeypatch.setenv("TAXUNIFY_NO_COLOR", "1")
    assert _color_enabled() is False


def test_text_reports_carry_no_ansi_when_piped(capsys):
    # capsys stdout is not a tty, so color must be off without the env var
    invoke(capsys, "metrics", str(WORKSPACE / "projects" / "fan.json"))
    code, out, _ = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "fan.json"))
    assert "\x1b[" not in out


def test_bad_threshold_flag_exits_two(capsys):
    code, _, err = invoke(capsys, "metrics",
                          str(WORKSPACE / "projects" / "fan.json"),
                          "--threshold", "sharpness=1")
    assert code == 2
