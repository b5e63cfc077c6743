"""Command-line interface: commands, exit codes, output formats."""
import json

import pytest

from fcmsim.cli import main

DOC = {
    "format_version": "1.0",
    "model": {
        "name": "demo",
        "concepts": [{"id": "A"}, {"id": "B"}, {"id": "C"}],
        "edges": [
            {"source": "A", "target": "B", "weight": 0.5},
            {"source": "B", "target": "C", "weight": -0.25},
        ],
    },
    "scenarios": [
        {"name": "push", "clamps": {"A": 0.5}},
        {"name": "pull", "clamps": {"A": -0.5}},
    ],
}

MATRIX = "demo,A,B,C\nA,,0.5,\nB,,,-0.25\nC,,,\n"


@pytest.fixture
def doc_path(tmp_path):
    path = tmp_path / "demo.json"
    path.write_text(json.dumps(DOC), encoding="utf-8")
    return str(path)


@pytest.fixture
def matrix_path(tmp_path):
    path = tmp_path / "demo.csv"
    path.write_text(MATRIX, encoding="utf-8")
    return str(path)


# ---- validate ----


def test_validate_ok(doc_path, capsys):
    assert main(["validate", doc_path]) == 0
    out = capsys.readouterr().out
    assert "OK" in out and "3 concepts" in out


def test_validate_structured(doc_path, capsys):
    assert main(["validate", "--format", "structured", doc_path]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["valid"] is True
    assert obj["model"]["concept_count"] == 3


def test_validate_structural_error(tmp_path, capsys):
    path = tmp_path / "loop.csv"
    path.write_text("m,A\nA,0.5\n", encoding="utf-8")
    assert main(["validate", str(path)]) == 5
    assert "SelfLoop" in capsys.readouterr().out


def test_missing_file_exit_code(capsys):
    assert main(["validate", "/no/such/file.json"]) == 3


def test_parse_error_exit_code(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["validate", str(path)]) == 4


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


# ---- metrics ----


def test_metrics_human(matrix_path, capsys):
    assert main(["metrics", matrix_path]) == 0
    out = capsys.readouterr().out
    assert "concepts: 3" in out
    assert "connections: 2" in out
    assert "transmitter" in out


def test_metrics_structured(matrix_path, capsys):
    assert main(["metrics", "--format", "structured", matrix_path]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["concept_count"] == 3
    assert obj["classes"]["A"] == "transmitter"
    assert obj["ranking"][0][0] == "B"


def test_metrics_density_toggle(matrix_path, capsys):
    main(["metrics", "--format", "structured", matrix_path])
    base = json.loads(capsys.readouterr().out)["density"]
    main(["metrics", "--format", "structured", "--density-self-pairs", matrix_path])
    toggled = json.loads(capsys.readouterr().out)["density"]
    assert base == pytest.approx(2 / 6)
    assert toggled == pytest.approx(2 / 9)


# ---- run ----


def test_run_named_scenario(doc_path, capsys):
    assert main(["run", doc_path, "--scenario", "push"]) == 0
    out = capsys.readouterr().out
    assert "push" in out and "converged" in out


def test_run_adhoc_clamps(doc_path, capsys):
    assert main(["run", doc_path, "--clamp", "A=1.0", "--clamp", "B=0.5"]) == 0
    out = capsys.readouterr().out
    assert "custom" in out


def test_run_structured(doc_path, capsys):
    assert main(["run", doc_path, "--scenario", "push", "--format", "structured"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["scenario_name"] == "push"
    assert obj["relative_change"]["A"] == pytest.approx(0.5)
    assert obj["config"]["kernel"] == "modified-kosko"


def test_run_unknown_scenario(doc_path, capsys):
    assert main(["run", doc_path, "--scenario", "nope"]) == 6
    assert "nope" in capsys.readouterr().err


def test_run_unknown_clamp_id(doc_path):
    assert main(["run", doc_path, "--clamp", "Z=0.5"]) == 6


def test_run_clamp_out_of_range(doc_path):
    assert main(["run", doc_path, "--clamp", "A=1.5"]) == 5


def test_run_scenario_and_clamp_conflict(doc_path):
    assert main(["run", doc_path, "--scenario", "push", "--clamp", "A=1"]) == 2


def test_run_malformed_clamp(doc_path):
    assert main(["run", doc_path, "--clamp", "A:0.5"]) == 2


def test_run_kernel_flag_changes_result(doc_path, capsys):
    main(["run", doc_path, "--scenario", "push", "--format", "structured"])
    default = json.loads(capsys.readouterr().out)
    main(
        [
            "run", doc_path, "--scenario", "push",
            "--kernel", "kosko", "--format", "structured",
        ]
    )
    kosko = json.loads(capsys.readouterr().out)
    assert kosko["config"]["kernel"] == "kosko"
    assert kosko["relative_change"]["B"] != default["relative_change"]["B"]


def test_config_env_file(doc_path, tmp_path, capsys, monkeypatch):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps({"kernel": "kosko"}), encoding="utf-8")
    monkeypatch.setenv("FCMSIM_CONFIG", str(cfg_path))
    main(["run", doc_path, "--scenario", "push", "--format", "structured"])
    obj = json.loads(capsys.readouterr().out)
    assert obj["config"]["kernel"] == "kosko"
    # explicit flag still wins over the env file
    main(
        [
            "run", doc_path, "--scenario", "push",
            "--kernel", "rescaled", "--format", "structured",
        ]
    )
    obj = json.loads(capsys.readouterr().out)
    assert obj["config"]["kernel"] == "rescaled"


def test_config_env_file_bad_json(doc_path, tmp_path, monkeypatch):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text("oops", encoding="utf-8")
    monkeypatch.setenv("FCMSIM_CONFIG", str(cfg_path))
    assert main(["run", doc_path, "--scenario", "push"]) == 4


# ---- compare ----


def test_compare_plain(doc_path, capsys):
    assert main(["compare", doc_path]) == 0
    out = capsys.readouterr().out
    assert "push" in out and "pull" in out


def test_compare_delimited(doc_path, capsys):
    assert main(["compare", doc_path, "--format", "delimited"]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert first == "concept,push,pull"


def test_compare_structured(doc_path, capsys):
    assert main(["compare", doc_path, "--format", "structured"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["scenarios"] == ["push", "pull"]


def test_compare_scenario_filter(doc_path, capsys):
    assert main(["compare", doc_path, "--scenario", "pull"]) == 0
    out = capsys.readouterr().out
    assert "pull" in out


def test_compare_unknown_scenario_name(doc_path):
    assert main(["compare", doc_path, "--scenario", "ghost"]) == 6


def test_compare_without_scenarios(matrix_path):
    assert main(["compare", matrix_path]) == 5


def test_compare_byte_deterministic(doc_path, capsys):
    main(["compare", doc_path])
    a = capsys.readouterr().out
    main(["compare", doc_path])
    b = capsys.readouterr().out
    assert a == b


# ---- convert ----


def test_convert_matrix_to_document(matrix_path, tmp_path, capsys):
    out_path = tmp_path / "out.json"
    assert main(["convert", matrix_path, str(out_path)]) == 0
    obj = json.loads(out_path.read_text(encoding="utf-8"))
    assert obj["model"]["name"] == "demo"
    assert len(obj["model"]["edges"]) == 2


def test_convert_document_to_matrix_notes_dropped_sections(
    doc_path, tmp_path, capsys
):
    out_path = tmp_path / "out.csv"
    assert main(["convert", doc_path, str(out_path)]) == 0
    err = capsys.readouterr().err
    assert "scenarios" in err
    assert out_path.read_text(encoding="utf-8").startswith("demo,A,B,C")


def test_convert_xml_import(tmp_path):
    xml_path = tmp_path / "in.xml"
    xml_path.write_text(
        '<map name="imported"><concept id="a"/><concept id="b"/>'
        '<relationship source="a" target="b" weight="0.5"/></map>',
        encoding="utf-8",
    )
    out_path = tmp_path / "out.json"
    assert main(["convert", str(xml_path), str(out_path)]) == 0
    obj = json.loads(out_path.read_text(encoding="utf-8"))
    assert obj["model"]["name"] == "imported"


def test_convert_to_xml_rejected(doc_path, tmp_path):
    assert main(["convert", doc_path, str(tmp_path / "out.xml")]) == 2


def test_convert_round_trip_preserves_weights(doc_path, tmp_path):
    csv_path = tmp_path / "mid.csv"
    back_path = tmp_path / "back.json"
    assert main(["convert", doc_path, str(csv_path)]) == 0
    assert main(["convert", str(csv_path), str(back_path)]) == 0
    obj = json.loads(back_path.read_text(encoding="utf-8"))
    weights = {
        (e["source"], e["target"]): e["weight"] for e in obj["model"]["edges"]
    }
    assert weights == {("A", "B"): 0.5, ("B", "C"): -0.25}


# ---- reproduce-paper ----


def test_reproduce_paper_human(capsys):
    assert main(["reproduce-paper"]) == 0
    out = capsys.readouterr().out
    assert "paper-scenario-1" in out
    assert "best config:" in out
    assert "R2" in out


def test_reproduce_paper_structured_and_deterministic(capsys):
    assert main(["reproduce-paper", "--format", "structured"]) == 0
    a = capsys.readouterr().out
    assert main(["reproduce-paper", "--format", "structured"]) == 0
    b = capsys.readouterr().out
    assert a == b
    obj = json.loads(a)
    assert obj["fixtures"] == [
        "paper-scenario-1",
        "paper-scenario-2",
        "paper-scenario-3",
    ]
    assert obj["calibration"]["best"]["sign_agreement"] >= 0.8


def test_reproduce_paper_write_docs(tmp_path, capsys):
    target = tmp_path / "calibration.md"
    assert main(["reproduce-paper", "--write-docs", str(target)]) == 0
    text = target.read_text(encoding="utf-8")
    assert text.startswith("#")
    assert "MAD" in text
