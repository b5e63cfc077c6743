"""Bundled scenario data: structure, clamps, and recorded outcomes."""
import pytest

from fcmsim.fixtures import (
    FIXTURE_IDS,
    UnknownFixture,
    load_fixture_document,
    load_fixture_matrix,
    load_reference_outcomes,
)
from fcmsim.io import parse_matrix_delimited
from fcmsim.metrics import ConceptClass, structural_metrics
from fcmsim.scenario import check_structural_equivalence

CONCEPT_ORDER = (
    "P1", "P2", "P3", "P4", "P5", "P6",
    "R1", "R2", "E1", "E2",
    "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8",
    "I1", "I2", "I3", "I4", "I5",
)


def test_fixture_ids_stable():
    assert FIXTURE_IDS == (
        "paper-scenario-1",
        "paper-scenario-2",
        "paper-scenario-3",
    )


def test_unknown_fixture_raises():
    with pytest.raises(UnknownFixture):
        load_fixture_document("paper-scenario-9")


def test_fixture_documents_load_and_share_structure():
    docs = [load_fixture_document(fid) for fid in FIXTURE_IDS]
    for doc in docs:
        assert doc.model.concept_ids == CONCEPT_ORDER
        assert len(doc.model.edges) == 41
        assert len(doc.scenarios) == 1
    identity = check_structural_equivalence([d.model for d in docs])
    assert identity.identical


def test_fixture_structural_metrics_frozen_values():
    for fid in FIXTURE_IDS:
        rep = structural_metrics(load_fixture_document(fid).model)
        assert rep.concept_count == 23
        assert rep.connection_count == 41
        assert rep.density == pytest.approx(41 / 506, abs=1e-12)
        assert rep.connections_per_component == pytest.approx(41 / 23, abs=1e-12)
        assert rep.complexity_score == pytest.approx(1 / 6, abs=1e-12)
        transmitters = {
            c for c, k in rep.classes.items() if k is ConceptClass.TRANSMITTER
        }
        receivers = {c for c, k in rep.classes.items() if k is ConceptClass.RECEIVER}
        assert transmitters == {"P1", "R1", "E1", "S1", "S2", "S5"}
        assert receivers == {"I1"}
        assert rep.warnings == ()


def test_fixture_csv_matches_document_model():
    for fid in FIXTURE_IDS:
        doc_model = load_fixture_document(fid).model
        csv_model = parse_matrix_delimited(load_fixture_matrix(fid))
        assert csv_model.name == doc_model.name
        assert csv_model.concept_ids == doc_model.concept_ids
        assert [(e.source, e.target, e.weight) for e in csv_model.edges] == [
            (e.source, e.target, e.weight) for e in doc_model.edges
        ]


def test_fixture_clamp_sets():
    clamps = {
        fid: load_fixture_document(fid).scenarios[0].clamps for fid in FIXTURE_IDS
    }
    drivers = {"P1", "R1", "E1", "S1", "S2", "S5"}
    for fid in FIXTURE_IDS:
        assert all(clamps[fid][d] == 0.5 for d in drivers)
    assert set(clamps["paper-scenario-1"]) == drivers | {
        "P3", "P4", "P6", "R2", "E2", "S3", "S4", "S8"
    }
    assert set(clamps["paper-scenario-2"]) == set(clamps["paper-scenario-1"])
    assert set(clamps["paper-scenario-3"]) == drivers | {
        "P2", "P3", "P4", "P5", "P6", "R2", "E2", "S3", "S4", "S8"
    }
    assert clamps["paper-scenario-1"]["S8"] == 0.5
    assert clamps["paper-scenario-2"]["S8"] == 0.75
    assert clamps["paper-scenario-3"]["S8"] == -0.5
    # the two concepts published as +-0.00 are not clamped at all
    assert "P2" not in clamps["paper-scenario-1"]
    assert "P5" not in clamps["paper-scenario-2"]


def test_reference_outcomes_shape():
    ref = load_reference_outcomes()
    assert set(ref.cells) == set(FIXTURE_IDS)
    assert ref.cell_count() == 51
    for fid in FIXTURE_IDS:
        assert len(ref.cells[fid]) == 17
        assert all(-1.0 <= v <= 1.0 for v in ref.cells[fid].values())


def test_reference_sign_corrections_apply_only_to_third_scenario():
    ref = load_reference_outcomes()
    assert set(ref.sign_corrections) == {"paper-scenario-3"}
    assert set(ref.sign_corrections["paper-scenario-3"]) == {"I1", "I2", "I4"}
    corrected = ref.corrected("paper-scenario-3")
    raw = ref.cells["paper-scenario-3"]
    for cid in ("I1", "I2", "I4"):
        assert corrected[cid] == -raw[cid]
    # untouched cells stay as printed
    assert corrected["I5"] == raw["I5"]
    assert ref.corrected("paper-scenario-1") == ref.cells["paper-scenario-1"]
