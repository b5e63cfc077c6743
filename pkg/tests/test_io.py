"""File formats: delimited matrix, JSON document, vendor XML import."""
import json

import pytest
from hypothesis import given, settings, strategies as st

from fcmsim.core import Concept, Edge, ModelError, build_model
from fcmsim.inference import InferenceConfig
from fcmsim.io import (
    HeaderMismatch,
    ImportValidationFailed,
    MalformedNumber,
    MatrixParseError,
    ModelDocument,
    NoConceptsFound,
    SchemaViolation,
    UnsupportedVersion,
    WeightOutOfRange,
    XmlMalformed,
    document_from_obj,
    document_to_obj,
    format_weight,
    import_mentalmodeler_xml,
    parse_matrix_delimited,
    read_document,
    write_document,
    write_matrix_delimited,
)
from fcmsim.scenario import ScenarioSpec

settings.register_profile("io", deadline=None, max_examples=60)
settings.load_profile("io")


def sample_model():
    return build_model(
        "sample",
        [Concept("A"), Concept("B"), Concept("C")],
        [Edge("A", "B", 0.5), Edge("B", "C", -0.25), Edge("A", "C", 0.0)],
    )


# ---- matrix format ----


def test_matrix_round_trip_preserves_structure():
    m = sample_model()
    again = parse_matrix_delimited(write_matrix_delimited(m))
    assert again.name == m.name
    assert again.concept_ids == m.concept_ids
    assert [(e.source, e.target, e.weight) for e in again.edges] == [
        (e.source, e.target, e.weight) for e in m.edges
    ]


def test_matrix_empty_cell_vs_zero_cell():
    text = "m,A,B\nA,,0\nB,,\n"
    m = parse_matrix_delimited(text)
    assert m.weight("A", "B") == 0.0
    assert m.weight("B", "A") is None
    assert len(m.edges) == 1
    # and the distinction survives writing
    out = write_matrix_delimited(m)
    assert parse_matrix_delimited(out).weight("B", "A") is None


def test_matrix_single_concept():
    m = parse_matrix_delimited("tiny,只\n只,\n")
    assert m.concept_ids == ("只",)
    assert m.edges == ()


def test_matrix_header_only_is_empty_model():
    m = parse_matrix_delimited("nothing\n")
    assert m.concept_ids == ()


def test_matrix_row_id_mismatch_positioned():
    with pytest.raises(HeaderMismatch) as err:
        parse_matrix_delimited("m,A,B\nA,,\nX,,\n")
    assert err.value.row == 3
    assert err.value.col == 1


def test_matrix_row_count_mismatch():
    with pytest.raises(HeaderMismatch):
        parse_matrix_delimited("m,A,B\nA,,\n")


def test_matrix_malformed_number_positioned():
    with pytest.raises(MalformedNumber) as err:
        parse_matrix_delimited("m,A,B\nA,,x7\nB,,\n")
    assert (err.value.row, err.value.col) == (2, 3)


def test_matrix_nan_rejected():
    with pytest.raises(MalformedNumber):
        parse_matrix_delimited("m,A,B\nA,,nan\nB,,\n")


def test_matrix_weight_out_of_range_positioned():
    with pytest.raises(WeightOutOfRange) as err:
        parse_matrix_delimited("m,A,B\nA,,1.5\nB,,\n")
    assert (err.value.row, err.value.col) == (2, 3)


def test_matrix_diagonal_value_is_self_loop():
    with pytest.raises(ModelError):
        parse_matrix_delimited("m,A,B\nA,0.5,\nB,,\n")


def test_matrix_empty_header_id():
    with pytest.raises(HeaderMismatch):
        parse_matrix_delimited("m,A,\nA,,\n,,\n")


@given(st.text(alphabet=st.characters(blacklist_characters="\x00"), max_size=300))
def test_matrix_parser_never_crashes_unexpectedly(text):
    try:
        parse_matrix_delimited(text)
    except (MatrixParseError, ModelError):
        pass


def test_format_weight_plain_decimals():
    assert format_weight(0.5) == "0.5"
    assert format_weight(-0.75) == "-0.75"
    assert format_weight(0.0) == "0"
    assert format_weight(1.0) == "1"


def test_format_weight_round_trips_exactly_without_exponents():
    values = [1 / 3, 2 / 3, 0.1 + 0.2, 1e-7, -1e-7, 0.123456, 0.9999999]
    for v in values:
        text = format_weight(v)
        assert "e" not in text and "E" not in text
        assert float(text) == v


# ---- document format ----


def sample_document():
    return ModelDocument(
        model=sample_model(),
        scenarios=(
            ScenarioSpec(name="push", model_ref="sample", clamps={"A": 0.5}),
            ScenarioSpec(
                name="pull",
                model_ref="sample",
                clamps={"B": -0.5},
                config_override=InferenceConfig(max_iterations=200),
            ),
        ),
        config=InferenceConfig(tolerance=1e-6),
    )


def test_document_round_trip():
    doc = sample_document()
    again = read_document(write_document(doc))
    assert again.model == doc.model
    assert again.scenarios == doc.scenarios
    assert again.config == doc.config
    assert again.format_version == "1.0"


def test_document_unknown_fields_survive_round_trip():
    obj = json.loads(write_document(sample_document()))
    obj["x-notes"] = {"author": "someone"}
    obj["model"]["concepts"][0]["x-color"] = "#ff0000"
    obj["model"]["edges"][0]["x-confidence"] = 0.9
    doc = document_from_obj(obj)
    out = document_to_obj(doc)
    assert out["x-notes"] == {"author": "someone"}
    assert out["model"]["concepts"][0]["x-color"] == "#ff0000"
    assert out["model"]["edges"][0]["x-confidence"] == 0.9


def test_document_missing_format_version():
    with pytest.raises(SchemaViolation) as err:
        document_from_obj({"model": {"concepts": [], "edges": []}})
    assert "format_version" in str(err.value)


def test_document_unsupported_major_version():
    with pytest.raises(UnsupportedVersion):
        document_from_obj(
            {"format_version": "2.0", "model": {"concepts": [], "edges": []}}
        )


def test_document_minor_version_accepted():
    doc = document_from_obj(
        {"format_version": "1.7", "model": {"concepts": [], "edges": []}}
    )
    assert doc.model.concept_ids == ()


def test_document_bad_weight_positioned():
    obj = {
        "format_version": "1.0",
        "model": {
            "concepts": [{"id": "A"}, {"id": "B"}],
            "edges": [{"source": "A", "target": "B", "weight": "strong"}],
        },
    }
    with pytest.raises(SchemaViolation) as err:
        document_from_obj(obj)
    assert err.value.path == "/model/edges/0/weight"


def test_document_boolean_weight_rejected():
    obj = {
        "format_version": "1.0",
        "model": {
            "concepts": [{"id": "A"}, {"id": "B"}],
            "edges": [{"source": "A", "target": "B", "weight": True}],
        },
    }
    with pytest.raises(SchemaViolation):
        document_from_obj(obj)


def test_document_negative_clamp_parses():
    obj = {
        "format_version": "1.0",
        "model": {
            "concepts": [{"id": "S8"}],
            "edges": [],
        },
        "scenarios": [{"name": "less", "clamps": {"S8": -0.5}}],
    }
    doc = document_from_obj(obj)
    assert doc.scenarios[0].clamps == {"S8": -0.5}


def test_document_clamp_out_of_range_positioned():
    obj = {
        "format_version": "1.0",
        "model": {"concepts": [{"id": "A"}], "edges": []},
        "scenarios": [{"name": "s", "clamps": {"A": 2.0}}],
    }
    with pytest.raises(SchemaViolation) as err:
        document_from_obj(obj)
    assert err.value.path.startswith("/scenarios/0")


def test_read_document_rejects_non_json():
    with pytest.raises(SchemaViolation):
        read_document("this is not json")


def test_structural_error_reported_as_schema_violation():
    obj = {
        "format_version": "1.0",
        "model": {
            "concepts": [{"id": "A"}],
            "edges": [{"source": "A", "target": "Z", "weight": 0.5}],
        },
    }
    with pytest.raises(SchemaViolation) as err:
        document_from_obj(obj)
    assert err.value.path.startswith("/model")


# ---- vendor XML import ----


XML_OK = """
<map name="imported model">
  <concepts>
    <concept id="n1" name="Energy"/>
    <concept id="n2" name="Demand"/>
  </concepts>
  <relationships>
    <relationship source="n1" target="n2" weight="0.5"/>
    <relationship source="Demand" target="Energy" weight="-0.25"/>
  </relationships>
</map>
"""


def test_xml_import_resolves_ids_and_names():
    doc = import_mentalmodeler_xml(XML_OK)
    m = doc.model
    assert m.name == "imported model"
    assert m.concept_ids == ("n1", "n2")
    assert m.weight("n1", "n2") == 0.5
    assert m.weight("n2", "n1") == -0.25


def test_xml_import_alternate_spellings():
    text = """
    <model>
      <nodes>
        <node id="a" label="Alpha"/>
        <node id="b" label="Beta"/>
      </nodes>
      <connections>
        <connection from="a" to="b" value="0.75"/>
      </connections>
    </model>
    """
    doc = import_mentalmodeler_xml(text)
    assert doc.model.weight("a", "b") == 0.75


def test_xml_import_warnings_collected():
    text = """
    <map>
      <concept id="a"/>
      <concept id="b"/>
      <relationship source="a" target="b"/>
      <sparkles/>
    </map>
    """
    doc = import_mentalmodeler_xml(text)
    warnings = doc.extra["import_warnings"]
    assert any("no weight" in w for w in warnings)
    assert any("sparkles" in w for w in warnings)
    assert doc.model.edges == ()


def test_xml_import_non_numeric_weight_skipped_with_warning():
    text = """
    <map>
      <concept id="a"/><concept id="b"/>
      <relationship source="a" target="b" weight="heavy"/>
    </map>
    """
    doc = import_mentalmodeler_xml(text)
    assert doc.model.edges == ()
    assert any("heavy" in w for w in doc.extra["import_warnings"])


def test_xml_import_validation_failure_collects_violations():
    text = """
    <map>
      <concept id="a"/>
      <relationship source="a" target="missing" weight="0.5"/>
    </map>
    """
    with pytest.raises(ImportValidationFailed) as err:
        import_mentalmodeler_xml(text)
    assert any(v.code == "UnknownEndpoint" for v in err.value.violations)


def test_xml_malformed():
    with pytest.raises(XmlMalformed):
        import_mentalmodeler_xml("<map><unclosed></map>")


def test_xml_no_concepts():
    with pytest.raises(NoConceptsFound):
        import_mentalmodeler_xml("<map><other/></map>")
