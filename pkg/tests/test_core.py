"""Model construction and structural validation."""
import pytest

from fcmsim.core import (
    Concept,
    ConceptGroup,
    DuplicateConceptId,
    DuplicateEdge,
    Edge,
    FcmModel,
    SelfLoop,
    UnknownEndpoint,
    WeightOutOfRange,
    build_model,
    parse_group,
    validate_model,
)


def simple_model():
    return build_model(
        "m",
        [Concept("A"), Concept("B"), Concept("C")],
        [Edge("A", "B", 0.5), Edge("B", "C", -0.25)],
    )


def test_build_model_keeps_concept_order():
    m = simple_model()
    assert m.concept_ids == ("A", "B", "C")
    assert m.index_of("C") == 2
    assert "B" in m
    assert "Z" not in m


def test_edges_sorted_by_concept_positions():
    m = build_model(
        "m",
        [Concept("A"), Concept("B"), Concept("C")],
        [Edge("C", "A", 0.1), Edge("A", "B", 0.2), Edge("A", "C", 0.3)],
    )
    assert [(e.source, e.target) for e in m.edges] == [
        ("A", "B"),
        ("A", "C"),
        ("C", "A"),
    ]


def test_weight_lookup():
    m = simple_model()
    assert m.weight("A", "B") == 0.5
    assert m.weight("A", "C") is None
    assert [e.target for e in m.outgoing("A")] == ["B"]
    assert [e.source for e in m.incoming("C")] == ["B"]


def test_zero_weight_edge_is_structural():
    m = build_model("m", [Concept("A"), Concept("B")], [Edge("A", "B", 0.0)])
    assert m.weight("A", "B") == 0.0
    assert len(m.edges) == 1


def test_duplicate_concept_id_rejected():
    with pytest.raises(DuplicateConceptId):
        build_model("m", [Concept("A"), Concept("A")], [])


def test_unknown_endpoint_rejected():
    with pytest.raises(UnknownEndpoint):
        build_model("m", [Concept("A")], [Edge("A", "Z", 0.5)])
    with pytest.raises(UnknownEndpoint):
        build_model("m", [Concept("A")], [Edge("Z", "A", 0.5)])


def test_self_loop_rejected():
    with pytest.raises(SelfLoop):
        build_model("m", [Concept("A")], [Edge("A", "A", 0.5)])


def test_weight_out_of_range_rejected():
    with pytest.raises(WeightOutOfRange):
        build_model("m", [Concept("A"), Concept("B")], [Edge("A", "B", 1.5)])
    with pytest.raises(WeightOutOfRange):
        build_model("m", [Concept("A"), Concept("B")], [Edge("A", "B", -1.0001)])
    # the boundary itself is fine
    build_model("m", [Concept("A"), Concept("B")], [Edge("A", "B", 1.0)])
    build_model("m", [Concept("A"), Concept("B")], [Edge("A", "B", -1.0)])


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdge):
        build_model(
            "m",
            [Concept("A"), Concept("B")],
            [Edge("A", "B", 0.5), Edge("A", "B", 0.5)],
        )


def test_antiparallel_edges_allowed():
    m = build_model(
        "m",
        [Concept("A"), Concept("B")],
        [Edge("A", "B", 0.5), Edge("B", "A", -0.5)],
    )
    assert len(m.edges) == 2


def test_validate_model_collects_all_violations():
    m = FcmModel(
        name="broken",
        concepts=(Concept("A"), Concept("A"), Concept("B")),
        edges=(Edge("A", "A", 0.5), Edge("A", "Z", 2.0)),
    )
    violations = validate_model(m)
    codes = {v.code for v in violations}
    assert "DuplicateConceptId" in codes
    assert "SelfLoop" in codes
    assert "UnknownEndpoint" in codes
    assert "WeightOutOfRange" in codes
    assert len(violations) >= 4


def test_validate_model_clean():
    assert validate_model(simple_model()) == []


def test_empty_model_is_valid():
    m = build_model("empty", [], [])
    assert validate_model(m) == []
    assert m.concept_ids == ()


def test_concept_group_coercion():
    c = Concept("X", group="economy")
    assert c.group is ConceptGroup.ECONOMY
    assert Concept("Y").group is None
    with pytest.raises(ValueError):
        Concept("Z", group="not-a-group")


def test_parse_group():
    assert parse_group("civil-society") is ConceptGroup.CIVIL_SOCIETY
    with pytest.raises(ValueError):
        parse_group("nope")
