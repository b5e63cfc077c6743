"""Fuzzy cognitive map simulation toolkit.

Build weighted signed digraphs of concepts, run clamped what-if
scenarios to a steady state, and compare the outcomes. The CLI lives
in fcmsim.cli, the HTTP service in fcmsim.service; neither is imported
here so plain library use stays dependency-light.
"""
from __future__ import annotations

from .core import (
    Concept,
    ConceptGroup,
    DuplicateConceptId,
    DuplicateEdge,
    Edge,
    FcmModel,
    ModelError,
    SelfLoop,
    UnknownEndpoint,
    Violation,
    WeightOutOfRange,
    build_model,
    validate_model,
)
from .inference import (
    ClampOutOfRange,
    InferenceConfig,
    InferenceError,
    KernelKind,
    KernelSpec,
    RunStatus,
    ScenarioOutcome,
    SquashKind,
    SquashSpec,
    SteadyStateResult,
    UnknownClampId,
    run_scenario,
    run_to_steady_state,
    squash,
    step,
)
from .io import (
    MatrixParseError,
    ModelDocument,
    SchemaViolation,
    document_from_obj,
    document_to_obj,
    import_mentalmodeler_xml,
    parse_matrix_delimited,
    read_document,
    write_document,
    write_matrix_delimited,
)
from .metrics import (
    ConceptClass,
    MetricsReport,
    centrality,
    classify_concepts,
    rank_by_centrality,
    structural_metrics,
)
from .scenario import (
    ComparisonReport,
    ReportFormat,
    ScenarioSpec,
    check_structural_equivalence,
    compare_scenarios,
    render_report,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "Concept",
    "ConceptGroup",
    "Edge",
    "FcmModel",
    "Violation",
    "build_model",
    "validate_model",
    "ModelError",
    "DuplicateConceptId",
    "DuplicateEdge",
    "SelfLoop",
    "UnknownEndpoint",
    "WeightOutOfRange",
    # inference
    "SquashKind",
    "SquashSpec",
    "KernelKind",
    "KernelSpec",
    "InferenceConfig",
    "RunStatus",
    "SteadyStateResult",
    "ScenarioOutcome",
    "InferenceError",
    "UnknownClampId",
    "ClampOutOfRange",
    "squash",
    "step",
    "run_to_steady_state",
    "run_scenario",
    # metrics
    "ConceptClass",
    "MetricsReport",
    "centrality",
    "classify_concepts",
    "rank_by_centrality",
    "structural_metrics",
    # scenario
    "ScenarioSpec",
    "ComparisonReport",
    "ReportFormat",
    "check_structural_equivalence",
    "compare_scenarios",
    "render_report",
    # io
    "ModelDocument",
    "MatrixParseError",
    "SchemaViolation",
    "parse_matrix_delimited",
    "write_matrix_delimited",
    "read_document",
    "write_document",
    "document_from_obj",
    "document_to_obj",
    "import_mentalmodeler_xml",
]
