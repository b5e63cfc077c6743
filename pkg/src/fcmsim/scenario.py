"""Scenario definitions, multi-scenario comparison, and report rendering.

A scenario is a named clamp set tied to the model that carries its
weights. Comparing scenarios means running each against its own model
(weights may differ per scenario), checking that the models share one
structural skeleton, and laying the relative changes side by side.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .core import ConceptId, FcmModel
from .inference import (
    ACTIVATION_MAX,
    ACTIVATION_MIN,
    ClampOutOfRange,
    InferenceConfig,
    RunStatus,
    ScenarioOutcome,
    config_from_obj,
    config_to_obj,
    outcome_from_obj,
    outcome_to_obj,
    run_scenario,
)
from .metrics import rank_by_centrality


@dataclass(frozen=True)
class ScenarioSpec:
    """A named what-if: hold these concepts at these values.

    ``model_ref`` names the model carrying this scenario's weights. A
    concept absent from ``clamps`` is unclamped; there is no such thing
    as a blank clamp.
    """

    name: str
    model_ref: str
    clamps: Mapping[ConceptId, float]
    config_override: InferenceConfig | None = None

    def __post_init__(self) -> None:
        clamps = dict(self.clamps)
        for concept_id, value in clamps.items():
            if not (ACTIVATION_MIN <= value <= ACTIVATION_MAX):
                raise ClampOutOfRange(concept_id, value)
        object.__setattr__(self, "clamps", clamps)


class ScenarioError(ValueError):
    """Base class for comparison assembly problems."""


class UnknownModelRef(ScenarioError):
    def __init__(self, ref: str, scenario: str):
        super().__init__(f"scenario {scenario!r} references unknown model {ref!r}")
        self.ref = ref
        self.scenario = scenario


class DuplicateScenarioName(ScenarioError):
    def __init__(self, name: str):
        super().__init__(f"duplicate scenario name: {name!r}")
        self.name = name


@dataclass(frozen=True)
class StructuralDiff:
    """How one model deviates from the reference skeleton."""

    position: int
    model_name: str
    missing_concepts: tuple[ConceptId, ...]
    extra_concepts: tuple[ConceptId, ...]
    order_mismatch: bool
    missing_edges: tuple[tuple[ConceptId, ConceptId], ...]
    extra_edges: tuple[tuple[ConceptId, ConceptId], ...]


@dataclass(frozen=True)
class StructuralIdentityReport:
    """Whether a set of models shares one skeleton, and if not, how not.

    The first model is the reference; ``diffs`` holds one entry per
    model that deviates from it (same concept ids in the same order,
    same (source, target) edge set; weights are allowed to differ).
    """

    identical: bool
    reference: str
    diffs: tuple[StructuralDiff, ...] = field(default=())


def check_structural_equivalence(models: Sequence[FcmModel]) -> StructuralIdentityReport:
    """Compare every model's skeleton against the first one's."""
    if len(models) < 2:
        raise ValueError("need at least 2 models to compare")
    ref = models[0]
    ref_ids = ref.concept_ids
    ref_id_set = set(ref_ids)
    ref_pairs = {(e.source, e.target) for e in ref.edges}

    diffs: list[StructuralDiff] = []
    for pos, model in enumerate(models[1:], start=1):
        ids = model.concept_ids
        id_set = set(ids)
        pairs = {(e.source, e.target) for e in model.edges}
        missing_c = tuple(c for c in ref_ids if c not in id_set)
        extra_c = tuple(c for c in ids if c not in ref_id_set)
        order_mismatch = not missing_c and not extra_c and ids != ref_ids
        missing_e = tuple(sorted(ref_pairs - pairs))
        extra_e = tuple(sorted(pairs - ref_pairs))
        if missing_c or extra_c or order_mismatch or missing_e or extra_e:
            diffs.append(
                StructuralDiff(
                    position=pos,
                    model_name=model.name,
                    missing_concepts=missing_c,
                    extra_concepts=extra_c,
                    order_mismatch=order_mismatch,
                    missing_edges=missing_e,
                    extra_edges=extra_e,
                )
            )
    return StructuralIdentityReport(
        identical=not diffs, reference=ref.name, diffs=tuple(diffs)
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Everything needed to lay scenarios side by side.

    ``per_concept_table`` rows follow the first scenario's model
    concept order; a cell is None only when that scenario's model lacks
    the concept (impossible while structural identity holds).
    """

    scenarios: tuple[str, ...]
    structural_identity: StructuralIdentityReport
    outcomes: dict[str, ScenarioOutcome]
    centrality_rankings: dict[str, tuple[tuple[ConceptId, float], ...]]
    per_concept_table: tuple[tuple[ConceptId, tuple[float | None, ...]], ...]


def compare_scenarios(
    scenarios: Sequence[ScenarioSpec],
    models: Mapping[str, FcmModel],
    config: InferenceConfig | None = None,
) -> ComparisonReport:
    """Run every scenario and assemble the comparison.

    Each scenario resolves its own model from ``models``; the shared
    config applies unless a scenario carries an override. Column order
    equals input order. Non-convergent runs are flagged by their
    outcome status, not dropped.
    """
    if not scenarios:
        raise ScenarioError("no scenarios to compare")
    seen: set[str] = set()
    for spec in scenarios:
        if spec.name in seen:
            raise DuplicateScenarioName(spec.name)
        seen.add(spec.name)

    resolved: list[FcmModel] = []
    for spec in scenarios:
        if spec.model_ref not in models:
            raise UnknownModelRef(spec.model_ref, spec.name)
        resolved.append(models[spec.model_ref])

    if len(resolved) >= 2:
        identity = check_structural_equivalence(resolved)
    else:
        identity = StructuralIdentityReport(identical=True, reference=resolved[0].name)

    outcomes: dict[str, ScenarioOutcome] = {}
    rankings: dict[str, tuple[tuple[ConceptId, float], ...]] = {}
    for spec, model in zip(scenarios, resolved):
        outcomes[spec.name] = run_scenario(model, spec, config)
        rankings[spec.name] = tuple(rank_by_centrality(model))

    rows: list[tuple[ConceptId, tuple[float | None, ...]]] = []
    for concept in resolved[0].concepts:
        cells = tuple(
            outcomes[spec.name].relative_change.get(concept.id)
            for spec in scenarios
        )
        rows.append((concept.id, cells))

    return ComparisonReport(
        scenarios=tuple(spec.name for spec in scenarios),
        structural_identity=identity,
        outcomes=outcomes,
        centrality_rankings=rankings,
        per_concept_table=tuple(rows),
    )


class ReportFormat(str, Enum):
    PLAIN_TABLE = "plain-table"
    DELIMITED = "delimited"
    STRUCTURED = "structured"


def _status_phrase(outcome: ScenarioOutcome) -> str:
    clamped = outcome.clamped
    if clamped.status is RunStatus.CONVERGED:
        return f"converged in {clamped.iterations} iterations"
    if clamped.status is RunStatus.LIMIT_CYCLE:
        return f"limit cycle (period {clamped.period}) after {clamped.iterations} iterations"
    return f"no steady state within {clamped.iterations} iterations"


def _render_plain(report: ComparisonReport) -> str:
    lines: list[str] = []
    lines.append("scenarios: " + ", ".join(report.scenarios))
    identity = report.structural_identity
    lines.append(
        "structural identity: " + ("identical" if identity.identical else "DIFFERS")
    )
    for diff in identity.diffs:
        parts = []
        if diff.missing_concepts:
            parts.append("missing concepts " + ", ".join(diff.missing_concepts))
        if diff.extra_concepts:
            parts.append("extra concepts " + ", ".join(diff.extra_concepts))
        if diff.order_mismatch:
            parts.append("concept order differs")
        if diff.missing_edges:
            parts.append(
                "missing edges " + ", ".join(f"{s}->{t}" for s, t in diff.missing_edges)
            )
        if diff.extra_edges:
            parts.append(
                "extra edges " + ", ".join(f"{s}->{t}" for s, t in diff.extra_edges)
            )
        lines.append(f"  vs {diff.model_name or f'model #{diff.position}'}: " + "; ".join(parts))
    for name in report.scenarios:
        lines.append(f"  {name}: {_status_phrase(report.outcomes[name])}")
    lines.append("")

    # relative-change table, 2-decimal display
    headers = ["concept"] + list(report.scenarios)
    rows = [
        [cid] + ["" if v is None else f"{v:+.2f}" for v in cells]
        for cid, cells in report.per_concept_table
    ]
    widths = [
        max(len(headers[col]), *(len(r[col]) for r in rows)) if rows else len(headers[col])
        for col in range(len(headers))
    ]
    lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip())
    for r in rows:
        lines.append(
            "  ".join(
                (r[i].ljust(widths[i]) if i == 0 else r[i].rjust(widths[i]))
                for i in range(len(r))
            ).rstrip()
        )
    lines.append("")
    lines.append("centrality (top 5):")
    for name in report.scenarios:
        top = report.centrality_rankings[name][:5]
        lines.append(
            f"  {name}: " + ", ".join(f"{cid} {value:.2f}" for cid, value in top)
        )
    return "\n".join(lines) + "\n"


def _render_delimited(report: ComparisonReport) -> str:
    # 4 decimal places; parsing this back reproduces values at that precision
    lines = ["concept," + ",".join(report.scenarios)]
    for cid, cells in report.per_concept_table:
        rendered = ["" if v is None else f"{v:.4f}" for v in cells]
        lines.append(cid + "," + ",".join(rendered))
    return "\n".join(lines) + "\n"


def identity_to_obj(identity: StructuralIdentityReport) -> dict:
    return {
        "identical": identity.identical,
        "reference": identity.reference,
        "diffs": [
            {
                "position": d.position,
                "model_name": d.model_name,
                "missing_concepts": list(d.missing_concepts),
                "extra_concepts": list(d.extra_concepts),
                "order_mismatch": d.order_mismatch,
                "missing_edges": [list(p) for p in d.missing_edges],
                "extra_edges": [list(p) for p in d.extra_edges],
            }
            for d in identity.diffs
        ],
    }


def identity_from_obj(obj: dict) -> StructuralIdentityReport:
    return StructuralIdentityReport(
        identical=bool(obj["identical"]),
        reference=str(obj["reference"]),
        diffs=tuple(
            StructuralDiff(
                position=int(d["position"]),
                model_name=str(d["model_name"]),
                missing_concepts=tuple(d["missing_concepts"]),
                extra_concepts=tuple(d["extra_concepts"]),
                order_mismatch=bool(d["order_mismatch"]),
                missing_edges=tuple((s, t) for s, t in d["missing_edges"]),
                extra_edges=tuple((s, t) for s, t in d["extra_edges"]),
            )
            for d in obj["diffs"]
        ),
    )


def report_to_obj(report: ComparisonReport) -> dict:
    return {
        "scenarios": list(report.scenarios),
        "structural_identity": identity_to_obj(report.structural_identity),
        "outcomes": {
            name: outcome_to_obj(report.outcomes[name]) for name in report.scenarios
        },
        "centrality_rankings": {
            name: [[cid, value] for cid, value in report.centrality_rankings[name]]
            for name in report.scenarios
        },
        "per_concept_table": [
            [cid, list(cells)] for cid, cells in report.per_concept_table
        ],
    }


def report_from_obj(obj: dict) -> ComparisonReport:
    return ComparisonReport(
        scenarios=tuple(obj["scenarios"]),
        structural_identity=identity_from_obj(obj["structural_identity"]),
        outcomes={
            name: outcome_from_obj(o) for name, o in obj["outcomes"].items()
        },
        centrality_rankings={
            name: tuple((cid, float(value)) for cid, value in pairs)
            for name, pairs in obj["centrality_rankings"].items()
        },
        per_concept_table=tuple(
            (
                cid,
                tuple(None if v is None else float(v) for v in cells),
            )
            for cid, cells in obj["per_concept_table"]
        ),
    )


def render_report(report: ComparisonReport, format: ReportFormat | str) -> str:
    """Deterministic text rendering of a comparison.

    plain-table is for terminals (2-decimal display); delimited is CSV
    at 4 decimals; structured is full-precision and parses back to an
    equal report via parse_report.
    """
    fmt = ReportFormat(format)
    if fmt is ReportFormat.PLAIN_TABLE:
        return _render_plain(report)
    if fmt is ReportFormat.DELIMITED:
        return _render_delimited(report)
    return json.dumps(report_to_obj(report), indent=2, ensure_ascii=False) + "\n"


def parse_report(text: str) -> ComparisonReport:
    """Inverse of render_report for the structured format."""
    return report_from_obj(json.loads(text))


def scenario_to_obj(spec: ScenarioSpec) -> dict:
    obj: dict = {
        "name": spec.name,
        "model_ref": spec.model_ref,
        "clamps": dict(spec.clamps),
    }
    if spec.config_override is not None:
        obj["config_override"] = config_to_obj(spec.config_override)
    return obj


def scenario_from_obj(obj: dict, default_model_ref: str = "") -> ScenarioSpec:
    override = obj.get("config_override")
    return ScenarioSpec(
        name=str(obj["name"]),
        model_ref=str(obj.get("model_ref", default_model_ref)),
        clamps={str(k): float(v) for k, v in obj.get("clamps", {}).items()},
        config_override=None if override is None else config_from_obj(override),
    )
