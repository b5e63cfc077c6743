"""Structural analysis of a map as a weighted signed digraph.

Centrality is the degree-sum kind: per concept, the sum of absolute
incoming plus absolute outgoing weights. Classification and the scalar
network parameters count structural edges, so zero-weight edges count
toward degrees and connection totals while contributing nothing to
centrality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .core import ConceptId, FcmModel


class ConceptClass(str, Enum):
    # in-degree 0, out-degree >= 1
    TRANSMITTER = "transmitter"
    # out-degree 0, in-degree >= 1
    RECEIVER = "receiver"
    # both >= 1
    ORDINARY = "ordinary"


@dataclass(frozen=True)
class MetricsReport:
    """Every structural number in one pass over the model.

    indegree/outdegree are weighted: sums of |w| over incoming and
    outgoing edges, so centrality_i = indegree_i + outdegree_i holds
    exactly. ``classes`` omits isolated concepts (no edges at all);
    those are listed in ``warnings`` instead of being silently classed.
    """

    concept_count: int
    connection_count: int
    density: float
    connections_per_component: float
    complexity_score: float | None
    centrality: dict[ConceptId, float]
    indegree: dict[ConceptId, float]
    outdegree: dict[ConceptId, float]
    classes: dict[ConceptId, ConceptClass]
    warnings: tuple[str, ...] = field(default=())


def _strengths(model: FcmModel) -> tuple[dict[ConceptId, float], dict[ConceptId, float]]:
    """Weighted (abs) in- and out-strength per concept, fsum for exactness."""
    in_terms: dict[ConceptId, list[float]] = {c.id: [] for c in model.concepts}
    out_terms: dict[ConceptId, list[float]] = {c.id: [] for c in model.concepts}
    for edge in model.edges:
        out_terms[edge.source].append(abs(edge.weight))
        in_terms[edge.target].append(abs(edge.weight))
    indegree = {cid: math.fsum(terms) for cid, terms in in_terms.items()}
    outdegree = {cid: math.fsum(terms) for cid, terms in out_terms.items()}
    return indegree, outdegree


def centrality(model: FcmModel) -> dict[ConceptId, float]:
    """Sum of |incoming weights| + |outgoing weights| per concept."""
    indegree, outdegree = _strengths(model)
    return {c.id: indegree[c.id] + outdegree[c.id] for c in model.concepts}


def _degree_counts(model: FcmModel) -> tuple[dict[ConceptId, int], dict[ConceptId, int]]:
    """Structural edge counts per concept (zero-weight edges included)."""
    ins = {c.id: 0 for c in model.concepts}
    outs = {c.id: 0 for c in model.concepts}
    for edge in model.edges:
        outs[edge.source] += 1
        ins[edge.target] += 1
    return ins, outs


def classify_concepts(model: FcmModel) -> dict[ConceptId, ConceptClass]:
    """Transmitter/receiver/ordinary per concept, in model order.

    Isolated concepts (no edges in either direction) are left out;
    ``isolated_concepts`` names them so callers can warn rather than
    misclassify.
    """
    ins, outs = _degree_counts(model)
    classes: dict[ConceptId, ConceptClass] = {}
    for c in model.concepts:
        i, o = ins[c.id], outs[c.id]
        if i == 0 and o == 0:
            continue
        if i == 0:
            classes[c.id] = ConceptClass.TRANSMITTER
        elif o == 0:
            classes[c.id] = ConceptClass.RECEIVER
        else:
            classes[c.id] = ConceptClass.ORDINARY
    return classes


def isolated_concepts(model: FcmModel) -> tuple[ConceptId, ...]:
    ins, outs = _degree_counts(model)
    return tuple(
        c.id for c in model.concepts if ins[c.id] == 0 and outs[c.id] == 0
    )


def structural_metrics(model: FcmModel, include_self_pairs: bool = False) -> MetricsReport:
    """Fill every MetricsReport field in one pass.

    density = E / (N * (N - 1)) by default, since self-loops are
    forbidden; ``include_self_pairs`` switches the denominator to N*N
    for comparison with tools that count the diagonal.
    """
    n = len(model.concepts)
    e = len(model.edges)
    indegree, outdegree = _strengths(model)
    cent = {c.id: indegree[c.id] + outdegree[c.id] for c in model.concepts}
    classes = classify_concepts(model)
    isolated = isolated_concepts(model)

    pairs = n * n if include_self_pairs else n * (n - 1)
    density = e / pairs if pairs > 0 else 0.0
    per_component = e / n if n > 0 else 0.0
    transmitters = sum(1 for k in classes.values() if k is ConceptClass.TRANSMITTER)
    receivers = sum(1 for k in classes.values() if k is ConceptClass.RECEIVER)
    complexity = receivers / transmitters if transmitters > 0 else None

    warnings = tuple(f"isolated concept: {cid}" for cid in isolated)
    return MetricsReport(
        concept_count=n,
        connection_count=e,
        density=density,
        connections_per_component=per_component,
        complexity_score=complexity,
        centrality=cent,
        indegree=indegree,
        outdegree=outdegree,
        classes=classes,
        warnings=warnings,
    )


def rank_by_centrality(
    model: FcmModel, top_k: int | None = None
) -> list[tuple[ConceptId, float]]:
    """Concepts by descending centrality; ties keep model concept order.

    Returns min(top_k, concept_count) entries; top_k=None means all.
    """
    if top_k is not None and top_k < 1:
        raise ValueError(f"top_k must be >= 1: {top_k}")
    cent = centrality(model)
    ranked = sorted(
        cent.items(), key=lambda kv: (-kv[1], model.index_of(kv[0]))
    )
    return ranked if top_k is None else ranked[:top_k]


def report_to_obj(report: MetricsReport) -> dict:
    """Plain-data form of a report, shared by the CLI and the service."""
    return {
        "concept_count": report.concept_count,
        "connection_count": report.connection_count,
        "density": report.density,
        "connections_per_component": report.connections_per_component,
        "complexity_score": report.complexity_score,
        "centrality": dict(report.centrality),
        "indegree": dict(report.indegree),
        "outdegree": dict(report.outdegree),
        "classes": {cid: kind.value for cid, kind in report.classes.items()},
        "warnings": list(report.warnings),
    }
