"""Core model types for fuzzy cognitive maps.

A map is a weighted signed digraph: named concepts plus directed edges
whose weights live in [-1.0, 1.0]. ``FcmModel`` itself is a plain
value; ``build_model`` is the validating constructor and
``validate_model`` the non-raising checker, so invalid instances can
exist just long enough to be described.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

ConceptId = str

WEIGHT_MIN = -1.0
WEIGHT_MAX = 1.0


class ConceptGroup(str, Enum):
    """Stakeholder grouping used for presentation and aggregation."""

    POLITICS = "politics"
    RESEARCH_AND_DEVELOPMENT = "research-and-development"
    ECONOMY = "economy"
    CIVIL_SOCIETY = "civil-society"
    INDICATOR = "indicator"


@dataclass(frozen=True)
class Concept:
    """A single node: stable short id, display name, optional grouping."""

    id: ConceptId
    name: str = ""
    group: ConceptGroup | None = None
    description: str = ""

    def __post_init__(self) -> None:
        if self.group is not None and not isinstance(self.group, ConceptGroup):
            object.__setattr__(self, "group", ConceptGroup(self.group))


@dataclass(frozen=True)
class Edge:
    """Directed influence ``source -> target`` with signed strength.

    A weight of exactly 0 is a real, structurally present edge; absence
    of influence is modelled by not having an edge at all.
    """

    source: ConceptId
    target: ConceptId
    weight: float


class ModelError(ValueError):
    """Base class for structural problems raised while building a model."""


class DuplicateConceptId(ModelError):
    def __init__(self, concept_id: ConceptId):
        super().__init__(f"duplicate concept id: {concept_id!r}")
        self.concept_id = concept_id


class UnknownEndpoint(ModelError):
    def __init__(self, source: ConceptId, target: ConceptId, endpoint: ConceptId):
        super().__init__(
            f"edge {source!r}->{target!r} references unknown concept {endpoint!r}"
        )
        self.endpoint = endpoint


class SelfLoop(ModelError):
    def __init__(self, concept_id: ConceptId):
        super().__init__(f"self-loop on {concept_id!r} is not allowed")
        self.concept_id = concept_id


class WeightOutOfRange(ModelError):
    def __init__(self, source: ConceptId, target: ConceptId, weight: float):
        super().__init__(
            f"edge {source!r}->{target!r} weight {weight} "
            f"outside [{WEIGHT_MIN}, {WEIGHT_MAX}]"
        )
        self.weight = weight


class DuplicateEdge(ModelError):
    def __init__(self, source: ConceptId, target: ConceptId):
        super().__init__(f"duplicate edge {source!r}->{target!r}")
        self.source = source
        self.target = target


@dataclass(frozen=True)
class Violation:
    """One structural problem, described as data instead of raised.

    ``code`` mirrors the ModelError subclass names so callers can map
    between the raising and reporting forms of validation; ``subject``
    names the offending concept id or "source->target" pair.
    """

    code: str
    message: str
    subject: str


@dataclass(frozen=True)
class FcmModel:
    """A fuzzy cognitive map as an immutable value.

    ``concepts`` keeps the author's ordering; that order is the
    canonical presentation order everywhere downstream (matrix rows,
    reports, tie-breaking). Use ``build_model`` to construct validated
    instances.
    """

    name: str
    concepts: tuple[Concept, ...]
    edges: tuple[Edge, ...]

    @cached_property
    def _index(self) -> dict[ConceptId, int]:
        return {c.id: pos for pos, c in enumerate(self.concepts)}

    @property
    def concept_ids(self) -> tuple[ConceptId, ...]:
        return tuple(c.id for c in self.concepts)

    def concept(self, concept_id: ConceptId) -> Concept:
        return self.concepts[self._index[concept_id]]

    def index_of(self, concept_id: ConceptId) -> int:
        return self._index[concept_id]

    def __contains__(self, concept_id: object) -> bool:
        return concept_id in self._index

    def weight(self, source: ConceptId, target: ConceptId) -> float | None:
        """Weight of source->target, or None if no such edge exists."""
        for e in self.edges:
            if e.source == source and e.target == target:
                return e.weight
        return None

    def incoming(self, target: ConceptId) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.target == target)

    def outgoing(self, source: ConceptId) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.source == source)


def validate_model(model: FcmModel) -> list[Violation]:
    """Collect every structural violation of a model, raising nothing.

    Returns an empty list exactly when the model satisfies all
    invariants: unique concept ids, edge endpoints that exist, no
    self-loops, weights within [-1, 1], at most one edge per ordered
    (source, target) pair.
    """
    violations: list[Violation] = []
    seen_ids: set[ConceptId] = set()
    for concept in model.concepts:
        if concept.id in seen_ids:
            violations.append(
                Violation(
                    code="DuplicateConceptId",
                    message=f"duplicate concept id: {concept.id!r}",
                    subject=concept.id,
                )
            )
        seen_ids.add(concept.id)

    seen_pairs: set[tuple[ConceptId, ConceptId]] = set()
    for edge in model.edges:
        subject = f"{edge.source}->{edge.target}"
        for endpoint in (edge.source, edge.target):
            if endpoint not in seen_ids:
                violations.append(
                    Violation(
                        code="UnknownEndpoint",
                        message=f"edge {subject} references unknown concept {endpoint!r}",
                        subject=subject,
                    )
                )
        if edge.source == edge.target:
            violations.append(
                Violation(
                    code="SelfLoop",
                    message=f"self-loop on {edge.source!r}",
                    subject=subject,
                )
            )
        if not (WEIGHT_MIN <= edge.weight <= WEIGHT_MAX):
            violations.append(
                Violation(
                    code="WeightOutOfRange",
                    message=f"edge {subject} weight {edge.weight} outside [-1, 1]",
                    subject=subject,
                )
            )
        pair = (edge.source, edge.target)
        if pair in seen_pairs:
            violations.append(
                Violation(
                    code="DuplicateEdge",
                    message=f"duplicate edge {subject}",
                    subject=subject,
                )
            )
        seen_pairs.add(pair)
    return violations


def build_model(
    name: str,
    concepts: Iterable[Concept],
    edges: Iterable[Edge],
) -> FcmModel:
    """Assemble and structurally validate a model.

    Raises the most specific ``ModelError`` subclass for the first
    problem found, in a deterministic order: duplicate concepts first,
    then per-edge checks in input order. Edges are stored sorted by
    (source position, target position) so two builds of the same graph
    compare equal regardless of input edge order.
    """
    concept_tuple = tuple(concepts)
    index: dict[ConceptId, int] = {}
    for concept in concept_tuple:
        if concept.id in index:
            raise DuplicateConceptId(concept.id)
        index[concept.id] = len(index)

    edge_tuple = tuple(edges)
    seen_pairs: set[tuple[ConceptId, ConceptId]] = set()
    for edge in edge_tuple:
        if edge.source not in index:
            raise UnknownEndpoint(edge.source, edge.target, edge.source)
        if edge.target not in index:
            raise UnknownEndpoint(edge.source, edge.target, edge.target)
        if edge.source == edge.target:
            raise SelfLoop(edge.source)
        if not (WEIGHT_MIN <= edge.weight <= WEIGHT_MAX):
            raise WeightOutOfRange(edge.source, edge.target, edge.weight)
        pair = (edge.source, edge.target)
        if pair in seen_pairs:
            raise DuplicateEdge(edge.source, edge.target)
        seen_pairs.add(pair)

    ordered = tuple(
        sorted(edge_tuple, key=lambda e: (index[e.source], index[e.target]))
    )
    return FcmModel(name=name, concepts=concept_tuple, edges=ordered)


def parse_group(text: str) -> ConceptGroup:
    """Resolve a serialized group label, raising ValueError when unknown."""
    try:
        return ConceptGroup(text)
    except ValueError:
        valid = ", ".join(g.value for g in ConceptGroup)
        raise ValueError(f"unknown concept group {text!r} (expected one of: {valid})")
