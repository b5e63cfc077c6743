"""Persistence and interchange for models, scenarios, and configs.

Three textual forms:

- a delimited adjacency-matrix grid (CSV): first row and first column
  both list the concept ids, the corner cell is the model name, cell
  (row, col) is the weight of the edge row-concept -> column-concept.
  An empty cell means "no edge"; a literal 0 is a real zero-weight
  edge, and that distinction survives round-trips.
- a structured JSON document bundling a model with optional scenarios
  and an optional inference config; unknown fields are preserved on
  round-trip so future additions don't destroy data.
- a best-effort XML import for maps exported by the Mental Modeler
  family of tools (read-only; anything unmapped becomes a warning).

All positions in errors are grid coordinates (1-based row and column,
header included) or JSON paths like ``/model/edges/3/weight``.
"""
from __future__ import annotations

import csv
import io as _stdio
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from decimal import Decimal

from .core import (
    Concept,
    ConceptId,
    Edge,
    FcmModel,
    ModelError,
    Violation,
    build_model,
    parse_group,
    validate_model,
)
from .inference import InferenceConfig, config_from_obj, config_to_obj
from .scenario import ScenarioSpec, scenario_from_obj, scenario_to_obj

FORMAT_VERSION = "1.0"


# ---- delimited matrix format ----


class MatrixParseError(ValueError):
    """Base for grid-format problems; carries 1-based row/col."""

    def __init__(self, message: str, row: int, col: int):
        super().__init__(f"row {row}, column {col}: {message}")
        self.row = row
        self.col = col


class HeaderMismatch(MatrixParseError):
    pass


class MalformedNumber(MatrixParseError):
    pass


class WeightOutOfRange(MatrixParseError):
    pass


def format_weight(value: float) -> str:
    """Decimal text for a weight: shortest form up to 6 fractional digits
    that reparses to exactly the same float; falls back to the full
    decimal expansion (never scientific notation) when 6 digits cannot
    represent the value exactly."""
    for digits in range(7):
        text = f"{value:.{digits}f}"
        if float(text) == value:
            return text
    text = repr(value)
    if "e" not in text and "E" not in text:
        return text
    return format(Decimal(value), "f")


def parse_matrix_delimited(text: str) -> FcmModel:
    """Parse the grid format into a model.

    Concept order equals header order; the corner cell becomes the
    model name. Raises HeaderMismatch when the first column does not
    repeat the header ids, MalformedNumber / WeightOutOfRange with cell
    coordinates, and the usual structural errors (e.g. a non-empty
    diagonal cell is a self-loop).
    """
    reader = csv.reader(_stdio.StringIO(text))
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise MatrixParseError(f"unreadable grid: {exc}", row=reader.line_num or 1, col=1)
    if not rows or (len(rows) == 1 and rows[0] == []):
        raise HeaderMismatch("missing header row", row=1, col=1)
    header = rows[0]
    if not header:
        raise HeaderMismatch("missing header row", row=1, col=1)
    name = header[0]
    ids: list[ConceptId] = []
    for j, cell in enumerate(header[1:], start=2):
        concept_id = cell.strip()
        if not concept_id:
            raise HeaderMismatch("empty concept id in header", row=1, col=j)
        ids.append(concept_id)

    body = [r for r in rows[1:] if r != []]
    if len(body) != len(ids):
        raise HeaderMismatch(
            f"header lists {len(ids)} concepts but grid has {len(body)} rows",
            row=len(rows), col=1,
        )

    edges: list[Edge] = []
    for r, row in enumerate(body, start=2):
        row_id = row[0].strip() if row else ""
        expected = ids[r - 2]
        if row_id != expected:
            raise HeaderMismatch(
                f"row id {row_id!r} does not match column id {expected!r}",
                row=r, col=1,
            )
        if len(row) > len(ids) + 1:
            raise HeaderMismatch(
                f"row has {len(row) - 1} cells, expected at most {len(ids)}",
                row=r, col=len(row),
            )
        for c, raw in enumerate(row[1:], start=2):
            cell = raw.strip()
            if cell == "":
                continue
            try:
                weight = float(cell)
            except ValueError:
                raise MalformedNumber(f"not a number: {raw!r}", row=r, col=c)
            if math.isnan(weight):
                raise MalformedNumber("NaN is not a weight", row=r, col=c)
            if not (-1.0 <= weight <= 1.0):
                raise WeightOutOfRange(
                    f"weight {cell} outside [-1, 1]", row=r, col=c
                )
            edges.append(Edge(source=expected, target=ids[c - 2], weight=weight))

    return build_model(name, [Concept(id=i) for i in ids], edges)


def write_matrix_delimited(model: FcmModel) -> str:
    """Grid text that parse_matrix_delimited maps back to the same
    concept order, edge set, and exact weights. Concept names, groups,
    and descriptions do not fit in this format and are dropped."""
    weights: dict[tuple[ConceptId, ConceptId], float] = {
        (e.source, e.target): e.weight for e in model.edges
    }
    out = _stdio.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    ids = list(model.concept_ids)
    writer.writerow([model.name] + ids)
    for source in ids:
        cells: list[str] = [source]
        for target in ids:
            w = weights.get((source, target))
            cells.append("" if w is None else format_weight(w))
        writer.writerow(cells)
    return out.getvalue()


# ---- structured document format ----


class DocumentError(ValueError):
    pass


class SchemaViolation(DocumentError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class UnsupportedVersion(DocumentError):
    def __init__(self, version: str):
        super().__init__(
            f"format_version {version!r} is not supported (expected major version 1)"
        )
        self.version = version


@dataclass(frozen=True)
class ModelDocument:
    """A model plus optional scenarios and config, with unknown fields
    from the source text carried along for round-tripping.

    The ``*_extra`` tuples run parallel to ``model.concepts``,
    ``model.edges``, and ``scenarios``; ``extra`` holds unknown
    top-level keys in their original order.
    """

    model: FcmModel
    scenarios: tuple[ScenarioSpec, ...] | None = None
    config: InferenceConfig | None = None
    format_version: str = FORMAT_VERSION
    extra: dict = field(default_factory=dict)
    concept_extra: tuple[dict, ...] = ()
    edge_extra: tuple[dict, ...] = ()
    scenario_extra: tuple[dict, ...] = ()


_CONCEPT_KEYS = {"id", "name", "group", "description"}
_EDGE_KEYS = {"source", "target", "weight"}
_SCENARIO_KEYS = {"name", "model_ref", "clamps", "config_override"}
_ROOT_KEYS = {"format_version", "model", "scenarios", "config"}


def _require(obj: dict, key: str, path: str) -> object:
    if key not in obj:
        raise SchemaViolation(path, f"missing required field {key!r}")
    return obj[key]


def _as_str(value: object, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolation(path, "expected a string")
    return value


def _as_number(value: object, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(path, "expected a number")
    return float(value)


def document_from_obj(obj: object) -> ModelDocument:
    """Build a document from parsed JSON, with positioned errors."""
    if not isinstance(obj, dict):
        raise SchemaViolation("/", "document must be an object")
    if "format_version" not in obj:
        raise SchemaViolation("/", "missing required field 'format_version'")
    version = _as_str(obj["format_version"], "/format_version")
    major = version.split(".", 1)[0]
    if major != "1":
        raise UnsupportedVersion(version)

    model_obj = _require(obj, "model", "/")
    if not isinstance(model_obj, dict):
        raise SchemaViolation("/model", "expected an object")
    name = _as_str(model_obj.get("name", ""), "/model/name")

    concepts_obj = _require(model_obj, "concepts", "/model")
    if not isinstance(concepts_obj, list):
        raise SchemaViolation("/model/concepts", "expected an array")
    concepts: list[Concept] = []
    concept_extra: list[dict] = []
    for i, item in enumerate(concepts_obj):
        path = f"/model/concepts/{i}"
        if not isinstance(item, dict):
            raise SchemaViolation(path, "expected an object")
        concept_id = _as_str(_require(item, "id", path), f"{path}/id")
        if not concept_id.strip():
            raise SchemaViolation(f"{path}/id", "concept id must be non-empty")
        group = None
        if item.get("group") is not None:
            try:
                group = parse_group(_as_str(item["group"], f"{path}/group"))
            except ValueError as exc:
                raise SchemaViolation(f"{path}/group", str(exc))
        concepts.append(
            Concept(
                id=concept_id,
                name=_as_str(item.get("name", ""), f"{path}/name"),
                group=group,
                description=_as_str(item.get("description", ""), f"{path}/description"),
            )
        )
        concept_extra.append({k: v for k, v in item.items() if k not in _CONCEPT_KEYS})

    edges_obj = _require(model_obj, "edges", "/model")
    if not isinstance(edges_obj, list):
        raise SchemaViolation("/model/edges", "expected an array")
    edges: list[Edge] = []
    edge_extra_by_pair: dict[tuple[str, str], dict] = {}
    for i, item in enumerate(edges_obj):
        path = f"/model/edges/{i}"
        if not isinstance(item, dict):
            raise SchemaViolation(path, "expected an object")
        source = _as_str(_require(item, "source", path), f"{path}/source")
        target = _as_str(_require(item, "target", path), f"{path}/target")
        weight = _as_number(_require(item, "weight", path), f"{path}/weight")
        if math.isnan(weight) or not (-1.0 <= weight <= 1.0):
            raise SchemaViolation(f"{path}/weight", f"weight {weight} outside [-1, 1]")
        edges.append(Edge(source=source, target=target, weight=weight))
        edge_extra_by_pair[(source, target)] = {
            k: v for k, v in item.items() if k not in _EDGE_KEYS
        }

    try:
        model = build_model(name, concepts, edges)
    except ModelError as exc:
        raise SchemaViolation("/model", str(exc))
    # extras realigned to the model's canonical edge order
    edge_extra = tuple(edge_extra_by_pair[(e.source, e.target)] for e in model.edges)

    scenarios: tuple[ScenarioSpec, ...] | None = None
    scenario_extra: list[dict] = []
    if "scenarios" in obj:
        scen_obj = obj["scenarios"]
        if not isinstance(scen_obj, list):
            raise SchemaViolation("/scenarios", "expected an array")
        parsed: list[ScenarioSpec] = []
        for i, item in enumerate(scen_obj):
            path = f"/scenarios/{i}"
            if not isinstance(item, dict):
                raise SchemaViolation(path, "expected an object")
            _as_str(_require(item, "name", path), f"{path}/name")
            clamps_obj = item.get("clamps", {})
            if not isinstance(clamps_obj, dict):
                raise SchemaViolation(f"{path}/clamps", "expected an object")
            for cid, value in clamps_obj.items():
                v = _as_number(value, f"{path}/clamps/{cid}")
                if math.isnan(v) or not (-1.0 <= v <= 1.0):
                    raise SchemaViolation(
                        f"{path}/clamps/{cid}", f"clamp {value} outside [-1, 1]"
                    )
            try:
                parsed.append(scenario_from_obj(item, default_model_ref=model.name))
            except ValueError as exc:
                raise SchemaViolation(path, str(exc))
            scenario_extra.append(
                {k: v for k, v in item.items() if k not in _SCENARIO_KEYS}
            )
        scenarios = tuple(parsed)

    config: InferenceConfig | None = None
    if "config" in obj:
        try:
            config = config_from_obj(obj["config"])
        except ValueError as exc:
            raise SchemaViolation("/config", str(exc))

    extra = {k: v for k, v in obj.items() if k not in _ROOT_KEYS}
    return ModelDocument(
        model=model,
        scenarios=scenarios,
        config=config,
        format_version=version,
        extra=extra,
        concept_extra=tuple(concept_extra),
        edge_extra=edge_extra,
        scenario_extra=tuple(scenario_extra),
    )


def document_to_obj(doc: ModelDocument) -> dict:
    """Plain-data form with stable key order; optional empty fields are
    omitted so output stays close to what a person would write."""
    concepts = []
    for i, concept in enumerate(doc.model.concepts):
        item: dict = {"id": concept.id}
        if concept.name:
            item["name"] = concept.name
        if concept.group is not None:
            item["group"] = concept.group.value
        if concept.description:
            item["description"] = concept.description
        if i < len(doc.concept_extra):
            item.update(doc.concept_extra[i])
        concepts.append(item)

    edges = []
    for i, edge in enumerate(doc.model.edges):
        item = {"source": edge.source, "target": edge.target, "weight": edge.weight}
        if i < len(doc.edge_extra):
            item.update(doc.edge_extra[i])
        edges.append(item)

    obj: dict = {
        "format_version": doc.format_version,
        "model": {"name": doc.model.name, "concepts": concepts, "edges": edges},
    }
    if doc.scenarios is not None:
        rendered = []
        for i, spec in enumerate(doc.scenarios):
            item = scenario_to_obj(spec)
            if i < len(doc.scenario_extra):
                item.update(doc.scenario_extra[i])
            rendered.append(item)
        obj["scenarios"] = rendered
    if doc.config is not None:
        obj["config"] = config_to_obj(doc.config)
    obj.update(doc.extra)
    return obj


def read_document(text: str) -> ModelDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("/", f"not valid JSON: {exc.msg} (line {exc.lineno})")
    return document_from_obj(obj)


def write_document(doc: ModelDocument) -> str:
    return json.dumps(document_to_obj(doc), indent=2, ensure_ascii=False) + "\n"


# ---- vendor XML import (read-only, best-effort) ----


class XmlImportError(ValueError):
    pass


class XmlMalformed(XmlImportError):
    pass


class NoConceptsFound(XmlImportError):
    pass


class ImportValidationFailed(XmlImportError):
    def __init__(self, violations: list[Violation]):
        lines = "; ".join(v.message for v in violations)
        super().__init__(f"imported map is not a valid model: {lines}")
        self.violations = violations


_CONCEPT_TAGS = {"concept", "node", "component"}
_EDGE_TAGS = {"relationship", "relation", "connection", "edge", "link"}
_CONTAINER_TAGS = {
    "map", "model", "cmap", "fcm", "concepts", "nodes", "components",
    "relationships", "relations", "connections", "edges", "links",
}
_ID_ATTRS = ("id", "key")
_NAME_ATTRS = ("name", "label", "title")
_SOURCE_ATTRS = ("source", "from", "origin", "start")
_TARGET_ATTRS = ("target", "to", "destination", "end")
_WEIGHT_ATTRS = ("weight", "value", "influence", "strength")


def _local(tag: str) -> str:
    # strip any {namespace} prefix
    return tag.rsplit("}", 1)[-1].lower()


def _attr_or_child(element: ET.Element, names: tuple[str, ...]) -> str | None:
    for key, value in element.attrib.items():
        if _local(key) in names:
            return value.strip()
    for child in element:
        if _local(child.tag) in names and child.text is not None:
            return child.text.strip()
    return None


def import_mentalmodeler_xml(text: str) -> ModelDocument:
    """Extract concepts and weighted edges from a vendor XML export.

    Tolerant by design: element and attribute names are matched against
    a family of spellings, unknown elements are skipped with a warning,
    and relationships may reference concepts by id or by display name.
    The result must pass the same validation as any other model; if it
    does not, the import fails with the collected violations.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlMalformed(f"not well-formed XML: {exc}")

    concepts: list[Concept] = []
    edges_raw: list[tuple[str, str, str, ET.Element]] = []
    warnings: list[str] = []
    known_child_tags = set(_ID_ATTRS) | set(_NAME_ATTRS) | set(_SOURCE_ATTRS) | set(
        _TARGET_ATTRS
    ) | set(_WEIGHT_ATTRS) | {"description", "notes", "group"}
    unknown_tags: set[str] = set()

    def walk(element: ET.Element, inside_known: bool) -> None:
        for child in element:
            tag = _local(child.tag)
            if tag in _CONCEPT_TAGS:
                concept_id = _attr_or_child(child, _ID_ATTRS)
                concept_name = _attr_or_child(child, _NAME_ATTRS)
                if concept_id is None and concept_name is None:
                    warnings.append(
                        f"<{tag}> element without id or name ignored"
                    )
                    continue
                concepts.append(
                    Concept(
                        id=concept_id if concept_id is not None else str(concept_name),
                        name=concept_name or "",
                    )
                )
            elif tag in _EDGE_TAGS:
                source = _attr_or_child(child, _SOURCE_ATTRS)
                target = _attr_or_child(child, _TARGET_ATTRS)
                weight = _attr_or_child(child, _WEIGHT_ATTRS)
                if source is None or target is None:
                    warnings.append(
                        f"<{tag}> element missing source or target ignored"
                    )
                    continue
                if weight is None:
                    warnings.append(
                        f"<{tag}> {source} -> {target} has no weight; skipped"
                    )
                    continue
                edges_raw.append((source, target, weight, child))
            elif tag in _CONTAINER_TAGS:
                walk(child, inside_known=True)
            else:
                if not (inside_known and tag in known_child_tags):
                    unknown_tags.add(tag)

    walk(root, inside_known=_local(root.tag) in _CONTAINER_TAGS)
    for tag in sorted(unknown_tags):
        warnings.append(f"unrecognized element <{tag}> ignored")

    if not concepts:
        raise NoConceptsFound("no concept elements found in the XML")

    by_name = {c.name: c.id for c in concepts if c.name}
    ids = {c.id for c in concepts}

    def resolve(ref: str) -> str:
        if ref in ids:
            return ref
        if ref in by_name:
            return by_name[ref]
        return ref  # left as-is; validation reports it

    edges: list[Edge] = []
    for source, target, weight_text, _elem in edges_raw:
        try:
            weight = float(weight_text)
        except ValueError:
            warnings.append(
                f"relationship {source} -> {target} has non-numeric weight "
                f"{weight_text!r}; skipped"
            )
            continue
        edges.append(Edge(source=resolve(source), target=resolve(target), weight=weight))

    model_name = _attr_or_child(root, _NAME_ATTRS) or "imported"
    candidate = FcmModel(name=model_name, concepts=tuple(concepts), edges=tuple(edges))
    violations = validate_model(candidate)
    if violations:
        raise ImportValidationFailed(violations)
    model = build_model(model_name, concepts, edges)

    extra: dict = {}
    if warnings:
        extra["import_warnings"] = warnings
    return ModelDocument(
        model=model,
        extra=extra,
        concept_extra=tuple({} for _ in model.concepts),
        edge_extra=tuple({} for _ in model.edges),
    )
