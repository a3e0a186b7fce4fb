"""Persistence: the publication catalog, scheme/project files, and study data.

Flat UTF-8 JSON files are the system of record (machine readable, human
understandable, diff friendly); annotation matrices and usability surveys are
additionally importable from CSV. Every document declares schemaVersion and
kind; mismatches are hard errors, never silent migrations. Loading is strict
by default: unknown fields are rejected, or, with strict=False, preserved in
the value's ``extras`` and written back on save. Nothing is dropped invisibly.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .canonical import canonical_json_bytes, parse_fraction
from .errors import (
    DuplicateDoiError,
    ParseError,
    ReferentialViolationError,
    SchemaVersionError,
    UnknownFieldError,
)
from .model import (
    ClassificationScheme,
    ClassNode,
    MappingPair,
    MappingSet,
    MetaResearchArea,
    NodeKind,
    SchemeRole,
)
from .study import AnnotationMatrix, GoldStandard, SusResponse

SCHEMA_VERSION = 1

DOI_URL_PREFIX = "https://doi.org/"


def normalize_doi(raw: str) -> str:
    """Lowercase and strip the resolver prefix before uniqueness checks."""
    doi = raw.strip().lower()
    if doi.startswith(DOI_URL_PREFIX):
        doi = doi[len(DOI_URL_PREFIX):]
    return doi


class CollectionType(enum.Enum):
    INCLUDED = "Included"
    INCLUDED_BY_REFERENCE = "IncludedByReference"

    @classmethod
    def parse(cls, label: str) -> "CollectionType":
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown collection type: {label!r}")


class CollectionSubtag(enum.Enum):
    PROPOSES_NEW = "ProposesNew"
    USES_EXISTING = "UsesExisting"
    EXTENDS_EXISTING = "ExtendsExisting"

    @classmethod
    def parse(cls, label: str) -> "CollectionSubtag":
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown collection subtag: {label!r}")


@dataclass(frozen=True)
class CatalogEntry:
    """One included publication from the review, per the extraction form."""

    doi: str
    collection_type: CollectionType
    area: MetaResearchArea
    year: int
    subtag: CollectionSubtag | None = None
    scheme_ids: tuple[str, ...] = ()
    venue: str | None = None
    classes_text: str | None = None  # verbatim source text kept alongside structure
    extras: Mapping[str, object] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "doi", normalize_doi(self.doi))
        if not self.doi:
            raise ValueError("entry DOI must be non-empty")


@dataclass(frozen=True)
class Catalog:
    """The publication catalog; entries keyed and canonically sorted by DOI."""

    entries: tuple[CatalogEntry, ...]
    extras: Mapping[str, object] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        seen: dict[str, CatalogEntry] = {}
        for entry in self.entries:
            if entry.doi in seen:
                raise DuplicateDoiError(entry.doi, seen[entry.doi].doi, entry.doi)
            seen[entry.doi] = entry
        object.__setattr__(
            self, "entries", tuple(sorted(self.entries, key=lambda e: e.doi)))

    def by_doi(self, doi: str) -> CatalogEntry | None:
        wanted = normalize_doi(doi)
        for entry in self.entries:
            if entry.doi == wanted:
                return entry
        return None


@dataclass(frozen=True)
class StatsTable:
    """Deterministic group counts over the catalog; total always equals
    the number of entries."""

    group_by: str
    rows: tuple[tuple[str, int], ...]
    total: int

    def as_document(self) -> dict:
        return {
            "groupBy": self.group_by,
            "rows": [{"key": key, "count": count} for key, count in self.rows],
            "total": self.total,
        }


def catalog_stats(catalog: Catalog, group_by: str) -> StatsTable:
    keys: list[object]
    if group_by == "year":
        keys = [entry.year for entry in catalog.entries]
    elif group_by == "area":
        keys = [entry.area.value for entry in catalog.entries]
    elif group_by == "collectionType":
        keys = [entry.collection_type.value for entry in catalog.entries]
    else:
        raise ValueError(f"unsupported grouping: {group_by!r} "
                         "(expected year, area, or collectionType)")
    counts: dict[object, int] = {}
    for key in keys:
        counts[key] = counts.get(key, 0) + 1
    rows = tuple((str(key), counts[key]) for key in sorted(counts))
    return StatsTable(group_by=group_by, rows=rows, total=len(catalog.entries))


@dataclass(frozen=True)
class Project:
    """One unification project: the unified scheme, its previous schemes,
    the mapping, threshold overrides, and a revision counter that strictly
    increases on every persisted change."""

    id: str
    unified_scheme_id: str
    previous_scheme_ids: tuple[str, ...]
    mapping: MappingSet
    thresholds: Mapping[str, str] = field(default_factory=dict)
    revision: int = 0
    extras: Mapping[str, object] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        if self.revision < 0:
            raise ValueError("revision must be non-negative")
        for name, value in self.thresholds.items():
            parse_fraction(value)  # must be an exact decimal/fraction string

    def with_mapping(self, mapping: MappingSet) -> "Project":
        """Next revision of this project with a replaced mapping."""
        return Project(id=self.id, unified_scheme_id=self.unified_scheme_id,
                       previous_scheme_ids=self.previous_scheme_ids,
                       mapping=mapping, thresholds=self.thresholds,
                       revision=self.revision + 1, extras=self.extras)


# --- document parsing -------------------------------------------------------

def _load_json(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), path=str(path)) from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=str(path), line=exc.lineno,
                         column=exc.colno) from exc
    if not isinstance(document, dict):
        raise ParseError("top level must be a JSON object", path=str(path))
    return document


def _check_header(document: Mapping, kind: str, where: str) -> None:
    version = document.get("schemaVersion")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"schemaVersion {version!r} is not supported (expected {SCHEMA_VERSION})",
            path=where)
    declared = document.get("kind")
    if declared != kind:
        raise ParseError(f"expected kind {kind!r}, found {declared!r}", path=where)


def classify_document(document: Mapping) -> str | None:
    kind = document.get("kind")
    return kind if isinstance(kind, str) else None


def _need(document: Mapping, key: str, types, where: str):
    if key not in document:
        raise ParseError(f"missing required field {key!r}", path=where)
    value = document[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise ParseError(f"field {key!r} has wrong type {type(value).__name__}",
                         path=where)
    return value


def _opt(document: Mapping, key: str, types, where: str, default=None):
    if key not in document or document[key] is None:
        return default
    return _need(document, key, types, where)


def _extras(document: Mapping, known: Iterable[str], where: str,
            strict: bool) -> dict:
    unknown = {key: document[key] for key in document if key not in set(known)}
    if unknown and strict:
        raise UnknownFieldError(
            f"unknown fields {sorted(unknown)} (load with strict=False to keep them)",
            path=where)
    return unknown


def _parse_enum(parser, raw: str, where: str):
    try:
        return parser(raw)
    except ValueError as exc:
        raise ParseError(str(exc), path=where) from exc


_NODE_FIELDS = ("id", "label", "kind", "parentId", "area", "description")


def parse_node(document: Mapping, where: str, strict: bool = True) -> ClassNode:
    kind_raw = _opt(document, "kind", str, where, default=NodeKind.CLASS.value)
    area_raw = _opt(document, "area", str, where)
    return ClassNode(
        id=_need(document, "id", str, where),
        label=_need(document, "label", str, where),
        kind=_parse_enum(NodeKind.parse, kind_raw, where),
        parent_id=_opt(document, "parentId", str, where),
        area=_parse_enum(MetaResearchArea.parse, area_raw, where) if area_raw else None,
        description=_opt(document, "description", str, where),
        extras=_extras(document, _NODE_FIELDS, where, strict),
    )


def node_document(node: ClassNode) -> dict:
    document = dict(node.extras)
    document.update({"id": node.id, "label": node.label, "kind": node.kind.value})
    if node.parent_id is not None:
        document["parentId"] = node.parent_id
    if node.area is not None:
        document["area"] = node.area.value
    if node.description is not None:
        document["description"] = node.description
    return document


_SCHEME_FIELDS = ("schemaVersion", "kind", "id", "name", "role", "provenance", "nodes")


def parse_scheme(document: Mapping, where: str = "<scheme>",
                 strict: bool = True) -> ClassificationScheme:
    _check_header(document, "scheme", where)
    nodes_raw = _need(document, "nodes", list, where)
    nodes = tuple(parse_node(node, f"{where} node[{index}]", strict)
                  for index, node in enumerate(nodes_raw))
    return ClassificationScheme(
        id=_need(document, "id", str, where),
        name=_need(document, "name", str, where),
        role=_parse_enum(SchemeRole.parse, _need(document, "role", str, where), where),
        nodes=nodes,
        provenance=_opt(document, "provenance", str, where),
        extras=_extras(document, _SCHEME_FIELDS, where, strict),
    )


def scheme_document(scheme: ClassificationScheme) -> dict:
    document = dict(scheme.extras)
    document.update({
        "schemaVersion": SCHEMA_VERSION,
        "kind": "scheme",
        "id": scheme.id,
        "name": scheme.name,
        "role": scheme.role.value,
        "nodes": [node_document(node) for node in scheme.nodes],
    })
    if scheme.provenance is not None:
        document["provenance"] = scheme.provenance
    return document


_PAIR_FIELDS = ("unifiedNodeId", "previousSchemeId", "previousNodeId", "note")


def parse_pair(document: Mapping, where: str, strict: bool = True) -> MappingPair:
    return MappingPair(
        unified_node_id=_need(document, "unifiedNodeId", str, where),
        previous_scheme_id=_need(document, "previousSchemeId", str, where),
        previous_node_id=_need(document, "previousNodeId", str, where),
        note=_opt(document, "note", str, where),
        extras=_extras(document, _PAIR_FIELDS, where, strict),
    )


def pair_document(pair: MappingPair) -> dict:
    document = dict(pair.extras)
    document.update({
        "unifiedNodeId": pair.unified_node_id,
        "previousSchemeId": pair.previous_scheme_id,
        "previousNodeId": pair.previous_node_id,
    })
    if pair.note is not None:
        document["note"] = pair.note
    return document


def parse_raw_pairs(document: Mapping, where: str = "<mapping>",
                    strict: bool = True) -> list[MappingPair]:
    """Pairs exactly as listed, duplicates included, for validation."""
    pairs_raw = _need(document, "pairs", list, where)
    return [parse_pair(pair, f"{where} pair[{index}]", strict)
            for index, pair in enumerate(pairs_raw)]


_MAPPING_FIELDS = ("schemaVersion", "kind", "projectId", "pairs")


def parse_mapping_document(document: Mapping, where: str = "<mapping>",
                           strict: bool = True) -> MappingSet:
    """A standalone mapping document (the PUT body of the service)."""
    _check_header(document, "mapping", where)
    _extras(document, _MAPPING_FIELDS, where, strict)
    return MappingSet.from_pairs(
        project_id=_need(document, "projectId", str, where),
        pairs=parse_raw_pairs(document, where, strict))


def mapping_document(mapping: MappingSet) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "mapping",
        "projectId": mapping.project_id,
        "pairs": [pair_document(pair) for pair in mapping.pairs],
    }


_PROJECT_FIELDS = ("schemaVersion", "kind", "id", "unifiedSchemeId",
                   "previousSchemeIds", "mapping", "thresholds", "revision")


def parse_project(document: Mapping, where: str = "<project>",
                  strict: bool = True) -> Project:
    _check_header(document, "project", where)
    project_id = _need(document, "id", str, where)
    mapping_raw = _need(document, "mapping", dict, where)
    # an embedded mapping has no place to preserve extras, so always reject
    _extras(mapping_raw, ("pairs",), f"{where} mapping", strict=True)
    pairs = parse_raw_pairs(mapping_raw, f"{where} mapping", strict)
    thresholds_raw = _opt(document, "thresholds", dict, where, default={})
    thresholds = {}
    for name, value in thresholds_raw.items():
        if not isinstance(value, str):
            raise ParseError(
                f"threshold {name!r} must be a decimal or fraction string "
                f"(exactness), got {type(value).__name__}", path=where)
        try:
            parsed = parse_fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"threshold {name!r}: {exc}", path=where) from exc
        if not 0 <= parsed <= 1:
            raise ParseError(f"threshold {name!r} must be in [0,1]", path=where)
        thresholds[name] = value
    previous_ids = _need(document, "previousSchemeIds", list, where)
    for sid in previous_ids:
        if not isinstance(sid, str):
            raise ParseError("previousSchemeIds must be strings", path=where)
    return Project(
        id=project_id,
        unified_scheme_id=_need(document, "unifiedSchemeId", str, where),
        previous_scheme_ids=tuple(previous_ids),
        mapping=MappingSet.from_pairs(project_id, pairs),
        thresholds=thresholds,
        revision=_need(document, "revision", int, where),
        extras=_extras(document, _PROJECT_FIELDS, where, strict),
    )


def project_document(project: Project) -> dict:
    document = dict(project.extras)
    document.update({
        "schemaVersion": SCHEMA_VERSION,
        "kind": "project",
        "id": project.id,
        "unifiedSchemeId": project.unified_scheme_id,
        "previousSchemeIds": list(project.previous_scheme_ids),
        "mapping": {"pairs": [pair_document(pair) for pair in project.mapping.pairs]},
        "revision": project.revision,
    })
    if project.thresholds:
        document["thresholds"] = dict(project.thresholds)
    return document


_ENTRY_FIELDS = ("doi", "collectionType", "subtag", "area", "schemeIds",
                 "year", "venue", "classesText")


def parse_catalog_entry(document: Mapping, where: str,
                        strict: bool = True) -> CatalogEntry:
    subtag_raw = _opt(document, "subtag", str, where)
    scheme_ids = _opt(document, "schemeIds", list, where, default=[])
    for sid in scheme_ids:
        if not isinstance(sid, str):
            raise ParseError("schemeIds must be strings", path=where)
    try:
        return _build_catalog_entry(document, subtag_raw, scheme_ids, where, strict)
    except ValueError as exc:
        raise ParseError(str(exc), path=where) from exc


def _build_catalog_entry(document: Mapping, subtag_raw, scheme_ids, where: str,
                         strict: bool) -> CatalogEntry:
    return CatalogEntry(
        doi=_need(document, "doi", str, where),
        collection_type=_parse_enum(
            CollectionType.parse, _need(document, "collectionType", str, where), where),
        subtag=_parse_enum(CollectionSubtag.parse, subtag_raw, where) if subtag_raw else None,
        area=_parse_enum(
            MetaResearchArea.parse, _need(document, "area", str, where), where),
        scheme_ids=tuple(scheme_ids),
        year=_need(document, "year", int, where),
        venue=_opt(document, "venue", str, where),
        classes_text=_opt(document, "classesText", str, where),
        extras=_extras(document, _ENTRY_FIELDS, where, strict),
    )


def catalog_entry_document(entry: CatalogEntry) -> dict:
    document = dict(entry.extras)
    document.update({
        "doi": entry.doi,
        "collectionType": entry.collection_type.value,
        "area": entry.area.value,
        "year": entry.year,
        "schemeIds": list(entry.scheme_ids),
    })
    if entry.subtag is not None:
        document["subtag"] = entry.subtag.value
    if entry.venue is not None:
        document["venue"] = entry.venue
    if entry.classes_text is not None:
        document["classesText"] = entry.classes_text
    return document


_CATALOG_FIELDS = ("schemaVersion", "kind", "entries")


def parse_catalog(document: Mapping, where: str = "<catalog>",
                  strict: bool = True) -> Catalog:
    _check_header(document, "catalog", where)
    entries_raw = _need(document, "entries", list, where)
    entries = tuple(parse_catalog_entry(entry, f"{where} entry[{index}]", strict)
                    for index, entry in enumerate(entries_raw))
    return Catalog(entries=entries,
                   extras=_extras(document, _CATALOG_FIELDS, where, strict))


def catalog_document(catalog: Catalog) -> dict:
    document = dict(catalog.extras)
    document.update({
        "schemaVersion": SCHEMA_VERSION,
        "kind": "catalog",
        "entries": [catalog_entry_document(entry) for entry in catalog.entries],
    })
    return document


_ANNOTATIONS_FIELDS = ("schemaVersion", "kind", "units", "annotators",
                       "categories", "labels")


def parse_annotations(document: Mapping, where: str = "<annotations>",
                      strict: bool = True) -> AnnotationMatrix:
    _check_header(document, "annotations", where)
    _extras(document, _ANNOTATIONS_FIELDS, where, strict)
    labels_raw = _need(document, "labels", dict, where)
    labels: dict[str, dict[str, str]] = {}
    for unit, row in labels_raw.items():
        if not isinstance(row, dict):
            raise ParseError(f"labels[{unit!r}] must be an object", path=where)
        for annotator, label in row.items():
            if not isinstance(label, str):
                raise ParseError(
                    f"label of ({unit!r}, {annotator!r}) must be a string", path=where)
        labels[unit] = dict(row)
    units = _opt(document, "units", list, where)
    annotators = _opt(document, "annotators", list, where)
    categories = _opt(document, "categories", list, where)
    try:
        return AnnotationMatrix.build(labels, units=units, annotators=annotators,
                                      categories=categories)
    except ValueError as exc:
        raise ParseError(str(exc), path=where) from exc


def annotations_document(matrix: AnnotationMatrix) -> dict:
    labels: dict[str, dict[str, str]] = {}
    for (unit, annotator), label in matrix.labels.items():
        labels.setdefault(unit, {})[annotator] = label
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "annotations",
        "units": list(matrix.units),
        "annotators": list(matrix.annotators),
        "categories": sorted(matrix.categories),
        "labels": {unit: dict(sorted(row.items()))
                   for unit, row in sorted(labels.items())},
    }


_GOLD_FIELDS = ("schemaVersion", "kind", "labels")


def parse_gold(document: Mapping, where: str = "<gold>",
               strict: bool = True) -> GoldStandard:
    _check_header(document, "gold", where)
    _extras(document, _GOLD_FIELDS, where, strict)
    labels_raw = _need(document, "labels", dict, where)
    for unit, label in labels_raw.items():
        if not isinstance(label, str):
            raise ParseError(f"gold label of {unit!r} must be a string", path=where)
    return GoldStandard(labels=dict(labels_raw))


def gold_document(gold: GoldStandard) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "gold",
        "labels": dict(sorted(gold.labels.items())),
    }


# --- file IO ----------------------------------------------------------------

def save_bytes(payload: bytes, path: str | Path) -> None:
    """Atomic write: full replacement or nothing."""
    path = Path(path)
    temporary = path.with_name(path.name + ".tmp")
    temporary.write_bytes(payload)
    os.replace(temporary, path)


def load_catalog(path: str | Path, strict: bool = True) -> Catalog:
    path = Path(path)
    return parse_catalog(_load_json(path), where=str(path), strict=strict)


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    save_bytes(canonical_json_bytes(catalog_document(catalog)), path)


def load_scheme(path: str | Path, strict: bool = True) -> ClassificationScheme:
    path = Path(path)
    return parse_scheme(_load_json(path), where=str(path), strict=strict)


def save_scheme(scheme: ClassificationScheme, path: str | Path) -> None:
    save_bytes(canonical_json_bytes(scheme_document(scheme)), path)


def load_project(path: str | Path, strict: bool = True) -> Project:
    path = Path(path)
    return parse_project(_load_json(path), where=str(path), strict=strict)


def save_project(project: Project, path: str | Path) -> None:
    save_bytes(canonical_json_bytes(project_document(project)), path)


def load_gold(path: str | Path, strict: bool = True) -> GoldStandard:
    path = Path(path)
    return parse_gold(_load_json(path), where=str(path), strict=strict)


def save_gold(gold: GoldStandard, path: str | Path) -> None:
    save_bytes(canonical_json_bytes(gold_document(gold)), path)


def load_annotations(path: str | Path, strict: bool = True) -> AnnotationMatrix:
    """Load a matrix from .json or .csv (sniffed by extension)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _annotations_from_csv(path)
    return parse_annotations(_load_json(path), where=str(path), strict=strict)


def save_annotations(matrix: AnnotationMatrix, path: str | Path) -> None:
    save_bytes(canonical_json_bytes(annotations_document(matrix)), path)


def _read_csv_rows(path: Path) -> list[list[str]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), path=str(path)) from exc
    return list(csv.reader(io.StringIO(text)))


def _annotations_from_csv(path: Path) -> AnnotationMatrix:
    """CSV dialect: first row is the header (unit column then one column per
    annotator), comma separated, quoted fields may contain commas. A blank
    cell is a missing label, not an empty-string label."""
    rows = _read_csv_rows(path)
    if not rows:
        raise ParseError("empty annotations file", path=str(path))
    header = rows[0]
    if len(header) < 3:
        raise ParseError("need a unit column and at least 2 annotator columns",
                         path=str(path))
    annotators = header[1:]
    if len(set(annotators)) != len(annotators):
        raise ParseError("annotator columns must be unique", path=str(path))

    units: list[str] = []
    labels: dict[tuple[str, str], str] = {}
    for line_number, row in enumerate(rows[1:], start=2):
        if not row or all(cell == "" for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}",
                             path=str(path), line=line_number)
        unit = row[0]
        if not unit:
            raise ParseError("empty unit id", path=str(path), line=line_number)
        if unit in units:
            raise ParseError(f"duplicate unit id {unit!r}", path=str(path),
                             line=line_number)
        units.append(unit)
        for annotator, cell in zip(annotators, row[1:]):
            if cell != "":
                labels[(unit, annotator)] = cell

    categories = sorted(set(labels.values()))
    try:
        return AnnotationMatrix(units=tuple(units), annotators=tuple(annotators),
                                labels=labels, categories=frozenset(categories))
    except ValueError as exc:
        raise ParseError(str(exc), path=str(path)) from exc


def load_sus(path: str | Path) -> list[SusResponse]:
    """CSV with header q1..q10, optionally preceded by a respondent column."""
    path = Path(path)
    rows = _read_csv_rows(path)
    if not rows:
        raise ParseError("empty survey file", path=str(path))
    header = rows[0]
    expected_items = [f"q{i}" for i in range(1, 11)]
    if header[:1] and header[0].lower() in ("respondent", "participant", "id"):
        id_column = True
        item_header = header[1:]
    else:
        id_column = False
        item_header = header
    if [column.lower() for column in item_header] != expected_items:
        raise ParseError(
            "survey header must be q1..q10 (optionally after a respondent column), "
            f"found {header}", path=str(path))

    responses = []
    for line_number, row in enumerate(rows[1:], start=2):
        if not row or all(cell == "" for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}",
                             path=str(path), line=line_number)
        respondent = row[0] if id_column else None
        cells = row[1:] if id_column else row
        items = []
        for index, cell in enumerate(cells, start=1):
            try:
                items.append(int(cell))
            except ValueError as exc:
                raise ParseError(f"item q{index} is not an integer: {cell!r}",
                                 path=str(path), line=line_number) from exc
        responses.append(SusResponse(items=tuple(items), respondent=respondent))
    if not responses:
        raise ParseError("survey file has no responses", path=str(path))
    return responses


# --- workspace --------------------------------------------------------------

@dataclass
class Workspace:
    """Every scheme, project, and catalog found under one directory.

    Layout: loose ``*.json`` files in the root are classified by their
    ``kind`` field; ``schemes/`` and ``projects/`` subdirectories are scanned
    the same way. One file per scheme and per project; the file the value
    came from is remembered so writers can go back to it.
    """

    root: Path
    schemes: dict[str, ClassificationScheme] = field(default_factory=dict)
    projects: dict[str, Project] = field(default_factory=dict)
    catalog: Catalog | None = None
    scheme_paths: dict[str, Path] = field(default_factory=dict)
    project_paths: dict[str, Path] = field(default_factory=dict)

    @classmethod
    def scan(cls, root: str | Path, strict: bool = True) -> "Workspace":
        root = Path(root)
        workspace = cls(root=root)
        candidates = sorted(root.glob("*.json"))
        for subdirectory in ("schemes", "projects"):
            folder = root / subdirectory
            if folder.is_dir():
                candidates.extend(sorted(folder.glob("*.json")))
        for path in candidates:
            document = _load_json(path)
            kind = classify_document(document)
            if kind == "scheme":
                scheme = parse_scheme(document, where=str(path), strict=strict)
                if scheme.id in workspace.schemes:
                    raise ParseError(f"scheme id {scheme.id!r} defined twice "
                                     f"(also in {workspace.scheme_paths[scheme.id]})",
                                     path=str(path))
                workspace.schemes[scheme.id] = scheme
                workspace.scheme_paths[scheme.id] = path
            elif kind == "project":
                project = parse_project(document, where=str(path), strict=strict)
                if project.id in workspace.projects:
                    raise ParseError(f"project id {project.id!r} defined twice "
                                     f"(also in {workspace.project_paths[project.id]})",
                                     path=str(path))
                workspace.projects[project.id] = project
                workspace.project_paths[project.id] = path
            elif kind == "catalog":
                workspace.catalog = parse_catalog(document, where=str(path),
                                                  strict=strict)
            # annotations/gold/mapping files are loaded on demand, not here
        return workspace

    def resolve(self, project: Project) -> tuple[ClassificationScheme,
                                                 list[ClassificationScheme]]:
        """The project's unified and previous schemes; raises with every
        dangling id if any reference is broken."""
        dangling = []
        if project.unified_scheme_id not in self.schemes:
            dangling.append(project.unified_scheme_id)
        dangling.extend(sid for sid in project.previous_scheme_ids
                        if sid not in self.schemes)
        if dangling:
            raise ReferentialViolationError(dangling)
        return (self.schemes[project.unified_scheme_id],
                [self.schemes[sid] for sid in project.previous_scheme_ids])
