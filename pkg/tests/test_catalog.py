"""Persistence: canonical files, round-trips, CSV ingestion, workspace scan."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from taxunify import (
    Catalog,
    CatalogEntry,
    ClassificationScheme,
    ClassNode,
    CollectionSubtag,
    CollectionType,
    DuplicateDoiError,
    MappingPair,
    MappingSet,
    MetaResearchArea,
    NodeKind,
    ParseError,
    Project,
    ReferentialViolationError,
    SchemaVersionError,
    SchemeRole,
    UnknownFieldError,
    Workspace,
    catalog_stats,
    load_annotations,
    load_catalog,
    load_gold,
    load_project,
    load_scheme,
    load_sus,
    normalize_doi,
    save_catalog,
    save_project,
    save_scheme,
)
from taxunify.catalog import parse_scheme, scheme_document

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def entry(doi: str, year: int = 2020,
          area: MetaResearchArea = MetaResearchArea.METHODS,
          collection: CollectionType = CollectionType.INCLUDED) -> CatalogEntry:
    return CatalogEntry(doi=doi, collection_type=collection, area=area, year=year)


# --- DOI handling -------------------------------------------------------------

def test_doi_normalization():
    assert normalize_doi("https://doi.org/10.1000/XYZ") == "10.1000/xyz"
    assert normalize_doi("10.1000/xyz") == "10.1000/xyz"
    assert normalize_doi("HTTPS://DOI.ORG/10.1000/A") == "10.1000/a"


def test_duplicate_doi_rejected_after_normalization():
    with pytest.raises(DuplicateDoiError) as info:
        Catalog(entries=(entry("10.1000/x"), entry("https://doi.org/10.1000/X")))
    assert info.value.doi == "10.1000/x"


# --- round trips ---------------------------------------------------------------

def test_catalog_round_trip_and_canonical_bytes(tmp_path):
    catalog = Catalog(entries=(entry("10.1/b"), entry("10.1/a", year=2019)))
    path = tmp_path / "catalog.json"
    save_catalog(catalog, path)
    loaded = load_catalog(path)
    assert loaded == catalog
    assert [e.doi for e in loaded.entries] == ["10.1/a", "10.1/b"]  # sorted

    again = tmp_path / "again.json"
    save_catalog(loaded, again)
    assert path.read_bytes() == again.read_bytes()


def test_empty_catalog_file(tmp_path):
    path = tmp_path / "c.json"
    save_catalog(Catalog(entries=()), path)
    assert load_catalog(path).entries == ()


def test_scheme_round_trip_ignores_node_order(tmp_path):
    nodes = (ClassNode(id="z", label="Z", kind=NodeKind.CATEGORY),
             ClassNode(id="a", label="A", parent_id="z",
                       area=MetaResearchArea.REPORTING, description="leaf"))
    scheme = ClassificationScheme(id="s", name="S", role=SchemeRole.PREVIOUS,
                                  nodes=nodes, provenance="10.1/p")
    path = tmp_path / "s.json"
    save_scheme(scheme, path)
    assert load_scheme(path) == scheme


def test_project_round_trip_with_thresholds_and_notes(tmp_path):
    project = Project(
        id="p", unified_scheme_id="u", previous_scheme_ids=("t1", "t2"),
        mapping=MappingSet.from_pairs("p", [
            MappingPair("c1", "t1", "d1", note="same concept"),
            MappingPair("c1", "t2", "e1")]),
        thresholds={"completeness": "0.95", "soundness": "4/5"},
        revision=7)
    path = tmp_path / "p.json"
    save_project(project, path)
    loaded = load_project(path)
    assert loaded == project
    assert loaded.mapping.pairs[0].note == "same concept"
    assert loaded.thresholds == {"completeness": "0.95", "soundness": "4/5"}
    assert loaded.revision == 7


def test_random_round_trips_are_canonical(tmp_path):
    rng = random.Random(5150)
    for i in range(25):
        nodes = tuple(
            ClassNode(id=f"n{j}", label=f"L{rng.randint(0, 5)}",
                      kind=rng.choice(list(NodeKind)),
                      area=rng.choice(list(MetaResearchArea) + [None]))
            for j in range(rng.randint(1, 8)))
        scheme = ClassificationScheme(
            id=f"s{i}", name="S", role=rng.choice(list(SchemeRole)), nodes=nodes)
        path = tmp_path / f"s{i}.json"
        save_scheme(scheme, path)
        assert load_scheme(path) == scheme
        second = tmp_path / f"s{i}-b.json"
        save_scheme(load_scheme(path), second)
        assert path.read_bytes() == second.read_bytes()


# --- strictness ----------------------------------------------------------------

def test_unknown_fields_rejected_when_strict(tmp_path):
    path = tmp_path / "s.json"
    document = {"schemaVersion": 1, "kind": "scheme", "id": "s", "name": "S",
                "role": "Previous", "nodes": [], "color": "purple"}
    path.write_text(json.dumps(document))
    with pytest.raises(UnknownFieldError):
        load_scheme(path)


def test_unknown_fields_preserved_when_lenient(tmp_path):
    path = tmp_path / "s.json"
    document = {"schemaVersion": 1, "kind": "scheme", "id": "s", "name": "S",
                "role": "Previous",
                "nodes": [{"id": "n1", "label": "N", "icon": "star"}],
                "color": "purple"}
    path.write_text(json.dumps(document))
    scheme = load_scheme(path, strict=False)
    assert scheme.extras == {"color": "purple"}
    assert scheme.nodes[0].extras == {"icon": "star"}
    round_tripped = scheme_document(scheme)
    assert round_tripped["color"] == "purple"
    assert round_tripped["nodes"][0]["icon"] == "star"


def test_schema_version_mismatch_is_hard_error(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"schemaVersion": 99, "kind": "scheme", "id": "s",
                                "name": "S", "role": "Previous", "nodes": []}))
    with pytest.raises(SchemaVersionError):
        load_scheme(path)


def test_parse_error_carries_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"schemaVersion": 1,\n  "kind": }')
    with pytest.raises(ParseError) as info:
        load_scheme(path)
    assert info.value.line == 2


def test_duplicate_pairs_deduplicated_on_load(tmp_path):
    path = tmp_path / "p.json"
    pair = {"unifiedNodeId": "c1", "previousSchemeId": "t", "previousNodeId": "d1"}
    document = {"schemaVersion": 1, "kind": "project", "id": "p",
                "unifiedSchemeId": "u", "previousSchemeIds": ["t"],
                "mapping": {"pairs": [pair, dict(pair)]}, "revision": 0}
    path.write_text(json.dumps(document))
    project = load_project(path)
    assert len(project.mapping.pairs) == 1


def test_float_threshold_rejected(tmp_path):
    path = tmp_path / "p.json"
    document = {"schemaVersion": 1, "kind": "project", "id": "p",
                "unifiedSchemeId": "u", "previousSchemeIds": ["t"],
                "mapping": {"pairs": []}, "thresholds": {"completeness": 0.95},
                "revision": 0}
    path.write_text(json.dumps(document))
    with pytest.raises(ParseError):
        load_project(path)


# --- stats ----------------------------------------------------------------------

def test_stats_by_year():
    catalog = Catalog(entries=(entry("10.1/a", year=2019), entry("10.1/b", year=2019),
                               entry("10.1/c", year=2020)))
    table = catalog_stats(catalog, "year")
    assert table.rows == (("2019", 2), ("2020", 1))
    assert table.total == 3


def test_stats_by_area_single_row():
    catalog = Catalog(entries=(entry("10.1/a"), entry("10.1/b")))
    table = catalog_stats(catalog, "area")
    assert table.rows == (("Methods", 2),)
    assert table.total == len(catalog.entries)


def test_stats_by_collection_type():
    catalog = Catalog(entries=(
        entry("10.1/a"),
        entry("10.1/b", collection=CollectionType.INCLUDED_BY_REFERENCE)))
    table = catalog_stats(catalog, "collectionType")
    assert dict(table.rows) == {"Included": 1, "IncludedByReference": 1}


def test_stats_rejects_unknown_grouping():
    with pytest.raises(ValueError):
        catalog_stats(Catalog(entries=()), "venue")


# --- study data files -------------------------------------------------------------

def test_annotations_csv_blank_cells_are_missing():
    matrix = load_annotations(FIXTURES / "annotations.csv")
    assert matrix.annotators == ("A", "B")
    assert matrix.units == ("u1", "u2", "u3", "u4")
    assert matrix.labels[("u3", "A")] == "x"
    assert matrix.categories == frozenset({"x", "y"})


def test_annotations_csv_with_missing_cell(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("unit,A,B\nu1,x,\nu2,\"x,y\",y\n")
    matrix = load_annotations(path)
    assert ("u1", "B") not in matrix.labels  # blank is missing, not ""
    assert matrix.labels[("u2", "A")] == "x,y"  # quoted comma survives


def test_annotations_json_round_trip(tmp_path):
    matrix = load_annotations(FIXTURES / "annotations.csv")
    from taxunify import save_annotations

    path = tmp_path / "a.json"
    save_annotations(matrix, path)
    assert load_annotations(path) == matrix


def test_gold_and_sus_fixtures_load():
    gold = load_gold(FIXTURES / "gold.json")
    assert gold.labels["u3"] == "x"
    responses = load_sus(FIXTURES / "sus.csv")
    assert [r.respondent for r in responses] == ["r1", "r2", "r3"]


def test_sus_rejects_bad_header(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("q1,q2\n1,2\n")
    with pytest.raises(ParseError):
        load_sus(path)


def test_sus_without_respondent_column(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\n3,3,3,3,3,3,3,3,3,3\n")
    responses = load_sus(path)
    assert responses[0].respondent is None
    assert responses[0].items == (3,) * 10


# --- workspace --------------------------------------------------------------------

def test_workspace_scan_and_resolve():
    workspace = Workspace.scan(FIXTURES / "workspace")
    assert set(workspace.projects) == {
        "fan", "identity", "bijection", "two-schemes", "empty-mapping"}
    assert "prev-basic" in workspace.schemes
    project = workspace.projects["fan"]
    unified, previous = workspace.resolve(project)
    assert unified.id == "unified-pair"
    assert [scheme.id for scheme in previous] == ["prev-basic"]


def test_workspace_resolve_reports_every_dangling_id(tmp_path):
    project = Project(id="p", unified_scheme_id="ghost-u",
                      previous_scheme_ids=("ghost-a", "ghost-b"),
                      mapping=MappingSet.from_pairs("p", []), revision=0)
    workspace = Workspace.scan(tmp_path)
    with pytest.raises(ReferentialViolationError) as info:
        workspace.resolve(project)
    assert info.value.dangling == ["ghost-a", "ghost-b", "ghost-u"]
