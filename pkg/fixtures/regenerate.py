"""Rebuild every fixture file in canonical form.

Run from the repository root after changing the domain model or the
serialization format:

    python3 fixtures/regenerate.py
"""

from __future__ import annotations

from pathlib import Path

from taxunify import (
    Catalog,
    CatalogEntry,
    ClassificationScheme,
    ClassNode,
    CollectionSubtag,
    CollectionType,
    GoldStandard,
    MappingPair,
    MappingSet,
    MetaResearchArea,
    NodeKind,
    Project,
    SchemeRole,
    canonical_json_bytes,
    save_catalog,
    save_gold,
    save_project,
    save_scheme,
)
from taxunify.metrics import metric_report

ROOT = Path(__file__).resolve().parent
WORKSPACE = ROOT / "workspace"


def node(node_id: str, label: str, kind=NodeKind.CLASS, parent=None, area=None):
    return ClassNode(id=node_id, label=label, kind=kind, parent_id=parent, area=area)


SCHEMES = {
    "unified-pair": ClassificationScheme(
        id="unified-pair", name="Unified scheme (two classes)",
        role=SchemeRole.UNIFIED,
        nodes=(node("c1", "Empirical Study", area=MetaResearchArea.METHODS),
               node("c2", "Solution Proposal", area=MetaResearchArea.METHODS))),
    "unified-solo": ClassificationScheme(
        id="unified-solo", name="Unified scheme (one class)",
        role=SchemeRole.UNIFIED,
        nodes=(node("c1", "Empirical Study", area=MetaResearchArea.METHODS),)),
    "prev-basic": ClassificationScheme(
        id="prev-basic", name="Research type facets", role=SchemeRole.PREVIOUS,
        provenance="10.1000/prev-basic",
        nodes=(node("d1", "Case Study"), node("d2", "Experiment"),
               node("d3", "Survey"))),
    "prev-solo": ClassificationScheme(
        id="prev-solo", name="Single-class listing", role=SchemeRole.PREVIOUS,
        nodes=(node("d1", "Case Study"),)),
    "prev-duo": ClassificationScheme(
        id="prev-duo", name="Two-class listing", role=SchemeRole.PREVIOUS,
        nodes=(node("e1", "Controlled Experiment"), node("e2", "Field Study"))),
}


def project(project_id: str, unified: str, previous: list[str],
            triples: list[tuple[str, str, str]], thresholds=None) -> Project:
    return Project(
        id=project_id, unified_scheme_id=unified,
        previous_scheme_ids=tuple(previous),
        mapping=MappingSet.from_pairs(
            project_id, [MappingPair(*triple) for triple in triples]),
        thresholds=thresholds or {}, revision=0)


PROJECTS = {
    "fan": project("fan", "unified-pair", ["prev-basic"],
                   [("c1", "prev-basic", "d1"), ("c1", "prev-basic", "d2"),
                    ("c2", "prev-basic", "d2")]),
    "identity": project("identity", "unified-solo", ["prev-solo"],
                        [("c1", "prev-solo", "d1")]),
    "bijection": project("bijection", "unified-pair", ["prev-duo"],
                         [("c1", "prev-duo", "e1"), ("c2", "prev-duo", "e2")]),
    "two-schemes": project("two-schemes", "unified-solo",
                           ["prev-solo", "prev-duo"],
                           [("c1", "prev-solo", "d1"), ("c1", "prev-duo", "e1"),
                            ("c1", "prev-duo", "e2")]),
    "empty-mapping": project("empty-mapping", "unified-pair", ["prev-basic"], []),
}

# Golden-vector-only states (no project file): the canonical what-if edit on
# fan, remove (c2,d2) then add (c2,d3), as previewed and then committed.
GOLDEN_ONLY = {
    "fan-after-edit": project("fan-after-edit", "unified-pair", ["prev-basic"],
                              [("c1", "prev-basic", "d1"), ("c1", "prev-basic", "d2"),
                               ("c2", "prev-basic", "d3")]),
}

CATALOG = Catalog(entries=(
    CatalogEntry(doi="10.1000/prev-basic", collection_type=CollectionType.INCLUDED,
                 subtag=CollectionSubtag.PROPOSES_NEW,
                 area=MetaResearchArea.METHODS, year=2019,
                 scheme_ids=("prev-basic",), venue="ICSE",
                 classes_text="Case Study; Experiment; Survey"),
    CatalogEntry(doi="10.1000/prev-solo", collection_type=CollectionType.INCLUDED,
                 subtag=CollectionSubtag.USES_EXISTING,
                 area=MetaResearchArea.EVALUATION, year=2019,
                 scheme_ids=("prev-solo",), venue="EMSE"),
    CatalogEntry(doi="10.1000/prev-duo",
                 collection_type=CollectionType.INCLUDED_BY_REFERENCE,
                 area=MetaResearchArea.REPORTING, year=2020,
                 scheme_ids=("prev-duo",)),
))

GOLD = GoldStandard({"u1": "x", "u2": "y", "u3": "x", "u4": "y"})

ANNOTATIONS_CSV = """\
unit,A,B
u1,x,x
u2,y,y
u3,x,y
u4,y,y
"""

SUS_CSV = """\
respondent,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10
r1,5,1,5,1,5,1,5,1,5,1
r2,3,3,3,3,3,3,3,3,3,3
r3,1,5,1,5,1,5,1,5,1,5
"""


def golden_vectors() -> dict:
    """The shared metric contract consumed by the Python suite and the
    workbench UI tests: inputs plus frozen expected results."""
    vectors = []
    for project_id, proj in sorted({**PROJECTS, **GOLDEN_ONLY}.items()):
        unified = SCHEMES[proj.unified_scheme_id]
        previous = [SCHEMES[sid] for sid in proj.previous_scheme_ids]
        report = metric_report(unified, previous, proj.mapping, proj.thresholds)
        vectors.append({
            "name": project_id,
            "unifiedSchemeId": unified.id,
            "unifiedNodeIds": [n.id for n in unified.nodes],
            "previousSchemes": [
                {"id": scheme.id, "nodeIds": [n.id for n in scheme.nodes]}
                for scheme in previous],
            "pairs": [
                {"unifiedNodeId": p.unified_node_id,
                 "previousSchemeId": p.previous_scheme_id,
                 "previousNodeId": p.previous_node_id}
                for p in proj.mapping.pairs],
            "expected": {
                "metrics": {
                    name: {"numerator": report.metric(name).numerator,
                           "denominator": report.metric(name).denominator,
                           "decimal": report.metric(name).decimal}
                    for name in ("laconicity", "lucidity",
                                 "completeness", "soundness")},
                "advice": [
                    {"kind": advice.kind, "schemeId": advice.scheme_id,
                     "nodeId": advice.node_id,
                     "relatedNodeIds": list(advice.related_node_ids)}
                    for advice in report.advice],
                "diagnostics": {
                    "previousNodes": [
                        {"schemeId": node.scheme_id, "nodeId": node.node_id,
                         "linkCount": node.link_count, "laconic": node.laconic,
                         "complete": node.complete}
                        for node in sorted(report.previous_nodes,
                                           key=lambda r: (r.scheme_id, r.node_id))],
                    "unifiedNodes": [
                        {"nodeId": node.node_id, "linkCount": node.link_count,
                         "lucid": node.lucid, "sound": node.sound,
                         "perScheme": [
                             {"schemeId": fan.scheme_id,
                              "linkCount": fan.link_count,
                              "lucid": fan.lucid, "sound": fan.sound}
                             for fan in sorted(node.per_scheme,
                                               key=lambda f: f.scheme_id)]}
                        for node in sorted(report.unified_nodes,
                                           key=lambda r: r.node_id)],
                },
            },
        })
    return {"schemaVersion": 1, "kind": "golden-metric-vectors",
            "vectors": vectors}


def main() -> None:
    for scheme in SCHEMES.values():
        save_scheme(scheme, WORKSPACE / "schemes" / f"{scheme.id}.json")
    for proj in PROJECTS.values():
        save_project(proj, WORKSPACE / "projects" / f"{proj.id}.json")
    save_catalog(CATALOG, WORKSPACE / "catalog.json")
    save_gold(GOLD, ROOT / "gold.json")
    (ROOT / "annotations.csv").write_text(ANNOTATIONS_CSV, encoding="utf-8")
    (ROOT / "sus.csv").write_text(SUS_CSV, encoding="utf-8")
    (ROOT / "golden_metrics.json").write_bytes(
        canonical_json_bytes(golden_vectors()))
    print(f"fixtures written under {ROOT}")


if __name__ == "__main__":
    main()
