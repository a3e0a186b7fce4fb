"""Report documents shared by the CLI and the HTTP service.

The service must answer metric requests with bytes identical to the CLI's
JSON output, so both go through these builders and canonical_json_bytes.
Documents contain no timestamps and only deterministic orderings.
"""

from __future__ import annotations

from typing import Iterable

from .canonical import render_decimal
from .catalog import Project, StatsTable
from .metrics import MetricReport
from .model import ValidationOutcome, Violation
from .study import AlphaResult, StudyCorrectness, SusBatch

SCHEMA_VERSION = 1


def violation_document(violation: Violation) -> dict:
    return {
        "code": violation.code,
        "message": violation.message,
        "context": dict(violation.context),
    }


def validation_document(inputs: Iterable[tuple[str, str, ValidationOutcome]]) -> dict:
    """inputs: (path, kind, outcome) per validated file."""
    entries = [
        {
            "path": path,
            "kind": kind,
            "ok": outcome.ok,
            "violations": [violation_document(v) for v in outcome.violations],
        }
        for path, kind, outcome in inputs
    ]
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "validation-report",
        "inputs": entries,
        "ok": all(entry["ok"] for entry in entries),
    }


def metric_report_document(project: Project, report: MetricReport) -> dict:
    previous_nodes = sorted(report.previous_nodes,
                            key=lambda r: (r.scheme_id, r.node_id))
    unified_nodes = sorted(report.unified_nodes, key=lambda r: r.node_id)
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "metric-report",
        "projectId": project.id,
        "revision": project.revision,
        "metrics": {
            name: report.metric(name).as_document()
            for name in ("laconicity", "lucidity", "completeness", "soundness")
        },
        "thresholds": {
            result.metric: {
                "threshold": str(result.threshold),
                "thresholdDecimal": render_decimal(result.threshold, 4),
                "passed": result.passed,
            }
            for result in report.thresholds
        },
        "allThresholdsPassed": report.all_thresholds_passed,
        "diagnostics": {
            "previousNodes": [
                {
                    "schemeId": node.scheme_id,
                    "nodeId": node.node_id,
                    "linkCount": node.link_count,
                    "laconic": node.laconic,
                    "complete": node.complete,
                }
                for node in previous_nodes
            ],
            "unifiedNodes": [
                {
                    "nodeId": node.node_id,
                    "linkCount": node.link_count,
                    "lucid": node.lucid,
                    "sound": node.sound,
                    "perScheme": [
                        {
                            "schemeId": fan.scheme_id,
                            "linkCount": fan.link_count,
                            "lucid": fan.lucid,
                            "sound": fan.sound,
                        }
                        for fan in sorted(node.per_scheme, key=lambda f: f.scheme_id)
                    ],
                }
                for node in unified_nodes
            ],
        },
        "advice": [advice.as_document() for advice in report.advice],
    }


def agreement_document(alpha: AlphaResult | None = None,
                       correctness: StudyCorrectness | None = None,
                       sus: SusBatch | None = None) -> dict:
    document: dict = {"schemaVersion": SCHEMA_VERSION, "kind": "agreement-report"}
    if alpha is not None:
        document["alpha"] = alpha.as_document()
    if correctness is not None:
        document["correctness"] = {
            "perAnnotator": {
                annotator: report.as_document()
                for annotator, report in sorted(correctness.per_annotator.items())
            },
            "majority": correctness.majority.as_document(),
            "tieUnits": list(correctness.tie_units),
        }
    if sus is not None:
        document["sus"] = sus.as_document()
    return document


def stats_document(table: StatsTable) -> dict:
    document = table.as_document()
    document["schemaVersion"] = SCHEMA_VERSION
    document["kind"] = "stats-report"
    return document


def error_document(code: str, message: str, **details) -> dict:
    document = {"error": code, "message": message}
    if details:
        document["details"] = {key: value for key, value in sorted(details.items())}
    return document
