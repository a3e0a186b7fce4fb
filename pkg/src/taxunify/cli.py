"""Command line entry point for batch use.

Subcommands: validate | metrics | agreement | stats | serve. Reports go to
stdout, diagnostics to stderr. Exit codes: 0 success, 1 validation or
threshold failure, 2 usage, parse, or data errors. Output is deterministic;
--format json emits canonical bytes with no timestamps.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .canonical import canonical_json_bytes, render_decimal
from .catalog import (
    Project,
    Workspace,
    _load_json,
    catalog_stats,
    classify_document,
    load_annotations,
    load_catalog,
    load_gold,
    load_sus,
    parse_catalog,
    parse_project,
    parse_raw_pairs,
    parse_scheme,
)
from .errors import (
    MetricDomainError,
    ParseError,
    ReferentialViolationError,
    TaxunifyError,
)
from .metrics import METRIC_NAMES, MetricReport, metric_report
from .model import ValidationOutcome, Violation, validate_project, validate_scheme
from .reports import (
    agreement_document,
    metric_report_document,
    stats_document,
    validation_document,
)
from .study import krippendorff_alpha, study_correctness, sus_batch

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def _color_enabled() -> bool:
    if os.environ.get("TAXUNIFY_NO_COLOR"):
        return False
    return sys.stdout.isatty()


def _mark(ok: bool, use_color: bool) -> str:
    word = "PASS" if ok else "FAIL"
    if not use_color:
        return word
    return f"\x1b[32m{word}\x1b[0m" if ok else f"\x1b[31m{word}\x1b[0m"


def _print_violations(outcome: ValidationOutcome) -> None:
    for violation in outcome.violations:
        context = " ".join(f"{key}={value}" for key, value in violation.context)
        suffix = f"  [{context}]" if context else ""
        print(f"violation {violation.code}: {violation.message}{suffix}")


def _emit(document: dict, out: str | None) -> None:
    payload = canonical_json_bytes(document)
    if out:
        Path(out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def _workspace_for(project_path: Path, project: Project,
                   workspace_flag: str | None) -> Workspace:
    if workspace_flag:
        candidates = [Path(workspace_flag)]
    else:
        candidates = [project_path.parent, project_path.parent.parent]
    needed = {project.unified_scheme_id, *project.previous_scheme_ids}
    missing = needed
    for candidate in candidates:
        if not candidate.is_dir():
            continue
        workspace = Workspace.scan(candidate)
        missing = needed - set(workspace.schemes)
        if not missing:
            return workspace
    raise ReferentialViolationError(sorted(missing))


# --- validate ---------------------------------------------------------------

def _validate_one(path: Path) -> tuple[str, ValidationOutcome]:
    """(kind, outcome) for one file; raises on unreadable/unparseable input."""
    if path.suffix.lower() == ".csv":
        rows_kind = _sniff_csv(path)
        if rows_kind == "sus":
            load_sus(path)
        else:
            load_annotations(path)
        return rows_kind, ValidationOutcome.collect([])

    document = _load_json(path)
    kind = classify_document(document)
    where = str(path)
    if kind == "scheme":
        return kind, validate_scheme(parse_scheme(document, where))
    if kind == "project":
        project = parse_project(document, where)
        raw_pairs = parse_raw_pairs(document["mapping"], where)
        violations: list[Violation] = []
        if not project.previous_scheme_ids:
            violations.append(Violation.make(
                "NoPreviousSchemes", "project lists no previous schemes",
                project_id=project.id))
        try:
            workspace = _workspace_for(path, project, None)
        except ReferentialViolationError as exc:
            violations.extend(
                Violation.make("MissingScheme",
                               f"referenced scheme {sid!r} not found in workspace",
                               scheme_id=sid)
                for sid in exc.dangling)
            return kind, ValidationOutcome.collect(violations)
        unified, previous = workspace.resolve(project)
        violations.extend(validate_project(unified, previous, raw_pairs).violations)
        return kind, ValidationOutcome.collect(violations)
    if kind == "catalog":
        catalog = parse_catalog(document, where)
        workspace = Workspace.scan(path.parent)
        violations = [
            Violation.make("MissingScheme",
                           f"catalog entry {entry.doi!r} references scheme "
                           f"{sid!r} not found in workspace",
                           doi=entry.doi, scheme_id=sid)
            for entry in catalog.entries for sid in entry.scheme_ids
            if sid not in workspace.schemes
        ]
        return kind, ValidationOutcome.collect(violations)
    if kind == "annotations":
        load_annotations(path)
        return kind, ValidationOutcome.collect([])
    if kind == "gold":
        load_gold(path)
        return kind, ValidationOutcome.collect([])
    raise ParseError(f"unrecognized document kind {kind!r}", path=str(path))


def _sniff_csv(path: Path) -> str:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip().lower()
    cells = [cell.strip() for cell in header.split(",")]
    if cells and cells[-10:] == [f"q{i}" for i in range(1, 11)]:
        return "sus"
    return "annotations"


def cmd_validate(args: argparse.Namespace) -> int:
    results: list[tuple[str, str, ValidationOutcome]] = []
    code = EXIT_OK
    for raw_path in args.paths:
        path = Path(raw_path)
        try:
            kind, outcome = _validate_one(path)
        except TaxunifyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        results.append((str(path), kind, outcome))
        if not outcome.ok:
            code = EXIT_FAILED

    if args.format == "json":
        _emit(validation_document(results), args.out)
    else:
        use_color = _color_enabled()
        for path, kind, outcome in results:
            print(f"{_mark(outcome.ok, use_color)} {path} ({kind})")
            _print_violations(outcome)
    return code


# --- metrics ----------------------------------------------------------------

def _load_project_context(args) -> tuple[Project, MetricReport, int]:
    """Returns (project, report, exit_code); report is None on failure."""
    path = Path(args.project)
    document = _load_json(path)
    project = parse_project(document, str(path))
    raw_pairs = parse_raw_pairs(document["mapping"], str(path))
    try:
        workspace = _workspace_for(path, project, args.workspace)
    except ReferentialViolationError as exc:
        outcome = ValidationOutcome.collect([
            Violation.make("MissingScheme",
                           f"referenced scheme {sid!r} not found in workspace",
                           scheme_id=sid)
            for sid in exc.dangling])
        _print_violations(outcome)
        return project, None, EXIT_FAILED
    unified, previous = workspace.resolve(project)
    outcome = validate_project(unified, previous, raw_pairs)
    if not outcome.ok:
        _print_violations(outcome)
        return project, None, EXIT_FAILED

    thresholds: dict[str, object] = dict(project.thresholds)
    for override in args.threshold or []:
        name, _, value = override.partition("=")
        if name not in METRIC_NAMES or not value:
            raise ParseError(f"--threshold expects metric=value "
                             f"with metric one of {', '.join(METRIC_NAMES)}")
        thresholds[name] = value
    report = metric_report(unified, previous, project.mapping, thresholds)
    return project, report, EXIT_OK


def _print_metric_text(project: Project, report: MetricReport) -> None:
    use_color = _color_enabled()
    print(f"Metrics for project '{project.id}' at revision {project.revision}")
    threshold_by_metric = {t.metric: t for t in report.thresholds}
    for name in METRIC_NAMES:
        value = report.metric(name)
        threshold = threshold_by_metric[name]
        print(f"  {name:<13} {value.numerator}/{value.denominator:<6} "
              f"{value.decimal}   {_mark(threshold.passed, use_color)} "
              f"(threshold {render_decimal(threshold.threshold, 4)})")
    print("Previous nodes:")
    for node in sorted(report.previous_nodes, key=lambda r: (r.scheme_id, r.node_id)):
        flags = [("laconic" if node.laconic else "NOT laconic"),
                 ("complete" if node.complete else "NOT complete")]
        print(f"  {node.scheme_id}/{node.node_id}  links={node.link_count}  "
              + ", ".join(flags))
    print("Unified nodes:")
    for node in sorted(report.unified_nodes, key=lambda r: r.node_id):
        per_scheme = " ".join(
            f"{fan.scheme_id}:{fan.link_count}"
            for fan in sorted(node.per_scheme, key=lambda f: f.scheme_id))
        flags = [("lucid" if node.lucid else "NOT lucid"),
                 ("sound" if node.sound else "NOT sound")]
        print(f"  {node.node_id}  {', '.join(flags)}  ({per_scheme})")
    if report.advice:
        print("Advice:")
        for advice in report.advice:
            print(f"  [{advice.kind}] {advice.message}")
    else:
        print("Advice: none")


def cmd_metrics(args: argparse.Namespace) -> int:
    project, report, code = _load_project_context(args)
    if report is None:
        return code
    if args.format == "json":
        _emit(metric_report_document(project, report), args.out)
    else:
        _print_metric_text(project, report)
    return EXIT_OK if report.all_thresholds_passed else EXIT_FAILED


# --- agreement --------------------------------------------------------------

def cmd_agreement(args: argparse.Namespace) -> int:
    matrix = load_annotations(Path(args.annotations))
    alpha = krippendorff_alpha(matrix)
    correctness = None
    if args.gold:
        gold = load_gold(Path(args.gold))
        correctness = study_correctness(matrix, gold)
    sus = None
    if args.sus:
        sus = sus_batch(load_sus(Path(args.sus)))

    if args.format == "json":
        _emit(agreement_document(alpha, correctness, sus), args.out)
        return EXIT_OK

    print(f"Krippendorff's alpha (nominal): {render_decimal(alpha.alpha, 3)}  "
          f"(exact {alpha.alpha})")
    print(f"  D_o = {alpha.observed_disagreement}, "
          f"D_e = {alpha.expected_disagreement}, n = {alpha.n_total}")
    print(f"  categories: {', '.join(alpha.categories)}")
    excluded = ", ".join(alpha.excluded_units) if alpha.excluded_units else "none"
    print(f"  units excluded (fewer than 2 labels): {excluded}")
    if alpha.degenerate:
        print("  note: expected disagreement is zero (single category); "
              "alpha reported as 1 by convention")
    if correctness is not None:
        print("Correctness vs gold standard:")
        for annotator, report in sorted(correctness.per_annotator.items()):
            print(f"  annotator {annotator}: " + _confusion_summary(report))
        print("  majority vote: " + _confusion_summary(correctness.majority))
        if correctness.tie_units:
            print("  majority ties (lexicographic tie-break): "
                  + ", ".join(correctness.tie_units))
    if sus is not None:
        print(f"SUS: n={sus.count} mean={sus.mean} median={sus.median} "
              f"min={sus.min} max={sus.max}")
    return EXIT_OK


def _confusion_summary(report) -> str:
    accuracy = report.accuracy
    macro_f1, skipped = report.macro("f1")
    macro_text = "undefined" if macro_f1 is None else render_decimal(macro_f1, 4)
    suffix = f" ({skipped} classes skipped)" if skipped else ""
    return (f"accuracy {accuracy} = {render_decimal(accuracy, 4)}, "
            f"macro-F1 {macro_text}{suffix}")


# --- stats ------------------------------------------------------------------

def cmd_stats(args: argparse.Namespace) -> int:
    catalog = load_catalog(Path(args.catalog))
    table = catalog_stats(catalog, args.by)
    if args.format == "json":
        _emit(stats_document(table), args.out)
        return EXIT_OK
    print(f"Catalog counts by {table.group_by}:")
    for key, count in table.rows:
        print(f"  {key:<24} {count}")
    print(f"  {'total':<24} {table.total}")
    return EXIT_OK


# --- serve ------------------------------------------------------------------

def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(Path(args.workspace), secret=args.secret,
                     ui_dir=Path(args.ui) if args.ui else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taxunify",
        description="Catalog classification schemes, compute unification "
                    "metrics, and evaluate classification studies.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser(
        "validate", help="validate scheme/project/catalog/annotation files")
    validate.add_argument("paths", nargs="+", metavar="PATH")
    validate.add_argument("--format", choices=("text", "json"), default="text")
    validate.add_argument("--out", help="write the report to a file instead of stdout")
    validate.set_defaults(handler=cmd_validate)

    metrics = subparsers.add_parser(
        "metrics", help="compute the four unification metrics for a project")
    metrics.add_argument("project", metavar="PROJECT_JSON")
    metrics.add_argument("--workspace", help="directory holding the scheme files "
                         "(default: next to the project file)")
    metrics.add_argument("--threshold", action="append", metavar="METRIC=VALUE",
                         help="override a threshold, e.g. completeness=0.95")
    metrics.add_argument("--format", choices=("text", "json"), default="text")
    metrics.add_argument("--out", help="write the report to a file instead of stdout")
    metrics.set_defaults(handler=cmd_metrics)

    agreement = subparsers.add_parser(
        "agreement", help="inter-annotator agreement, correctness, and SUS scores")
    agreement.add_argument("annotations", metavar="ANNOTATIONS_CSV_OR_JSON")
    agreement.add_argument("--gold", metavar="GOLD_JSON")
    agreement.add_argument("--sus", metavar="SUS_CSV")
    agreement.add_argument("--format", choices=("text", "json"), default="text")
    agreement.add_argument("--out", help="write the report to a file instead of stdout")
    agreement.set_defaults(handler=cmd_agreement)

    stats = subparsers.add_parser("stats", help="count catalog entries by group")
    stats.add_argument("catalog", metavar="CATALOG_JSON")
    stats.add_argument("--by", choices=("year", "area", "collectionType"),
                       default="year")
    stats.add_argument("--format", choices=("text", "json"), default="text")
    stats.add_argument("--out", help="write the report to a file instead of stdout")
    stats.set_defaults(handler=cmd_stats)

    serve = subparsers.add_parser("serve", help="run the mapping workbench service")
    serve.add_argument("--workspace", required=True, metavar="DIR")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8642)
    serve.add_argument("--secret", help="require this shared secret in "
                       "the X-Taxunify-Secret header")
    serve.add_argument("--ui", metavar="DIR",
                       help="also serve the built workbench UI from this "
                       "directory (its index.html and dist/)")
    serve.set_defaults(handler=cmd_serve)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches our contract
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except MetricDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TaxunifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
