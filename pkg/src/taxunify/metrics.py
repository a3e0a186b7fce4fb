"""The four unification metrics and the diagnostics that drive refinement.

Given a unified scheme C, previous schemes T in a finite family, and the
mapping relation as explicit pairs:

  laconicity    fraction of previous nodes matched by at most one unified node
  lucidity      fraction of unified nodes with fan-out <= 1 within every
                single previous scheme (min over the family)
  completeness  fraction of previous nodes matched by at least one unified node
  soundness     fraction of unified nodes matched somewhere (max over the family)

Low laconicity flags merge candidates (redundant unified nodes), low lucidity
flags split candidates (too-coarse unified nodes), incomplete previous nodes
flag missing coverage, and unsound unified nodes are either unnecessary or
deliberately novel. All values are exact rationals; the decimal rendering is
presentation only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .canonical import parse_fraction, render_decimal
from .errors import EmptyPreviousSetError, EmptySchemeError, EmptyUnifiedError
from .model import ClassificationScheme, MappingPair, MappingSet

METRIC_NAMES = ("laconicity", "lucidity", "completeness", "soundness")

DEFAULT_THRESHOLDS: Mapping[str, Fraction] = {
    "laconicity": Fraction(9, 10),
    "lucidity": Fraction(9, 10),
    "completeness": Fraction(19, 20),
    "soundness": Fraction(9, 10),
}


@dataclass(frozen=True)
class MetricValue:
    """An exact count quotient. numerator/denominator are the raw counts
    before reduction, so 2 of 2 sound nodes reports as 2/2."""

    name: str
    numerator: int
    denominator: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def decimal(self) -> str:
        return render_decimal(self.value, 4)

    def as_document(self) -> dict:
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "fraction": str(self.value),
            "decimal": self.decimal,
        }


@dataclass(frozen=True)
class PreviousNodeResult:
    """Predicates for one node of a previous scheme."""

    node_id: str
    scheme_id: str
    link_count: int  # pairs targeting this node

    @property
    def laconic(self) -> bool:
        return self.link_count <= 1

    @property
    def complete(self) -> bool:
        return self.link_count >= 1


@dataclass(frozen=True)
class SchemeFanOut:
    """Links of one unified node into one previous scheme."""

    scheme_id: str
    link_count: int

    @property
    def lucid(self) -> bool:
        return self.link_count <= 1

    @property
    def sound(self) -> bool:
        return self.link_count >= 1


@dataclass(frozen=True)
class UnifiedNodeResult:
    """Per-scheme predicates for one unified node plus the aggregates:
    the lucidity contribution is the min over schemes, the soundness
    contribution the max."""

    node_id: str
    per_scheme: tuple[SchemeFanOut, ...]

    @property
    def lucid(self) -> bool:
        return all(fan.lucid for fan in self.per_scheme)

    @property
    def sound(self) -> bool:
        return any(fan.sound for fan in self.per_scheme)

    @property
    def link_count(self) -> int:
        return sum(fan.link_count for fan in self.per_scheme)


@dataclass(frozen=True)
class Advice:
    """One actionable diagnostic, anchored to the node that triggered it."""

    kind: str  # merge-candidates | split-candidate | missing-coverage | unsound-node
    scheme_id: str
    node_id: str
    related_node_ids: tuple[str, ...]
    message: str

    def as_document(self) -> dict:
        return {
            "kind": self.kind,
            "schemeId": self.scheme_id,
            "nodeId": self.node_id,
            "relatedNodeIds": list(self.related_node_ids),
            "message": self.message,
        }


@dataclass(frozen=True)
class ThresholdResult:
    metric: str
    threshold: Fraction
    passed: bool


@dataclass(frozen=True)
class MetricReport:
    """All four metrics, per-node diagnostics, advice, and threshold flags."""

    laconicity: MetricValue
    lucidity: MetricValue
    completeness: MetricValue
    soundness: MetricValue
    previous_nodes: tuple[PreviousNodeResult, ...]
    unified_nodes: tuple[UnifiedNodeResult, ...]
    advice: tuple[Advice, ...]
    thresholds: tuple[ThresholdResult, ...]

    @property
    def all_thresholds_passed(self) -> bool:
        return all(result.passed for result in self.thresholds)

    def metric(self, name: str) -> MetricValue:
        if name not in METRIC_NAMES:
            raise KeyError(name)
        return getattr(self, name)

    def per_node_diagnostics(self) -> tuple[tuple[str, str, str, bool], ...]:
        """Flat (nodeId, schemeId, predicate, holds) rows. Unified rows are
        per previous scheme, so a failing predicate names the offending one."""
        rows: list[tuple[str, str, str, bool]] = []
        for prev in self.previous_nodes:
            rows.append((prev.node_id, prev.scheme_id, "laconic", prev.laconic))
            rows.append((prev.node_id, prev.scheme_id, "complete", prev.complete))
        for node in self.unified_nodes:
            for fan in node.per_scheme:
                rows.append((node.node_id, fan.scheme_id, "lucid", fan.lucid))
                rows.append((node.node_id, fan.scheme_id, "sound", fan.sound))
        return tuple(rows)


def _as_pairs(mapping: MappingSet | Iterable[MappingPair]) -> tuple[MappingPair, ...]:
    if isinstance(mapping, MappingSet):
        return mapping.pairs
    # dedup defensively; the relation is a set
    return MappingSet.from_pairs("", mapping).pairs


def _checked_previous(unified: ClassificationScheme,
                      previous: Iterable[ClassificationScheme],
                      ) -> tuple[ClassificationScheme, ...]:
    schemes = tuple(previous)
    if not schemes:
        raise EmptyPreviousSetError("no previous schemes: metrics are undefined")
    if unified.size() == 0:
        raise EmptyUnifiedError("the unified scheme has no nodes")
    for scheme in schemes:
        if scheme.size() == 0:
            raise EmptySchemeError(scheme.id)
    return schemes


def _incidence(unified: ClassificationScheme,
               previous: Sequence[ClassificationScheme],
               pairs: Sequence[MappingPair],
               ) -> tuple[list[PreviousNodeResult], list[UnifiedNodeResult]]:
    incoming: dict[tuple[str, str], int] = {}
    fan_out: dict[tuple[str, str], int] = {}
    for pair in pairs:
        incoming_key = (pair.previous_scheme_id, pair.previous_node_id)
        incoming[incoming_key] = incoming.get(incoming_key, 0) + 1
        fan_key = (pair.unified_node_id, pair.previous_scheme_id)
        fan_out[fan_key] = fan_out.get(fan_key, 0) + 1

    previous_results = [
        PreviousNodeResult(node_id=node.id, scheme_id=scheme.id,
                           link_count=incoming.get((scheme.id, node.id), 0))
        for scheme in previous for node in scheme.nodes
    ]
    unified_results = [
        UnifiedNodeResult(
            node_id=node.id,
            per_scheme=tuple(
                SchemeFanOut(scheme_id=scheme.id,
                             link_count=fan_out.get((node.id, scheme.id), 0))
                for scheme in previous))
        for node in unified.nodes
    ]
    return previous_results, unified_results


def laconicity(unified: ClassificationScheme,
               previous: Iterable[ClassificationScheme],
               mapping: MappingSet | Iterable[MappingPair]) -> MetricValue:
    schemes = _checked_previous(unified, previous)
    prev_results, _ = _incidence(unified, schemes, _as_pairs(mapping))
    return MetricValue("laconicity",
                       sum(1 for r in prev_results if r.laconic),
                       len(prev_results))


def lucidity(unified: ClassificationScheme,
             previous: Iterable[ClassificationScheme],
             mapping: MappingSet | Iterable[MappingPair]) -> MetricValue:
    schemes = _checked_previous(unified, previous)
    _, unified_results = _incidence(unified, schemes, _as_pairs(mapping))
    return MetricValue("lucidity",
                       sum(1 for r in unified_results if r.lucid),
                       len(unified_results))


def completeness(unified: ClassificationScheme,
                 previous: Iterable[ClassificationScheme],
                 mapping: MappingSet | Iterable[MappingPair]) -> MetricValue:
    schemes = _checked_previous(unified, previous)
    prev_results, _ = _incidence(unified, schemes, _as_pairs(mapping))
    return MetricValue("completeness",
                       sum(1 for r in prev_results if r.complete),
                       len(prev_results))


def soundness(unified: ClassificationScheme,
              previous: Iterable[ClassificationScheme],
              mapping: MappingSet | Iterable[MappingPair]) -> MetricValue:
    schemes = _checked_previous(unified, previous)
    _, unified_results = _incidence(unified, schemes, _as_pairs(mapping))
    return MetricValue("soundness",
                       sum(1 for r in unified_results if r.sound),
                       len(unified_results))


def resolve_thresholds(overrides: Mapping[str, object] | None = None,
                       ) -> dict[str, Fraction]:
    """Default thresholds with optional per-metric overrides (exact values,
    given as Fractions or decimal/fraction strings)."""
    resolved = dict(DEFAULT_THRESHOLDS)
    for name, raw in (overrides or {}).items():
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric in thresholds: {name!r}")
        value = raw if isinstance(raw, Fraction) else parse_fraction(raw)
        if not 0 <= value <= 1:
            raise ValueError(f"threshold for {name} must be in [0,1], got {value}")
        resolved[name] = value
    return resolved


def metric_report(unified: ClassificationScheme,
                  previous: Iterable[ClassificationScheme],
                  mapping: MappingSet | Iterable[MappingPair],
                  thresholds: Mapping[str, object] | None = None) -> MetricReport:
    """Compute everything at once: the four metrics, per-node predicate
    results, refinement advice, and pass/fail against the thresholds."""
    schemes = _checked_previous(unified, previous)
    pairs = _as_pairs(mapping)
    prev_results, unified_results = _incidence(unified, schemes, pairs)

    values = {
        "laconicity": MetricValue(
            "laconicity", sum(1 for r in prev_results if r.laconic), len(prev_results)),
        "lucidity": MetricValue(
            "lucidity", sum(1 for r in unified_results if r.lucid), len(unified_results)),
        "completeness": MetricValue(
            "completeness", sum(1 for r in prev_results if r.complete), len(prev_results)),
        "soundness": MetricValue(
            "soundness", sum(1 for r in unified_results if r.sound), len(unified_results)),
    }

    resolved = resolve_thresholds(thresholds)
    threshold_results = tuple(
        ThresholdResult(metric=name, threshold=resolved[name],
                        passed=values[name].value >= resolved[name])
        for name in METRIC_NAMES)

    return MetricReport(
        laconicity=values["laconicity"],
        lucidity=values["lucidity"],
        completeness=values["completeness"],
        soundness=values["soundness"],
        previous_nodes=tuple(prev_results),
        unified_nodes=tuple(unified_results),
        advice=tuple(_advice(unified.id, prev_results, unified_results, pairs)),
        thresholds=threshold_results,
    )


def _advice(unified_scheme_id: str,
            prev_results: Sequence[PreviousNodeResult],
            unified_results: Sequence[UnifiedNodeResult],
            pairs: Sequence[MappingPair]) -> list[Advice]:
    advice: list[Advice] = []

    # Not laconic: the unified nodes converging on d are merge candidates.
    for result in sorted((r for r in prev_results if not r.laconic),
                         key=lambda r: (r.scheme_id, r.node_id)):
        partners = tuple(sorted(
            pair.unified_node_id for pair in pairs
            if pair.previous_scheme_id == result.scheme_id
            and pair.previous_node_id == result.node_id))
        advice.append(Advice(
            kind="merge-candidates", scheme_id=result.scheme_id,
            node_id=result.node_id, related_node_ids=partners,
            message=(f"previous node {result.node_id!r} in scheme {result.scheme_id!r} "
                     f"is matched by {result.link_count} unified nodes; "
                     f"merge candidate unified nodes: {', '.join(partners)}")))

    # Not lucid within a scheme: c fans out inside that one scheme; split it.
    split_rows = [(fan.scheme_id, node.node_id, node, fan)
                  for node in unified_results for fan in node.per_scheme
                  if not fan.lucid]
    for scheme_id, node_id, node, fan in sorted(split_rows, key=lambda r: (r[0], r[1])):
        hits = tuple(sorted(
            pair.previous_node_id for pair in pairs
            if pair.unified_node_id == node_id and pair.previous_scheme_id == scheme_id))
        advice.append(Advice(
            kind="split-candidate", scheme_id=scheme_id, node_id=node_id,
            related_node_ids=hits,
            message=(f"unified node {node_id!r} maps to {fan.link_count} nodes "
                     f"within scheme {scheme_id!r} ({', '.join(hits)}); split candidate")))

    # Not complete: nothing in the unified scheme covers d.
    for result in sorted((r for r in prev_results if not r.complete),
                         key=lambda r: (r.scheme_id, r.node_id)):
        advice.append(Advice(
            kind="missing-coverage", scheme_id=result.scheme_id,
            node_id=result.node_id, related_node_ids=(),
            message=(f"previous node {result.node_id!r} in scheme {result.scheme_id!r} "
                     "is not covered by any unified node; missing coverage")))

    # Not sound: c is grounded in no previous scheme. Tolerated when the
    # class is a deliberate novel contribution, hence the justification flag.
    for node in sorted((n for n in unified_results if not n.sound),
                       key=lambda n: n.node_id):
        advice.append(Advice(
            kind="unsound-node", scheme_id=unified_scheme_id, node_id=node.node_id,
            related_node_ids=(),
            message=(f"unified node {node.node_id!r} maps into no previous scheme; "
                     "unnecessary or novel class, flag for user-study justification")))

    return advice
