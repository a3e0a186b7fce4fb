"""Domain types for classification schemes and their mappings.

A project pairs one unified scheme with a set of previous schemes and a
mapping relation between them. Everything here is an immutable value;
"mutation" means building a new value. Validation never raises: violations
come back as data so callers can show all of them at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class MetaResearchArea(enum.Enum):
    """The five thematic areas of meta-research."""

    METHODS = "Methods"
    REPORTING = "Reporting"
    REPRODUCIBILITY = "Reproducibility"
    EVALUATION = "Evaluation"
    INCENTIVES = "Incentives"

    @classmethod
    def parse(cls, label: str) -> "MetaResearchArea":
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown meta-research area: {label!r}")


class NodeKind(enum.Enum):
    CATEGORY = "Category"
    CLASS = "Class"

    @classmethod
    def parse(cls, label: str) -> "NodeKind":
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown node kind: {label!r}")


class SchemeRole(enum.Enum):
    UNIFIED = "Unified"
    PREVIOUS = "Previous"

    @classmethod
    def parse(cls, label: str) -> "SchemeRole":
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown scheme role: {label!r}")


@dataclass(frozen=True)
class ClassNode:
    """One class or category inside a scheme.

    Identity is the id alone; labels may repeat across nodes (real schemes
    reuse words like "Evaluation").
    """

    id: str
    label: str
    kind: NodeKind = NodeKind.CLASS
    parent_id: str | None = None
    area: MetaResearchArea | None = None
    description: str | None = None
    extras: Mapping[str, object] = field(default_factory=dict, compare=True)


@dataclass(frozen=True)
class ClassificationScheme:
    """A named set of class nodes, either the unified scheme or a previous one.

    Nodes are a set, so construction normalizes them into id order; equality
    and serialization are independent of the order callers supply. Duplicate
    ids survive normalization and are caught by validate_scheme.
    """

    id: str
    name: str
    role: SchemeRole
    nodes: tuple[ClassNode, ...]
    provenance: str | None = None
    extras: Mapping[str, object] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))

    def node_ids(self) -> set[str]:
        return {node.id for node in self.nodes}

    def node_by_id(self, node_id: str) -> ClassNode | None:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def size(self) -> int:
        """Node count as used for |C| or |T|: every node counts, any kind."""
        return len(self.nodes)


@dataclass(frozen=True, order=True)
class MappingPair:
    """One correspondence (unified node, previous node) for one previous scheme."""

    unified_node_id: str
    previous_scheme_id: str
    previous_node_id: str
    note: str | None = field(default=None, compare=False)
    extras: Mapping[str, object] = field(default_factory=dict, compare=False)

    def triple(self) -> tuple[str, str, str]:
        return (self.unified_node_id, self.previous_scheme_id, self.previous_node_id)


@dataclass(frozen=True)
class MappingSet:
    """The mapping relation of a project, materialized as explicit pairs.

    The relation is a set: construction dedups on the identifying triple
    (first occurrence wins, so notes on later duplicates are dropped) and
    stores pairs in canonical sorted order, which makes equality and
    serialization independent of input order.
    """

    project_id: str
    pairs: tuple[MappingPair, ...]

    def __post_init__(self):
        seen: dict[tuple[str, str, str], MappingPair] = {}
        for pair in self.pairs:
            seen.setdefault(pair.triple(), pair)
        object.__setattr__(self, "pairs", tuple(sorted(seen.values())))

    @classmethod
    def from_pairs(cls, project_id: str, pairs: Iterable[MappingPair]) -> "MappingSet":
        return cls(project_id=project_id, pairs=tuple(pairs))

    def with_pair(self, pair: MappingPair) -> "MappingSet":
        return MappingSet.from_pairs(self.project_id, self.pairs + (pair,))

    def without_pair(self, pair: MappingPair) -> "MappingSet":
        kept = [p for p in self.pairs if p.triple() != pair.triple()]
        return MappingSet.from_pairs(self.project_id, kept)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, with enough ids to locate it."""

    code: str
    message: str
    context: tuple[tuple[str, str], ...] = ()

    @classmethod
    def make(cls, code: str, message: str, **context: str) -> "Violation":
        return cls(code=code, message=message, context=tuple(sorted(context.items())))


@dataclass(frozen=True)
class ValidationOutcome:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    @classmethod
    def collect(cls, violations: Iterable[Violation]) -> "ValidationOutcome":
        return cls(violations=tuple(violations))


def validate_scheme(scheme: ClassificationScheme) -> ValidationOutcome:
    """Check every node-level invariant of one scheme.

    Violations are data, not failures; an empty scheme is legal here and only
    rejected by metric computation.
    """
    violations: list[Violation] = []
    if not scheme.id:
        violations.append(Violation.make("EmptyId", "scheme id must be non-empty"))
    if not scheme.name:
        violations.append(Violation.make(
            "EmptyName", f"scheme {scheme.id!r} has an empty name", scheme_id=scheme.id))

    by_id: dict[str, ClassNode] = {}
    for node in scheme.nodes:
        if not node.id:
            violations.append(Violation.make(
                "EmptyId", "node id must be non-empty", scheme_id=scheme.id))
            continue
        if node.id in by_id:
            violations.append(Violation.make(
                "DuplicateId", f"node id {node.id!r} appears more than once",
                scheme_id=scheme.id, node_id=node.id))
        else:
            by_id[node.id] = node
        if not node.label:
            violations.append(Violation.make(
                "EmptyLabel", f"node {node.id!r} has an empty label",
                scheme_id=scheme.id, node_id=node.id))

    for node in by_id.values():
        if node.parent_id is None:
            continue
        parent = by_id.get(node.parent_id)
        if parent is None:
            violations.append(Violation.make(
                "DanglingParent",
                f"node {node.id!r} references missing parent {node.parent_id!r}",
                scheme_id=scheme.id, node_id=node.id, parent_id=node.parent_id))
        elif parent.kind is NodeKind.CLASS:
            violations.append(Violation.make(
                "ClassAsParent",
                f"node {node.id!r} has parent {parent.id!r} of kind Class; only categories may parent",
                scheme_id=scheme.id, node_id=node.id, parent_id=parent.id))

    violations.extend(_parent_cycles(scheme.id, by_id))
    return ValidationOutcome.collect(violations)


def _parent_cycles(scheme_id: str, by_id: dict[str, ClassNode]) -> list[Violation]:
    violations = []
    state: dict[str, int] = {}  # 0 visiting, 1 done
    for start in by_id:
        if start in state:
            continue
        trail = []
        current: str | None = start
        while current is not None and current in by_id and current not in state:
            state[current] = 0
            trail.append(current)
            current = by_id[current].parent_id
        if current is not None and state.get(current) == 0:
            cycle = trail[trail.index(current):]
            violations.append(Violation.make(
                "ParentCycle",
                "parent chain forms a cycle: " + " -> ".join(cycle + [current]),
                scheme_id=scheme_id, node_id=current))
        for visited in trail:
            state[visited] = 1
    return violations


def validate_mapping(unified: ClassificationScheme,
                     previous: Iterable[ClassificationScheme],
                     pairs: Iterable[MappingPair]) -> ValidationOutcome:
    """Check that the mapping relation is well-typed over the project's schemes.

    ``pairs`` may be the raw, pre-dedup list from a file so duplicates get
    reported; a loaded MappingSet's pairs are already deduped and will simply
    produce no DuplicatePair findings.
    """
    violations: list[Violation] = []
    previous_by_id = {scheme.id: scheme for scheme in previous}
    unified_ids = unified.node_ids()
    previous_node_ids = {sid: scheme.node_ids() for sid, scheme in previous_by_id.items()}

    seen: set[tuple[str, str, str]] = set()
    for pair in pairs:
        if pair.triple() in seen:
            violations.append(Violation.make(
                "DuplicatePair",
                f"pair ({pair.unified_node_id!r}, {pair.previous_scheme_id!r}, "
                f"{pair.previous_node_id!r}) listed more than once; deduplicated on load",
                unified_node_id=pair.unified_node_id,
                previous_scheme_id=pair.previous_scheme_id,
                previous_node_id=pair.previous_node_id))
            continue
        seen.add(pair.triple())

        if pair.unified_node_id not in unified_ids:
            violations.append(Violation.make(
                "UnknownUnifiedNode",
                f"pair references unified node {pair.unified_node_id!r} "
                f"not present in scheme {unified.id!r}",
                unified_node_id=pair.unified_node_id, scheme_id=unified.id))
        if pair.previous_scheme_id not in previous_by_id:
            violations.append(Violation.make(
                "UnknownScheme",
                f"pair references previous scheme {pair.previous_scheme_id!r} "
                "absent from the project",
                previous_scheme_id=pair.previous_scheme_id))
        elif pair.previous_node_id not in previous_node_ids[pair.previous_scheme_id]:
            violations.append(Violation.make(
                "UnknownPreviousNode",
                f"pair references node {pair.previous_node_id!r} not present "
                f"in scheme {pair.previous_scheme_id!r}",
                previous_node_id=pair.previous_node_id,
                previous_scheme_id=pair.previous_scheme_id))
    return ValidationOutcome.collect(violations)


def validate_project(unified: ClassificationScheme,
                     previous: Iterable[ClassificationScheme],
                     pairs: Iterable[MappingPair]) -> ValidationOutcome:
    """Whole-project validation: schemes individually, roles, then the mapping."""
    previous = list(previous)
    violations: list[Violation] = []
    seen_ids: set[str] = set()
    for scheme in previous:
        if scheme.id in seen_ids:
            violations.append(Violation.make(
                "DuplicateScheme",
                f"previous scheme {scheme.id!r} listed more than once; "
                "the previous schemes form a set",
                scheme_id=scheme.id))
        seen_ids.add(scheme.id)
    for scheme in [unified, *previous]:
        violations.extend(validate_scheme(scheme).violations)
    if unified.role is not SchemeRole.UNIFIED:
        violations.append(Violation.make(
            "WrongRole", f"scheme {unified.id!r} is used as unified but tagged {unified.role.value}",
            scheme_id=unified.id))
    for scheme in previous:
        if scheme.role is not SchemeRole.PREVIOUS:
            violations.append(Violation.make(
                "WrongRole",
                f"scheme {scheme.id!r} is used as previous but tagged {scheme.role.value}",
                scheme_id=scheme.id))
    violations.extend(validate_mapping(unified, previous, pairs).violations)
    return ValidationOutcome.collect(violations)
