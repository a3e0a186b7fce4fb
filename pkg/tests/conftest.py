"""Shared fixtures and the acceptance-suite summary printer."""

from __future__ import annotations

import pytest

from taxunify import (
    ClassificationScheme,
    ClassNode,
    MappingPair,
    MappingSet,
    SchemeRole,
)


def scheme(scheme_id: str, role: SchemeRole, node_ids: list[str],
           name: str | None = None) -> ClassificationScheme:
    return ClassificationScheme(
        id=scheme_id, name=name or scheme_id, role=role,
        nodes=tuple(ClassNode(id=node_id, label=node_id.upper())
                    for node_id in node_ids))


def unified(scheme_id: str, node_ids: list[str]) -> ClassificationScheme:
    return scheme(scheme_id, SchemeRole.UNIFIED, node_ids)


def previous(scheme_id: str, node_ids: list[str]) -> ClassificationScheme:
    return scheme(scheme_id, SchemeRole.PREVIOUS, node_ids)


def pairs(*triples: tuple[str, str, str]) -> MappingSet:
    return MappingSet.from_pairs(
        "test", [MappingPair(*triple) for triple in triples])


@pytest.fixture
def fan_fixture():
    """C={c1,c2}, T1={d1,d2,d3}, mapping {(c1,d1),(c1,d2),(c2,d2)}."""
    return (unified("U", ["c1", "c2"]),
            [previous("T1", ["d1", "d2", "d3"])],
            pairs(("c1", "T1", "d1"), ("c1", "T1", "d2"), ("c2", "T1", "d2")))


@pytest.fixture
def identity_fixture():
    """C={c1}, T1={d1}, mapping {(c1,d1)}: the minimal bijection."""
    return (unified("U", ["c1"]),
            [previous("T1", ["d1"])],
            pairs(("c1", "T1", "d1")))


@pytest.fixture
def two_scheme_fixture():
    """C={c1}, T1={d1}, T2={e1,e2}, mapping {(c1,d1),(c1,e1),(c1,e2)}."""
    return (unified("U", ["c1"]),
            [previous("T1", ["d1"]), previous("T2", ["e1", "e2"])],
            pairs(("c1", "T1", "d1"), ("c1", "T2", "e1"), ("c1", "T2", "e2")))


# --- acceptance summary -----------------------------------------------------

def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", None) != "call":
                continue
            properties = dict(getattr(report, "user_properties", []) or [])
            if "criterion" not in properties:
                continue
            rows.append((properties["criterion"], status == "passed"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok in sorted(rows):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {criterion}")
