"""Building classification schemes and checking their structure.

A scheme is a set of class/category nodes, optionally hierarchical. Every
structural rule is checked on demand and violations come back as data, so
you can fix all of them in one pass.
"""

from taxunify import (
    ClassificationScheme,
    ClassNode,
    MetaResearchArea,
    NodeKind,
    SchemeRole,
    validate_scheme,
)

# A small previous scheme: one category with two classes under it.
scheme = ClassificationScheme(
    id="research-types",
    name="Research type facets",
    role=SchemeRole.PREVIOUS,
    nodes=(
        ClassNode(id="empirical", label="Empirical", kind=NodeKind.CATEGORY,
                  area=MetaResearchArea.METHODS),
        ClassNode(id="case-study", label="Case Study", parent_id="empirical"),
        ClassNode(id="experiment", label="Experiment", parent_id="empirical"),
    ),
)

outcome = validate_scheme(scheme)
print(f"'{scheme.name}' valid: {outcome.ok}")

# Now break it three ways: duplicate id, dangling parent, class as parent.
broken = ClassificationScheme(
    id="broken",
    name="Broken scheme",
    role=SchemeRole.PREVIOUS,
    nodes=(
        ClassNode(id="a", label="A"),
        ClassNode(id="a", label="A again"),
        ClassNode(id="b", label="B", parent_id="nowhere"),
        ClassNode(id="c", label="C", parent_id="a"),  # 'a' is a Class
    ),
)

outcome = validate_scheme(broken)
print(f"'{broken.name}' valid: {outcome.ok}")
for violation in outcome.violations:
    print(f"  {violation.code}: {violation.message}")
