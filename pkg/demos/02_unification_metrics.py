"""The four unification metrics on a worked example.

The unified scheme has classes c1, c2; one previous scheme has d1, d2, d3.
The mapping {(c1,d1), (c1,d2), (c2,d2)} exhibits every interesting defect:
d2 is matched twice (merge candidates), c1 fans out inside one scheme
(split candidate), and d3 is uncovered (missing coverage).
"""

from taxunify import (
    ClassificationScheme,
    ClassNode,
    MappingPair,
    MappingSet,
    SchemeRole,
    metric_report,
)


def scheme(scheme_id, role, labels):
    return ClassificationScheme(
        id=scheme_id, name=scheme_id, role=role,
        nodes=tuple(ClassNode(id=i, label=l) for i, l in labels.items()))


unified = scheme("unified", SchemeRole.UNIFIED,
                 {"c1": "Empirical Study", "c2": "Solution Proposal"})
prev = scheme("legacy", SchemeRole.PREVIOUS,
              {"d1": "Case Study", "d2": "Experiment", "d3": "Survey"})
mapping = MappingSet.from_pairs("demo", [
    MappingPair("c1", "legacy", "d1"),
    MappingPair("c1", "legacy", "d2"),
    MappingPair("c2", "legacy", "d2"),
])

report = metric_report(unified, [prev], mapping)
for name in ("laconicity", "lucidity", "completeness", "soundness"):
    value = report.metric(name)
    print(f"{name:<13} {value.numerator}/{value.denominator} = {value.decimal}")

print("\nWhat the numbers are telling us:")
for advice in report.advice:
    print(f"  [{advice.kind}] {advice.message}")

# The metrics drive a refinement loop. Suppose we decide c2 and d2 were a
# mistake and remove that pair: d2 becomes laconic again.
refined = mapping.without_pair(MappingPair("c2", "legacy", "d2"))
after = metric_report(unified, [prev], refined)
print(f"\nafter removing (c2, d2): laconicity "
      f"{report.laconicity.value} -> {after.laconicity.value}")

# Thresholds make the go/no-go call explicit; completeness defaults to 0.95.
print(f"all thresholds passed: {after.all_thresholds_passed}")
for result in after.thresholds:
    status = "pass" if result.passed else "FAIL"
    print(f"  {result.metric:<13} >= {result.threshold}  {status}")
