"""Evaluating a classification user study.

Two annotators label four papers; we measure inter-annotator reliability
(Krippendorff's alpha), correctness against a gold standard (per annotator
and on the majority vote), and perceived ease of use (SUS).
"""

from pathlib import Path

from taxunify import (
    load_annotations,
    load_gold,
    load_sus,
    krippendorff_alpha,
    study_correctness,
    sus_batch,
)
from taxunify.canonical import render_decimal

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

matrix = load_annotations(FIXTURES / "annotations.csv")
print(f"{len(matrix.units)} units, annotators: {', '.join(matrix.annotators)}")

result = krippendorff_alpha(matrix)
print(f"alpha = {result.alpha} = {render_decimal(result.alpha, 3)}")
print(f"  observed disagreement {result.observed_disagreement}, "
      f"expected {result.expected_disagreement}")
print("  coincidence matrix:")
for c in result.categories:
    row = "  ".join(str(result.coincidences.get((c, k), 0))
                    for k in result.categories)
    print(f"    {c}: {row}")

gold = load_gold(FIXTURES / "gold.json")
study = study_correctness(matrix, gold)
for annotator, report in sorted(study.per_annotator.items()):
    print(f"annotator {annotator}: accuracy {report.accuracy} "
          f"({render_decimal(report.accuracy, 4)})")
print(f"majority vote: accuracy {study.majority.accuracy}"
      + (f", ties on {', '.join(study.tie_units)}" if study.tie_units else ""))

# Per-class detail for one report: precision may be undefined (0/0) for a
# class that never occurs; it is excluded from macro averages, never imputed.
for scores in study.majority.per_class:
    print(f"  class {scores.label}: tp={scores.tp} fp={scores.fp} "
          f"fn={scores.fn} tn={scores.tn} precision={scores.precision} "
          f"recall={scores.recall} f1={scores.f1}")

responses = load_sus(FIXTURES / "sus.csv")
batch = sus_batch(responses)
print(f"SUS over {batch.count} respondents: mean {batch.mean}, "
      f"median {batch.median}, range {batch.min}..{batch.max}")
