"""Evaluation-phase measures for classification user studies.

Covers the three applicability properties: reliability via Krippendorff's
alpha (nominal level, missing data handled by dropping singly-annotated
units), correctness via per-class confusion counts against a gold standard,
and ease of use via System Usability Scale scoring.
"""

from __future__ import annotations

import enum
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .canonical import render_decimal
from .errors import (
    InsufficientDataError,
    LabelOutsideAlphabetError,
    OutOfRangeItemError,
    UnknownUnitError,
)


@dataclass(frozen=True)
class AnnotationMatrix:
    """units x annotators classification results; cells may be missing.

    ``labels`` is a partial function (unit, annotator) -> category label.
    A missing cell is simply absent; the empty string is not a label unless
    it is declared in the category set.
    """

    units: tuple[str, ...]
    annotators: tuple[str, ...]
    labels: Mapping[tuple[str, str], str]
    categories: frozenset[str]

    def __post_init__(self):
        if len(set(self.units)) != len(self.units):
            raise ValueError("unit ids must be unique")
        if len(set(self.annotators)) != len(self.annotators):
            raise ValueError("annotator ids must be unique")
        if len(self.annotators) < 2:
            raise ValueError("an annotation matrix needs at least 2 annotators")
        unit_set, annotator_set = set(self.units), set(self.annotators)
        for (unit, annotator), label in self.labels.items():
            if unit not in unit_set:
                raise ValueError(f"label for unknown unit {unit!r}")
            if annotator not in annotator_set:
                raise ValueError(f"label for unknown annotator {annotator!r}")
            if label not in self.categories:
                raise LabelOutsideAlphabetError(label, f"cell ({unit}, {annotator})")

    @classmethod
    def build(cls, labels: Mapping[str, Mapping[str, str]],
              units: Sequence[str] | None = None,
              annotators: Sequence[str] | None = None,
              categories: Iterable[str] | None = None) -> "AnnotationMatrix":
        """Construct from nested unit -> annotator -> label dicts. Units,
        annotators, and categories default to what the labels mention."""
        flat = {(unit, annotator): label
                for unit, row in labels.items() for annotator, label in row.items()}
        if units is None:
            units = sorted({unit for unit, _ in flat})
        if annotators is None:
            annotators = sorted({annotator for _, annotator in flat})
        if categories is None:
            categories = sorted(set(flat.values()))
        return cls(units=tuple(units), annotators=tuple(annotators),
                   labels=dict(flat), categories=frozenset(categories))

    def unit_labels(self, unit: str) -> list[str]:
        """Present labels of one unit, in annotator order."""
        return [self.labels[(unit, annotator)] for annotator in self.annotators
                if (unit, annotator) in self.labels]

    def annotator_labels(self, annotator: str) -> dict[str, str]:
        """unit -> label for one annotator's present cells."""
        return {unit: self.labels[(unit, annotator)] for unit in self.units
                if (unit, annotator) in self.labels}


@dataclass(frozen=True)
class GoldStandard:
    """Reference labeling: a total function unit id -> label."""

    labels: Mapping[str, str]

    def check_against(self, categories: frozenset[str]) -> None:
        for unit, label in self.labels.items():
            if label not in categories:
                raise LabelOutsideAlphabetError(label, f"gold label of unit {unit!r}")


@dataclass(frozen=True)
class AlphaResult:
    """alpha = 1 - D_o/D_e, with the coincidence matrix it came from.

    All quantities are exact rationals. ``degenerate`` marks the D_e = 0
    case (a single category among all paired values): agreement is perfect
    by construction and alpha is reported as 1 with this flag set.
    """

    alpha: Fraction
    observed_disagreement: Fraction
    expected_disagreement: Fraction
    coincidences: Mapping[tuple[str, str], Fraction]
    category_totals: Mapping[str, Fraction]
    n_total: Fraction
    categories: tuple[str, ...]
    excluded_units: tuple[str, ...]
    degenerate: bool

    def as_document(self) -> dict:
        matrix = {c: {k: str(self.coincidences.get((c, k), Fraction(0)))
                      for k in self.categories}
                  for c in self.categories}
        return {
            "alpha": str(self.alpha),
            "alphaDecimal": render_decimal(self.alpha, 3),
            "observedDisagreement": str(self.observed_disagreement),
            "expectedDisagreement": str(self.expected_disagreement),
            "coincidenceMatrix": matrix,
            "categoryTotals": {c: str(self.category_totals.get(c, Fraction(0)))
                               for c in self.categories},
            "nTotal": str(self.n_total),
            "categories": list(self.categories),
            "excludedUnits": list(self.excluded_units),
            "degenerate": self.degenerate,
        }


def krippendorff_alpha(matrix: AnnotationMatrix, level: str = "nominal") -> AlphaResult:
    """Inter-annotator agreement over the coincidence matrix.

    Units with fewer than two present labels carry no pairable information
    and are excluded. Each remaining unit with m labels contributes each
    ordered label pair with weight 1/(m - 1).
    """
    if level != "nominal":
        raise ValueError(f"only nominal-level alpha is supported, got {level!r}")

    scored: list[list[str]] = []
    excluded: list[str] = []
    for unit in matrix.units:
        labels = matrix.unit_labels(unit)
        if len(labels) >= 2:
            scored.append(labels)
        else:
            excluded.append(unit)
    if not scored:
        raise InsufficientDataError(
            "no unit has two or more labels; alpha is undefined")

    coincidences: dict[tuple[str, str], Fraction] = {}
    for labels in scored:
        weight = Fraction(1, len(labels) - 1)
        for i, first in enumerate(labels):
            for j, second in enumerate(labels):
                if i == j:
                    continue
                key = (first, second)
                coincidences[key] = coincidences.get(key, Fraction(0)) + weight

    categories = tuple(sorted({label for labels in scored for label in labels}))
    totals = {c: sum((coincidences.get((c, k), Fraction(0)) for k in categories),
                     Fraction(0))
              for c in categories}
    n_total = sum(totals.values(), Fraction(0))

    observed = sum((value for (c, k), value in coincidences.items() if c != k),
                   Fraction(0)) / n_total
    expected_numerator = sum(
        (totals[c] * totals[k] for c in categories for k in categories if c != k),
        Fraction(0))
    expected = expected_numerator / (n_total * (n_total - 1))

    degenerate = expected == 0
    alpha = Fraction(1) if degenerate else 1 - observed / expected
    return AlphaResult(
        alpha=alpha, observed_disagreement=observed, expected_disagreement=expected,
        coincidences=coincidences, category_totals=totals, n_total=n_total,
        categories=categories, excluded_units=tuple(excluded), degenerate=degenerate)


@dataclass(frozen=True)
class ClassScores:
    """One-vs-rest confusion counts for a single class. precision, recall,
    and f1 are None when their denominator is zero (the 0/0 case is made
    explicit, never imputed)."""

    label: str
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision(self) -> Fraction | None:
        return Fraction(self.tp, self.tp + self.fp) if self.tp + self.fp else None

    @property
    def recall(self) -> Fraction | None:
        return Fraction(self.tp, self.tp + self.fn) if self.tp + self.fn else None

    @property
    def f1(self) -> Fraction | None:
        denominator = 2 * self.tp + self.fp + self.fn
        return Fraction(2 * self.tp, denominator) if denominator else None


@dataclass(frozen=True)
class ConfusionReport:
    """Per-class scores plus micro (pooled counts) and macro (unweighted
    mean over defined classes) aggregates."""

    per_class: tuple[ClassScores, ...]
    scored_units: int

    @property
    def accuracy(self) -> Fraction:
        correct = sum(scores.tp for scores in self.per_class)
        return Fraction(correct, self.scored_units)

    def _micro(self, numerator, denominator) -> Fraction | None:
        return Fraction(numerator, denominator) if denominator else None

    @property
    def micro_precision(self) -> Fraction | None:
        tp = sum(s.tp for s in self.per_class)
        return self._micro(tp, tp + sum(s.fp for s in self.per_class))

    @property
    def micro_recall(self) -> Fraction | None:
        tp = sum(s.tp for s in self.per_class)
        return self._micro(tp, tp + sum(s.fn for s in self.per_class))

    @property
    def micro_f1(self) -> Fraction | None:
        tp = sum(s.tp for s in self.per_class)
        denominator = 2 * tp + sum(s.fp for s in self.per_class) + sum(s.fn for s in self.per_class)
        return self._micro(2 * tp, denominator)

    def macro(self, score: str) -> tuple[Fraction | None, int]:
        """Unweighted mean of the per-class score; undefined classes are
        skipped, and the skip count is returned alongside."""
        values = [getattr(scores, score) for scores in self.per_class]
        defined = [value for value in values if value is not None]
        skipped = len(values) - len(defined)
        if not defined:
            return None, skipped
        return sum(defined, Fraction(0)) / len(defined), skipped

    def as_document(self) -> dict:
        def fraction_or_null(value: Fraction | None):
            return None if value is None else str(value)

        macro_doc = {}
        for score in ("precision", "recall", "f1"):
            value, skipped = self.macro(score)
            macro_doc[score] = fraction_or_null(value)
            macro_doc[f"{score}SkippedClasses"] = skipped
        return {
            "scoredUnits": self.scored_units,
            "accuracy": str(self.accuracy),
            "accuracyDecimal": render_decimal(self.accuracy, 4),
            "perClass": [
                {
                    "label": scores.label,
                    "tp": scores.tp, "fp": scores.fp,
                    "fn": scores.fn, "tn": scores.tn,
                    "precision": fraction_or_null(scores.precision),
                    "recall": fraction_or_null(scores.recall),
                    "f1": fraction_or_null(scores.f1),
                }
                for scores in self.per_class
            ],
            "micro": {
                "precision": fraction_or_null(self.micro_precision),
                "recall": fraction_or_null(self.micro_recall),
                "f1": fraction_or_null(self.micro_f1),
            },
            "macro": macro_doc,
        }


def correctness(predicted: Mapping[str, str], gold: GoldStandard,
                categories: Iterable[str] | None = None) -> ConfusionReport:
    """Score one labeling against the gold standard.

    Every predicted unit must exist in gold. The class set defaults to the
    union of predicted and gold labels over the scored units.
    """
    unknown = [unit for unit in predicted if unit not in gold.labels]
    if unknown:
        raise UnknownUnitError(unknown)
    if not predicted:
        raise ValueError("no scored units")

    scored = sorted(predicted)
    if categories is None:
        labels = set(predicted.values()) | {gold.labels[unit] for unit in scored}
        categories = sorted(labels)
    else:
        categories = sorted(set(categories))
        for unit in scored:
            if predicted[unit] not in categories:
                raise LabelOutsideAlphabetError(predicted[unit], f"prediction for {unit!r}")
            if gold.labels[unit] not in categories:
                raise LabelOutsideAlphabetError(gold.labels[unit], f"gold label of {unit!r}")

    per_class = []
    for label in categories:
        tp = sum(1 for unit in scored
                 if predicted[unit] == label and gold.labels[unit] == label)
        fp = sum(1 for unit in scored
                 if predicted[unit] == label and gold.labels[unit] != label)
        fn = sum(1 for unit in scored
                 if predicted[unit] != label and gold.labels[unit] == label)
        tn = len(scored) - tp - fp - fn
        per_class.append(ClassScores(label=label, tp=tp, fp=fp, fn=fn, tn=tn))
    return ConfusionReport(per_class=tuple(per_class), scored_units=len(scored))


@dataclass(frozen=True)
class StudyCorrectness:
    """Correctness of a whole study: per annotator and on the majority vote.

    Studies differ on which labeling should be scored, so both are computed.
    Majority-vote ties break to the lexicographically smallest label and the
    affected units are flagged.
    """

    per_annotator: Mapping[str, ConfusionReport]
    majority: ConfusionReport
    tie_units: tuple[str, ...]


def majority_vote(matrix: AnnotationMatrix) -> tuple[dict[str, str], tuple[str, ...]]:
    """Consolidate the matrix into one label per (annotated) unit."""
    consolidated: dict[str, str] = {}
    ties: list[str] = []
    for unit in matrix.units:
        labels = matrix.unit_labels(unit)
        if not labels:
            continue
        counts: dict[str, int] = {}
        for label in labels:
            counts[label] = counts.get(label, 0) + 1
        best = max(counts.values())
        winners = sorted(label for label, count in counts.items() if count == best)
        if len(winners) > 1:
            ties.append(unit)
        consolidated[unit] = winners[0]
    return consolidated, tuple(ties)


def study_correctness(matrix: AnnotationMatrix, gold: GoldStandard) -> StudyCorrectness:
    gold.check_against(matrix.categories)
    categories = sorted(matrix.categories)
    per_annotator = {}
    for annotator in matrix.annotators:
        labels = matrix.annotator_labels(annotator)
        if labels:
            per_annotator[annotator] = correctness(labels, gold, categories)
    consolidated, ties = majority_vote(matrix)
    majority = correctness(consolidated, gold, categories)
    return StudyCorrectness(per_annotator=per_annotator, majority=majority,
                            tie_units=ties)


class LikertAnchor(enum.IntEnum):
    """Scale anchors: strongly disagree (1) .. strongly agree (5)."""

    STRONGLY_DISAGREE = 1
    DISAGREE = 2
    NEUTRAL = 3
    AGREE = 4
    STRONGLY_AGREE = 5


@dataclass(frozen=True)
class SusResponse:
    """One filled 10-item usability survey."""

    items: tuple[int, ...]
    respondent: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.items) != 10:
            raise ValueError(f"expected exactly 10 items, got {len(self.items)}")
        for index, value in enumerate(self.items, start=1):
            if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
                raise OutOfRangeItemError(index, value)


def sus_score(response: SusResponse) -> float:
    """Standard SUS arithmetic: odd items score - 1, even items 5 - score,
    summed and stretched to 0..100. All results are multiples of 2.5."""
    total = 0
    for position, value in enumerate(response.items, start=1):
        total += (value - 1) if position % 2 == 1 else (5 - value)
    return total * 2.5


@dataclass(frozen=True)
class SusBatch:
    count: int
    mean: float
    median: float
    min: float
    max: float
    scores: tuple[float, ...]

    def as_document(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "median": self.median,
            "min": self.min,
            "max": self.max,
            "scores": list(self.scores),
        }


def sus_batch(responses: Sequence[SusResponse]) -> SusBatch:
    if not responses:
        raise ValueError("no survey responses")
    scores = tuple(sus_score(response) for response in responses)
    return SusBatch(count=len(scores), mean=statistics.fmean(scores),
                    median=statistics.median(scores), min=min(scores),
                    max=max(scores), scores=scores)
