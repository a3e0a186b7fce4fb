"""Independent oracles: brute-force recounts that never share data structures
with the implementation under test.

The metric oracle works on plain (unified node ids, per-scheme node ids,
triple list) inputs and counts incidences by scanning the raw pair list per
node. The agreement oracle rebuilds the coincidence matrix from first
principles. Expected values in the test modules were computed with these
before the fast paths existed.
"""

from __future__ import annotations

import random
from fractions import Fraction

Triple = tuple[str, str, str]  # (unified node, previous scheme, previous node)


def brute_force_metrics(unified_node_ids: list[str],
                        previous_nodes: dict[str, list[str]],
                        triples: list[Triple]) -> dict[str, Fraction]:
    """Recount all four metrics by scanning every (node, pair) incidence."""
    laconic = 0
    complete = 0
    total_previous = 0
    for scheme_id, node_ids in previous_nodes.items():
        for node_id in node_ids:
            total_previous += 1
            partners = [u for (u, s, d) in triples
                        if s == scheme_id and d == node_id]
            if len(partners) <= 1:
                laconic += 1
            if len(partners) >= 1:
                complete += 1

    lucid = 0
    sound = 0
    for unified_id in unified_node_ids:
        per_scheme_counts = []
        for scheme_id in previous_nodes:
            hits = [d for (u, s, d) in triples
                    if u == unified_id and s == scheme_id]
            per_scheme_counts.append(len(hits))
        if min(1 if count <= 1 else 0 for count in per_scheme_counts) == 1:
            lucid += 1
        if max(1 if count >= 1 else 0 for count in per_scheme_counts) == 1:
            sound += 1

    return {
        "laconicity": Fraction(laconic, total_previous),
        "lucidity": Fraction(lucid, len(unified_node_ids)),
        "completeness": Fraction(complete, total_previous),
        "soundness": Fraction(sound, len(unified_node_ids)),
    }


def random_raw_project(rng: random.Random,
                       max_nodes: int = 6,
                       max_previous: int = 3,
                       ) -> tuple[list[str], dict[str, list[str]], list[Triple]]:
    """A random project in raw form: ids only, unique triples."""
    unified = [f"c{i}" for i in range(1, rng.randint(1, max_nodes) + 1)]
    previous: dict[str, list[str]] = {}
    for index in range(1, rng.randint(1, max_previous) + 1):
        scheme_id = f"T{index}"
        previous[scheme_id] = [f"{scheme_id}d{j}"
                               for j in range(1, rng.randint(1, max_nodes) + 1)]
    universe = [(u, s, d)
                for u in unified for s, nodes in previous.items() for d in nodes]
    count = rng.randint(0, len(universe))
    triples = rng.sample(universe, count)
    rng.shuffle(triples)
    return unified, previous, triples


def coincidence_by_hand(unit_labels: list[list[str]]) -> dict:
    """Rebuild the agreement quantities from the definition: each unit with
    m >= 2 labels contributes every ordered label pair with weight 1/(m-1)."""
    matrix: dict[tuple[str, str], Fraction] = {}
    for labels in unit_labels:
        if len(labels) < 2:
            continue
        weight = Fraction(1, len(labels) - 1)
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                if i != j:
                    matrix[(a, b)] = matrix.get((a, b), Fraction(0)) + weight
    categories = sorted({c for pair in matrix for c in pair})
    totals = {c: sum((matrix.get((c, k), Fraction(0)) for k in categories),
                     Fraction(0))
              for c in categories}
    n = sum(totals.values(), Fraction(0))
    observed = sum((v for (c, k), v in matrix.items() if c != k), Fraction(0)) / n
    expected = sum((totals[c] * totals[k]
                    for c in categories for k in categories if c != k),
                   Fraction(0)) / (n * (n - 1))
    alpha = Fraction(1) if expected == 0 else 1 - observed / expected
    return {"matrix": matrix, "totals": totals, "n": n,
            "observed": observed, "expected": expected, "alpha": alpha}


def confusion_by_hand(predicted: dict[str, str], gold: dict[str, str],
                      label: str) -> tuple[int, int, int, int]:
    """One-vs-rest counts for a single class by enumerating every decision."""
    tp = fp = fn = tn = 0
    for unit, prediction in predicted.items():
        truth = gold[unit]
        if prediction == label and truth == label:
            tp += 1
        elif prediction == label and truth != label:
            fp += 1
        elif prediction != label and truth == label:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn
