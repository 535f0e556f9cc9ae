"""Classifier and annotation-agreement metrics.

Confusion matrices are oriented rows=actual, columns=predicted.  KL
distance uses natural logs with additive smoothing of the raw counts, so
zero test-set cells stay finite.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


class EmptyMatrix(Exception):
    """Accuracy of a matrix with no observations is undefined."""


class DegenerateAgreement(Exception):
    """Chance agreement is already 1; kappa is undefined unless observed is."""


class InvalidDistribution(Exception):
    """Distributions must carry nonnegative mass."""


@dataclass
class ConfusionMatrix:
    labels: list[str]
    counts: list[list[int]]  # rows = actual, columns = predicted

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[str, str]],
                   labels: Sequence[str] | None = None) -> "ConfusionMatrix":
        pairs = list(pairs)
        if labels is None:
            labels = sorted({a for a, _ in pairs} | {p for _, p in pairs})
        labels = list(labels)
        index = {label: i for i, label in enumerate(labels)}
        counts = [[0] * len(labels) for _ in labels]
        for actual, predicted in pairs:
            counts[index[actual]][index[predicted]] += 1
        return ConfusionMatrix(labels, counts)

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def true_positives(self, label: str) -> int:
        i = self.labels.index(label)
        return self.counts[i][i]

    def predicted_positives(self, label: str) -> int:
        j = self.labels.index(label)
        return sum(row[j] for row in self.counts)

    def actual_positives(self, label: str) -> int:
        i = self.labels.index(label)
        return sum(self.counts[i])

    def per_label(self) -> dict[str, tuple[float, float, float]]:
        return {
            label: precision_recall_f1(self.true_positives(label),
                                       self.predicted_positives(label),
                                       self.actual_positives(label))
            for label in self.labels
        }


def precision_recall_f1(tp: int, predicted_pos: int,
                        actual_pos: int) -> tuple[float, float, float]:
    """Precision, recall and their harmonic mean from raw counts."""
    if tp > min(predicted_pos, actual_pos):
        raise ValueError("true positives exceed a marginal count")
    precision = tp / predicted_pos if predicted_pos else 0.0
    recall = tp / actual_pos if actual_pos else 0.0
    if precision + recall == 0.0:
        return precision, recall, 0.0
    f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def accuracy(matrix: ConfusionMatrix) -> float:
    total = matrix.total()
    if total == 0:
        raise EmptyMatrix("no observations")
    trace = sum(matrix.counts[i][i] for i in range(len(matrix.labels)))
    return trace / total


def cohens_kappa(ratings: Sequence[tuple[str, str]]) -> float:
    """Chance-corrected agreement for two raters."""
    if not ratings:
        raise ValueError("need at least one rating pair")
    n = len(ratings)
    observed = sum(1 for a, b in ratings if a == b) / n
    counts_a = Counter(a for a, _ in ratings)
    counts_b = Counter(b for _, b in ratings)
    expected = sum((counts_a[label] / n) * (counts_b[label] / n)
                   for label in set(counts_a) | set(counts_b))
    if abs(1.0 - expected) < 1e-12:
        if abs(1.0 - observed) < 1e-12:
            return 1.0
        raise DegenerateAgreement("chance agreement is 1 but observed is not")
    return (observed - expected) / (1.0 - expected)


def fleiss_kappa(table: Sequence[Sequence[int]]) -> float:
    """Chance-corrected agreement for n raters per item.

    ``table`` is items x categories; every row must sum to the same rater
    count n >= 2.
    """
    if not table:
        raise ValueError("need at least one item")
    n = sum(table[0])
    if n < 2:
        raise ValueError("need at least two raters per item")
    for row in table:
        if sum(row) != n:
            raise ValueError("rows must all sum to the same rater count")
    items = len(table)
    categories = len(table[0])

    p_bar = 0.0
    for row in table:
        agree = sum(c * (c - 1) for c in row)
        p_bar += agree / (n * (n - 1))
    p_bar /= items

    total = items * n
    p_e = 0.0
    for j in range(categories):
        p_j = sum(row[j] for row in table) / total
        p_e += p_j * p_j

    if abs(1.0 - p_e) < 1e-12:
        if abs(1.0 - p_bar) < 1e-12:
            return 1.0
        raise DegenerateAgreement("chance agreement is 1 but observed is not")
    return (p_bar - p_e) / (1.0 - p_e)


def kl_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """Kullback-Leibler distance sum(p_i * ln(p_i / q_i)) in nats."""
    if len(p) != len(q):
        raise ValueError("distributions must share a support")
    if any(x < 0 for x in p) or any(x < 0 for x in q):
        raise InvalidDistribution("negative mass")
    if abs(sum(p) - 1.0) > 1e-9 or abs(sum(q) - 1.0) > 1e-9:
        raise InvalidDistribution("distributions must sum to 1")
    total = 0.0
    for p_i, q_i in zip(p, q):
        if p_i == 0.0:
            continue
        if q_i == 0.0:
            return math.inf
        total += p_i * math.log(p_i / q_i)
    return total


def smooth_counts(counts: Sequence[float], alpha: float = 0.5) -> list[float]:
    """Additive smoothing, then normalization to a distribution."""
    if any(c < 0 for c in counts):
        raise InvalidDistribution("negative counts")
    total = sum(counts) + alpha * len(counts)
    if total == 0:
        raise InvalidDistribution("nothing to normalize")
    return [(c + alpha) / total for c in counts]


def kl_from_counts(p_counts: Sequence[float], q_counts: Sequence[float],
                   alpha: float = 0.5) -> float:
    """KL distance between two count vectors after smoothing both."""
    return kl_divergence(smooth_counts(p_counts, alpha),
                         smooth_counts(q_counts, alpha))


def format_matrix_report(matrix: ConfusionMatrix) -> str:
    """Aligned text table: counts block then per-label precision/recall/F1."""
    labels = matrix.labels
    short = [label[:2] for label in labels]
    width = max([12] + [len(label) + 1 for label in labels])
    head = "Category".ljust(width) + "".join(s.rjust(5) for s in short)
    head += "Cls.".rjust(6)
    lines = [head]
    for i, label in enumerate(labels):
        row = label.ljust(width)
        row += "".join(str(c).rjust(5) for c in matrix.counts[i])
        row += str(sum(matrix.counts[i])).rjust(6)
        lines.append(row)
    answer = "Answer".ljust(width)
    answer += "".join(str(matrix.predicted_positives(lb)).rjust(5)
                      for lb in labels)
    answer += str(matrix.total()).rjust(6)
    lines.append(answer)
    lines.append("")
    lines.append("Category".ljust(width)
                 + "Precision".rjust(11) + "Recall".rjust(9) + "F1".rjust(7))
    for label in labels:
        p, r, f1 = matrix.per_label()[label]
        tp = matrix.true_positives(label)
        lines.append(
            label.ljust(width)
            + f"{p:.2f} ({tp}/{matrix.predicted_positives(label)})".rjust(11)
            + f"{r:.2f} ({tp}/{matrix.actual_positives(label)})".rjust(9)
            + f"{f1:.2f}".rjust(7))
    return "\n".join(lines)


def matrix_report_json(matrix: ConfusionMatrix) -> dict:
    per_label = {
        label: {"precision": p, "recall": r, "f1": f1,
                "tp": matrix.true_positives(label),
                "predicted": matrix.predicted_positives(label),
                "actual": matrix.actual_positives(label)}
        for label, (p, r, f1) in matrix.per_label().items()
    }
    return {
        "labels": matrix.labels,
        "counts": matrix.counts,
        "total": matrix.total(),
        "accuracy": accuracy(matrix) if matrix.total() else None,
        "per_label": per_label,
    }
