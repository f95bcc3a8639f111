"""Group fairness and performance metrics over model scores.

Conventions, used consistently everywhere:

* decisions: a row is predicted positive when score >= threshold
  (ties go to positive); the default threshold is 0.5;
* equal opportunity (EOF) is signed as TPR(reference) - TPR(other), so a
  negative value means the model finds actual positives more often in
  the compared group than in the reference group;
* statistical parity (SDP) is the Wasserstein-1 distance between the two
  groups' raw score distributions, independent of any threshold;
* average absolute odds (AAO) is |TPR-FPR| for the reference group plus
  |TPR-FPR| for the compared group;
* the multi-group aggregate L sums the absolute pairwise metric over all
  non-reference groups; lower is fairer, zero at exact parity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

PAIRWISE_METRICS = ("eof", "sdp", "aao")


class UndefinedMetricError(ValueError):
    """The metric's preconditions are not met (e.g. a group without
    positive labels has no true positive rate)."""


class ConfusionCounts(NamedTuple):
    tp: int
    fp: int
    tn: int
    fn: int


def confusion(scores, labels, threshold: float = 0.5) -> ConfusionCounts:
    """Confusion counts at a decision threshold; score >= threshold is
    predicted positive."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if len(s) != len(y):
        raise ValueError("scores and labels must have equal length")
    if len(s) == 0:
        raise UndefinedMetricError("confusion counts need at least one row")
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    pred = s >= threshold
    actual = y == 1
    tp = int(np.sum(pred & actual))
    fp = int(np.sum(pred & ~actual))
    fn = int(np.sum(~pred & actual))
    tn = int(np.sum(~pred & ~actual))
    return ConfusionCounts(tp, fp, tn, fn)


@dataclass(frozen=True, eq=False)
class GroupOutcome:
    """Scores and labels of one group, with confusion-derived rates."""

    label: str
    scores: np.ndarray
    labels: np.ndarray
    threshold: float = 0.5

    @cached_property
    def counts(self) -> ConfusionCounts:
        return confusion(self.scores, self.labels, self.threshold)

    @property
    def n_positive(self) -> int:
        return self.counts.tp + self.counts.fn

    @property
    def n_negative(self) -> int:
        return self.counts.fp + self.counts.tn

    @property
    def tpr(self) -> float:
        if self.n_positive == 0:
            raise UndefinedMetricError(f"group {self.label!r}: undefined TPR (no positive labels)")
        return self.counts.tp / self.n_positive

    @property
    def fpr(self) -> float:
        if self.n_negative == 0:
            raise UndefinedMetricError(f"group {self.label!r}: undefined FPR (no negative labels)")
        return self.counts.fp / self.n_negative


def equal_opportunity(reference: GroupOutcome, group: GroupOutcome) -> float:
    """TPR(reference) - TPR(group); see the sign convention above."""
    return reference.tpr - group.tpr


def average_absolute_odds(reference: GroupOutcome, group: GroupOutcome) -> float:
    """|TPR - FPR| of the reference plus |TPR - FPR| of the group."""
    return abs(reference.tpr - reference.fpr) + abs(group.tpr - group.fpr)


def wasserstein_1(u, v) -> float:
    """Wasserstein-1 distance between two empirical sample distributions,
    as the integral of |CDF_u - CDF_v| over the merged support."""
    u = np.sort(np.asarray(u, dtype=np.float64))
    v = np.sort(np.asarray(v, dtype=np.float64))
    if len(u) == 0 or len(v) == 0:
        raise UndefinedMetricError("wasserstein_1 needs non-empty samples")
    support = np.concatenate([u, v])
    support.sort(kind="mergesort")
    deltas = np.diff(support)
    u_cdf = np.searchsorted(u, support[:-1], side="right") / len(u)
    v_cdf = np.searchsorted(v, support[:-1], side="right") / len(v)
    return float(np.sum(np.abs(u_cdf - v_cdf) * deltas))


def statistical_parity_wasserstein(scores_reference, scores_group) -> float:
    """Threshold-free disparity between two groups' score distributions."""
    return wasserstein_1(scores_reference, scores_group)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties receiving the average of their rank range."""
    unique, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts
    avg = (starts + 1 + ends) / 2.0  # half-integers, exact in float64
    return avg[inverse]


def auc(scores, labels) -> float:
    """Probability that a random positive outscores a random negative,
    ties counted one half (rank formulation)."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    n_pos = int(np.sum(y == 1))
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC needs at least one positive and one negative label")
    ranks = _average_ranks(s)
    rank_sum = float(np.sum(ranks[y == 1]))
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def pairwise_metric(metric: str, reference: GroupOutcome, group: GroupOutcome) -> float:
    if metric == "eof":
        return equal_opportunity(reference, group)
    if metric == "sdp":
        return statistical_parity_wasserstein(reference.scores, group.scores)
    if metric == "aao":
        return average_absolute_odds(reference, group)
    raise ValueError(f"unknown metric {metric!r}; expected one of {PAIRWISE_METRICS}")


def aggregate_fairness(outcomes: list[GroupOutcome], reference_label: str, metric: str):
    """Sum of |pairwise metric| of every non-reference group vs the
    reference.

    Groups whose metric is undefined are excluded and reported in the
    returned warnings instead of aborting the aggregation.

    Returns (L, per_group, warnings) where per_group maps group label to
    its signed pairwise value.
    """
    by_label = {g.label: g for g in outcomes}
    if reference_label not in by_label:
        raise ValueError(f"reference group {reference_label!r} not present")
    if len(outcomes) < 2:
        raise ValueError("aggregation needs at least two groups")
    reference = by_label[reference_label]
    per_group: dict[str, float] = {}
    warnings: list[str] = []
    total = 0.0
    for g in outcomes:
        if g.label == reference_label:
            continue
        try:
            value = pairwise_metric(metric, reference, g)
        except UndefinedMetricError as exc:
            warnings.append(f"{metric}:{g.label}:{exc}")
            continue
        per_group[g.label] = value
        total += abs(value)
    return total, per_group, warnings


@dataclass(frozen=True)
class FairnessReport:
    """Per-group scores/rates and the aggregate unfairness per metric."""

    reference: str
    threshold: float
    group_auc: dict[str, float | None]
    group_tpr: dict[str, float | None]
    group_fpr: dict[str, float | None]
    pairwise: dict[str, dict[str, float]]   # metric -> group -> signed value
    aggregate: dict[str, float]             # metric -> L
    warnings: tuple[str, ...] = field(default=())

    def to_csv(self) -> str:
        lines = ["group,metric,value"]
        for label in sorted(self.group_auc):
            for name, table in (("auc", self.group_auc), ("tpr", self.group_tpr),
                                ("fpr", self.group_fpr)):
                value = table[label]
                lines.append(f"{label},{name},{'' if value is None else repr(value)}")
        for metric in PAIRWISE_METRICS:
            for label in sorted(self.pairwise[metric]):
                lines.append(f"{label},{metric},{self.pairwise[metric][label]!r}")
            lines.append(f"__aggregate__,L_{metric},{self.aggregate[metric]!r}")
        return "\n".join(lines) + "\n"


def evaluate_fairness(scores, labels, group_values, reference: str,
                      threshold: float = 0.5) -> FairnessReport:
    """Full per-group evaluation of one scored dataset.

    Groups failing a metric's preconditions get None entries plus a
    warning; the evaluation itself never raises for degenerate groups.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    g = np.asarray(group_values, dtype=object)
    if not (len(s) == len(y) == len(g)):
        raise ValueError("scores, labels and group values must have equal length")

    outcomes = []
    for label in sorted(set(g.tolist())):
        mask = g == label
        outcomes.append(GroupOutcome(str(label), s[mask], y[mask], threshold))
    if reference not in {o.label for o in outcomes}:
        raise ValueError(f"reference group {reference!r} not present in the data")

    warnings: list[str] = []
    group_auc: dict[str, float | None] = {}
    group_tpr: dict[str, float | None] = {}
    group_fpr: dict[str, float | None] = {}
    for o in outcomes:
        try:
            group_auc[o.label] = auc(o.scores, o.labels)
        except UndefinedMetricError:
            group_auc[o.label] = None
            warnings.append(f"auc:{o.label}:single-class group")
        try:
            group_tpr[o.label] = o.tpr
        except UndefinedMetricError:
            group_tpr[o.label] = None
            warnings.append(f"tpr:{o.label}:no positive labels")
        try:
            group_fpr[o.label] = o.fpr
        except UndefinedMetricError:
            group_fpr[o.label] = None
            warnings.append(f"fpr:{o.label}:no negative labels")

    pairwise: dict[str, dict[str, float]] = {}
    aggregate: dict[str, float] = {}
    for metric in PAIRWISE_METRICS:
        total, per_group, metric_warnings = aggregate_fairness(outcomes, reference, metric)
        pairwise[metric] = per_group
        aggregate[metric] = total
        warnings.extend(metric_warnings)

    return FairnessReport(
        reference=reference,
        threshold=threshold,
        group_auc=group_auc,
        group_tpr=group_tpr,
        group_fpr=group_fpr,
        pairwise=pairwise,
        aggregate=aggregate,
        warnings=tuple(warnings),
    )
