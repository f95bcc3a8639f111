"""Exact population-level analysis of encoding-induced bias.

A population is a categorical attribute with known category weights and
true per-category positive rates. The functions here give closed forms
for the classification error of the optimal per-category rule, of the
rule induced by a smoothed target encoding, and of a randomized rule, as
well as the equal-opportunity behaviour of each: 0-or-plus/minus-1 jumps
for thresholded rules, the rate difference for the randomized rule, and
the binomial variance of the per-category rate estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoders import smoothing_weight

CLASSIFIER_KINDS = ("bayes", "encoded", "randomized")


@dataclass(frozen=True)
class PopulationSpec:
    """Category weights and true positive rates, plus a decision threshold."""

    labels: tuple[str, ...]
    weights: tuple[float, ...]
    rates: tuple[float, ...]
    threshold: float = 0.5

    def __post_init__(self):
        if not (len(self.labels) == len(self.weights) == len(self.rates)) or not self.labels:
            raise ValueError("labels, weights and rates must be non-empty and equal-length")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("category weights must sum to 1")
        if any(w < 0 for w in self.weights):
            raise ValueError("category weights must be non-negative")
        if any(not 0.0 <= p <= 1.0 for p in self.rates):
            raise ValueError("rates must lie in [0, 1]")

    @property
    def prior(self) -> float:
        return math.fsum(w * p for w, p in zip(self.weights, self.rates))


@dataclass(frozen=True)
class ClassifierSpec:
    """A per-category decision rule: probability of deciding positive for
    each category. Deterministic rules use probabilities 0 or 1."""

    kind: str
    decision_probs: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(f"kind must be one of {CLASSIFIER_KINDS}")
        if any(not 0.0 <= q <= 1.0 for q in self.decision_probs):
            raise ValueError("decision probabilities must lie in [0, 1]")


def bayes_decision(rate: float, threshold: float = 0.5) -> bool:
    """Optimal accuracy decision for one category: positive iff the true
    rate strictly exceeds the threshold."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must lie in [0,1], got {rate}")
    return rate > threshold


def bayes_classifier(pop: PopulationSpec) -> ClassifierSpec:
    return ClassifierSpec(
        kind="bayes",
        decision_probs=tuple(1.0 if bayes_decision(p, pop.threshold) else 0.0 for p in pop.rates),
    )


def randomized_classifier(pop: PopulationSpec) -> ClassifierSpec:
    """Decides positive with probability equal to the category rate."""
    return ClassifierSpec(kind="randomized", decision_probs=tuple(pop.rates))


def expected_smoothed_estimate(rate: float, prior: float, n_i: float, m: float) -> float:
    """Expected value of the smoothed rate estimator for a category with
    n_i observations: w*rate + (1-w)*prior with w = n_i/(n_i+m)."""
    w = smoothing_weight(n_i, m)
    return w * rate + (1.0 - w) * prior


@dataclass(frozen=True)
class GroupDecision:
    label: str
    estimate: float          # expected smoothed encoding of the category
    decision: bool           # thresholded on the estimate
    bayes: bool              # thresholded on the true rate
    flipped: bool            # decision != bayes


def encoded_classifier_decisions(
    pop: PopulationSpec, group_sizes, m: float
) -> tuple[GroupDecision, ...]:
    """Decisions of the rule that thresholds the expected smoothed
    encoding instead of the true rate, with flip-vs-optimal flags.

    With m = 0 (or as every n_i grows) all decisions match the optimal
    rule; small n_i with large m pulls the estimate to the prior, which
    can flip the decision for categories on the other side of the
    threshold from the prior.
    """
    sizes = tuple(group_sizes)
    if len(sizes) != len(pop.labels):
        raise ValueError("one group size per category required")
    if any(s < 0 for s in sizes):
        raise ValueError("group sizes must be non-negative")
    prior = pop.prior
    out = []
    for label, rate, n_i in zip(pop.labels, pop.rates, sizes):
        estimate = expected_smoothed_estimate(rate, prior, n_i, m)
        decision = estimate > pop.threshold
        bayes = bayes_decision(rate, pop.threshold)
        out.append(GroupDecision(label, estimate, decision, bayes, decision != bayes))
    return tuple(out)


def encoded_classifier(pop: PopulationSpec, group_sizes, m: float) -> ClassifierSpec:
    decisions = encoded_classifier_decisions(pop, group_sizes, m)
    return ClassifierSpec(
        kind="encoded", decision_probs=tuple(1.0 if d.decision else 0.0 for d in decisions)
    )


def classification_error(pop: PopulationSpec, clf: ClassifierSpec) -> float:
    """Population misclassification probability of a per-category rule.

    For a category with rate p and decision probability q the error
    contribution is q*(1-p) + (1-q)*p; summed with category weights.
    For the optimal rule this reduces to sum_i w_i * min(p_i, 1-p_i) and
    for the randomized rule to sum_i w_i * 2 p_i (1-p_i).
    """
    if len(clf.decision_probs) != len(pop.labels):
        raise ValueError("classifier and population category counts differ")
    terms = [
        w * (q * (1.0 - p) + (1.0 - q) * p)
        for w, p, q in zip(pop.weights, pop.rates, clf.decision_probs)
    ]
    return math.fsum(terms)


def perfect_encoding_eof(p1: float, p2: float, threshold: float = 0.5) -> int:
    """Equal opportunity of the optimal rule between two categories with
    true rates p1 (protected) and p2 (reference).

    Thresholded decisions make the metric jump: 0 when both rates sit on
    the same side of the threshold, -1 when p1 <= threshold < p2, and +1
    when p2 <= threshold < p1.
    """
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"rates must lie in [0,1], got {p}")
    d1 = p1 > threshold
    d2 = p2 > threshold
    if d1 == d2:
        return 0
    return 1 if d1 else -1


def randomized_eof(p1: float, p2: float) -> float:
    """Equal opportunity of the randomized rule: exactly p1 - p2."""
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"rates must lie in [0,1], got {p}")
    return p1 - p2


def randomized_eof_mc(p1: float, p2: float, n: int = 100_000, seed: int = 0) -> float:
    """Monte-Carlo cross-check of :func:`randomized_eof`: simulate n
    positive rows per group under the randomized rule and difference the
    empirical true positive rates."""
    rng = np.random.default_rng(seed)
    tpr1 = float(np.mean(rng.random(n) < p1))
    tpr2 = float(np.mean(rng.random(n) < p2))
    return tpr1 - tpr2


def estimator_variance(rate: float, n_i: int) -> float:
    """Variance p(1-p)/n of the unsmoothed per-category rate estimator."""
    if n_i < 1:
        raise ValueError(f"n_i must be >= 1, got {n_i}")
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must lie in [0,1], got {rate}")
    return rate * (1.0 - rate) / n_i


def smoothing_flip_point(rate: float, prior: float, n_i: float, threshold: float = 0.5):
    """Smoothing value m at which the expected smoothed estimate crosses
    the threshold, or None when no m >= 0 crosses it.

    Solves w*rate + (1-w)*prior = threshold for w = n_i/(n_i+m). A
    crossing exists only when the rate and the prior sit on opposite
    sides of the threshold.
    """
    if rate == prior:
        return None
    w_star = (threshold - prior) / (rate - prior)
    if not 0.0 < w_star <= 1.0:
        return None
    return n_i * (1.0 - w_star) / w_star
