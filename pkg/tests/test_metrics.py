import numpy as np
import pytest

from fairenc.metrics import (
    GroupOutcome,
    UndefinedMetricError,
    aggregate_fairness,
    auc,
    average_absolute_odds,
    confusion,
    equal_opportunity,
    evaluate_fairness,
    statistical_parity_wasserstein,
    wasserstein_1,
)


def outcome(label, scores, labels, threshold=0.5):
    return GroupOutcome(label, np.asarray(scores, float), np.asarray(labels, int), threshold)


def outcome_with_rates(label, tpr, fpr, n=20):
    """Group whose confusion rates at threshold 0.5 are exactly (tpr, fpr)."""
    n_pos_hit = int(round(tpr * n))
    n_neg_hit = int(round(fpr * n))
    scores = [0.9] * n_pos_hit + [0.1] * (n - n_pos_hit) + [0.9] * n_neg_hit + [0.1] * (n - n_neg_hit)
    labels = [1] * n + [0] * n
    return outcome(label, scores, labels)


def auc_bruteforce(scores, labels):
    """Quadratic pair-counting oracle, ties worth one half."""
    scores = np.asarray(scores, float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    greater = float((pos[:, None] > neg[None, :]).sum())
    equal = float((pos[:, None] == neg[None, :]).sum())
    return (greater + 0.5 * equal) / (len(pos) * len(neg))


def transport_lp(u, v):
    """Optimal-transport linear program on the discrete supports."""
    from scipy.optimize import linprog

    xu, cu = np.unique(u, return_counts=True)
    xv, cv = np.unique(v, return_counts=True)
    nu, nv = len(xu), len(xv)
    cost = np.abs(xu[:, None] - xv[None, :]).ravel()
    a_eq = np.zeros((nu + nv, nu * nv))
    for i in range(nu):
        a_eq[i, i * nv:(i + 1) * nv] = 1.0
    for j in range(nv):
        a_eq[nu + j, j::nv] = 1.0
    b_eq = np.concatenate([cu / len(u), cv / len(v)])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert res.success
    return res.fun


class TestConfusion:
    def test_basic(self):
        assert confusion([0.9, 0.1], [1, 0], 0.5) == (1, 0, 1, 0)

    def test_tie_goes_positive(self):
        tp, fp, tn, fn = confusion([0.5, 0.5], [1, 0], 0.5)
        assert (tp, fp, tn, fn) == (1, 1, 0, 0)

    def test_brute_force_recount(self):
        rng = np.random.default_rng(0)
        scores = rng.random(1000)
        labels = (rng.random(1000) < 0.37).astype(int)
        got = confusion(scores, labels, 0.42)
        want = [0, 0, 0, 0]  # tp fp tn fn
        for s, y in zip(scores, labels):
            pred = s >= 0.42
            if pred and y:
                want[0] += 1
            elif pred:
                want[1] += 1
            elif not y:
                want[2] += 1
            else:
                want[3] += 1
        assert list(got) == want

    def test_empty_rejected(self):
        with pytest.raises(UndefinedMetricError):
            confusion([], [], 0.5)


class TestEqualOpportunity:
    def test_identical_groups(self):
        a = outcome("a", [0.9, 0.2, 0.7], [1, 0, 1])
        b = outcome("b", [0.9, 0.2, 0.7], [1, 0, 1])
        assert equal_opportunity(a, b) == 0.0

    def test_extremes(self):
        ref = outcome("r", [0.9], [1])
        grp = outcome("g", [0.1], [1])
        assert equal_opportunity(ref, grp) == 1.0

    def test_hand_confusion(self):
        ref = outcome("r", [0.9, 0.9, 0.9, 0.1], [1, 1, 1, 1])   # TPR 3/4
        grp = outcome("g", [0.9, 0.1, 0.1, 0.1], [1, 1, 1, 1])   # TPR 1/4
        assert equal_opportunity(ref, grp) == 0.5

    def test_no_positives_rejected(self):
        ref = outcome("r", [0.9], [1])
        grp = outcome("g", [0.4, 0.6], [0, 0])
        with pytest.raises(UndefinedMetricError, match="undefined TPR"):
            equal_opportunity(ref, grp)


class TestAverageAbsoluteOdds:
    def test_perfect_classifier_both_groups(self):
        ref = outcome("r", [0.9, 0.1], [1, 0])
        grp = outcome("g", [0.8, 0.2], [1, 0])
        assert average_absolute_odds(ref, grp) == 2.0

    def test_hand_rates(self):
        ref = outcome_with_rates("r", tpr=0.8, fpr=0.3)
        grp = outcome_with_rates("g", tpr=0.5, fpr=0.5)
        assert average_absolute_odds(ref, grp) == pytest.approx(0.5, abs=1e-12)

    def test_random_scores_near_zero(self):
        # with scores independent of labels TPR ~ FPR in each group
        rng = np.random.default_rng(1)
        ref = outcome("r", rng.random(10_000), (rng.random(10_000) < 0.5).astype(int))
        grp = outcome("g", rng.random(10_000), (rng.random(10_000) < 0.5).astype(int))
        assert average_absolute_odds(ref, grp) == pytest.approx(0.0, abs=0.05)


class TestWasserstein:
    def test_identical_samples(self):
        assert wasserstein_1([0.1, 0.4, 0.9], [0.1, 0.4, 0.9]) == 0.0

    def test_point_masses(self):
        assert wasserstein_1([0.0, 0.0], [1.0, 1.0, 1.0]) == 1.0

    def test_interleaved_pair(self):
        assert wasserstein_1([0.0, 0.5], [0.25, 0.75]) == pytest.approx(0.25, abs=1e-12)
        assert wasserstein_1([0.0, 0.5], [0.25, 0.75]) == pytest.approx(
            transport_lp([0.0, 0.5], [0.25, 0.75]), abs=1e-12
        )

    def test_transport_oracle_random_instances(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            u = np.round(rng.random(int(rng.integers(1, 9))), 3)
            v = np.round(rng.random(int(rng.integers(1, 9))), 3)
            assert wasserstein_1(u, v) == pytest.approx(transport_lp(u, v), abs=1e-9)

    def test_metric_properties(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            a = rng.random(int(rng.integers(1, 12)))
            b = rng.random(int(rng.integers(1, 12)))
            c = rng.random(int(rng.integers(1, 12)))
            dab = wasserstein_1(a, b)
            dba = wasserstein_1(b, a)
            dac = wasserstein_1(a, c)
            dcb = wasserstein_1(c, b)
            assert dab >= 0.0
            assert abs(dab - dba) < 1e-12
            assert dab <= dac + dcb + 1e-12
            assert wasserstein_1(a, a) == 0.0

    def test_alias(self):
        assert statistical_parity_wasserstein([0.0], [1.0]) == 1.0


class TestAuc:
    def test_perfectly_ordered(self):
        assert auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0

    def test_independent_scores_near_half(self):
        rng = np.random.default_rng(4)
        scores = rng.random(10_000)
        labels = (rng.random(10_000) < 0.5).astype(int)
        assert auc(scores, labels) == pytest.approx(0.5, abs=0.02)

    def test_pairwise_oracle_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(2, 1001))
            scores = np.round(rng.random(n), 2)  # coarse grid forces ties
            labels = (rng.random(n) < 0.4).astype(int)
            if labels.min() == labels.max():
                labels[0] = 1 - labels[0]
            assert auc(scores, labels) == auc_bruteforce(scores, labels)

    def test_invariant_under_increasing_transform(self):
        rng = np.random.default_rng(6)
        scores = rng.random(500)
        labels = (rng.random(500) < 0.3).astype(int)
        transformed = np.exp(3.0 * scores) + 7.0
        assert auc(scores, labels) == auc(transformed, labels)

    def test_single_class_rejected(self):
        with pytest.raises(UndefinedMetricError):
            auc([0.1, 0.9], [1, 1])


class TestThresholdCovariance:
    def test_confusion_invariant_under_shared_transform(self):
        # strictly increasing transform applied to scores and threshold
        # together leaves every confusion count unchanged
        rng = np.random.default_rng(7)
        scores = rng.random(300)
        labels = (rng.random(300) < 0.5).astype(int)
        f = lambda x: np.log1p(np.asarray(x) * 4.0)
        before = confusion(scores, labels, 0.5)
        after = confusion(f(scores), labels, float(f(0.5)))
        assert before == after
        ref_a = GroupOutcome("r", scores[:150], labels[:150], 0.5)
        grp_a = GroupOutcome("g", scores[150:], labels[150:], 0.5)
        ref_b = GroupOutcome("r", f(scores[:150]), labels[:150], float(f(0.5)))
        grp_b = GroupOutcome("g", f(scores[150:]), labels[150:], float(f(0.5)))
        assert equal_opportunity(ref_a, grp_a) == equal_opportunity(ref_b, grp_b)
        assert average_absolute_odds(ref_a, grp_a) == average_absolute_odds(ref_b, grp_b)


class TestAggregate:
    def test_identical_groups(self):
        # eof and sdp vanish for identical groups; aao compares TPR to FPR
        # within each group, so for identical groups it is 2*|TPR - FPR|
        rng = np.random.default_rng(8)
        scores = rng.random(100)
        labels = (rng.random(100) < 0.5).astype(int)
        ref = outcome("ref", scores, labels)
        groups = [ref, outcome("g1", scores, labels)]
        for metric in ("eof", "sdp"):
            total, per_group, warnings = aggregate_fairness(groups, "ref", metric)
            assert total == 0.0
            assert warnings == []
        total, _, _ = aggregate_fairness(groups, "ref", "aao")
        assert total == pytest.approx(2.0 * abs(ref.tpr - ref.fpr), abs=1e-12)

    def test_absolute_sum(self):
        ref = outcome_with_rates("ref", tpr=0.5, fpr=0.2)
        g1 = outcome_with_rates("g1", tpr=0.3, fpr=0.2)   # eof +0.2
        g2 = outcome_with_rates("g2", tpr=0.6, fpr=0.2)   # eof -0.1
        total, per_group, _ = aggregate_fairness([ref, g1, g2], "ref", "eof")
        assert per_group["g1"] == pytest.approx(0.2, abs=1e-12)
        assert per_group["g2"] == pytest.approx(-0.1, abs=1e-12)
        assert total == pytest.approx(0.3, abs=1e-12)

    def test_nine_group_recomputation(self):
        rng = np.random.default_rng(9)
        groups = []
        for i in range(9):
            n = int(rng.integers(30, 120))
            scores = rng.random(n)
            labels = (rng.random(n) < rng.uniform(0.2, 0.6)).astype(int)
            if labels.sum() == 0:
                labels[0] = 1
            if labels.sum() == n:
                labels[0] = 0
            groups.append(outcome(f"g{i}", scores, labels))
        for metric in ("eof", "sdp", "aao"):
            total, per_group, warnings = aggregate_fairness(groups, "g0", metric)
            ref = groups[0]
            manual = 0.0
            for g in groups[1:]:
                if metric == "eof":
                    manual += abs(ref.tpr - g.tpr)
                elif metric == "sdp":
                    manual += abs(wasserstein_1(ref.scores, g.scores))
                else:
                    manual += abs(abs(ref.tpr - ref.fpr) + abs(g.tpr - g.fpr))
            assert total == pytest.approx(manual, abs=1e-12)
            assert warnings == []

    def test_failing_group_excluded_with_warning(self):
        ref = outcome("ref", [0.9, 0.1], [1, 0])
        bad = outcome("bad", [0.4, 0.6], [0, 0])  # no positives: no TPR
        ok = outcome("ok", [0.9, 0.1], [1, 0])
        total, per_group, warnings = aggregate_fairness([ref, bad, ok], "ref", "eof")
        assert "bad" not in per_group and "ok" in per_group
        assert len(warnings) == 1 and "bad" in warnings[0]

    def test_missing_reference_rejected(self):
        with pytest.raises(ValueError):
            aggregate_fairness([outcome("a", [0.5], [1])], "zz", "eof")


class TestFairnessReport:
    def test_report_structure_and_csv(self):
        rng = np.random.default_rng(10)
        n = 400
        scores = rng.random(n)
        labels = (rng.random(n) < 0.4).astype(int)
        groups = np.array(["g1", "g2", "ref", "g3"], dtype=object)[rng.integers(0, 4, n)]
        report = evaluate_fairness(scores, labels, groups, "ref")
        assert set(report.group_auc) == {"g1", "g2", "g3", "ref"}
        assert set(report.pairwise["eof"]) <= {"g1", "g2", "g3"}
        assert report.aggregate["eof"] == pytest.approx(
            sum(abs(v) for v in report.pairwise["eof"].values()))
        text = report.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "group,metric,value"
        assert sum(1 for ln in lines if ln.startswith("__aggregate__,")) == 3

    def test_lower_is_fairer_at_parity(self):
        scores = np.tile([0.9, 0.8, 0.3, 0.1], 2)
        labels = np.tile([1, 0, 1, 0], 2)
        groups = np.array(["a"] * 4 + ["b"] * 4, dtype=object)
        report = evaluate_fairness(scores, labels, groups, "a")
        assert report.aggregate == {"eof": 0.0, "sdp": 0.0, "aao": 0.0}
