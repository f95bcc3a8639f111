from fractions import Fraction

import numpy as np
import pytest

from fairenc.data import make_dataset
from fairenc.encoders import fit_target_encoder
from fairenc.metrics import auc
from fairenc.models import (
    ConstantModel,
    FeatureMismatchError,
    TrainConfig,
    logistic_gradient,
    logistic_loss,
    score,
    sigmoid,
    train,
    tree_leaves,
)


def finite_difference_gradient(X, y, w, b, l2):
    """Central-difference oracle for the logistic objective."""
    h = 6e-6
    grad_w = np.empty_like(w)
    for j in range(len(w)):
        hj = h * (1.0 + abs(w[j]))
        wp, wm = w.copy(), w.copy()
        wp[j] += hj
        wm[j] -= hj
        grad_w[j] = (logistic_loss(X, y, wp, b, l2) - logistic_loss(X, y, wm, b, l2)) / (2 * hj)
    hb = h * (1.0 + abs(b))
    grad_b = (logistic_loss(X, y, w, b + hb, l2) - logistic_loss(X, y, w, b - hb, l2)) / (2 * hb)
    return grad_w, grad_b


def random_instance(rng, n_features=5):
    n = int(rng.integers(5, 100))
    X = rng.normal(size=(n, n_features))
    y = (rng.random(n) < 0.5).astype(float)
    w = rng.normal(size=n_features)
    b = float(rng.normal())
    l2 = float(rng.choice([0.0, 1e-4, 1e-2]))
    return X, y, w, b, l2


class TestLogistic:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        worst = 0.0
        for _ in range(50):
            X, y, w, b, l2 = random_instance(rng)
            aw, ab = logistic_gradient(X, y, w, b, l2)
            nw, nb = finite_difference_gradient(X, y, w, b, l2)
            scale = max(np.max(np.abs(nw)), abs(nb), 1e-12)
            worst = max(worst, np.max(np.abs(aw - nw)) / scale, abs(ab - nb) / scale)
        assert worst < 1e-6

    def test_separable_training_auc_is_one(self):
        X = np.linspace(0, 1, 100).reshape(-1, 1)
        y = (X.ravel() > 0.5).astype(int)
        model = train("logistic", X, y)
        assert auc(score(model, X), y) == 1.0

    def test_zero_weights_score_half(self):
        model = train("logistic", np.zeros((4, 3)), np.array([0, 1, 0, 1]),
                      TrainConfig(logistic_epochs=0))
        assert np.all(score(model, np.random.default_rng(0).normal(size=(6, 3))) == 0.5)

    def test_monotone_loss_on_standardized_inputs(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(300, 4))  # standardized by construction
        y = (rng.random(300) < sigmoid(X @ np.array([1.0, -2.0, 0.5, 0.0]))).astype(int)
        model = train("logistic", X, y, TrainConfig(logistic_lr=0.1, logistic_epochs=200))
        diffs = np.diff(model.loss_curve)
        assert np.all(diffs <= 1e-12)

    def test_scores_strictly_inside_unit_interval(self):
        X = np.linspace(-50, 50, 200).reshape(-1, 1)
        y = (X.ravel() > 0).astype(int)
        model = train("logistic", X, y, TrainConfig(logistic_epochs=2000))
        s = score(model, X)
        assert np.all(s > 0.0) and np.all(s < 1.0)

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(100, 3))
        y = (rng.random(100) < 0.4).astype(int)
        a = train("logistic", X, y, seed=5)
        b = train("logistic", X, y, seed=5)
        assert np.array_equal(a.weights, b.weights) and a.bias == b.bias


class TestTree:
    def test_leaf_scores_are_exact_positive_fractions(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(500, 3))
        y = (rng.random(500) < 0.4).astype(int)
        model = train("tree", X, y, TrainConfig(tree_max_depth=4, tree_min_leaf=10))
        leaves = tree_leaves(model.root)
        assert len(leaves) > 1
        for leaf in leaves:
            assert Fraction(leaf.value) == Fraction(leaf.n_positive, leaf.n_rows)

    def test_leaf_rows_reconcile(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(400, 2))
        y = (rng.random(400) < 0.5).astype(int)
        model = train("tree", X, y)
        leaves = tree_leaves(model.root)
        assert sum(l.n_rows for l in leaves) == 400
        assert sum(l.n_positive for l in leaves) == int(y.sum())

    def test_depth_one_on_two_category_encoding_recovers_group_means(self):
        # single target-encoded column of a two-category attribute: one
        # split isolates the categories, so each score is that category's
        # training mean
        d = make_dataset({"c": ["a"] * 40 + ["b"] * 60},
                         [1] * 10 + [0] * 30 + [1] * 45 + [0] * 15)
        enc = fit_target_encoder(d, "c", m=0)
        X = enc.transform(d)
        model = train("tree", X, d.target, TrainConfig(tree_max_depth=1, tree_min_leaf=1))
        scores = score(model, X)
        for s, cat in zip(scores, d.column("c")):
            assert s == enc.mapping[cat]

    def test_memorizes_unique_rows_with_unbounded_depth(self):
        rng = np.random.default_rng(5)
        X = rng.permutation(64).reshape(-1, 1).astype(float)
        y = (rng.random(64) < 0.5).astype(int)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        model = train("tree", X, y, TrainConfig(tree_max_depth=None, tree_min_leaf=1))
        assert np.array_equal(score(model, X), y.astype(float))

    def test_deterministic_thresholds(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(200, 4))
        y = (rng.random(200) < 0.5).astype(int)
        a = train("tree", X, y)
        b = train("tree", X, y)
        assert np.array_equal(score(a, X), score(b, X))


class TestGbdt:
    def test_zero_trees_scores_base_rate_logit(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(50, 2))
        y = (rng.random(50) < 0.3).astype(int)
        model = train("gbdt", X, y, TrainConfig(gbdt_n_trees=0))
        p0 = y.mean()
        expected = float(sigmoid(np.array([np.log(p0 / (1 - p0))]))[0])
        assert np.all(score(model, X) == expected)

    def test_vanishing_learning_rate_approaches_base_rate(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(200, 2))
        y = (rng.random(200) < 0.4).astype(int)
        model = train("gbdt", X, y, TrainConfig(gbdt_n_trees=1, gbdt_lr=1e-9))
        base = float(sigmoid(np.array([np.log(y.mean() / (1 - y.mean()))]))[0])
        assert np.max(np.abs(score(model, X) - base)) < 1e-8

    def test_boosting_improves_training_fit(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(400, 3))
        logits = 2.0 * X[:, 0] - 1.5 * np.abs(X[:, 1])
        y = (rng.random(400) < sigmoid(logits)).astype(int)
        few = train("gbdt", X, y, TrainConfig(gbdt_n_trees=5))
        many = train("gbdt", X, y, TrainConfig(gbdt_n_trees=100))
        assert auc(score(many, X), y) > auc(score(few, X), y)

    def test_scores_strictly_inside_unit_interval(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(300, 2))
        y = (X[:, 0] > 0).astype(int)
        model = train("gbdt", X, y, TrainConfig(gbdt_n_trees=300, gbdt_min_leaf=1))
        s = score(model, X)
        assert np.all(s > 0.0) and np.all(s < 1.0)


class TestTrainScoreContract:
    def test_single_class_yields_constant_prior(self):
        X = np.zeros((5, 2))
        model = train("logistic", X, np.ones(5))
        assert isinstance(model, ConstantModel)
        assert np.all(score(model, X) == 1.0)
        model0 = train("gbdt", X, np.zeros(5))
        assert np.all(score(model0, X) == 0.0)

    def test_width_mismatch_rejected(self):
        X = np.zeros((4, 3))
        model = train("tree", X, np.array([0, 1, 0, 1]))
        with pytest.raises(FeatureMismatchError):
            score(model, np.zeros((2, 5)))

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            train("svm", np.zeros((2, 1)), np.array([0, 1]))

    def test_scores_order_preserving(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(50, 2))
        y = (rng.random(50) < 0.5).astype(int)
        for kind in ("logistic", "tree", "gbdt"):
            model = train(kind, X, y)
            full = score(model, X)
            assert np.array_equal(full[:25], score(model, X[:25]))
