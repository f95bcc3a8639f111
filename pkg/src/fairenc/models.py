"""Three from-scratch probabilistic classifiers: logistic regression,
CART decision tree, gradient-boosted trees.

All of them are deterministic given (data, config, seed) and expose
scores through :func:`score`. Scores are probabilities: sigmoid outputs
in (0,1) for logistic and boosting, leaf positive fractions in [0,1] for
the tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .encoders import EncodedMatrix

MODEL_KINDS = ("logistic", "tree", "gbdt")

# Keep |z| small enough that sigmoid stays strictly inside (0,1) in float64.
_Z_CLIP = 36.0


class FeatureMismatchError(ValueError):
    """Scoring matrix width differs from the training matrix width."""


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the three estimators (conventional small-data
    defaults; none of these are tuned per experiment)."""

    logistic_lr: float = 0.1
    logistic_epochs: int = 500
    logistic_l2: float = 1e-4
    tree_max_depth: int | None = 6
    tree_min_leaf: int = 20
    gbdt_n_trees: int = 100
    gbdt_max_depth: int = 3
    gbdt_lr: float = 0.1
    gbdt_min_leaf: int = 20

    def __post_init__(self):
        if self.logistic_lr <= 0 or self.logistic_epochs < 0 or self.logistic_l2 < 0:
            raise ValueError("invalid logistic config")
        if (self.tree_max_depth is not None and self.tree_max_depth < 0) or self.tree_min_leaf < 1:
            raise ValueError("invalid tree config")
        if self.gbdt_n_trees < 0 or self.gbdt_max_depth < 0 or self.gbdt_lr <= 0 or self.gbdt_min_leaf < 1:
            raise ValueError("invalid gbdt config")


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(X, y, weights, bias, l2) -> float:
    """Mean log-loss plus (l2/2)*||w||^2. The bias is not penalized."""
    z = X @ weights + bias
    # log(1 + e^z) - y*z, computed stably
    per_row = np.logaddexp(0.0, z) - y * z
    return float(per_row.mean() + 0.5 * l2 * float(weights @ weights))


def logistic_gradient(X, y, weights, bias, l2):
    """Analytic gradient of :func:`logistic_loss` wrt (weights, bias)."""
    z = X @ weights + bias
    residual = sigmoid(z) - y
    grad_w = X.T @ residual / len(y) + l2 * weights
    grad_b = float(residual.mean())
    return grad_w, grad_b


@dataclass(frozen=True, eq=False)
class LogisticModel:
    weights: np.ndarray          # raw-feature scale
    bias: float
    n_features: int
    config: TrainConfig
    seed: int
    loss_curve: np.ndarray = field(repr=False)

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        z = np.clip(X @ self.weights + self.bias, -_Z_CLIP, _Z_CLIP)
        return sigmoid(z)


def _train_logistic(X, y, config: TrainConfig, seed: int) -> LogisticModel:
    # Full-batch gradient descent on standardized copies of the columns;
    # the learned weights are folded back to the raw feature scale, so
    # scoring never needs the standardization constants.
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0.0] = 1.0
    Xs = (X - mu) / sd

    w = np.zeros(X.shape[1])
    b = 0.0
    losses = np.empty(config.logistic_epochs + 1)
    losses[0] = logistic_loss(Xs, y, w, b, config.logistic_l2)
    for epoch in range(config.logistic_epochs):
        grad_w, grad_b = logistic_gradient(Xs, y, w, b, config.logistic_l2)
        w -= config.logistic_lr * grad_w
        b -= config.logistic_lr * grad_b
        losses[epoch + 1] = logistic_loss(Xs, y, w, b, config.logistic_l2)

    w_raw = w / sd
    b_raw = b - float(w_raw @ mu)
    return LogisticModel(
        weights=w_raw, bias=b_raw, n_features=X.shape[1],
        config=config, seed=seed, loss_curve=losses,
    )


# ---------------------------------------------------------------------------
# Trees


@dataclass(eq=False)
class TreeNode:
    # Internal node: feature/threshold set, children present.
    # Leaf: feature is None; value holds the prediction.
    value: float
    n_rows: int
    n_positive: int
    feature: int | None = None
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _split_candidates(x_sorted, min_leaf):
    """Boundary indices i where a split between x[i] and x[i+1] is legal."""
    n = len(x_sorted)
    boundaries = np.nonzero(x_sorted[1:] != x_sorted[:-1])[0]
    if len(boundaries) == 0:
        return boundaries
    k = boundaries + 1  # left-side sizes
    return boundaries[(k >= min_leaf) & (n - k >= min_leaf)]


def _threshold_at(x_sorted, i) -> float:
    # Midpoint between adjacent distinct values; if the midpoint rounds up
    # to the right value, fall back to the left value so that the rule
    # "go left iff x <= threshold" reproduces the position split exactly.
    thr = (x_sorted[i] + x_sorted[i + 1]) / 2.0
    if thr >= x_sorted[i + 1]:
        thr = x_sorted[i]
    return float(thr)


def _best_gini_split(X, y, idx, min_leaf):
    """Best (feature, threshold, gain) under Gini impurity, or None.

    Ties in gain keep the lowest threshold within a feature (the sweep is
    ascending and only strict improvements replace the best) and the
    lowest feature index across features.
    """
    n = len(idx)
    y_node = y[idx]
    pos = float(y_node.sum())
    p = pos / n
    parent = 1.0 - p * p - (1.0 - p) * (1.0 - p)
    best = None  # (gain, feature, threshold, left_size)
    for j in range(X.shape[1]):
        xj = X[idx, j]
        order = np.argsort(xj, kind="mergesort")
        xs = xj[order]
        cand = _split_candidates(xs, min_leaf)
        if len(cand) == 0:
            continue
        pos_prefix = np.cumsum(y_node[order], dtype=np.float64)
        k = cand + 1
        pos_l = pos_prefix[cand]
        pos_r = pos - pos_l
        n_r = n - k
        p_l = pos_l / k
        p_r = pos_r / n_r
        gini_l = 1.0 - p_l * p_l - (1.0 - p_l) * (1.0 - p_l)
        gini_r = 1.0 - p_r * p_r - (1.0 - p_r) * (1.0 - p_r)
        gains = parent - (k * gini_l + n_r * gini_r) / n
        i = int(np.argmax(gains))
        if gains[i] > 0.0 and (best is None or gains[i] > best[0]):
            best = (float(gains[i]), j, _threshold_at(xs, cand[i]), int(k[i]))
    return best


def _build_classification_tree(X, y, idx, depth_left, min_leaf) -> TreeNode:
    n = len(idx)
    pos = int(y[idx].sum())
    node = TreeNode(value=pos / n, n_rows=n, n_positive=pos)
    if depth_left == 0 or n < 2 * min_leaf or pos == 0 or pos == n:
        return node
    found = _best_gini_split(X, y, idx, min_leaf)
    if found is None:
        return node
    _, j, thr, _ = found
    go_left = X[idx, j] <= thr
    node.feature = j
    node.threshold = thr
    node.left = _build_classification_tree(X, y, idx[go_left], depth_left - 1, min_leaf)
    node.right = _build_classification_tree(X, y, idx[~go_left], depth_left - 1, min_leaf)
    return node


def _best_variance_split(X, g, idx, min_leaf):
    """Best split for a regression tree: maximal sum-of-squares gain."""
    n = len(idx)
    g_node = g[idx]
    total = float(g_node.sum())
    base = total * total / n
    best = None
    for j in range(X.shape[1]):
        xj = X[idx, j]
        order = np.argsort(xj, kind="mergesort")
        xs = xj[order]
        cand = _split_candidates(xs, min_leaf)
        if len(cand) == 0:
            continue
        prefix = np.cumsum(g_node[order], dtype=np.float64)
        k = cand + 1
        s_l = prefix[cand]
        s_r = total - s_l
        gains = s_l * s_l / k + s_r * s_r / (n - k) - base
        i = int(np.argmax(gains))
        if gains[i] > 0.0 and (best is None or gains[i] > best[0]):
            best = (float(gains[i]), j, _threshold_at(xs, cand[i]))
    return best


def _build_regression_tree(X, g, h, idx, depth_left, min_leaf) -> TreeNode:
    # Fits the boosting gradients; leaf value is the Newton step
    # sum(g) / sum(h) over the leaf rows.
    n = len(idx)
    h_sum = float(h[idx].sum())
    value = float(g[idx].sum()) / h_sum if h_sum > 1e-12 else 0.0
    node = TreeNode(value=value, n_rows=n, n_positive=0)
    if depth_left == 0 or n < 2 * min_leaf:
        return node
    found = _best_variance_split(X, g, idx, min_leaf)
    if found is None:
        return node
    _, j, thr = found
    go_left = X[idx, j] <= thr
    node.feature = j
    node.threshold = thr
    node.left = _build_regression_tree(X, g, h, idx[go_left], depth_left - 1, min_leaf)
    node.right = _build_regression_tree(X, g, h, idx[~go_left], depth_left - 1, min_leaf)
    return node


def _tree_predict(root: TreeNode, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0])
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if len(idx) == 0:
            continue
        if node.is_leaf:
            out[idx] = node.value
            continue
        go_left = X[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[go_left]))
        stack.append((node.right, idx[~go_left]))
    return out


def tree_leaves(root: TreeNode) -> list[TreeNode]:
    leaves, stack = [], [root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            leaves.append(node)
        else:
            stack.extend([node.left, node.right])
    return leaves


@dataclass(frozen=True, eq=False)
class TreeModel:
    root: TreeNode
    n_features: int
    config: TrainConfig
    seed: int

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return _tree_predict(self.root, X)


@dataclass(frozen=True, eq=False)
class BoostedTreesModel:
    base_logit: float
    trees: tuple[TreeNode, ...]
    learning_rate: float
    n_features: int
    config: TrainConfig
    seed: int

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        z = np.full(X.shape[0], self.base_logit)
        for tree in self.trees:
            z += self.learning_rate * _tree_predict(tree, X)
        return z

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(np.clip(self.raw_scores(X), -_Z_CLIP, _Z_CLIP))


@dataclass(frozen=True)
class ConstantModel:
    """Used when the training labels contain a single class: every row is
    scored with the class prior (0.0 or 1.0)."""

    value: float
    n_features: int
    config: TrainConfig
    seed: int

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return np.full(X.shape[0], self.value)


def _train_tree(X, y, config: TrainConfig, seed: int) -> TreeModel:
    idx = np.arange(X.shape[0])
    depth = config.tree_max_depth if config.tree_max_depth is not None else -1
    root = _build_classification_tree(X, y, idx, depth, config.tree_min_leaf)
    return TreeModel(root=root, n_features=X.shape[1], config=config, seed=seed)


def _train_gbdt(X, y, config: TrainConfig, seed: int) -> BoostedTreesModel:
    p0 = float(y.mean())
    base = math.log(p0 / (1.0 - p0))
    z = np.full(X.shape[0], base)
    idx = np.arange(X.shape[0])
    trees = []
    for _ in range(config.gbdt_n_trees):
        p = sigmoid(z)
        g = y - p
        h = p * (1.0 - p)
        tree = _build_regression_tree(X, g, h, idx, config.gbdt_max_depth, config.gbdt_min_leaf)
        z = z + config.gbdt_lr * _tree_predict(tree, X)
        trees.append(tree)
    return BoostedTreesModel(
        base_logit=base, trees=tuple(trees), learning_rate=config.gbdt_lr,
        n_features=X.shape[1], config=config, seed=seed,
    )


def _as_matrix(X) -> np.ndarray:
    if isinstance(X, EncodedMatrix):
        return X.values
    return np.asarray(X, dtype=np.float64)


def train(kind: str, X, y, config: TrainConfig | None = None, seed: int = 0):
    """Train one of the three estimators on an encoded matrix.

    A single-class target yields a ConstantModel scoring the class prior
    rather than an error.
    """
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    config = config or TrainConfig()
    Xm = _as_matrix(X)
    ym = np.asarray(y, dtype=np.float64)
    if Xm.shape[0] != len(ym) or len(ym) < 1:
        raise ValueError("X rows and y length must match and be >= 1")
    if ym.min() == ym.max():
        return ConstantModel(value=float(ym[0]), n_features=Xm.shape[1], config=config, seed=seed)
    if kind == "logistic":
        return _train_logistic(Xm, ym, config, seed)
    if kind == "tree":
        return _train_tree(Xm, ym, config, seed)
    return _train_gbdt(Xm, ym, config, seed)


def score(model, X) -> np.ndarray:
    """Probability scores for each row, in input order."""
    Xm = _as_matrix(X)
    if Xm.shape[1] != model.n_features:
        raise FeatureMismatchError(
            f"model expects {model.n_features} features, got {Xm.shape[1]}"
        )
    return model.score_matrix(Xm)
