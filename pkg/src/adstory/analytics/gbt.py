"""Plain gradient-boosted regression trees with exact greedy splits.

Squared-error boosting: start from the target mean, then repeatedly fit a
depth-limited tree to the residuals and step toward it. Split search sorts
each feature canonically by (value, residual) and sums leaves with exactly
rounded fsum, so fitting is deterministic and independent of row order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from adstory.analytics.ols import DesignMatrix, InsufficientData
from adstory.errors import ValidationFailure


class UnknownFeature(ValidationFailure):
    pass


class EmptyDataset(ValidationFailure):
    pass


@dataclass
class GbtParams:
    rounds: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_leaf: int = 5

    def validate(self) -> None:
        if self.rounds < 1 or self.max_depth < 1 or self.min_leaf < 1:
            raise ValidationFailure("rounds, max_depth, min_leaf must be >= 1")
        if not 0.0 < self.learning_rate < 2.0:
            raise ValidationFailure("learning_rate must be in (0, 2)")

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
        }


@dataclass
class TreeNode:
    value: float = 0.0
    feature: int | None = None
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        self._fill(X, np.arange(X.shape[0]), out)
        return out

    def _fill(self, X: np.ndarray, rows: np.ndarray, out: np.ndarray) -> None:
        if self.feature is None:
            out[rows] = self.value
            return
        goes_left = X[rows, self.feature] <= self.threshold
        self.left._fill(X, rows[goes_left], out)
        self.right._fill(X, rows[~goes_left], out)

    def split_features(self) -> set[int]:
        if self.feature is None:
            return set()
        return {self.feature} | self.left.split_features() | self.right.split_features()


@dataclass
class GbtModel:
    feature_names: list[str]
    initial_prediction: float
    learning_rate: float
    trees: list[TreeNode] = field(default_factory=list)
    train_mse: list[float] = field(default_factory=list)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        predictions = np.full(X.shape[0], self.initial_prediction)
        for tree in self.trees:
            predictions += self.learning_rate * tree.predict(X)
        return predictions

    def used_features(self) -> set[str]:
        used = set()
        for tree in self.trees:
            used |= {self.feature_names[index] for index in tree.split_features()}
        return used


def gbt_fit(
    X: DesignMatrix | np.ndarray,
    y: np.ndarray,
    params: GbtParams | None = None,
) -> GbtModel:
    """Boost depth-limited trees on squared error; per-round train MSE is
    recorded and provably non-increasing for learning rates in (0, 2)."""
    params = params or GbtParams()
    params.validate()
    if isinstance(X, DesignMatrix):
        names, values = X.columns, X.values
    else:
        values = np.asarray(X, dtype=float)
        names = [f"x{i}" for i in range(values.shape[1])]
    y = np.asarray(y, dtype=float)
    n = values.shape[0]
    if n < 2 * params.min_leaf:
        raise InsufficientData(
            f"need at least {2 * params.min_leaf} rows, got {n}"
        )

    initial = math.fsum(y) / n
    model = GbtModel(
        feature_names=list(names),
        initial_prediction=initial,
        learning_rate=params.learning_rate,
    )
    predictions = np.full(n, initial)
    model.train_mse.append(_mse(y, predictions))
    for _ in range(params.rounds):
        residuals = y - predictions
        tree = _build_tree(
            values, residuals, np.arange(n), depth=0, params=params
        )
        predictions = predictions + params.learning_rate * tree.predict(values)
        model.trees.append(tree)
        model.train_mse.append(_mse(y, predictions))
    return model


def partial_dependence(
    model: GbtModel,
    X: DesignMatrix | np.ndarray,
    feature: str,
    values: list[float],
) -> list[tuple[float, float]]:
    """Mean prediction with one feature forced to each value in turn."""
    if isinstance(X, DesignMatrix):
        names, data = X.columns, X.values
    else:
        data = np.asarray(X, dtype=float)
        names = model.feature_names
    if feature not in names:
        raise UnknownFeature(f"no feature named {feature!r}")
    if data.shape[0] == 0:
        raise EmptyDataset("cannot average over zero rows")
    column = names.index(feature)
    curve = []
    for value in values:
        forced = data.copy()
        forced[:, column] = value
        curve.append((value, float(np.mean(model.predict(forced)))))
    return curve


def _mse(y: np.ndarray, predictions: np.ndarray) -> float:
    return math.fsum((y - predictions) ** 2) / len(y)


def _build_tree(
    values: np.ndarray,
    residuals: np.ndarray,
    rows: np.ndarray,
    depth: int,
    params: GbtParams,
) -> TreeNode:
    node_residuals = residuals[rows]
    count = len(rows)
    leaf_value = math.fsum(node_residuals) / count
    if depth >= params.max_depth or count < 2 * params.min_leaf:
        return TreeNode(value=leaf_value)

    best = _best_split(values, residuals, rows, params.min_leaf)
    if best is None:
        return TreeNode(value=leaf_value)
    feature, threshold = best
    goes_left = values[rows, feature] <= threshold
    # Midpoints of adjacent representable floats can collapse onto one side.
    if not goes_left.any() or goes_left.all():
        return TreeNode(value=leaf_value)
    return TreeNode(
        value=leaf_value,
        feature=feature,
        threshold=threshold,
        left=_build_tree(values, residuals, rows[goes_left], depth + 1, params),
        right=_build_tree(values, residuals, rows[~goes_left], depth + 1, params),
    )


def _best_split(
    values: np.ndarray,
    residuals: np.ndarray,
    rows: np.ndarray,
    min_leaf: int,
) -> tuple[int, float] | None:
    """Exact greedy search over midpoints of consecutive distinct values.

    Ties on gain break toward the smaller feature index, then the smaller
    threshold; sums accumulate in (value, residual) order so a permuted
    training set picks the identical split.
    """
    node_count = len(rows)
    node_residuals = residuals[rows]
    positions = np.arange(min_leaf - 1, node_count - min_leaf)
    if len(positions) == 0:
        return None
    best_gain = 0.0
    best: tuple[int, float] | None = None
    for feature in range(values.shape[1]):
        feature_values = values[rows, feature]
        order = np.lexsort((node_residuals, feature_values))
        sorted_values = feature_values[order]
        sorted_residuals = node_residuals[order]
        cum_sum = np.cumsum(sorted_residuals)
        cum_sq = np.cumsum(sorted_residuals**2)
        total_sum = cum_sum[-1]
        total_sq = cum_sq[-1]
        parent_sse = total_sq - total_sum**2 / node_count

        left_counts = positions + 1.0
        right_counts = node_count - left_counts
        left_sse = cum_sq[positions] - cum_sum[positions] ** 2 / left_counts
        right_sums = total_sum - cum_sum[positions]
        right_sse = (total_sq - cum_sq[positions]) - right_sums**2 / right_counts
        gains = parent_sse - left_sse - right_sse
        gains[sorted_values[positions] == sorted_values[positions + 1]] = -np.inf
        at = int(np.argmax(gains))
        if gains[at] > best_gain:
            best_gain = float(gains[at])
            split_at = positions[at]
            threshold = (sorted_values[split_at] + sorted_values[split_at + 1]) / 2.0
            best = (feature, float(threshold))
    return best
