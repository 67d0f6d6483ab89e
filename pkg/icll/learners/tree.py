from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from icll.learners.base import Classifier, check_features, check_targets

# 不純度比較容許誤差；差距在此以內視為同分
IMPURITY_TOLERANCE = 1e-12
LEAF = -1


def _best_threshold(column: np.ndarray, targets: np.ndarray) -> Optional[Tuple[float, float]]:
    """單一特徵上 Gini 加權不純度最小的門檻（相鄰相異值的中點）

    回傳 (不純度, 門檻)；特徵為常數時回傳 None。同分取最小門檻。
    """
    order = np.argsort(column, kind="stable")
    values = column[order]
    sorted_targets = targets[order]
    boundaries = np.flatnonzero(values[1:] > values[:-1])
    if boundaries.size == 0:
        return None

    n = values.shape[0]
    positives_left = np.cumsum(sorted_targets)[boundaries]
    n_left = boundaries + 1.0
    n_right = n - n_left
    p_left = positives_left / n_left
    p_right = (sorted_targets.sum() - positives_left) / n_right
    impurity = (n_left * 2.0 * p_left * (1.0 - p_left) + n_right * 2.0 * p_right * (1.0 - p_right)) / n

    best = int(np.flatnonzero(impurity <= impurity.min() + IMPURITY_TOLERANCE)[0])
    lower = values[boundaries[best]]
    upper = values[boundaries[best] + 1]
    threshold = (lower + upper) / 2.0
    if threshold >= upper:
        threshold = lower
    return float(impurity[best]), float(threshold)


class DecisionTree(Classifier):
    """CART 二元決策樹（Gini 不純度，軸對齊門檻）

    葉節點分數為該葉中類別 1 訓練樣本的比例。
    同分的分割取最小特徵索引，再取最小門檻。
    """

    kind = "tree"

    def __init__(
        self,
        max_depth: Optional[int] = None,
        min_samples_split: int = 2,
        max_features: Optional[int] = None,
        seed: int = 0,
    ):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.seed = seed

    def fit(self, features: np.ndarray, targets: np.ndarray) -> "DecisionTree":
        features = check_features(features)
        targets = check_targets(features, targets)
        n_features = features.shape[1]
        n_candidates = n_features if self.max_features is None else max(1, min(self.max_features, n_features))
        rng = np.random.default_rng(self.seed)

        feature: List[int] = []
        threshold: List[float] = []
        left: List[int] = []
        right: List[int] = []
        value: List[float] = []

        def new_node(node_targets: np.ndarray) -> int:
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(LEAF)
            right.append(LEAF)
            value.append(float(node_targets.mean()))
            return len(value) - 1

        root = new_node(targets)
        stack = [(root, np.arange(features.shape[0]), 0)]
        while stack:
            node, rows, depth = stack.pop()
            node_targets = targets[rows]
            positives = int(node_targets.sum())
            if (
                positives == 0
                or positives == rows.shape[0]
                or rows.shape[0] < self.min_samples_split
                or (self.max_depth is not None and depth >= self.max_depth)
            ):
                continue

            split = self._best_split(features[rows], node_targets, n_candidates, rng)
            if split is None:
                continue
            split_feature, split_threshold = split
            goes_left = features[rows, split_feature] <= split_threshold
            feature[node] = split_feature
            threshold[node] = split_threshold
            left_rows, right_rows = rows[goes_left], rows[~goes_left]
            left[node] = new_node(targets[left_rows])
            right[node] = new_node(targets[right_rows])
            stack.append((right[node], right_rows, depth + 1))
            stack.append((left[node], left_rows, depth + 1))

        self.n_features_ = n_features
        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold, dtype=np.float64)
        self.left_ = np.array(left, dtype=np.int64)
        self.right_ = np.array(right, dtype=np.int64)
        self.value_ = np.array(value, dtype=np.float64)
        return self

    @staticmethod
    def _best_split(
        features: np.ndarray, targets: np.ndarray, n_candidates: int, rng: np.random.Generator
    ) -> Optional[Tuple[int, float]]:
        """隨機順序檢查特徵，直到看過 n_candidates 個非常數特徵"""
        best: Optional[Tuple[float, int, float]] = None
        visited = 0
        for candidate in rng.permutation(features.shape[1]):
            if visited >= n_candidates:
                break
            result = _best_threshold(features[:, candidate], targets)
            if result is None:
                continue
            visited += 1
            impurity, split_threshold = result
            if (
                best is None
                or impurity < best[0] - IMPURITY_TOLERANCE
                or (impurity <= best[0] + IMPURITY_TOLERANCE and candidate < best[1])
            ):
                best = (impurity, int(candidate), split_threshold)
        if best is None:
            return None
        return best[1], best[2]

    def apply(self, features: np.ndarray) -> np.ndarray:
        """每列落入的葉節點編號"""
        features = check_features(features)
        node = np.zeros(features.shape[0], dtype=np.int64)
        while True:
            rows = np.flatnonzero(self.feature_[node] != LEAF)
            if rows.size == 0:
                return node
            current = node[rows]
            goes_left = features[rows, self.feature_[current]] <= self.threshold_[current]
            node[rows] = np.where(goes_left, self.left_[current], self.right_[current])

    def score(self, features: np.ndarray) -> np.ndarray:
        return self.value_[self.apply(features)]

    @property
    def depth(self) -> int:
        depths = np.zeros(self.value_.shape[0], dtype=np.int64)
        for node in range(self.value_.shape[0]):
            if self.feature_[node] != LEAF:
                depths[self.left_[node]] = depths[node] + 1
                depths[self.right_[node]] = depths[node] + 1
        return int(depths.max())

    def state_dict(self) -> Dict[str, Any]:
        return {
            "n_features": self.n_features_,
            "feature": self.feature_.tolist(),
            "threshold": self.threshold_.tolist(),
            "left": self.left_.tolist(),
            "right": self.right_.tolist(),
            "value": self.value_.tolist(),
        }

    def load_state(self, state: Dict[str, Any]) -> "DecisionTree":
        self.n_features_ = int(state["n_features"])
        self.feature_ = np.array(state["feature"], dtype=np.int64)
        self.threshold_ = np.array(state["threshold"], dtype=np.float64)
        self.left_ = np.array(state["left"], dtype=np.int64)
        self.right_ = np.array(state["right"], dtype=np.int64)
        self.value_ = np.array(state["value"], dtype=np.float64)
        return self
