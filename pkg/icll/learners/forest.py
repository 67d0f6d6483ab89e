from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from icll.learners.base import Classifier, check_features, check_targets, class_indices
from icll.learners.tree import DecisionTree
from icll.utils.helpers import derive_seed


class RandomForest(Classifier):
    """隨機森林：每棵樹以 bootstrap 樣本訓練，分數為各樹分數的平均

    每棵樹的種子由 (seed, 樹索引) 導出，結果與平行排程無關。
    """

    kind = "rf"

    def __init__(
        self,
        n_trees: int = 100,
        max_features: Optional[int] = None,
        min_samples_split: int = 2,
        max_depth: Optional[int] = None,
        bootstrap: bool = True,
        seed: int = 0,
        n_jobs: int = 1,
    ):
        self.n_trees = n_trees
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self.max_depth = max_depth
        self.bootstrap = bootstrap
        self.seed = seed
        self.n_jobs = n_jobs

    def resolve_max_features(self, n_features: int) -> int:
        """實際使用的每次分割特徵數；預設 floor(sqrt(p))，上限為 p"""
        if self.max_features is None:
            return max(1, int(np.sqrt(n_features)))
        return max(1, min(self.max_features, n_features))

    def _sample(self, targets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        n = targets.shape[0]
        if not self.bootstrap:
            return np.arange(n)
        return rng.integers(0, n, size=n)

    def _fit_tree(
        self, features: np.ndarray, targets: np.ndarray, index: int, max_features: int
    ) -> Tuple[DecisionTree, np.ndarray]:
        rng = np.random.default_rng(derive_seed(self.seed, index, 0))
        rows = self._sample(targets, rng)
        tree = DecisionTree(
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
            max_features=max_features,
            seed=derive_seed(self.seed, index, 1),
        ).fit(features[rows], targets[rows])
        counts = np.bincount(targets[rows], minlength=2)
        return tree, counts

    def _check(self, features: np.ndarray, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        features = check_features(features)
        return features, check_targets(features, targets)

    def fit(self, features: np.ndarray, targets: np.ndarray) -> "RandomForest":
        features, targets = self._check(features, targets)
        if features.shape[0] < 2:
            raise ValueError("隨機森林至少需要 2 筆樣本")
        max_features = self.resolve_max_features(features.shape[1])
        results = Parallel(n_jobs=self.n_jobs)(
            delayed(self._fit_tree)(features, targets, index, max_features)
            for index in range(self.n_trees)
        )
        self.trees_: List[DecisionTree] = [tree for tree, _ in results]
        # 每棵樹訓練集的 (類別 0 數量, 類別 1 數量)
        self.tree_class_counts_ = np.array([counts for _, counts in results], dtype=np.int64)
        return self

    def score(self, features: np.ndarray) -> np.ndarray:
        features = check_features(features)
        total = np.zeros(features.shape[0], dtype=np.float64)
        for tree in self.trees_:
            total += tree.score(features)
        return total / len(self.trees_)

    def state_dict(self) -> Dict[str, Any]:
        return {
            "trees": [tree.to_payload() for tree in self.trees_],
            "tree_class_counts": self.tree_class_counts_.tolist(),
        }

    def load_state(self, state: Dict[str, Any]) -> "RandomForest":
        self.trees_ = [
            DecisionTree(**payload["params"]).load_state(payload["state"])
            for payload in state["trees"]
        ]
        self.tree_class_counts_ = np.array(state["tree_class_counts"], dtype=np.int64)
        return self


class BalancedRandomForest(RandomForest):
    """平衡隨機森林：每棵樹以少數類別 bootstrap 加上等量、不放回抽取的多數類別訓練"""

    kind = "balanced_rf"

    def _sample(self, targets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        minority, majority = class_indices(targets)
        size = minority.shape[0]
        return np.concatenate([
            rng.choice(minority, size=size, replace=True),
            rng.choice(majority, size=size, replace=False),
        ])

    def fit(self, features: np.ndarray, targets: np.ndarray) -> "BalancedRandomForest":
        features, targets = self._check(features, targets)
        class_indices(targets)
        return super().fit(features, targets)
