import logging
from typing import Optional

import numpy as np

from icll.learners import (
    BalancedRandomForest,
    Classifier,
    DecisionTree,
    LogisticRegression,
    RandomForest,
    build_classifier,
)
from icll.models.learner import ForestConfig, LearnerConfig, LogisticConfig

logger = logging.getLogger(__name__)


class LearnerService:
    """訓練內建學習器"""

    @classmethod
    def fit(cls, features: np.ndarray, targets: np.ndarray, config: LearnerConfig) -> Classifier:
        """依 LearnerConfig 建立並訓練分類器"""
        classifier = build_classifier(config).fit(features, targets)
        logger.debug("訓練 %s: n=%d", config.kind.value, len(targets))
        return classifier

    @classmethod
    def fit_tree(
        cls, features: np.ndarray, targets: np.ndarray, config: Optional[ForestConfig] = None
    ) -> DecisionTree:
        """單棵 CART 決策樹；未設定 max_features 時考慮全部特徵"""
        config = config or ForestConfig()
        return DecisionTree(
            max_depth=config.max_depth,
            min_samples_split=config.min_samples_split,
            max_features=config.max_features,
            seed=config.seed,
        ).fit(features, targets)

    @classmethod
    def fit_forest(
        cls,
        features: np.ndarray,
        targets: np.ndarray,
        config: Optional[ForestConfig] = None,
        n_jobs: int = 1,
    ) -> RandomForest:
        config = config or ForestConfig()
        return RandomForest(**config.model_dump(), n_jobs=n_jobs).fit(features, targets)

    @classmethod
    def fit_balanced_forest(
        cls,
        features: np.ndarray,
        targets: np.ndarray,
        config: Optional[ForestConfig] = None,
        n_jobs: int = 1,
    ) -> BalancedRandomForest:
        config = config or ForestConfig()
        return BalancedRandomForest(**config.model_dump(), n_jobs=n_jobs).fit(features, targets)

    @classmethod
    def fit_logistic(
        cls, features: np.ndarray, targets: np.ndarray, config: Optional[LogisticConfig] = None
    ) -> LogisticRegression:
        config = config or LogisticConfig()
        return LogisticRegression(**config.model_dump()).fit(features, targets)
