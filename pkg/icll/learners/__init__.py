from typing import Any, Dict

from icll.exceptions import ModelFileError
from icll.learners.base import Classifier, ConstantClassifier, class_indices
from icll.learners.forest import BalancedRandomForest, RandomForest
from icll.learners.logistic import LogisticRegression
from icll.learners.tree import DecisionTree
from icll.models.learner import LearnerConfig, LearnerKind

CLASSIFIERS = {
    cls.kind: cls
    for cls in (ConstantClassifier, DecisionTree, RandomForest, BalancedRandomForest, LogisticRegression)
}


def build_classifier(config: LearnerConfig) -> Classifier:
    """依設定建立尚未訓練的分類器"""
    forest = config.forest
    if config.kind == LearnerKind.TREE:
        return DecisionTree(
            max_depth=forest.max_depth,
            min_samples_split=forest.min_samples_split,
            max_features=forest.max_features,
            seed=forest.seed,
        )
    if config.kind in (LearnerKind.RF, LearnerKind.BALANCED_RF):
        forest_cls = BalancedRandomForest if config.kind == LearnerKind.BALANCED_RF else RandomForest
        return forest_cls(
            n_trees=forest.n_trees,
            max_features=forest.max_features,
            min_samples_split=forest.min_samples_split,
            max_depth=forest.max_depth,
            bootstrap=forest.bootstrap,
            seed=forest.seed,
            n_jobs=config.n_jobs,
        )
    logistic = config.logistic
    return LogisticRegression(
        l2_strength=logistic.l2_strength, max_iter=logistic.max_iter, tol=logistic.tol
    )


def classifier_from_payload(payload: Dict[str, Any]) -> Classifier:
    """由 to_payload() 的結果還原分類器"""
    kind = payload.get("kind")
    if kind not in CLASSIFIERS:
        raise ModelFileError(f"未知的分類器種類: {kind}")
    try:
        return CLASSIFIERS[kind](**payload["params"]).load_state(payload["state"])
    except (KeyError, TypeError) as exc:
        raise ModelFileError(f"分類器內容不完整: {exc}") from exc


__all__ = [
    "BalancedRandomForest",
    "Classifier",
    "ConstantClassifier",
    "DecisionTree",
    "LogisticRegression",
    "RandomForest",
    "build_classifier",
    "class_indices",
    "classifier_from_payload",
]
