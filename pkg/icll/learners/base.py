from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np
from sklearn.base import BaseEstimator

from icll.exceptions import SingleClassError


def check_features(features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise ValueError("features 必須是二維矩陣")
    if not np.all(np.isfinite(features)):
        raise ValueError("features 含有非有限數值")
    return features


def check_targets(features: np.ndarray, targets: np.ndarray) -> np.ndarray:
    targets = np.asarray(targets).astype(np.int64)
    if targets.ndim != 1 or targets.shape[0] != features.shape[0]:
        raise ValueError("targets 長度與 features 列數不符")
    if targets.shape[0] == 0:
        raise ValueError("不可用空資料訓練")
    if not np.all(np.isin(targets, (0, 1))):
        raise ValueError("targets 只能是 0 或 1")
    return targets


def class_indices(targets: np.ndarray):
    """回傳 (少數類別索引, 多數類別索引)；數量相同時類別 1 視為少數"""
    positives = np.flatnonzero(targets == 1)
    negatives = np.flatnonzero(targets == 0)
    if positives.size == 0 or negatives.size == 0:
        raise SingleClassError("需要兩個類別")
    if positives.size <= negatives.size:
        return positives, negatives
    return negatives, positives


class Classifier(BaseEstimator, ABC):
    """二元分類器：fit(features, targets) 後 score(features) 回傳 P(class = 1)"""

    kind: str = "classifier"

    @abstractmethod
    def fit(self, features: np.ndarray, targets: np.ndarray) -> "Classifier":
        ...

    @abstractmethod
    def score(self, features: np.ndarray) -> np.ndarray:
        """每列屬於類別 1 的分數，介於 [0, 1]"""

    def predict(self, features: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        """硬性預測：分數 ≥ threshold 為 1"""
        return (self.score(features) >= threshold).astype(np.int64)

    @abstractmethod
    def state_dict(self) -> Dict[str, Any]:
        """可 JSON 序列化的訓練結果"""

    @abstractmethod
    def load_state(self, state: Dict[str, Any]) -> "Classifier":
        ...

    def to_payload(self) -> Dict[str, Any]:
        return {"kind": self.kind, "params": self.get_params(), "state": self.state_dict()}


class ConstantClassifier(Classifier):
    """常數分數器（單一類別訓練資料，或 C_mix 為空時的 f^L2 ≡ 1）"""

    kind = "constant"

    def __init__(self, value: float = 1.0):
        self.value = value

    def fit(self, features: np.ndarray, targets: np.ndarray) -> "ConstantClassifier":
        targets = check_targets(check_features(features), targets)
        self.value = float(targets.mean())
        return self

    def score(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features)
        return np.full(features.shape[0], float(self.value))

    def state_dict(self) -> Dict[str, Any]:
        return {}

    def load_state(self, state: Dict[str, Any]) -> "ConstantClassifier":
        return self
