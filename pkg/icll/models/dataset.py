from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen(array: np.ndarray) -> np.ndarray:
    """回傳唯讀的陣列副本"""
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _as_features(value) -> np.ndarray:
    features = np.asarray(value, dtype=np.float64)
    if features.ndim != 2:
        raise ValueError("features 必須是二維矩陣")
    if not np.all(np.isfinite(features)):
        raise ValueError("features 含有缺失值或非有限數值")
    return _frozen(features)


def _as_labels(value) -> np.ndarray:
    labels = np.asarray(value)
    if labels.ndim != 1:
        raise ValueError("labels 必須是一維向量")
    if not np.all(np.isin(labels, (0, 1))):
        raise ValueError("labels 只能是 0 或 1")
    return _frozen(labels.astype(np.int64))


class Dataset(BaseModel):
    """二元分類資料集（0 = 多數類別，1 = 少數類別）"""

    name: str = Field(..., min_length=1, description="資料集識別名稱")
    features: np.ndarray = Field(..., description="n×p 特徵矩陣")
    labels: np.ndarray = Field(..., description="長度 n 的 {0,1} 標籤")
    feature_names: List[str] = Field(..., description="p 個特徵名稱")
    class_names: Tuple[str, str] = Field(
        default=("0", "1"), description="(多數類別名稱, 少數類別名稱)"
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("features", mode="before")
    @classmethod
    def _validate_features(cls, value) -> np.ndarray:
        return _as_features(value)

    @field_validator("labels", mode="before")
    @classmethod
    def _validate_labels(cls, value) -> np.ndarray:
        return _as_labels(value)

    @model_validator(mode="after")
    def _validate_shape(self) -> "Dataset":
        n, p = self.features.shape
        if n < 2 or p < 1:
            raise ValueError(f"資料集至少需要 2 列 1 欄，收到 {n}×{p}")
        if self.labels.shape[0] != n:
            raise ValueError("labels 長度與 features 列數不符")
        if len(self.feature_names) != p:
            raise ValueError("feature_names 數量與特徵欄數不符")
        n_minority = int(self.labels.sum())
        if n_minority == 0:
            raise ValueError("資料集缺少少數類別")
        if n - n_minority < n_minority:
            raise ValueError("類別 0 必須是多數類別")
        return self

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def subset(self, indices: np.ndarray, name: Optional[str] = None) -> "Dataset":
        """取出部分資料列（交叉驗證折）"""
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            name=name or self.name,
            features=self.features[indices],
            labels=self.labels[indices],
            feature_names=list(self.feature_names),
            class_names=self.class_names,
        )

    def with_arrays(self, features: np.ndarray, labels: np.ndarray) -> "Dataset":
        """以新陣列建立同名資料集（重抽樣或縮放後的訓練集）

        類別角色沿用原資料集，不重新檢查多數 / 少數數量：
        OSS 之類的方法可能讓類別 1 變得比類別 0 多。
        """
        features = _as_features(features)
        labels = _as_labels(labels)
        if labels.shape[0] != features.shape[0] or features.shape[1] != self.n_features:
            raise ValueError("新陣列的形狀與資料集不符")
        return Dataset.model_construct(
            name=self.name,
            features=features,
            labels=labels,
            feature_names=list(self.feature_names),
            class_names=self.class_names,
        )


class ImbalanceSummary(BaseModel):
    """類別不平衡摘要"""

    n_majority: int = Field(..., ge=1)
    n_minority: int = Field(..., ge=1)
    imbalance_ratio: float = Field(..., ge=1.0, description="n_majority / n_minority")

    @model_validator(mode="after")
    def _validate_ratio(self) -> "ImbalanceSummary":
        if self.imbalance_ratio != self.n_majority / self.n_minority:
            raise ValueError("imbalance_ratio 必須等於 n_majority / n_minority")
        return self
