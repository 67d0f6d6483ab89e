from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# 合併高度的單調性容許誤差（浮點捨入）
MONOTONE_TOLERANCE = 1e-9


class DistanceMatrix(BaseModel):
    """壓縮形式的成對距離矩陣（上三角，n(n-1)/2 個值）"""

    n: int = Field(..., ge=2)
    values: np.ndarray = Field(..., description="condensed 距離向量")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("values", mode="before")
    @classmethod
    def _validate_values(cls, value) -> np.ndarray:
        values = np.array(value, dtype=np.float64, copy=True)
        if values.ndim != 1 or np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("距離必須是非負且有限的一維向量")
        values.setflags(write=False)
        return values

    @model_validator(mode="after")
    def _validate_size(self) -> "DistanceMatrix":
        if self.values.shape[0] != self.n * (self.n - 1) // 2:
            raise ValueError("condensed 向量長度與 n 不符")
        return self

    def square(self) -> np.ndarray:
        """展開為 n×n 對稱矩陣"""
        matrix = np.zeros((self.n, self.n), dtype=np.float64)
        rows, cols = np.triu_indices(self.n, k=1)
        matrix[rows, cols] = self.values
        matrix[cols, rows] = self.values
        return matrix


class MergeRecord(BaseModel):
    """連結樹中的一次合併"""

    left: int = Field(..., ge=0)
    right: int = Field(..., ge=0)
    height: float = Field(..., ge=0.0)
    size: int = Field(..., ge=2)


class LinkageTree(BaseModel):
    """Ward 聚合式連結樹；0..n-1 為葉節點，n..2n-2 為內部節點"""

    n: int = Field(..., ge=2)
    merges: List[MergeRecord]

    @model_validator(mode="after")
    def _validate_tree(self) -> "LinkageTree":
        if len(self.merges) != self.n - 1:
            raise ValueError("合併次數必須是 n-1")
        seen = set()
        sizes = {leaf: 1 for leaf in range(self.n)}
        previous = 0.0
        for step, record in enumerate(self.merges):
            node = self.n + step
            for child in (record.left, record.right):
                if child >= node or child in seen:
                    raise ValueError(f"節點 {child} 不可被合併或已被使用")
                seen.add(child)
            if record.size != sizes[record.left] + sizes[record.right]:
                raise ValueError(f"第 {step} 次合併的大小不一致")
            sizes[node] = record.size
            if record.height < previous - MONOTONE_TOLERANCE * max(1.0, previous):
                raise ValueError(f"第 {step} 次合併高度遞減")
            previous = max(previous, record.height)
        if self.merges[-1].size != self.n:
            raise ValueError("最後一次合併必須包含全部樣本")
        return self

    @property
    def heights(self) -> np.ndarray:
        return np.array([record.height for record in self.merges], dtype=np.float64)


class CutParameters(BaseModel):
    """對數合併高度的切割門檻 τ = μ + σ"""

    mu: float
    sigma: float = Field(..., ge=0.0)
    tau: float

    @model_validator(mode="after")
    def _validate_tau(self) -> "CutParameters":
        if self.tau != self.mu + self.sigma:
            raise ValueError("tau 必須等於 mu + sigma")
        return self


class FlatClustering(BaseModel):
    """扁平分群結果"""

    cluster_of: np.ndarray = Field(..., description="每個樣本的群編號 0..k-1")
    k: int = Field(..., ge=1)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("cluster_of", mode="before")
    @classmethod
    def _validate_ids(cls, value) -> np.ndarray:
        cluster_of = np.array(value, dtype=np.int64, copy=True)
        cluster_of.setflags(write=False)
        return cluster_of

    @model_validator(mode="after")
    def _validate_contiguous(self) -> "FlatClustering":
        n = self.cluster_of.shape[0]
        if self.k > n:
            raise ValueError("群數不可超過樣本數")
        if not np.array_equal(np.unique(self.cluster_of), np.arange(self.k)):
            raise ValueError("群編號必須連續 0..k-1")
        return self

    @property
    def n_samples(self) -> int:
        return int(self.cluster_of.shape[0])
