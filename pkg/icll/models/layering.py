from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GroupKind(str, Enum):
    """依群內類別組成決定的群組"""

    PURE_MAJORITY = "pure_majority"
    PURE_MINORITY = "pure_minority"
    MIXED = "mixed"


# group_of 陣列中的整數編碼
GROUP_CODES = {
    GroupKind.PURE_MAJORITY: 0,
    GroupKind.PURE_MINORITY: 1,
    GroupKind.MIXED: 2,
}
GROUP_NAMES = {code: kind for kind, code in GROUP_CODES.items()}


class DegeneracyKind(str, Enum):
    """群組退化情形"""

    NONE = "none"
    EMPTY_CMIN = "empty_cmin"
    EMPTY_CMIX = "empty_cmix"
    EMPTY_CMAJ = "empty_cmaj"

    @property
    def description(self) -> str:
        return {
            DegeneracyKind.NONE: "not degenerate",
            DegeneracyKind.EMPTY_CMIN: "degenerate: pure minority group empty",
            DegeneracyKind.EMPTY_CMIX: "degenerate: mixed group empty",
            DegeneracyKind.EMPTY_CMAJ: "degenerate: pure majority group empty",
        }[self]


class GroupAssignment(BaseModel):
    """每個樣本所屬群組（C_maj / C_min / C_mix）與群編號"""

    group_of: np.ndarray = Field(..., description="GROUP_CODES 編碼的群組")
    cluster_of: np.ndarray = Field(..., description="群編號")
    counts: Tuple[int, int, int] = Field(..., description="(|C_maj|, |C_min|, |C_mix|)")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("group_of", "cluster_of", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.int64, copy=True)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _validate_counts(self) -> "GroupAssignment":
        if self.group_of.shape != self.cluster_of.shape:
            raise ValueError("group_of 與 cluster_of 長度不符")
        if sum(self.counts) != self.group_of.shape[0]:
            raise ValueError("群組數量總和必須等於樣本數")
        expected = tuple(int(np.sum(self.group_of == code)) for code in (0, 1, 2))
        if expected != tuple(self.counts):
            raise ValueError("counts 與 group_of 不一致")
        return self

    def members(self, kind: GroupKind) -> np.ndarray:
        """某群組的樣本索引"""
        return np.flatnonzero(self.group_of == GROUP_CODES[kind])

    def group_name(self, index: int) -> str:
        return GROUP_NAMES[int(self.group_of[index])].value


class LayerTargets(BaseModel):
    """兩層的目標變數：y_l1（全部樣本）與 y_l2（第二層子集）"""

    y_l1: np.ndarray
    l2_index: np.ndarray = Field(..., description="y_l1 = 1 的樣本索引")
    y_l2: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("y_l1", "l2_index", "y_l2", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.int64, copy=True)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _validate_layers(self) -> "LayerTargets":
        if not np.array_equal(self.l2_index, np.flatnonzero(self.y_l1 == 1)):
            raise ValueError("l2_index 必須等於 y_l1 = 1 的索引")
        if self.y_l2.shape != self.l2_index.shape:
            raise ValueError("y_l2 長度與 l2_index 不符")
        return self

    @property
    def l1_imbalance_ratio(self) -> float:
        return layer_imbalance_ratio(self.y_l1)


def layer_imbalance_ratio(targets: np.ndarray) -> float:
    """二元目標的不平衡比（多數數量 / 少數數量；缺一類時為 inf）"""
    positives = int(np.sum(targets == 1))
    negatives = int(targets.shape[0]) - positives
    smaller = min(positives, negatives)
    if smaller == 0:
        return float("inf")
    return max(positives, negatives) / smaller
