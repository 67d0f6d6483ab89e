from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from icll.models.icll import IcllConfig
from icll.models.layering import DegeneracyKind
from icll.utils.helpers import utc_now


class LearnerPayload(BaseModel):
    """序列化後的分類器"""
    kind: str = Field(..., description="分類器種類（constant / tree / rf / balanced_rf / lr）")
    params: Dict[str, Any] = Field(default_factory=dict, description="建構參數")
    state: Dict[str, Any] = Field(default_factory=dict, description="訓練結果")


class ScalerPayload(BaseModel):
    """min-max 縮放：x * scale + offset"""
    scale: List[float]
    offset: List[float]

    def transform(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != len(self.scale):
            raise ValueError("特徵欄數與縮放參數不符")
        return features * np.asarray(self.scale) + np.asarray(self.offset)


class GroupPayload(BaseModel):
    """群組指派"""
    group_of: List[int]
    cluster_of: List[int]
    counts: Tuple[int, int, int]


class IcllModelPayload(BaseModel):
    """序列化後的 ICLL 模型"""
    f_l1: LearnerPayload
    f_l2: LearnerPayload
    groups: GroupPayload
    degeneracy: DegeneracyKind
    config: IcllConfig
    remediated_tau: Optional[float] = None
    single_model_fallback: bool = False


class SavedModel(BaseModel):
    """模型檔（JSON）：ICLL 模型或單一基準分類器擇一"""
    format_version: int = 1
    method: str = Field(..., description="比較方法名稱")
    dataset: str
    feature_names: List[str]
    class_names: Tuple[str, str] = Field(..., description="(多數類別名稱, 少數類別名稱)")
    scaler: Optional[ScalerPayload] = Field(default=None, description="訓練時使用的 min-max 縮放")
    icll: Optional[IcllModelPayload] = None
    baseline: Optional[LearnerPayload] = None
    created_at: datetime = Field(default_factory=utc_now)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "format_version": 1,
                "method": "NoResample-LR",
                "dataset": "glass1",
                "feature_names": ["RI", "Na"],
                "class_names": ["negative", "positive"],
                "baseline": {
                    "kind": "lr",
                    "params": {"l2_strength": 1.0, "max_iter": 1000, "tol": 1e-6},
                    "state": {"mean": [0.0, 0.0], "scale": [1.0, 1.0], "coef": [0.5, -0.2],
                              "intercept": 0.1, "n_iter": 7, "constant": None},
                },
            }
        }
    )

    @model_validator(mode="after")
    def _validate_payload(self) -> "SavedModel":
        if (self.icll is None) == (self.baseline is None):
            raise ValueError("模型檔必須恰好包含 icll 或 baseline 其中之一")
        return self
