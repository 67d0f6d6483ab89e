from enum import Enum

from pydantic import BaseModel, Field


class ResampleMethod(str, Enum):
    """重抽樣方法"""

    RO = "RO"
    RU = "RU"
    SMOTE = "SMOTE"
    ADASYN = "ADASYN"
    NEARMISS = "NearMiss"
    OSS = "OSS"


class ResamplePlan(BaseModel):
    """重抽樣設定"""

    method: ResampleMethod
    k_neighbors: int = Field(default=5, ge=1, description="SMOTE / ADASYN 的鄰居數")
    nearmiss_neighbors: int = Field(default=3, ge=1, description="NearMiss-1 的少數類別鄰居數")
    target_ratio: float = Field(
        default=1.0, gt=0.0, le=1.0, description="重抽樣後 少數數量 / 多數數量"
    )
    seed: int = 0
