from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field


class LearnerKind(str, Enum):
    """內建學習器"""

    TREE = "tree"
    RF = "rf"
    BALANCED_RF = "balanced_rf"
    LR = "lr"


class ForestConfig(BaseModel):
    """決策樹 / 隨機森林超參數"""

    n_trees: int = Field(default=100, ge=1, description="樹的數量")
    max_features: Optional[int] = Field(
        default=None, ge=1, description="每次分割考慮的特徵數；None 表示 floor(sqrt(p))"
    )
    min_samples_split: int = Field(default=2, ge=2)
    max_depth: Optional[int] = Field(default=None, ge=1, description="None 表示不限深度")
    bootstrap: bool = True
    seed: int = 0


class LogisticConfig(BaseModel):
    """L2 正則化邏輯迴歸超參數"""

    l2_strength: float = Field(default=1.0, gt=0.0)
    max_iter: int = Field(default=1000, ge=1)
    tol: float = Field(default=1e-6, gt=0.0)


class LearnerConfig(BaseModel):
    """學習器選擇與設定"""

    kind: LearnerKind = LearnerKind.RF
    forest: ForestConfig = Field(default_factory=ForestConfig)
    logistic: LogisticConfig = Field(default_factory=LogisticConfig)
    n_jobs: int = Field(default=1, description="訓練樹的平行數")

    def with_seed(self, seed: int) -> "LearnerConfig":
        """回傳換了種子的設定副本"""
        return self.model_copy(
            update={"forest": self.forest.model_copy(update={"seed": int(seed)})}
        )
