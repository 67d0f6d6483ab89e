from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from icll.models.layering import DegeneracyKind, GroupAssignment
from icll.models.learner import LearnerConfig
from icll.models.resampling import ResampleMethod, ResamplePlan


class IcllVariant(str, Enum):
    """ICLL 的六種變體"""

    ICLL = "ICLL"
    ICLL_SMOTE = "ICLL+SMOTE"
    ICLL_SMOTE_L1 = "ICLL+SMOTE(L1)"
    ICLL_SMOTE_L2 = "ICLL+SMOTE(L2)"
    ICLL_L1_ONLY = "ICLL(L1)"
    ICLL_L2_ONLY = "ICLL(L2)"

    @property
    def smote_layers(self) -> tuple:
        """哪些層要套用 SMOTE"""
        return {
            IcllVariant.ICLL_SMOTE: (1, 2),
            IcllVariant.ICLL_SMOTE_L1: (1,),
            IcllVariant.ICLL_SMOTE_L2: (2,),
        }.get(self, ())


class IcllConfig(BaseModel):
    """ICLL 模型設定"""

    base_learner: LearnerConfig = Field(default_factory=LearnerConfig)
    l1_learner: Optional[LearnerConfig] = Field(default=None, description="第一層學習器（預設同 base_learner）")
    l2_learner: Optional[LearnerConfig] = Field(default=None, description="第二層學習器（預設同 base_learner）")
    variant: IcllVariant = IcllVariant.ICLL
    smote_plan: Optional[ResamplePlan] = None
    seed: int = 0
    n_jobs: int = Field(default=1, description="兩層平行訓練的工作數")

    @model_validator(mode="after")
    def _validate_smote_plan(self) -> "IcllConfig":
        needs_smote = bool(self.variant.smote_layers)
        if needs_smote and self.smote_plan is None:
            raise ValueError(f"變體 {self.variant.value} 需要 smote_plan")
        if not needs_smote and self.smote_plan is not None:
            raise ValueError(f"變體 {self.variant.value} 不使用 smote_plan")
        if self.smote_plan is not None and self.smote_plan.method != ResampleMethod.SMOTE:
            raise ValueError("smote_plan 的方法必須是 SMOTE")
        return self

    def layer_learner(self, layer: int) -> LearnerConfig:
        override = self.l1_learner if layer == 1 else self.l2_learner
        return override or self.base_learner


class IcllModel(BaseModel):
    """訓練完成的 ICLL 模型"""

    f_l1: Any = Field(..., description="第一層分類器")
    f_l2: Any = Field(..., description="第二層分類器")
    groups: GroupAssignment
    degeneracy: DegeneracyKind
    config: IcllConfig
    remediated_tau: Optional[float] = Field(default=None, description="C_maj 補救後使用的 τ")
    single_model_fallback: bool = Field(default=False, description="補救失敗時退回單一模型")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
