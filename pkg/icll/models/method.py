from enum import Enum
from typing import Optional

from icll.models.icll import IcllVariant
from icll.models.resampling import ResampleMethod


class ComparisonMethod(str, Enum):
    """基準比較中的 15 種方法"""

    ICLL = "ICLL"
    ICLL_SMOTE = "ICLL+SMOTE"
    ICLL_SMOTE_L1 = "ICLL+SMOTE(L1)"
    ICLL_SMOTE_L2 = "ICLL+SMOTE(L2)"
    ICLL_L1_ONLY = "ICLL(L1)"
    ICLL_L2_ONLY = "ICLL(L2)"
    NORESAMPLE_RF = "NoResample-RF"
    NORESAMPLE_LR = "NoResample-LR"
    BALANCED_RF = "BalancedRF"
    RO = "RO"
    RU = "RU"
    SMOTE = "SMOTE"
    ADASYN = "ADASYN"
    NEARMISS = "NearMiss"
    OSS = "OSS"

    @property
    def icll_variant(self) -> Optional[IcllVariant]:
        try:
            return IcllVariant(self.value)
        except ValueError:
            return None

    @property
    def resample_method(self) -> Optional[ResampleMethod]:
        """先重抽樣再訓練隨機森林的方法"""
        try:
            return ResampleMethod(self.value)
        except ValueError:
            return None
