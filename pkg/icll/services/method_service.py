import logging
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from icll.learners import Classifier, build_classifier
from icll.models.dataset import Dataset
from icll.models.icll import IcllConfig, IcllModel
from icll.models.learner import ForestConfig, LearnerConfig, LearnerKind
from icll.models.method import ComparisonMethod
from icll.models.resampling import ResampleMethod, ResamplePlan
from icll.services.icll_service import IcllService
from icll.services.resampling_service import ResamplingService
from icll.utils.helpers import derive_seed

logger = logging.getLogger(__name__)

# 重抽樣使用的子種子鍵，與學習器的種子分開
RESAMPLE_SEED_KEY = 3


class FittedMethod(BaseModel):
    """訓練完成的比較方法：ICLL 模型或單一分類器"""

    method: ComparisonMethod
    icll: Optional[IcllModel] = None
    classifier: Optional[Classifier] = None

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class MethodService:
    """15 種比較方法的訓練與評分"""

    @classmethod
    def _learner(cls, kind: LearnerKind, seed: int, n_trees: int, n_jobs: int) -> LearnerConfig:
        return LearnerConfig(
            kind=kind, forest=ForestConfig(n_trees=n_trees, seed=seed), n_jobs=n_jobs
        )

    @classmethod
    def icll_config(
        cls, method: ComparisonMethod, seed: int, n_trees: int = 100, n_jobs: int = 1
    ) -> IcllConfig:
        variant = method.icll_variant
        if variant is None:
            raise ValueError(f"{method.value} 不是 ICLL 變體")
        return IcllConfig(
            base_learner=cls._learner(LearnerKind.RF, seed, n_trees, n_jobs),
            variant=variant,
            smote_plan=ResamplePlan(method=ResampleMethod.SMOTE) if variant.smote_layers else None,
            seed=seed,
        )

    @classmethod
    def fit(
        cls,
        method: Union[ComparisonMethod, str],
        dataset: Dataset,
        seed: int = 0,
        n_trees: int = 100,
        n_jobs: int = 1,
    ) -> FittedMethod:
        """在訓練資料上訓練指定方法"""
        method = ComparisonMethod(method)
        if method.icll_variant is not None:
            model = IcllService.fit(dataset, cls.icll_config(method, seed, n_trees, n_jobs))
            return FittedMethod(method=method, icll=model)

        if method == ComparisonMethod.NORESAMPLE_LR:
            learner = LearnerConfig(kind=LearnerKind.LR)
        elif method == ComparisonMethod.BALANCED_RF:
            learner = cls._learner(LearnerKind.BALANCED_RF, seed, n_trees, n_jobs)
        else:
            learner = cls._learner(LearnerKind.RF, seed, n_trees, n_jobs)

        if method.resample_method is not None:
            plan = ResamplePlan(
                method=method.resample_method, seed=derive_seed(seed, RESAMPLE_SEED_KEY)
            )
            dataset = ResamplingService.resample(dataset, plan)

        classifier = build_classifier(learner).fit(dataset.features, dataset.labels)
        logger.debug("%s 訓練完成: %s, n=%d", method.value, dataset.name, dataset.n_samples)
        return FittedMethod(method=method, classifier=classifier)

    @classmethod
    def score(cls, fitted: FittedMethod, features: np.ndarray) -> np.ndarray:
        """少數類別分數"""
        if fitted.icll is not None:
            return IcllService.score(fitted.icll, features)
        return fitted.classifier.score(features)
