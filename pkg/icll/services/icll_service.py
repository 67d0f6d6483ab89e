import logging
from typing import Tuple

import numpy as np
from joblib import Parallel, delayed

from icll.learners import Classifier, ConstantClassifier, build_classifier
from icll.models.dataset import Dataset
from icll.models.icll import IcllConfig, IcllModel, IcllVariant
from icll.models.layering import DegeneracyKind, layer_imbalance_ratio
from icll.services.cluster_service import ClusterService
from icll.services.layering_service import LayeringService
from icll.services.resampling_service import ResamplingService
from icll.utils.helpers import derive_seed

logger = logging.getLogger(__name__)

LAYERS = (1, 2)


class IcllService:
    """ICLL：分群 → 群組指派 → 兩層目標 → 各層訓練；推論為兩層分數相乘"""

    @classmethod
    def _fit_layer(
        cls, layer: int, features: np.ndarray, targets: np.ndarray, config: IcllConfig
    ) -> Classifier:
        """訓練單一層；種子只由 (主種子, 層編號) 決定"""
        if targets.size == 0:
            return ConstantClassifier(value=1.0)

        if layer in config.variant.smote_layers:
            counts = np.bincount(targets, minlength=2)
            if counts.min() >= 2:
                plan = config.smote_plan.model_copy(
                    update={"seed": derive_seed(config.seed, layer, 2)}
                )
                features, targets = ResamplingService.smote_arrays(features, targets, plan)
            else:
                logger.warning(
                    "第 %d 層較少的類別只有 %d 筆，略過 SMOTE", layer, int(counts.min())
                )

        if np.unique(targets).size < 2:
            return ConstantClassifier().fit(features, targets)
        learner = config.layer_learner(layer).with_seed(derive_seed(config.seed, layer))
        return build_classifier(learner).fit(features, targets)

    @classmethod
    def _fit_single_model(cls, dataset: Dataset, config: IcllConfig, groups, tau) -> IcllModel:
        """C_maj 補救失敗：f^L1 為原始任務的單一模型，f^L2 ≡ 1"""
        learner = config.base_learner.with_seed(derive_seed(config.seed, 1))
        f_l1 = build_classifier(learner).fit(dataset.features, dataset.labels)
        return IcllModel(
            f_l1=f_l1,
            f_l2=ConstantClassifier(value=1.0),
            groups=groups,
            degeneracy=DegeneracyKind.EMPTY_CMAJ,
            config=config,
            remediated_tau=tau,
            single_model_fallback=True,
        )

    @classmethod
    def fit(cls, dataset: Dataset, config: IcllConfig) -> IcllModel:
        """訓練 ICLL 模型"""
        tree, cut, clustering = ClusterService.cluster_with_tree(dataset.features)
        groups = LayeringService.assign_groups(dataset, clustering)
        degeneracy = LayeringService.classify_degenerate(groups)
        remediated_tau = None

        if degeneracy == DegeneracyKind.EMPTY_CMAJ:
            remediated, remediated_tau = LayeringService.remediate_empty_majority(dataset, tree, cut)
            if remediated is None:
                return cls._fit_single_model(dataset, config, groups, None)
            groups = remediated
            degeneracy = LayeringService.classify_degenerate(groups)

        if degeneracy != DegeneracyKind.NONE:
            logger.info("%s: %s", dataset.name, degeneracy.description)

        targets = LayeringService.derive_layer_targets(dataset, groups)
        logger.debug(
            "%s: 群組數量=%s, L1 不平衡比=%.3f",
            dataset.name, groups.counts, layer_imbalance_ratio(targets.y_l1),
        )
        layer_data = {
            1: (dataset.features, targets.y_l1),
            2: (dataset.features[targets.l2_index], targets.y_l2),
        }
        f_l1, f_l2 = Parallel(n_jobs=config.n_jobs)(
            delayed(cls._fit_layer)(layer, *layer_data[layer], config) for layer in LAYERS
        )
        return IcllModel(
            f_l1=f_l1,
            f_l2=f_l2,
            groups=groups,
            degeneracy=degeneracy,
            config=config,
            remediated_tau=remediated_tau,
        )

    @classmethod
    def layer_scores(cls, model: IcllModel, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(f^L1(x), f^L2(x))"""
        return model.f_l1.score(features), model.f_l2.score(features)

    @classmethod
    def score(cls, model: IcllModel, features: np.ndarray) -> np.ndarray:
        """g(x) = f^L1(x) · f^L2(x)；單層變體只回傳該層分數"""
        variant = model.config.variant
        if model.single_model_fallback or variant == IcllVariant.ICLL_L1_ONLY:
            return model.f_l1.score(features)
        if variant == IcllVariant.ICLL_L2_ONLY:
            return model.f_l2.score(features)
        l1_scores, l2_scores = cls.layer_scores(model, features)
        return l1_scores * l2_scores

    @classmethod
    def predict_class(
        cls,
        model: IcllModel,
        features: np.ndarray,
        threshold: float = 0.5,
        hard: bool = False,
    ) -> np.ndarray:
        """預測類別

        hard=False 時以 g ≥ threshold 判定；hard=True 時兩層都預測 1 才是 1。
        """
        if not hard:
            return (cls.score(model, features) >= threshold).astype(np.int64)
        variant = model.config.variant
        if model.single_model_fallback or variant == IcllVariant.ICLL_L1_ONLY:
            return model.f_l1.predict(features, threshold)
        if variant == IcllVariant.ICLL_L2_ONLY:
            return model.f_l2.predict(features, threshold)
        return model.f_l1.predict(features, threshold) & model.f_l2.predict(features, threshold)
