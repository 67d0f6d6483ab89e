import logging
from typing import Callable, Dict, Tuple

import numpy as np
from sklearn.neighbors import KNeighborsClassifier, NearestNeighbors

from icll.exceptions import SingleClassError
from icll.learners.base import check_features, check_targets, class_indices
from icll.models.dataset import Dataset
from icll.models.resampling import ResampleMethod, ResamplePlan
from icll.utils.helpers import round_half_up

logger = logging.getLogger(__name__)

Arrays = Tuple[np.ndarray, np.ndarray]


def _neighbors_excluding_self(features: np.ndarray, k: int) -> np.ndarray:
    """每列的 k 個最近鄰（不含自身，重複點也能正確排除）"""
    model = NearestNeighbors(n_neighbors=k, algorithm="brute").fit(features)
    return model.kneighbors(return_distance=False)


class ResamplingService:
    """訓練集重抽樣：RO / RU / SMOTE / ADASYN / NearMiss-1 / OSS

    陣列層級的方法以數量較少的類別為少數（數量相同時類別 1 為少數），
    因此也能用在類別 0 較少的層目標上。
    """

    @classmethod
    def _split_classes(cls, features: np.ndarray, targets: np.ndarray):
        features = check_features(features)
        targets = check_targets(features, targets)
        minority, majority = class_indices(targets)
        return features, targets, minority, majority

    @classmethod
    def _oversample_count(cls, n_minority: int, n_majority: int, plan: ResamplePlan) -> int:
        """需新增的少數樣本數"""
        return max(0, round_half_up(plan.target_ratio * n_majority) - n_minority)

    @classmethod
    def _undersample_count(cls, n_minority: int, n_majority: int, plan: ResamplePlan) -> int:
        """需保留的多數樣本數"""
        return min(n_majority, round_half_up(n_minority / plan.target_ratio))

    @classmethod
    def _append(
        cls, features: np.ndarray, targets: np.ndarray, new_rows: np.ndarray, label: int
    ) -> Arrays:
        new_targets = np.full(new_rows.shape[0], label, dtype=np.int64)
        return np.vstack([features, new_rows]), np.concatenate([targets, new_targets])

    @classmethod
    def _keep(cls, features: np.ndarray, targets: np.ndarray, rows: np.ndarray) -> Arrays:
        rows = np.sort(rows)
        return features[rows], targets[rows]

    @classmethod
    def random_oversample_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        features, targets, minority, majority = cls._split_classes(features, targets)
        n_new = cls._oversample_count(minority.size, majority.size, plan)
        rng = np.random.default_rng(plan.seed)
        picks = rng.choice(minority, size=n_new, replace=True)
        return cls._append(features, targets, features[picks], int(targets[minority[0]]))

    @classmethod
    def random_undersample_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        features, targets, minority, majority = cls._split_classes(features, targets)
        n_keep = cls._undersample_count(minority.size, majority.size, plan)
        rng = np.random.default_rng(plan.seed)
        kept = rng.choice(majority, size=n_keep, replace=False)
        return cls._keep(features, targets, np.concatenate([minority, kept]))

    @classmethod
    def _interpolate(
        cls,
        minority_features: np.ndarray,
        base: np.ndarray,
        neighbors: np.ndarray,
        rng: np.random.Generator,
    ) -> np.ndarray:
        """x_new = x + u·(x_nb − x)，u ~ U(0, 1)"""
        steps = rng.uniform(size=base.shape[0])[:, np.newaxis]
        origin = minority_features[base]
        return origin + steps * (minority_features[neighbors] - origin)

    @classmethod
    def _minority_neighbors(cls, minority_features: np.ndarray, k_neighbors: int) -> np.ndarray:
        n_minority = minority_features.shape[0]
        if n_minority < 2:
            raise SingleClassError("SMOTE 至少需要 2 筆少數類別樣本")
        k = min(k_neighbors, n_minority - 1)
        if k < k_neighbors:
            logger.debug("少數類別只有 %d 筆，k 由 %d 調整為 %d", n_minority, k_neighbors, k)
        return _neighbors_excluding_self(minority_features, k)

    @classmethod
    def smote_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        features, targets, minority, majority = cls._split_classes(features, targets)
        minority_features = features[minority]
        neighbors = cls._minority_neighbors(minority_features, plan.k_neighbors)
        n_new = cls._oversample_count(minority.size, majority.size, plan)
        rng = np.random.default_rng(plan.seed)

        # 同時抽出 (基準點, 第幾個鄰居)
        picks = rng.integers(0, neighbors.size, size=n_new)
        base = picks // neighbors.shape[1]
        chosen = neighbors[base, picks % neighbors.shape[1]]
        synthetic = cls._interpolate(minority_features, base, chosen, rng)
        return cls._append(features, targets, synthetic, int(targets[minority[0]]))

    @classmethod
    def adasyn_allocation(cls, weights: np.ndarray, total: int) -> np.ndarray:
        """依權重比例分配合成樣本數（最大餘數法，同餘數取較小索引）"""
        weights = np.asarray(weights, dtype=np.float64)
        normalized = weights / weights.sum()
        exact = normalized * total
        allocation = np.floor(exact).astype(np.int64)
        remainder = total - int(allocation.sum())
        if remainder > 0:
            order = np.argsort(-(exact - allocation), kind="stable")
            allocation[order[:remainder]] += 1
        return allocation

    @classmethod
    def adasyn_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        features, targets, minority, majority = cls._split_classes(features, targets)
        minority_features = features[minority]
        neighbors = cls._minority_neighbors(minority_features, plan.k_neighbors)

        k_all = min(plan.k_neighbors, features.shape[0] - 1)
        overall = _neighbors_excluding_self(features, k_all)[minority]
        minority_label = int(targets[minority[0]])
        hardness = np.mean(targets[overall] != minority_label, axis=1)
        if hardness.sum() == 0:
            logger.warning("ADASYN: 沒有少數樣本的鄰居屬於多數類別，改用 SMOTE")
            return cls.smote_arrays(features, targets, plan)

        n_new = cls._oversample_count(minority.size, majority.size, plan)
        allocation = cls.adasyn_allocation(hardness, n_new)
        rng = np.random.default_rng(plan.seed)
        base = np.repeat(np.arange(minority.size), allocation)
        chosen = neighbors[base, rng.integers(0, neighbors.shape[1], size=base.size)]
        synthetic = cls._interpolate(minority_features, base, chosen, rng)
        return cls._append(features, targets, synthetic, minority_label)

    @classmethod
    def nearmiss_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        """NearMiss-1：保留與最近少數樣本平均距離最小的多數樣本"""
        features, targets, minority, majority = cls._split_classes(features, targets)
        k = min(plan.nearmiss_neighbors, minority.size)
        model = NearestNeighbors(n_neighbors=k, algorithm="brute").fit(features[minority])
        distances, _ = model.kneighbors(features[majority])
        order = np.argsort(distances.mean(axis=1), kind="stable")
        n_keep = cls._undersample_count(minority.size, majority.size, plan)
        return cls._keep(features, targets, np.concatenate([minority, majority[order[:n_keep]]]))

    @classmethod
    def tomek_links(cls, features: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """互為最近鄰且類別不同的樣本對，回傳 m×2 陣列（每列 i < j）"""
        features = check_features(features)
        targets = check_targets(features, targets)
        if features.shape[0] < 2:
            return np.empty((0, 2), dtype=np.int64)
        nearest = _neighbors_excluding_self(features, 1)[:, 0]
        rows = np.arange(features.shape[0])
        mutual = (nearest[nearest] == rows) & (targets[nearest] != targets) & (rows < nearest)
        return np.column_stack([rows[mutual], nearest[mutual]]).astype(np.int64)

    @classmethod
    def oss_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        """One-Sided Selection：1-NN 壓縮後移除 Tomek link 中的多數樣本"""
        features, targets, minority, majority = cls._split_classes(features, targets)
        rng = np.random.default_rng(plan.seed)
        seed_row = rng.choice(majority)
        condensed = np.concatenate([minority, [seed_row]])

        rest = majority[majority != seed_row]
        if rest.size:
            knn = KNeighborsClassifier(n_neighbors=1, algorithm="brute")
            knn.fit(features[condensed], targets[condensed])
            misclassified = rest[knn.predict(features[rest]) != targets[rest]]
            condensed = np.concatenate([condensed, misclassified])
        condensed = np.sort(condensed)

        links = cls.tomek_links(features[condensed], targets[condensed])
        majority_label = int(targets[seed_row])
        drop = {
            int(condensed[member])
            for pair in links
            for member in pair
            if targets[condensed[member]] == majority_label
        }
        kept = np.array([row for row in condensed if int(row) not in drop], dtype=np.int64)
        logger.debug("OSS: %d → %d 筆（Tomek 移除 %d）", targets.size, kept.size, len(drop))
        return cls._keep(features, targets, kept)

    @classmethod
    def _array_method(cls, method: ResampleMethod) -> Callable[..., Arrays]:
        methods: Dict[ResampleMethod, Callable[..., Arrays]] = {
            ResampleMethod.RO: cls.random_oversample_arrays,
            ResampleMethod.RU: cls.random_undersample_arrays,
            ResampleMethod.SMOTE: cls.smote_arrays,
            ResampleMethod.ADASYN: cls.adasyn_arrays,
            ResampleMethod.NEARMISS: cls.nearmiss_arrays,
            ResampleMethod.OSS: cls.oss_arrays,
        }
        return methods[method]

    @classmethod
    def resample_arrays(cls, features, targets, plan: ResamplePlan) -> Arrays:
        return cls._array_method(plan.method)(features, targets, plan)

    @classmethod
    def resample(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        """依 plan.method 重抽樣資料集"""
        features, labels = cls.resample_arrays(dataset.features, dataset.labels, plan)
        logger.debug(
            "%s(%s): %d → %d 筆", plan.method.value, dataset.name, dataset.n_samples, labels.size
        )
        return dataset.with_arrays(features, labels)

    @classmethod
    def _with_method(cls, plan: ResamplePlan, method: ResampleMethod) -> ResamplePlan:
        return plan.model_copy(update={"method": method})

    @classmethod
    def random_oversample(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        return cls.resample(dataset, cls._with_method(plan, ResampleMethod.RO))

    @classmethod
    def random_undersample(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        return cls.resample(dataset, cls._with_method(plan, ResampleMethod.RU))

    @classmethod
    def smote(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        return cls.resample(dataset, cls._with_method(plan, ResampleMethod.SMOTE))

    @classmethod
    def adasyn(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        return cls.resample(dataset, cls._with_method(plan, ResampleMethod.ADASYN))

    @classmethod
    def nearmiss(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        return cls.resample(dataset, cls._with_method(plan, ResampleMethod.NEARMISS))

    @classmethod
    def oss(cls, dataset: Dataset, plan: ResamplePlan) -> Dataset:
        return cls.resample(dataset, cls._with_method(plan, ResampleMethod.OSS))
