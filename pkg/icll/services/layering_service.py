import io
import logging
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from icll.models.clustering import CutParameters, FlatClustering, LinkageTree
from icll.models.dataset import Dataset
from icll.models.layering import (
    GROUP_CODES,
    DegeneracyKind,
    GroupAssignment,
    GroupKind,
    LayerTargets,
    layer_imbalance_ratio,
)
from icll.services.cluster_service import ClusterService

logger = logging.getLogger(__name__)


class LayeringService:
    """依群內類別分布指派群組，並導出兩層的目標變數"""

    @classmethod
    def assign_groups(cls, dataset: Dataset, clustering: FlatClustering) -> GroupAssignment:
        """純多數 / 純少數 / 混合 三種群組"""
        if clustering.n_samples != dataset.n_samples:
            raise ValueError("分群結果與資料集樣本數不符")
        cluster_of = clustering.cluster_of
        minority_per_cluster = np.bincount(cluster_of, weights=dataset.labels, minlength=clustering.k)
        size_per_cluster = np.bincount(cluster_of, minlength=clustering.k)

        cluster_group = np.full(clustering.k, GROUP_CODES[GroupKind.MIXED], dtype=np.int64)
        cluster_group[minority_per_cluster == 0] = GROUP_CODES[GroupKind.PURE_MAJORITY]
        cluster_group[minority_per_cluster == size_per_cluster] = GROUP_CODES[GroupKind.PURE_MINORITY]

        group_of = cluster_group[cluster_of]
        counts = tuple(int(np.sum(group_of == code)) for code in (0, 1, 2))
        return GroupAssignment(group_of=group_of, cluster_of=cluster_of, counts=counts)

    @classmethod
    def derive_layer1_targets(cls, groups: GroupAssignment) -> Tuple[np.ndarray, float]:
        """y_l1 = 1 當樣本屬於混合或純少數群組；同時回傳第一層的不平衡比"""
        y_l1 = (groups.group_of != GROUP_CODES[GroupKind.PURE_MAJORITY]).astype(np.int64)
        return y_l1, layer_imbalance_ratio(y_l1)

    @classmethod
    def derive_layer2_targets(
        cls, dataset: Dataset, groups: GroupAssignment
    ) -> Tuple[np.ndarray, np.ndarray]:
        """第二層只保留 y_l1 = 1 的樣本，目標為原始標籤"""
        y_l1, _ = cls.derive_layer1_targets(groups)
        l2_index = np.flatnonzero(y_l1 == 1)
        return l2_index, dataset.labels[l2_index].copy()

    @classmethod
    def derive_layer_targets(cls, dataset: Dataset, groups: GroupAssignment) -> LayerTargets:
        y_l1, _ = cls.derive_layer1_targets(groups)
        l2_index, y_l2 = cls.derive_layer2_targets(dataset, groups)
        return LayerTargets(y_l1=y_l1, l2_index=l2_index, y_l2=y_l2)

    @classmethod
    def classify_degenerate(cls, groups: GroupAssignment) -> DegeneracyKind:
        """退化判定，優先順序 EmptyCmaj > EmptyCmix > EmptyCmin"""
        n_maj, n_min, n_mix = groups.counts
        if n_maj == 0:
            return DegeneracyKind.EMPTY_CMAJ
        if n_mix == 0:
            return DegeneracyKind.EMPTY_CMIX
        if n_min == 0:
            return DegeneracyKind.EMPTY_CMIN
        return DegeneracyKind.NONE

    @classmethod
    def remediate_empty_majority(
        cls, dataset: Dataset, tree: LinkageTree, cut: CutParameters
    ) -> Tuple[Optional[GroupAssignment], Optional[float]]:
        """C_maj 為空時以 σ/2 為步長降低 τ 重新切割

        τ 降到最小對數高度以下仍找不到純多數群組時回傳 (None, None)。
        """
        heights = tree.heights
        positive = heights[heights > 0]
        min_log = float(np.log(positive.min()))
        step = cut.sigma / 2.0
        tau = cut.tau
        while tau >= min_log:
            # σ = 0 時所有對數高度相同，直接切到最小高度以下
            tau = tau - step if step > 0 else min_log - 1.0
            groups = cls.assign_groups(dataset, ClusterService.form_clusters(tree, tau))
            if groups.counts[0] > 0:
                logger.info("C_maj 補救成功: τ=%.4f, 群組數量=%s", tau, groups.counts)
                return groups, tau
        logger.warning("C_maj 補救失敗，退回單一模型")
        return None, None

    @classmethod
    def export_groups_csv(cls, dataset: Dataset, groups: GroupAssignment) -> str:
        """稽核用 CSV：index,cluster,group,label"""
        frame = pd.DataFrame({
            "index": np.arange(dataset.n_samples),
            "cluster": groups.cluster_of,
            "group": [groups.group_name(i) for i in range(dataset.n_samples)],
            "label": dataset.labels,
        })
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False)
        return buffer.getvalue()
