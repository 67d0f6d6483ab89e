import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from icll.exceptions import DegenerateCutError
from icll.models.clustering import (
    CutParameters,
    DistanceMatrix,
    FlatClustering,
    LinkageTree,
    MergeRecord,
)

logger = logging.getLogger(__name__)


class ClusterService:
    """階層式分群：歐氏距離、Ward 連結、對數 μ+σ 自動切割"""

    @classmethod
    def pairwise_euclidean(cls, features: np.ndarray) -> DistanceMatrix:
        """成對歐氏距離（condensed 形式）"""
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] < 2:
            raise ValueError("至少需要 2 筆樣本的二維特徵矩陣")
        if not np.all(np.isfinite(features)):
            raise ValueError("特徵含有非有限數值")
        return DistanceMatrix(n=features.shape[0], values=pdist(features, metric="euclidean"))

    @classmethod
    def ward_linkage(cls, dist: DistanceMatrix) -> LinkageTree:
        """Lance–Williams 遞迴的 Ward 連結

        兩個單點合併的高度等於其歐氏距離；距離相同時取 (i, j) 字典序最小的一對。
        以平方距離運算，每列維護往右側的最近鄰以避免每步掃描整個矩陣。
        """
        n = dist.n
        d2 = dist.square() ** 2
        np.fill_diagonal(d2, np.inf)
        active = np.ones(n, dtype=bool)
        sizes = np.ones(n, dtype=np.float64)
        node_id = np.arange(n, dtype=np.int64)

        # nn_value[i] / nn_index[i]：在 j > i 的活躍槽位中與 i 最近者
        nn_value = np.full(n, np.inf)
        nn_index = np.full(n, -1, dtype=np.int64)
        for i in range(n - 1):
            cls._refresh_neighbor(d2, active, i, nn_value, nn_index)

        merges: List[MergeRecord] = []
        for step in range(n - 1):
            i = int(np.argmin(nn_value))
            j = int(nn_index[i])
            squared = d2[i, j]
            size_i, size_j = sizes[i], sizes[j]

            left, right = sorted((int(node_id[i]), int(node_id[j])))
            merges.append(
                MergeRecord(
                    left=left,
                    right=right,
                    height=float(np.sqrt(max(squared, 0.0))),
                    size=int(size_i + size_j),
                )
            )

            # Lance–Williams 更新，合併後的群放在槽位 i
            others = active.copy()
            others[[i, j]] = False
            size_k = sizes[others]
            total = size_i + size_j + size_k
            updated = (
                (size_i + size_k) * d2[i, others]
                + (size_j + size_k) * d2[j, others]
                - size_k * squared
            ) / total
            updated = np.maximum(updated, 0.0)
            d2[i, others] = updated
            d2[others, i] = updated

            active[j] = False
            d2[j, :] = np.inf
            d2[:, j] = np.inf
            nn_value[j] = np.inf
            nn_index[j] = -1
            sizes[i] = size_i + size_j
            node_id[i] = n + step

            if step == n - 2:
                break
            cls._refresh_neighbors_after_merge(d2, active, i, j, nn_value, nn_index)

        return LinkageTree(n=n, merges=merges)

    @classmethod
    def _refresh_neighbor(
        cls, d2: np.ndarray, active: np.ndarray, i: int,
        nn_value: np.ndarray, nn_index: np.ndarray,
    ) -> None:
        """重新計算槽位 i 往右的最近鄰（同距離取最小索引）"""
        row = d2[i, i + 1:]
        if row.size == 0 or not active[i]:
            nn_value[i] = np.inf
            nn_index[i] = -1
            return
        offset = int(np.argmin(row))
        nn_value[i] = row[offset]
        nn_index[i] = i + 1 + offset if np.isfinite(row[offset]) else -1

    @classmethod
    def _refresh_neighbors_after_merge(
        cls, d2: np.ndarray, active: np.ndarray, i: int, j: int,
        nn_value: np.ndarray, nn_index: np.ndarray,
    ) -> None:
        # 最近鄰指向 i 或 j 的列必須重算
        stale = np.flatnonzero(active & ((nn_index == i) | (nn_index == j)))
        for k in stale:
            cls._refresh_neighbor(d2, active, int(k), nn_value, nn_index)
        cls._refresh_neighbor(d2, active, i, nn_value, nn_index)

        # i 左側的列：新距離可能成為更近（或同距離但索引更小）的鄰居
        left = np.flatnonzero(active[:i])
        if left.size:
            candidate = d2[left, i]
            better = (candidate < nn_value[left]) | (
                (candidate == nn_value[left]) & (i < nn_index[left])
            )
            nn_value[left[better]] = candidate[better]
            nn_index[left[better]] = i

    @classmethod
    def cut_parameters(cls, tree: LinkageTree) -> CutParameters:
        """對數合併高度的 μ、母體標準差 σ 與 τ = μ + σ（0 高度不計入）"""
        heights = tree.heights
        positive = heights[heights > 0]
        if positive.size == 0:
            raise DegenerateCutError("所有合併高度皆為 0（資料完全重複），無法決定切割門檻")
        logs = np.log(positive)
        mu = float(np.mean(logs))
        sigma = float(np.std(logs))
        return CutParameters(mu=mu, sigma=sigma, tau=mu + sigma)

    @classmethod
    def form_clusters(cls, tree: LinkageTree, tau: float) -> FlatClustering:
        """每個樣本歸入包含它且合併高度滿足 log(h) ≤ τ 的最大子樹"""
        n = tree.n
        heights = tree.heights
        with np.errstate(divide="ignore"):
            qualifies = np.log(heights) <= tau  # log(0) = -inf，重複點必同群

        # 由根往下傳遞：root_of[node] 為該節點所屬的最大合格子樹
        root_of = np.full(2 * n - 1, -1, dtype=np.int64)
        for step in range(n - 2, -1, -1):
            node = n + step
            if root_of[node] < 0 and qualifies[step]:
                root_of[node] = node
            record = tree.merges[step]
            for child in (record.left, record.right):
                if root_of[node] >= 0:
                    root_of[child] = root_of[node]

        cluster_of = np.empty(n, dtype=np.int64)
        relabel = {}
        for leaf in range(n):
            key = int(root_of[leaf]) if root_of[leaf] >= 0 else -(leaf + 1)
            if key not in relabel:
                relabel[key] = len(relabel)
            cluster_of[leaf] = relabel[key]
        return FlatClustering(cluster_of=cluster_of, k=len(relabel))

    @classmethod
    def cluster_with_tree(
        cls, features: np.ndarray
    ) -> Tuple[LinkageTree, CutParameters, FlatClustering]:
        """完整的分群流程，同時回傳連結樹與切割參數"""
        tree = cls.ward_linkage(cls.pairwise_euclidean(features))
        cut = cls.cut_parameters(tree)
        clustering = cls.form_clusters(tree, cut.tau)
        logger.debug(
            "分群完成: n=%d, τ=%.4f, k=%d", tree.n, cut.tau, clustering.k
        )
        return tree, cut, clustering

    @classmethod
    def cluster(cls, features: np.ndarray) -> FlatClustering:
        """距離 → Ward 連結 → 切割參數 → 扁平分群"""
        return cls.cluster_with_tree(features)[2]

    @classmethod
    def export_dendrogram(cls, tree: LinkageTree, path: Optional[str] = None) -> str:
        """每次合併一行：left right height size"""
        lines = [
            f"{record.left} {record.right} {record.height!r} {record.size}"
            for record in tree.merges
        ]
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(text)
        return text
