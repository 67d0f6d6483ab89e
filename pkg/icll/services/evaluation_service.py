import logging
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.stats import rankdata

from icll.exceptions import IncompleteGridError, InsufficientMinorityError, UndefinedAUCError
from icll.models.dataset import Dataset
from icll.models.evaluation import ComparisonSummary, FoldPlan, RopeOutcome, ScoreTable
from icll.utils.helpers import derive_seed

logger = logging.getLogger(__name__)


class EvaluationService:
    """交叉驗證、AUC 與方法比較分析"""

    @classmethod
    def stratified_kfold(
        cls, dataset: Dataset, repeats: int = 2, folds: int = 5, seed: int = 0
    ) -> FoldPlan:
        """重複分層 k 折：每個類別洗牌後依序輪流分配到各折"""
        n_minority = int(dataset.labels.sum())
        if n_minority < folds:
            raise InsufficientMinorityError(dataset.name, n_minority, folds)

        assignments = np.empty((repeats, dataset.n_samples), dtype=np.int64)
        for repeat in range(repeats):
            rng = np.random.default_rng(derive_seed(seed, repeat))
            for label in (0, 1):
                members = np.flatnonzero(dataset.labels == label)
                shuffled = members[rng.permutation(members.size)]
                assignments[repeat, shuffled] = np.arange(members.size) % folds
        logger.debug("%s: %d 次重複 × %d 折", dataset.name, repeats, folds)
        return FoldPlan(repeats=repeats, folds=folds, seed=seed, assignments=assignments)

    @classmethod
    def auc(cls, scores: np.ndarray, labels: np.ndarray) -> float:
        """Mann–Whitney AUC：正例分數高於負例的比例，同分計 0.5"""
        scores = np.asarray(scores, dtype=np.float64)
        labels = np.asarray(labels)
        if scores.shape != labels.shape:
            raise ValueError("scores 與 labels 長度不符")
        n_positive = int(np.sum(labels == 1))
        n_negative = labels.size - n_positive
        if n_positive == 0 or n_negative == 0:
            raise UndefinedAUCError("標籤只有單一類別，AUC 無定義")
        ranks = rankdata(scores, method="average")
        rank_sum = float(ranks[labels == 1].sum())
        return (rank_sum - n_positive * (n_positive + 1) / 2.0) / (n_positive * n_negative)

    @classmethod
    def missing_cells(
        cls, table: ScoreTable, repeats: Optional[int] = None, folds: Optional[int] = None
    ) -> List[tuple]:
        """完整網格（資料集 × 方法 × 重複 × 折）中缺少的格子"""
        frame = table.frame
        if frame.empty:
            return []
        repeats = repeats or int(frame["repeat"].max()) + 1
        folds = folds or int(frame["fold"].max()) + 1
        grid = pd.MultiIndex.from_product(
            [table.datasets, table.methods, range(repeats), range(folds)],
            names=["dataset", "method", "repeat", "fold"],
        )
        present = pd.MultiIndex.from_frame(frame[["dataset", "method", "repeat", "fold"]])
        return [tuple(cell) for cell in grid.difference(present)]

    @classmethod
    def check_complete(
        cls, table: ScoreTable, repeats: Optional[int] = None, folds: Optional[int] = None
    ) -> None:
        if table.frame.empty:
            raise IncompleteGridError([])
        missing = cls.missing_cells(table, repeats, folds)
        if missing:
            raise IncompleteGridError(missing)

    @classmethod
    def rank_table(cls, table: ScoreTable) -> pd.DataFrame:
        """每個資料集內依平均 AUC 排名（最佳為 1，同分取平均名次）"""
        return table.mean_auc().rank(axis=1, ascending=False, method="average")

    @classmethod
    def average_rank(cls, table: ScoreTable) -> pd.Series:
        return cls.rank_table(table).mean(axis=0).sort_values(kind="mergesort")

    @classmethod
    def pct_diff(cls, table: ScoreTable, reference_method: str) -> pd.DataFrame:
        """100 × (AUC_m − AUC_ref) / AUC_ref；負值表示參考方法較佳"""
        means = table.mean_auc()
        if reference_method not in means.columns:
            raise ValueError(f"分數表中沒有參考方法 '{reference_method}'")
        reference = means[reference_method]
        if (reference <= 0.0).any():
            raise ValueError(f"參考方法 '{reference_method}' 在某些資料集的 AUC 為 0")
        return means.sub(reference, axis=0).div(reference, axis=0) * 100.0

    @classmethod
    def log_pct_diff(cls, diffs: pd.DataFrame) -> pd.DataFrame:
        """繪圖用的對數尺度：sign(d) · log1p(|d|)"""
        return np.sign(diffs) * np.log1p(diffs.abs())

    @classmethod
    def rope_outcome(cls, diffs: np.ndarray, rope: float = 1.0) -> RopeOutcome:
        """以參考方法的角度：d < −rope 為勝、|d| ≤ rope 為平、d > rope 為負"""
        diffs = np.asarray(diffs, dtype=np.float64)
        if diffs.size == 0:
            raise ValueError("沒有可比較的百分比差異")
        win = float(np.mean(diffs < -rope))
        loss = float(np.mean(diffs > rope))
        return RopeOutcome(win=win, draw=1.0 - win - loss, loss=loss)

    @classmethod
    def rope_outcomes(
        cls, diffs: pd.DataFrame, reference_method: str, rope: float = 1.0
    ) -> Dict[str, RopeOutcome]:
        return {
            method: cls.rope_outcome(diffs[method].to_numpy(), rope)
            for method in diffs.columns
            if method != reference_method
        }

    @classmethod
    def filter_difficult(
        cls, table: ScoreTable, baseline_method: str, cutoff: float = 0.9
    ) -> List[str]:
        """基準方法平均 AUC 低於 cutoff 的資料集"""
        means = table.mean_auc()
        if baseline_method not in means.columns:
            raise ValueError(f"分數表中沒有基準方法 '{baseline_method}'")
        return sorted(means.index[means[baseline_method] < cutoff])

    @classmethod
    def method_order(cls, diffs: pd.DataFrame) -> List[str]:
        """依百分比差異中位數遞減排序（同值依名稱）"""
        medians = diffs.median(axis=0)
        return sorted(medians.index, key=lambda method: (-medians[method], method))

    @classmethod
    def compare(
        cls, table: ScoreTable, reference_method: str, rope: float = 1.0
    ) -> ComparisonSummary:
        """平均排名、百分比差異與 ROPE 勝 / 平 / 負"""
        diffs = cls.pct_diff(table, reference_method)
        return ComparisonSummary(
            reference_method=reference_method,
            datasets=list(diffs.index),
            avg_rank={method: float(value) for method, value in cls.average_rank(table).items()},
            pct_diff={
                dataset: {method: float(value) for method, value in row.items()}
                for dataset, row in diffs.iterrows()
            },
            rope_percent=rope,
            rope=cls.rope_outcomes(diffs, reference_method, rope),
        )
