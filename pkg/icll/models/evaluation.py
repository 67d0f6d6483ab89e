import io
from typing import Dict, List

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FoldPlan(BaseModel):
    """重複分層 k 折交叉驗證的折指派"""

    repeats: int = Field(default=2, ge=1)
    folds: int = Field(default=5, ge=2)
    seed: int = 0
    assignments: np.ndarray = Field(..., description="repeats×n 的折編號")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("assignments", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.int64, copy=True)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _validate_shape(self) -> "FoldPlan":
        if self.assignments.ndim != 2 or self.assignments.shape[0] != self.repeats:
            raise ValueError("assignments 形狀必須是 repeats×n")
        if self.assignments.size and (
            self.assignments.min() < 0 or self.assignments.max() >= self.folds
        ):
            raise ValueError("折編號超出範圍")
        return self

    def split(self, repeat: int, fold: int):
        """回傳 (訓練索引, 測試索引)"""
        row = self.assignments[repeat]
        return np.flatnonzero(row != fold), np.flatnonzero(row == fold)


class RopeOutcome(BaseModel):
    """參考方法相對某方法的勝 / 平 / 負比例"""

    win: float = Field(..., ge=0.0, le=1.0)
    draw: float = Field(..., ge=0.0, le=1.0)
    loss: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _validate_total(self) -> "RopeOutcome":
        if abs(self.win + self.draw + self.loss - 1.0) > 1e-9:
            raise ValueError("win + draw + loss 必須等於 1")
        return self


class ComparisonSummary(BaseModel):
    """方法比較摘要"""

    reference_method: str
    datasets: List[str]
    avg_rank: Dict[str, float]
    pct_diff: Dict[str, Dict[str, float]] = Field(
        ..., description="dataset -> method -> 百分比差異"
    )
    rope_percent: float
    rope: Dict[str, RopeOutcome]


SCORE_COLUMNS = ["dataset", "method", "repeat", "fold", "auc"]


class ScoreTable(BaseModel):
    """每個 (資料集, 方法, 重複, 折) 的 AUC，列順序固定以便輸出可重現"""

    frame: pd.DataFrame = Field(..., description="欄位: dataset, method, repeat, fold, auc")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("frame", mode="before")
    @classmethod
    def _normalize(cls, value) -> pd.DataFrame:
        frame = pd.DataFrame(value)
        missing = [column for column in SCORE_COLUMNS if column not in frame.columns]
        if missing:
            raise ValueError(f"分數表缺少欄位: {missing}")
        frame = frame[SCORE_COLUMNS].astype(
            {"dataset": str, "method": str, "repeat": "int64", "fold": "int64", "auc": "float64"}
        )
        if ((frame["auc"] < 0.0) | (frame["auc"] > 1.0)).any():
            raise ValueError("AUC 必須介於 [0, 1]")
        if frame.duplicated(subset=SCORE_COLUMNS[:4]).any():
            raise ValueError("分數表有重複的格子")
        return frame.sort_values(SCORE_COLUMNS[:4], kind="mergesort").reset_index(drop=True)

    @classmethod
    def from_records(cls, records: List[dict]) -> "ScoreTable":
        return cls(frame=pd.DataFrame(records, columns=SCORE_COLUMNS))

    @classmethod
    def from_csv(cls, text: str) -> "ScoreTable":
        return cls(frame=pd.read_csv(io.StringIO(text), dtype={"dataset": str, "method": str}))

    def to_csv(self) -> str:
        return self.frame.to_csv(index=False, float_format="%.17g")

    @property
    def datasets(self) -> List[str]:
        return sorted(self.frame["dataset"].unique())

    @property
    def methods(self) -> List[str]:
        return sorted(self.frame["method"].unique())

    def restrict(self, datasets: List[str]) -> "ScoreTable":
        """只保留指定資料集"""
        return ScoreTable(frame=self.frame[self.frame["dataset"].isin(datasets)])

    def mean_auc(self) -> pd.DataFrame:
        """每個資料集、方法在所有折上的平均 AUC（列: dataset，欄: method）"""
        return self.frame.pivot_table(
            index="dataset", columns="method", values="auc", aggfunc="mean"
        ).sort_index(axis=0).sort_index(axis=1)
