from datetime import datetime
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from icll.config import settings
from icll.models.evaluation import ComparisonSummary
from icll.models.layering import DegeneracyKind
from icll.models.method import ComparisonMethod
from icll.utils.helpers import utc_now


class AnalysisConfig(BaseModel):
    """彙總分析設定（report 指令只需要這部分）"""
    output_dir: Path = Path(settings.OUTPUT_DIR)
    repeats: int = Field(default=settings.CV_REPEATS, ge=1)
    folds: int = Field(default=settings.CV_FOLDS, ge=2)
    rope_percent: float = Field(default=settings.ROPE_PERCENT, ge=0.0)
    difficulty_cutoff: float = Field(default=settings.DIFFICULTY_CUTOFF, gt=0.0)
    reference_method: ComparisonMethod = ComparisonMethod(settings.REFERENCE_METHOD)
    baseline_method: ComparisonMethod = ComparisonMethod(settings.BASELINE_METHOD)
    exclude_degenerate: bool = Field(default=False, description="分析時排除 C_mix 為空的資料集")


class BenchmarkConfig(AnalysisConfig):
    """基準實驗設定"""
    datasets: List[Path] = Field(..., min_length=1, description="資料檔路徑")
    methods: List[ComparisonMethod] = Field(
        default_factory=lambda: list(ComparisonMethod), min_length=1, description="要比較的方法"
    )
    seed: int = settings.RANDOM_SEED
    n_trees: int = Field(default=settings.N_TREES, ge=1)
    n_jobs: int = Field(default=settings.N_JOBS, description="平行執行的格子數")
    scale: bool = Field(default=settings.SCALE_FEATURES, description="以訓練折擬合 min-max 縮放")
    label_column: str = "class"

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "datasets": ["data/glass1.dat", "data/yeast4.dat"],
                "methods": ["ICLL+SMOTE(L2)", "NoResample-RF", "SMOTE"],
                "repeats": 2,
                "folds": 5,
                "seed": 0,
                "output_dir": "results",
            }
        }
    )

    @field_validator("datasets")
    @classmethod
    def _validate_datasets(cls, value: List[Path]) -> List[Path]:
        missing = [str(path) for path in value if not Path(path).is_file()]
        if missing:
            raise ValueError(f"找不到資料檔: {missing}")
        return value

    @field_validator("methods")
    @classmethod
    def _deduplicate(cls, value: List[ComparisonMethod]) -> List[ComparisonMethod]:
        return list(dict.fromkeys(value))

    @model_validator(mode="after")
    def _validate_reference(self) -> "BenchmarkConfig":
        if self.reference_method not in self.methods:
            raise ValueError(f"參考方法 {self.reference_method.value} 必須在方法清單中")
        return self


class DatasetFailure(BaseModel):
    """單一資料集失敗紀錄"""
    dataset: str
    stage: str = Field(..., description="load / profile / folds / fit")
    error: str


class DatasetProfile(BaseModel):
    """資料集特性：大小、不平衡比與全資料分群的群組結構"""
    dataset: str
    n_samples: int
    n_features: int
    n_majority: int
    n_minority: int
    imbalance_ratio: float
    n_clusters: int
    tau: float
    n_pure_majority: int
    n_pure_minority: int
    n_mixed: int
    degeneracy: DegeneracyKind
    l1_imbalance_ratio: float = Field(..., description="第一層任務的不平衡比（缺一類時為 inf）")


class BenchmarkReport(BaseModel):
    """彙總結果（summary.json）"""
    run_id: str
    n_rows: int = Field(..., description="分數表列數")
    methods: List[str] = Field(..., description="依百分比差異中位數遞減排序")
    datasets: List[str] = Field(..., description="納入分析的資料集")
    excluded: List[str] = Field(default_factory=list, description="因 C_mix 為空而排除的資料集")
    failures: List[DatasetFailure] = Field(default_factory=list)
    summary: ComparisonSummary
    difficult_datasets: List[str] = Field(default_factory=list)
    difficult: Optional[ComparisonSummary] = None
    created_at: datetime = Field(default_factory=utc_now)
