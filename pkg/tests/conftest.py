"""
測試配置和共用 fixtures
"""
import os
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from icll.models.dataset import Dataset
from icll.services.dataset_service import DatasetService


DATA_DIR = Path(__file__).parent / "data"

# 完整 KEEL 資料集的目錄（整合測試才需要）
KEEL_DATA_DIR = os.environ.get("KEEL_DATA_DIR")


def _two_class_dataset(
    name: str,
    n_majority: int,
    n_minority: int,
    minority_center: float,
    spread: float,
    seed: int,
) -> Dataset:
    rng = np.random.default_rng(seed)
    majority = rng.normal(0.0, spread, size=(n_majority, 2))
    minority = rng.normal(minority_center, spread, size=(n_minority, 2))
    return Dataset(
        name=name,
        features=np.vstack([majority, minority]),
        labels=np.concatenate([np.zeros(n_majority), np.ones(n_minority)]).astype(np.int64),
        feature_names=["x1", "x2"],
        class_names=("negative", "positive"),
    )


@pytest.fixture
def data_dir() -> Path:
    """測試用的小型 KEEL 檔目錄"""
    return DATA_DIR


@pytest.fixture
def blob_dataset() -> Dataset:
    """
    兩個分得很開的群：30 筆多數類別、8 筆少數類別
    分群後每群都是純的，混合群組為空
    """
    return _two_class_dataset("blobs", 30, 8, minority_center=8.0, spread=0.5, seed=11)


@pytest.fixture
def overlap_dataset() -> Dataset:
    """兩類別大幅重疊的資料：60 筆多數類別、12 筆少數類別"""
    return _two_class_dataset("overlap", 60, 12, minority_center=1.0, spread=1.0, seed=7)


@pytest.fixture
def blob_file(tmp_path, blob_dataset) -> Path:
    """blob_dataset 寫成 CSV"""
    path = tmp_path / "blobs.csv"
    path.write_text(DatasetService.serialize_csv(blob_dataset), encoding="utf-8")
    return path


@pytest.fixture
def overlap_file(tmp_path, overlap_dataset) -> Path:
    """overlap_dataset 寫成 CSV"""
    path = tmp_path / "overlap.csv"
    path.write_text(DatasetService.serialize_csv(overlap_dataset), encoding="utf-8")
    return path


@pytest.fixture
def keel_data_dir() -> Path:
    """完整 KEEL 資料集目錄；未設定 KEEL_DATA_DIR 時略過"""
    if not KEEL_DATA_DIR:
        pytest.skip("未設定 KEEL_DATA_DIR")
    return Path(KEEL_DATA_DIR)


@pytest.fixture
def runner() -> CliRunner:
    """命令列測試用的 runner"""
    return CliRunner()
