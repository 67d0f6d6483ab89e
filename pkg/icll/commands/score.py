from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
import typer

from icll.commands.common import console, runtime_errors
from icll.exceptions import ModelFileError
from icll.services.dataset_service import DEFAULT_LABEL_COLUMN, DatasetService
from icll.services.evaluation_service import EvaluationService
from icll.services.method_service import MethodService
from icll.services.storage_service import StorageService


def score(
    model_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="模型檔（fit 的輸出）"),
    dataset_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="要評分的資料檔"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="分數 CSV（index,score,prediction）"),
    threshold: float = typer.Option(0.5, "--threshold", min=0.0, max=1.0, help="分類門檻"),
    label_column: str = typer.Option(DEFAULT_LABEL_COLUMN, "--label-column", help="CSV 標籤欄"),
):
    """以已儲存的模型評分資料集"""
    with runtime_errors():
        saved = StorageService.load_model(model_path)
        dataset = DatasetService.load(dataset_path, label_column=label_column)
        if list(dataset.feature_names) != list(saved.feature_names):
            raise ModelFileError("資料集的特徵與模型不符")

        features = dataset.features
        if saved.scaler is not None:
            features = saved.scaler.transform(features)
        scores = MethodService.score(StorageService.fitted_from_saved(saved), features)
        predictions = (scores >= threshold).astype(np.int64)

        if output is not None:
            output.parent.mkdir(parents=True, exist_ok=True)
            frame = pd.DataFrame({
                "index": np.arange(scores.size),
                "score": scores,
                "prediction": predictions,
            })
            output.write_text(frame.to_csv(index=False, float_format="%.17g"), encoding="utf-8")
            console.print(f"scores: {output}")

        console.print(
            f"{saved.method} on {dataset.name}: {scores.size} rows, "
            f"{int(predictions.sum())} predicted minority"
        )
        if dataset.class_names == saved.class_names:
            console.print(f"AUC: {EvaluationService.auc(scores, dataset.labels):.4f}")
