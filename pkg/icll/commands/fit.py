from pathlib import Path
from typing import Optional

import typer
from rich.table import Table
from sklearn.preprocessing import MinMaxScaler

from icll.commands.common import console, runtime_errors
from icll.config import settings
from icll.models.layering import GroupAssignment
from icll.models.method import ComparisonMethod
from icll.schemas.model_file import ScalerPayload
from icll.services.cluster_service import ClusterService
from icll.services.dataset_service import DEFAULT_LABEL_COLUMN, DatasetService
from icll.services.layering_service import LayeringService
from icll.services.method_service import MethodService
from icll.services.storage_service import StorageService


def _group_table(groups: GroupAssignment) -> Table:
    table = Table(title="Groups")
    table.add_column("group")
    table.add_column("instances", justify="right")
    for name, count in zip(("pure_majority", "pure_minority", "mixed"), groups.counts):
        table.add_row(name, str(count))
    return table


def fit(
    dataset_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="資料檔（.dat / .csv）"),
    method: ComparisonMethod = typer.Option(
        ComparisonMethod(settings.REFERENCE_METHOD), "--method", "-m", help="比較方法"
    ),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="模型檔路徑（預設存到 MODEL_DIR）"),
    seed: int = typer.Option(settings.RANDOM_SEED, "--seed", help="隨機種子"),
    n_trees: int = typer.Option(settings.N_TREES, "--n-trees", min=1, help="森林的樹數"),
    n_jobs: int = typer.Option(settings.N_JOBS, "--n-jobs", help="平行工作數"),
    label_column: str = typer.Option(DEFAULT_LABEL_COLUMN, "--label-column", help="CSV 標籤欄"),
    scale: bool = typer.Option(settings.SCALE_FEATURES, "--scale/--no-scale", help="min-max 縮放特徵"),
    dendrogram: Optional[Path] = typer.Option(None, "--dendrogram", help="輸出連結樹（left right height size）"),
    groups_csv: Optional[Path] = typer.Option(None, "--groups-csv", help="輸出群組指派 CSV"),
):
    """訓練單一模型並儲存"""
    with runtime_errors():
        dataset = DatasetService.load(dataset_path, label_column=label_column)
        scaler = None
        if scale:
            fitted_scaler = MinMaxScaler().fit(dataset.features)
            scaler = ScalerPayload(
                scale=fitted_scaler.scale_.tolist(), offset=fitted_scaler.min_.tolist()
            )
            dataset = dataset.with_arrays(scaler.transform(dataset.features), dataset.labels)

        fitted = MethodService.fit(method, dataset, seed=seed, n_trees=n_trees, n_jobs=n_jobs)
        summary = DatasetService.summarize(dataset)
        console.print(
            f"{dataset.name}: n={dataset.n_samples}, p={dataset.n_features}, "
            f"imbalance ratio={summary.imbalance_ratio:.3f}"
        )

        if fitted.icll is not None:
            groups = fitted.icll.groups
            console.print(_group_table(groups))
            console.print(f"degeneracy: {fitted.icll.degeneracy.description}")
            if fitted.icll.remediated_tau is not None:
                console.print(f"τ lowered to {fitted.icll.remediated_tau:.4f}")
            if fitted.icll.single_model_fallback:
                console.print("fallback: single model on the original task")
        elif groups_csv is not None:
            groups = LayeringService.assign_groups(dataset, ClusterService.cluster(dataset.features))

        if dendrogram is not None:
            tree, _, _ = ClusterService.cluster_with_tree(dataset.features)
            ClusterService.export_dendrogram(tree, str(dendrogram))
            console.print(f"dendrogram: {dendrogram}")
        if groups_csv is not None:
            groups_csv.parent.mkdir(parents=True, exist_ok=True)
            groups_csv.write_text(LayeringService.export_groups_csv(dataset, groups), encoding="utf-8")
            console.print(f"groups: {groups_csv}")

        path = StorageService.save_model(
            StorageService.to_saved_model(fitted, dataset, scaler), output
        )
        console.print(f"model saved: {path}")
