from pathlib import Path
from typing import List, Optional

import typer

from icll.commands.common import build_config, console, runtime_errors
from icll.config import settings
from icll.models.method import ComparisonMethod
from icll.schemas.benchmark import BenchmarkConfig
from icll.services.benchmark_service import BenchmarkService
from icll.services.dataset_service import DEFAULT_LABEL_COLUMN, DatasetService


def benchmark(
    data_dir: Optional[Path] = typer.Option(
        None, "--data-dir", exists=True, file_okay=False, help="資料檔目錄（.dat / .csv）"
    ),
    datasets: Optional[List[Path]] = typer.Option(None, "--dataset", "-d", help="個別資料檔，可重複"),
    methods: Optional[List[ComparisonMethod]] = typer.Option(
        None, "--method", "-m", help="比較方法，可重複（預設全部）"
    ),
    seed: int = typer.Option(settings.RANDOM_SEED, "--seed"),
    folds: int = typer.Option(settings.CV_FOLDS, "--folds"),
    repeats: int = typer.Option(settings.CV_REPEATS, "--repeats"),
    rope: float = typer.Option(settings.ROPE_PERCENT, "--rope", help="ROPE 寬度（百分比）"),
    difficulty_cutoff: float = typer.Option(settings.DIFFICULTY_CUTOFF, "--difficulty-cutoff"),
    reference: ComparisonMethod = typer.Option(ComparisonMethod(settings.REFERENCE_METHOD), "--reference"),
    baseline: ComparisonMethod = typer.Option(ComparisonMethod(settings.BASELINE_METHOD), "--baseline"),
    n_trees: int = typer.Option(settings.N_TREES, "--n-trees"),
    n_jobs: int = typer.Option(settings.N_JOBS, "--n-jobs", help="平行執行的格子數"),
    output_dir: Path = typer.Option(Path(settings.OUTPUT_DIR), "--output-dir", "-o"),
    scale: bool = typer.Option(settings.SCALE_FEATURES, "--scale/--no-scale"),
    exclude_degenerate: bool = typer.Option(
        False, "--exclude-degenerate", help="分析時排除混合群組為空的資料集"
    ),
    label_column: str = typer.Option(DEFAULT_LABEL_COLUMN, "--label-column"),
):
    """執行完整的交叉驗證基準實驗並寫出報表"""
    paths = list(datasets or [])
    if data_dir is not None:
        paths.extend(DatasetService.discover(data_dir))
    if not paths:
        raise typer.BadParameter("需要 --data-dir 或至少一個 --dataset")

    config = build_config(
        BenchmarkConfig,
        datasets=paths,
        methods=methods or list(ComparisonMethod),
        seed=seed,
        folds=folds,
        repeats=repeats,
        rope_percent=rope,
        difficulty_cutoff=difficulty_cutoff,
        reference_method=reference,
        baseline_method=baseline,
        n_trees=n_trees,
        n_jobs=n_jobs,
        output_dir=output_dir,
        scale=scale,
        exclude_degenerate=exclude_degenerate,
        label_column=label_column,
    )
    with runtime_errors():
        report = BenchmarkService.run(config)
    console.print(BenchmarkService.summary_text(report), highlight=False, markup=False)
    console.print(f"results: {config.output_dir}")
