import json
from pathlib import Path
from typing import Optional

import typer

from icll.commands.common import build_config, console, runtime_errors
from icll.config import settings
from icll.models.evaluation import ScoreTable
from icll.models.method import ComparisonMethod
from icll.schemas.benchmark import AnalysisConfig, DatasetFailure
from icll.services.benchmark_service import BenchmarkService


def report(
    scores_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="scores.csv"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o", help="預設為 scores.csv 所在目錄"),
    profiles_path: Optional[Path] = typer.Option(None, "--profiles", help="profiles.csv（預設同目錄）"),
    folds: int = typer.Option(settings.CV_FOLDS, "--folds"),
    repeats: int = typer.Option(settings.CV_REPEATS, "--repeats"),
    rope: float = typer.Option(settings.ROPE_PERCENT, "--rope"),
    difficulty_cutoff: float = typer.Option(settings.DIFFICULTY_CUTOFF, "--difficulty-cutoff"),
    reference: ComparisonMethod = typer.Option(ComparisonMethod(settings.REFERENCE_METHOD), "--reference"),
    baseline: ComparisonMethod = typer.Option(ComparisonMethod(settings.BASELINE_METHOD), "--baseline"),
    exclude_degenerate: bool = typer.Option(False, "--exclude-degenerate"),
):
    """由既有分數表重新產生彙總報表（不重新訓練）"""
    config = build_config(
        AnalysisConfig,
        output_dir=output_dir or scores_path.parent,
        folds=folds,
        repeats=repeats,
        rope_percent=rope,
        difficulty_cutoff=difficulty_cutoff,
        reference_method=reference,
        baseline_method=baseline,
        exclude_degenerate=exclude_degenerate,
    )
    with runtime_errors():
        table = ScoreTable.from_csv(scores_path.read_text(encoding="utf-8"))
        profiles_path = profiles_path or scores_path.parent / "profiles.csv"
        profiles = BenchmarkService.load_profiles(profiles_path) if profiles_path.is_file() else None
        failures_path = scores_path.parent / "failures.json"
        failures = (
            [DatasetFailure(**item) for item in json.loads(failures_path.read_text(encoding="utf-8"))]
            if failures_path.is_file() else []
        )
        summary = BenchmarkService.aggregate(table, config, profiles, failures)
    console.print(BenchmarkService.summary_text(summary), highlight=False, markup=False)
    console.print(f"results: {config.output_dir}")
