from pathlib import Path

import typer
from rich.table import Table

from icll.commands.common import console, runtime_errors
from icll.services.benchmark_service import BenchmarkService
from icll.services.dataset_service import DEFAULT_LABEL_COLUMN, DatasetService


def inspect(
    dataset_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="資料檔（.dat / .csv）"),
    label_column: str = typer.Option(DEFAULT_LABEL_COLUMN, "--label-column"),
    as_json: bool = typer.Option(False, "--json", help="以 JSON 輸出"),
):
    """顯示資料集特性：大小、不平衡比、群組結構與退化情形"""
    with runtime_errors():
        dataset = DatasetService.load(dataset_path, label_column=label_column)
        profile = BenchmarkService.profile_dataset(dataset)

    if as_json:
        typer.echo(profile.model_dump_json(indent=2))
        return

    table = Table(title=f"{profile.dataset} ({dataset.class_names[1]} = minority)")
    table.add_column("property")
    table.add_column("value", justify="right")
    for key, value in profile.model_dump(exclude={"dataset"}).items():
        if isinstance(value, float):
            text = f"{value:.4f}"
        else:
            text = str(getattr(value, "value", value))
        table.add_row(key, text)
    console.print(table)
    console.print(profile.degeneracy.description)
