import io
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from rich.console import Console
from rich.table import Table

from icll.models.dataset import Dataset
from icll.models.evaluation import ComparisonSummary, FoldPlan, ScoreTable
from icll.models.layering import DegeneracyKind
from icll.schemas.benchmark import (
    AnalysisConfig,
    BenchmarkConfig,
    BenchmarkReport,
    DatasetFailure,
    DatasetProfile,
)
from icll.services.cluster_service import ClusterService
from icll.services.dataset_service import DatasetService
from icll.services.evaluation_service import EvaluationService
from icll.services.layering_service import LayeringService
from icll.services.method_service import MethodService
from icll.services.storage_service import StorageService
from icll.utils.helpers import derive_seed, generate_run_id

logger = logging.getLogger(__name__)

DIFFICULT_DIR = "difficult"


class BenchmarkService:
    """基準實驗：資料集 × 方法 × 重複 × 折 的 AUC 網格與彙總分析"""

    @classmethod
    def profile_dataset(cls, dataset: Dataset) -> DatasetProfile:
        """全資料分群後的群組結構與第一層不平衡比"""
        summary = DatasetService.summarize(dataset)
        _, cut, clustering = ClusterService.cluster_with_tree(dataset.features)
        groups = LayeringService.assign_groups(dataset, clustering)
        _, l1_ratio = LayeringService.derive_layer1_targets(groups)
        n_maj, n_min, n_mix = groups.counts
        return DatasetProfile(
            dataset=dataset.name,
            n_samples=dataset.n_samples,
            n_features=dataset.n_features,
            n_majority=summary.n_majority,
            n_minority=summary.n_minority,
            imbalance_ratio=summary.imbalance_ratio,
            n_clusters=clustering.k,
            tau=cut.tau,
            n_pure_majority=n_maj,
            n_pure_minority=n_min,
            n_mixed=n_mix,
            degeneracy=LayeringService.classify_degenerate(groups),
            l1_imbalance_ratio=l1_ratio,
        )

    @classmethod
    def _run_cell(
        cls, dataset: Dataset, plan: FoldPlan, repeat: int, fold: int, config: BenchmarkConfig
    ) -> Tuple[List[dict], Optional[str]]:
        """單一 (重複, 折)：訓練並評分所有方法"""
        train_idx, test_idx = plan.split(repeat, fold)
        train, test = dataset.subset(train_idx), dataset.subset(test_idx)
        if config.scale:
            train, test = DatasetService.min_max_scale(train, test)
        seed = derive_seed(config.seed, repeat, fold)

        records = []
        for method in config.methods:
            try:
                fitted = MethodService.fit(method, train, seed=seed, n_trees=config.n_trees)
                auc = EvaluationService.auc(MethodService.score(fitted, test.features), test.labels)
            except ValueError as exc:
                return [], f"{method.value} (repeat={repeat}, fold={fold}): {exc}"
            records.append({
                "dataset": dataset.name,
                "method": method.value,
                "repeat": repeat,
                "fold": fold,
                "auc": auc,
            })
        return records, None

    @classmethod
    def _prepare(
        cls, config: BenchmarkConfig
    ) -> Tuple[Dict[str, Tuple[Dataset, FoldPlan]], List[DatasetProfile], List[DatasetFailure]]:
        """讀取資料集、計算特性與折指派；失敗的資料集記錄後略過"""
        prepared: Dict[str, Tuple[Dataset, FoldPlan]] = {}
        profiles: List[DatasetProfile] = []
        failures: List[DatasetFailure] = []
        for path in config.datasets:
            name = Path(path).stem
            stage = "load"
            try:
                dataset = DatasetService.load(path, label_column=config.label_column)
                name = dataset.name
                if name in prepared:
                    raise ValueError(f"資料集名稱重複: {name}")
                stage = "profile"
                profile = cls.profile_dataset(dataset)
                stage = "folds"
                plan = EvaluationService.stratified_kfold(
                    dataset, repeats=config.repeats, folds=config.folds, seed=config.seed
                )
            except (ValueError, OSError) as exc:
                logger.warning("略過資料集 %s（%s）: %s", name, stage, exc)
                failures.append(DatasetFailure(dataset=name, stage=stage, error=str(exc)))
                continue
            prepared[name] = (dataset, plan)
            profiles.append(profile)
        return prepared, profiles, failures

    @classmethod
    def run_grid(
        cls, config: BenchmarkConfig
    ) -> Tuple[ScoreTable, List[DatasetProfile], List[DatasetFailure]]:
        """執行完整網格；單一資料集的錯誤不會中止其他資料集"""
        prepared, profiles, failures = cls._prepare(config)
        cells = [
            (name, repeat, fold)
            for name in prepared
            for repeat in range(config.repeats)
            for fold in range(config.folds)
        ]
        logger.info(
            "開始基準實驗: %d 個資料集, %d 種方法, %d 格", len(prepared), len(config.methods), len(cells)
        )
        results = Parallel(n_jobs=config.n_jobs)(
            delayed(cls._run_cell)(*prepared[name], repeat, fold, config)
            for name, repeat, fold in cells
        )

        records: Dict[str, List[dict]] = {name: [] for name in prepared}
        errors: Dict[str, str] = {}
        for (name, _, _), (cell_records, error) in zip(cells, results):
            if error is not None:
                errors.setdefault(name, error)
            records[name].extend(cell_records)

        rows: List[dict] = []
        for name in prepared:
            if name in errors:
                logger.warning("資料集 %s 訓練失敗: %s", name, errors[name])
                failures.append(DatasetFailure(dataset=name, stage="fit", error=errors[name]))
                continue
            rows.extend(records[name])
        failed = {failure.dataset for failure in failures}
        profiles = [profile for profile in profiles if profile.dataset not in failed]
        return ScoreTable.from_records(rows), profiles, failures

    @classmethod
    def _analysis_tables(cls, table: ScoreTable, summary: ComparisonSummary) -> Dict[str, pd.DataFrame]:
        diffs = EvaluationService.pct_diff(table, summary.reference_method)
        order = EvaluationService.method_order(diffs)
        ranks = EvaluationService.average_rank(table)
        rope = pd.DataFrame(
            [{"method": method, **outcome.model_dump()} for method, outcome in summary.rope.items()]
        )
        if not rope.empty:
            rope = rope.set_index("method").loc[[m for m in order if m in summary.rope]]
        return {
            "mean_auc.csv": table.mean_auc()[order],
            "avg_rank.csv": ranks.rename("avg_rank").to_frame().rename_axis("method"),
            "pct_diff.csv": diffs[order],
            "log_pct_diff.csv": EvaluationService.log_pct_diff(diffs)[order],
            "rope.csv": rope,
        }

    @classmethod
    def _write_analysis(cls, directory: Path, table: ScoreTable, summary: ComparisonSummary) -> None:
        for filename, frame in cls._analysis_tables(table, summary).items():
            StorageService.write_frame(directory, filename, frame)

    @classmethod
    def aggregate(
        cls,
        table: ScoreTable,
        config: AnalysisConfig,
        profiles: Optional[List[DatasetProfile]] = None,
        failures: Optional[List[DatasetFailure]] = None,
    ) -> BenchmarkReport:
        """由分數表產生所有彙總檔案（benchmark 與 report 共用）"""
        EvaluationService.check_complete(table, config.repeats, config.folds)
        output_dir = Path(config.output_dir)

        excluded: List[str] = []
        if config.exclude_degenerate and profiles:
            excluded = sorted(
                profile.dataset for profile in profiles
                if profile.degeneracy == DegeneracyKind.EMPTY_CMIX
                and profile.dataset in table.datasets
            )
        analysed = table.restrict([name for name in table.datasets if name not in excluded])
        if analysed.frame.empty:
            raise ValueError("排除退化資料集後沒有可分析的資料集")

        reference = config.reference_method.value
        summary = EvaluationService.compare(analysed, reference, config.rope_percent)
        cls._write_analysis(output_dir, analysed, summary)

        difficult_datasets: List[str] = []
        difficult: Optional[ComparisonSummary] = None
        baseline = config.baseline_method.value
        if baseline in analysed.methods:
            difficult_datasets = EvaluationService.filter_difficult(
                analysed, baseline, config.difficulty_cutoff
            )
            if difficult_datasets:
                subset = analysed.restrict(difficult_datasets)
                difficult = EvaluationService.compare(subset, reference, config.rope_percent)
                cls._write_analysis(output_dir / DIFFICULT_DIR, subset, difficult)
        else:
            logger.warning("方法清單中沒有基準方法 %s，略過困難資料集分析", baseline)

        report = BenchmarkReport(
            run_id=generate_run_id(),
            n_rows=len(table.frame),
            methods=EvaluationService.method_order(EvaluationService.pct_diff(analysed, reference)),
            datasets=analysed.datasets,
            excluded=excluded,
            failures=failures or [],
            summary=summary,
            difficult_datasets=difficult_datasets,
            difficult=difficult,
        )
        StorageService.write_json(output_dir, "summary.json", report)
        StorageService.write_text(output_dir, "summary.txt", cls.summary_text(report))
        return report

    @classmethod
    def run(cls, config: BenchmarkConfig) -> BenchmarkReport:
        """執行基準實驗並寫出所有結果檔"""
        table, profiles, failures = cls.run_grid(config)
        output_dir = Path(config.output_dir)
        StorageService.write_text(output_dir, "scores.csv", table.to_csv())
        StorageService.write_frame(
            output_dir, "profiles.csv",
            cls.profiles_frame(profiles), index=False,
        )
        StorageService.write_json(
            output_dir, "failures.json", [failure.model_dump() for failure in failures]
        )
        if table.frame.empty:
            raise ValueError("所有資料集都失敗，沒有可彙總的分數")
        return cls.aggregate(table, config, profiles, failures)

    @classmethod
    def profiles_frame(cls, profiles: List[DatasetProfile]) -> pd.DataFrame:
        return pd.DataFrame(
            [{**profile.model_dump(), "degeneracy": profile.degeneracy.value} for profile in profiles],
            columns=list(DatasetProfile.model_fields),
        )

    @classmethod
    def load_profiles(cls, path: Path) -> List[DatasetProfile]:
        """讀回 profiles.csv"""
        frame = pd.read_csv(path, dtype={"dataset": str})
        return [
            DatasetProfile(**{
                key: value.item() if isinstance(value, np.generic) else value
                for key, value in row.items()
            })
            for row in frame.to_dict(orient="records")
        ]

    @classmethod
    def _summary_table(cls, title: str, summary: ComparisonSummary, order: List[str]) -> Table:
        table = Table(title=title)
        table.add_column("method")
        table.add_column("avg rank", justify="right")
        table.add_column("median %diff", justify="right")
        table.add_column("win / draw / loss", justify="right")
        diffs = pd.DataFrame.from_dict(summary.pct_diff, orient="index")
        for method in order:
            if method not in summary.avg_rank:
                continue
            outcome = summary.rope.get(method)
            table.add_row(
                method,
                f"{summary.avg_rank[method]:.3f}",
                f"{float(np.median(diffs[method])):+.2f}",
                "reference" if outcome is None
                else f"{outcome.win:.2f} / {outcome.draw:.2f} / {outcome.loss:.2f}",
            )
        return table

    @classmethod
    def summary_text(cls, report: BenchmarkReport) -> str:
        """純文字摘要（rich 表格的錄製輸出）"""
        console = Console(record=True, width=100, file=io.StringIO())
        summary = report.summary
        console.print(
            f"{len(report.datasets)} datasets, reference {summary.reference_method}, "
            f"ROPE ±{summary.rope_percent:g}%"
        )
        console.print(cls._summary_table("All datasets", summary, report.methods))
        if report.difficult is not None:
            console.print(
                cls._summary_table(
                    f"Difficult datasets ({len(report.difficult_datasets)})",
                    report.difficult,
                    report.methods,
                )
            )
        if report.excluded:
            console.print(f"excluded (mixed group empty): {', '.join(report.excluded)}")
        for failure in report.failures:
            console.print(f"failed: {failure.dataset} [{failure.stage}] {failure.error}")
        return console.export_text()
