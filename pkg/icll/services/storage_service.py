import json
import logging
import re
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import BaseModel, ValidationError

from icll.config import settings
from icll.exceptions import ModelFileError
from icll.learners import classifier_from_payload
from icll.models.dataset import Dataset
from icll.models.icll import IcllModel
from icll.models.layering import GroupAssignment
from icll.models.method import ComparisonMethod
from icll.schemas.model_file import (
    GroupPayload,
    IcllModelPayload,
    LearnerPayload,
    SavedModel,
    ScalerPayload,
)
from icll.services.method_service import FittedMethod
from icll.utils.helpers import generate_run_id

logger = logging.getLogger(__name__)


class StorageService:
    """模型檔與報表檔的儲存"""

    @classmethod
    def _ensure_dir(cls, directory: Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    @classmethod
    def _generate_filename(cls, dataset: str, method: str) -> str:
        """產生唯一的模型檔名"""
        slug = re.sub(r"[^0-9A-Za-z]+", "-", method).strip("-")
        return f"{dataset}_{slug}_{generate_run_id()}.json"

    @classmethod
    def icll_to_payload(cls, model: IcllModel) -> IcllModelPayload:
        groups = model.groups
        return IcllModelPayload(
            f_l1=LearnerPayload(**model.f_l1.to_payload()),
            f_l2=LearnerPayload(**model.f_l2.to_payload()),
            groups=GroupPayload(
                group_of=groups.group_of.tolist(),
                cluster_of=groups.cluster_of.tolist(),
                counts=groups.counts,
            ),
            degeneracy=model.degeneracy,
            config=model.config,
            remediated_tau=model.remediated_tau,
            single_model_fallback=model.single_model_fallback,
        )

    @classmethod
    def icll_from_payload(cls, payload: IcllModelPayload) -> IcllModel:
        return IcllModel(
            f_l1=classifier_from_payload(payload.f_l1.model_dump()),
            f_l2=classifier_from_payload(payload.f_l2.model_dump()),
            groups=GroupAssignment(**payload.groups.model_dump()),
            degeneracy=payload.degeneracy,
            config=payload.config,
            remediated_tau=payload.remediated_tau,
            single_model_fallback=payload.single_model_fallback,
        )

    @classmethod
    def to_saved_model(
        cls, fitted: FittedMethod, dataset: Dataset, scaler: Optional[ScalerPayload] = None
    ) -> SavedModel:
        return SavedModel(
            method=fitted.method.value,
            dataset=dataset.name,
            feature_names=list(dataset.feature_names),
            class_names=dataset.class_names,
            scaler=scaler,
            icll=cls.icll_to_payload(fitted.icll) if fitted.icll is not None else None,
            baseline=(
                LearnerPayload(**fitted.classifier.to_payload())
                if fitted.classifier is not None else None
            ),
        )

    @classmethod
    def fitted_from_saved(cls, saved: SavedModel) -> FittedMethod:
        method = ComparisonMethod(saved.method)
        if saved.icll is not None:
            return FittedMethod(method=method, icll=cls.icll_from_payload(saved.icll))
        return FittedMethod(
            method=method, classifier=classifier_from_payload(saved.baseline.model_dump())
        )

    @classmethod
    def save_model(cls, saved: SavedModel, path: Optional[Path] = None) -> Path:
        """寫出模型檔；未指定路徑時存到 MODEL_DIR"""
        if path is None:
            path = cls._ensure_dir(Path(settings.MODEL_DIR)) / cls._generate_filename(
                saved.dataset, saved.method
            )
        path = Path(path)
        cls._ensure_dir(path.parent)
        path.write_text(saved.model_dump_json(indent=2), encoding="utf-8")
        logger.info("模型已儲存: %s", path)
        return path

    @classmethod
    def load_model(cls, path: Path) -> SavedModel:
        path = Path(path)
        if not path.is_file():
            raise ModelFileError(f"找不到模型檔: {path}")
        try:
            return SavedModel.model_validate_json(path.read_text(encoding="utf-8"))
        except (ValidationError, ValueError) as exc:
            raise ModelFileError(f"模型檔格式錯誤: {path}: {exc}") from exc

    @classmethod
    def write_text(cls, directory: Path, filename: str, text: str) -> Path:
        path = cls._ensure_dir(directory) / filename
        path.write_text(text, encoding="utf-8")
        return path

    @classmethod
    def write_json(cls, directory: Path, filename: str, payload) -> Path:
        """寫出 pydantic 模型或可 JSON 序列化的物件"""
        if isinstance(payload, BaseModel):
            text = payload.model_dump_json(indent=2)
        else:
            text = json.dumps(payload, indent=2, ensure_ascii=False)
        return cls.write_text(directory, filename, text + "\n")

    @classmethod
    def write_frame(cls, directory: Path, filename: str, frame: pd.DataFrame, index: bool = True) -> Path:
        return cls.write_text(directory, filename, frame.to_csv(index=index, float_format="%.17g"))
