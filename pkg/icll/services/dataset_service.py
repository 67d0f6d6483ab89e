import io
import logging
import re
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.preprocessing import MinMaxScaler

from icll.exceptions import DatasetFormatError
from icll.models.dataset import Dataset, ImbalanceSummary

logger = logging.getLogger(__name__)

MISSING_TOKENS = {"?", "<null>", ""}
DEFAULT_LABEL_COLUMN = "class"

_ATTRIBUTE_RE = re.compile(r"^@attribute\s+('[^']*'|\"[^\"]*\"|[^\s{]+)\s*(.*)$", re.IGNORECASE)
_NUMERIC_TYPE_RE = re.compile(r"^(real|integer|numeric)\b", re.IGNORECASE)


def _unquote(name: str) -> str:
    if len(name) >= 2 and name[0] == name[-1] and name[0] in "'\"":
        return name[1:-1]
    return name


def _split_names(text: str) -> List[str]:
    return [_unquote(part.strip()) for part in text.split(",") if part.strip()]


class DatasetService:
    """資料集讀取、編碼與摘要"""

    @classmethod
    def _role_mapping(cls, class_values: Sequence[str]) -> Tuple[str, str]:
        """由出現次數決定 (多數類別, 少數類別)；次數相同時字典序較小者為少數"""
        counts = Counter(class_values)
        if len(counts) != 2:
            raise DatasetFormatError(
                f"輸出屬性必須恰好有兩個類別，收到 {len(counts)} 個: {sorted(counts)}"
            )
        first, second = sorted(counts)
        if counts[first] <= counts[second]:
            return second, first
        return first, second

    @classmethod
    def _encode_labels(cls, class_values: Sequence[str]) -> Tuple[np.ndarray, Tuple[str, str]]:
        majority, minority = cls._role_mapping(class_values)
        labels = np.array([1 if value == minority else 0 for value in class_values], dtype=np.int64)
        return labels, (majority, minority)

    @classmethod
    def parse_keel(cls, text: str, name: Optional[str] = None) -> Dataset:
        """解析 KEEL .dat 格式"""
        relation: Optional[str] = None
        attributes: List[Tuple[str, Optional[List[str]]]] = []
        inputs: Optional[List[str]] = None
        outputs: Optional[List[str]] = None
        rows: List[List[str]] = []
        in_data = False

        for raw_line in text.splitlines():
            line = raw_line.strip()
            if not line or line.startswith("%"):
                continue
            if in_data:
                rows.append([cell.strip() for cell in line.split(",")])
                continue

            keyword = line.split(None, 1)[0].lower()
            if keyword == "@relation":
                parts = line.split(None, 1)
                if len(parts) < 2:
                    raise DatasetFormatError("@relation 缺少名稱")
                relation = _unquote(parts[1].strip())
            elif keyword.startswith("@attribute"):
                attributes.append(cls._parse_attribute(line))
            elif keyword.startswith("@inputs"):
                inputs = _split_names(cls._header_value(line))
            elif keyword.startswith("@output"):
                outputs = _split_names(cls._header_value(line))
            elif keyword == "@data":
                in_data = True
            else:
                raise DatasetFormatError(f"無法辨識的標頭: {line}")

        if relation is None:
            raise DatasetFormatError("缺少 @relation")
        if not attributes:
            raise DatasetFormatError("缺少 @attribute")
        if not in_data:
            raise DatasetFormatError("缺少 @data")

        names = [attribute_name for attribute_name, _ in attributes]
        declared = dict(attributes)
        if len(declared) != len(names):
            raise DatasetFormatError("屬性名稱重複")
        if outputs is None:
            outputs = [names[-1]]
        if len(outputs) != 1:
            raise DatasetFormatError(f"只支援單一輸出屬性，收到 {outputs}")
        output = outputs[0]
        if output not in declared:
            raise DatasetFormatError(f"輸出屬性 '{output}' 未宣告")
        if inputs is None:
            inputs = [attribute for attribute in names if attribute != output]
        for attribute in inputs:
            if attribute not in declared:
                raise DatasetFormatError(f"輸入屬性 '{attribute}' 未宣告")
        if output in inputs:
            raise DatasetFormatError("輸出屬性不可同時是輸入屬性")

        columns: Dict[str, List[str]] = {attribute: [] for attribute in names}
        for row_index, row in enumerate(rows):
            if len(row) != len(names):
                raise DatasetFormatError(
                    f"欄位數 {len(row)} 與屬性數 {len(names)} 不符", row=row_index
                )
            for attribute, cell in zip(names, row):
                if cell in MISSING_TOKENS:
                    raise DatasetFormatError(f"屬性 '{attribute}' 有缺失值", row=row_index)
                columns[attribute].append(_unquote(cell))

        if len(rows) < 2:
            raise DatasetFormatError("@data 至少需要 2 列")

        declared_classes = declared[output]
        class_values = columns[output]
        if declared_classes is not None:
            for row_index, value in enumerate(class_values):
                if value not in declared_classes:
                    raise DatasetFormatError(f"類別 '{value}' 未宣告", row=row_index)
        labels, class_names = cls._encode_labels(class_values)

        blocks: List[np.ndarray] = []
        feature_names: List[str] = []
        for attribute in inputs:
            values = declared[attribute]
            cells = columns[attribute]
            if values is None:
                blocks.append(cls._parse_numeric(attribute, cells)[:, None])
                feature_names.append(attribute)
            else:
                block, block_names = cls._one_hot(attribute, cells, values)
                blocks.append(block)
                feature_names.extend(block_names)

        features = np.hstack(blocks) if blocks else np.empty((len(rows), 0))
        dataset = Dataset(
            name=name or relation,
            features=features,
            labels=labels,
            feature_names=feature_names,
            class_names=class_names,
        )
        logger.debug("讀取 KEEL 資料集 %s: %d×%d", dataset.name, *features.shape)
        return dataset

    @classmethod
    def _header_value(cls, line: str) -> str:
        parts = line.split(None, 1)
        return parts[1] if len(parts) > 1 else ""

    @classmethod
    def _parse_attribute(cls, line: str) -> Tuple[str, Optional[List[str]]]:
        """解析一行 @attribute；回傳 (名稱, 名目值列表或 None)"""
        match = _ATTRIBUTE_RE.match(line)
        if not match:
            raise DatasetFormatError(f"無法解析屬性: {line}")
        attribute_name = _unquote(match.group(1))
        declared = match.group(2).strip()
        if declared.startswith("{"):
            if not declared.endswith("}"):
                raise DatasetFormatError(f"名目屬性缺少右括號: {line}")
            values = _split_names(declared[1:-1])
            if not values:
                raise DatasetFormatError(f"名目屬性沒有值: {line}")
            return attribute_name, values
        if _NUMERIC_TYPE_RE.match(declared):
            return attribute_name, None
        raise DatasetFormatError(f"不支援的屬性型別: {line}")

    @classmethod
    def _parse_numeric(cls, attribute: str, cells: Sequence[str]) -> np.ndarray:
        values = np.empty(len(cells), dtype=np.float64)
        for row_index, cell in enumerate(cells):
            try:
                values[row_index] = float(cell)
            except ValueError:
                raise DatasetFormatError(
                    f"屬性 '{attribute}' 的值 '{cell}' 不是數值", row=row_index
                ) from None
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise DatasetFormatError(f"屬性 '{attribute}' 含非有限數值", row=bad)
        return values

    @classmethod
    def _one_hot(
        cls, attribute: str, cells: Sequence[str], values: Sequence[str]
    ) -> Tuple[np.ndarray, List[str]]:
        """名目屬性 one-hot 編碼，每列恰有一個 1"""
        index = {value: column for column, value in enumerate(values)}
        block = np.zeros((len(cells), len(values)), dtype=np.float64)
        for row_index, cell in enumerate(cells):
            if cell not in index:
                raise DatasetFormatError(
                    f"屬性 '{attribute}' 的值 '{cell}' 未宣告", row=row_index
                )
            block[row_index, index[cell]] = 1.0
        return block, [f"{attribute}={value}" for value in values]

    @classmethod
    def parse_csv(
        cls, text: str, label_column: str = DEFAULT_LABEL_COLUMN, name: str = "csv"
    ) -> Dataset:
        """解析有標頭列的 CSV"""
        frame = pd.read_csv(
            io.StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True
        )
        if label_column not in frame.columns:
            raise DatasetFormatError(f"找不到標籤欄位 '{label_column}'")
        if len(frame) < 2:
            raise DatasetFormatError("CSV 至少需要 2 列資料")

        for column in frame.columns:
            cells = frame[column].str.strip()
            missing = cells.isin(MISSING_TOKENS).to_numpy()
            if missing.any():
                raise DatasetFormatError(
                    f"欄位 '{column}' 有缺失值", row=int(np.flatnonzero(missing)[0])
                )
            frame[column] = cells

        class_values = frame[label_column].tolist()
        labels, class_names = cls._encode_labels(class_values)

        blocks: List[np.ndarray] = []
        feature_names: List[str] = []
        for column in frame.columns:
            if column == label_column:
                continue
            numeric = pd.to_numeric(frame[column], errors="coerce")
            parsed = numeric.notna().to_numpy()
            if parsed.all():
                blocks.append(cls._parse_numeric(column, frame[column].tolist())[:, None])
                feature_names.append(column)
            elif not parsed.any():
                values = sorted(frame[column].unique())
                block, block_names = cls._one_hot(column, frame[column].tolist(), values)
                blocks.append(block)
                feature_names.extend(block_names)
            else:
                bad = int(np.flatnonzero(~parsed)[0])
                raise DatasetFormatError(
                    f"欄位 '{column}' 的值 '{frame[column].iloc[bad]}' 無法解析為數值", row=bad
                )

        if not blocks:
            raise DatasetFormatError("CSV 沒有特徵欄位")
        return Dataset(
            name=name,
            features=np.hstack(blocks),
            labels=labels,
            feature_names=feature_names,
            class_names=class_names,
        )

    @classmethod
    def serialize_csv(cls, dataset: Dataset, label_column: str = DEFAULT_LABEL_COLUMN) -> str:
        """序列化為 CSV（除錯用）；標籤欄寫回原始類別名稱"""
        if label_column in dataset.feature_names:
            raise DatasetFormatError(f"標籤欄名稱 '{label_column}' 與特徵名稱衝突")
        frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names))
        frame[label_column] = [dataset.class_names[label] for label in dataset.labels]
        return frame.to_csv(index=False)

    @classmethod
    def load(cls, path: Path, label_column: str = DEFAULT_LABEL_COLUMN) -> Dataset:
        """依副檔名讀取資料檔（.dat KEEL / .csv）"""
        path = Path(path)
        if not path.is_file():
            raise DatasetFormatError(f"找不到資料檔: {path}")
        text = path.read_text(encoding="utf-8")
        suffix = path.suffix.lower()
        if suffix == ".dat":
            return cls.parse_keel(text, name=path.stem)
        if suffix == ".csv":
            return cls.parse_csv(text, label_column=label_column, name=path.stem)
        raise DatasetFormatError(f"不支援的副檔名: {suffix}（支援 .dat, .csv）")

    @classmethod
    def discover(cls, directory: Path) -> List[Path]:
        """列出目錄中的資料檔（依名稱排序）"""
        directory = Path(directory)
        return sorted(
            path for path in directory.iterdir()
            if path.is_file() and path.suffix.lower() in (".dat", ".csv")
        )

    @classmethod
    def summarize(cls, dataset: Dataset) -> ImbalanceSummary:
        """類別數量與不平衡比"""
        n_minority = int(dataset.labels.sum())
        n_majority = dataset.n_samples - n_minority
        return ImbalanceSummary(
            n_majority=n_majority,
            n_minority=n_minority,
            imbalance_ratio=n_majority / n_minority,
        )

    @classmethod
    def min_max_scale(cls, train: Dataset, test: Dataset) -> Tuple[Dataset, Dataset]:
        """以訓練折擬合 min-max 縮放並套用到兩邊"""
        scaler = MinMaxScaler().fit(train.features)
        return (
            train.with_arrays(scaler.transform(train.features), train.labels),
            test.with_arrays(scaler.transform(test.features), test.labels),
        )
