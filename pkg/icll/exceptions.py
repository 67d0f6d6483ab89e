from typing import List, Optional


class IcllError(ValueError):
    """所有領域錯誤的基底類別"""


class DatasetFormatError(IcllError):
    """資料檔格式錯誤（可附帶資料列索引）"""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"{message}（資料列 {row}）"
        super().__init__(message)


class DegenerateCutError(IcllError):
    """所有合併高度皆為 0，無法計算切割門檻"""


class SingleClassError(IcllError):
    """需要兩個類別的操作只收到一個類別"""


class InsufficientMinorityError(IcllError):
    """少數類別樣本數少於折數"""

    def __init__(self, dataset: str, n_minority: int, folds: int):
        self.dataset = dataset
        super().__init__(
            f"資料集 '{dataset}' 的少數類別只有 {n_minority} 筆，少於 {folds} 折"
        )


class UndefinedAUCError(IcllError):
    """標籤只有單一類別時 AUC 無定義"""


class IncompleteGridError(IcllError):
    """分數表缺少格子"""

    def __init__(self, missing: List[tuple]):
        self.missing = missing
        preview = ", ".join(str(cell) for cell in missing[:10])
        more = f" ... 共 {len(missing)} 格" if len(missing) > 10 else ""
        super().__init__(f"分數表不完整，缺少: {preview}{more}")


class ModelFileError(IcllError):
    """模型檔無法讀取或格式不符"""
