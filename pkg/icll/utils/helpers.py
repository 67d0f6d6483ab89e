import logging
import math
import uuid
from datetime import datetime, timezone

import numpy as np
from rich.logging import RichHandler


def utc_now() -> datetime:
    """目前的 UTC 時間（含時區）"""
    return datetime.now(timezone.utc)


def generate_run_id() -> str:
    """產生唯一的執行識別碼（時間戳 + 短 uuid）"""
    timestamp = utc_now().strftime("%Y%m%d_%H%M%S")
    return f"{timestamp}_{uuid.uuid4().hex[:8]}"


def derive_seed(master_seed: int, *keys: int) -> int:
    """由主種子與任意整數鍵導出子種子，與執行順序無關"""
    sequence = np.random.SeedSequence([int(master_seed), *[int(k) for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def round_half_up(value: float) -> int:
    """四捨五入（0.5 進位），避免 Python round 的銀行家捨入"""
    return int(math.floor(value + 0.5))


def configure_logging(level: str = "INFO") -> None:
    """設定全域 logging，使用 rich 輸出"""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )
