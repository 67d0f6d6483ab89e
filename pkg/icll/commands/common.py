import logging
from contextlib import contextmanager
from typing import Iterator

import typer
from pydantic import ValidationError
from rich.console import Console

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)

# 執行期錯誤（資料、訓練、檔案）的結束碼；用法錯誤由 click 的 UsageError 處理，結束碼 1
RUNTIME_ERROR = 2


@contextmanager
def runtime_errors() -> Iterator[None]:
    """把服務層的 ValueError 轉為結束碼 2"""
    try:
        yield
    except (ValueError, OSError) as exc:
        logger.debug("指令失敗", exc_info=True)
        err_console.print(f"[bold red]錯誤:[/bold red] {exc}", highlight=False)
        raise typer.Exit(code=RUNTIME_ERROR) from exc


def build_config(config_cls, **values):
    """建立設定物件；驗證失敗視為用法錯誤"""
    try:
        return config_cls(**values)
    except ValidationError as exc:
        messages = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
            for error in exc.errors()
        )
        raise typer.BadParameter(messages) from exc
