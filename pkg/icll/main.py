import sys

import click
import typer
from typer.core import TyperGroup

from icll import __version__
from icll.commands import (
    benchmark_command,
    fit_command,
    inspect_command,
    report_command,
    score_command,
)
from icll.config import settings
from icll.utils.helpers import configure_logging

# 結束碼：0 成功 / 1 用法錯誤 / 2 執行期錯誤
USAGE_ERROR = 1
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class IcllGroup(TyperGroup):
    """用法錯誤一律以結束碼 1 結束（click 預設為 2，與執行期錯誤衝突）"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            code = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.UsageError as exc:
            exc.show()
            sys.exit(USAGE_ERROR)
        except click.ClickException as exc:
            exc.show()
            sys.exit(exc.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(USAGE_ERROR)
        if not standalone_mode:
            return code
        sys.exit(code if isinstance(code, int) else 0)


app = typer.Typer(
    name="icll",
    cls=IcllGroup,
    help="ICLL：以自動分層學習處理不平衡二元分類，並提供重抽樣基準比較",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)


def _version_callback(value: bool):
    if value:
        typer.echo(f"icll {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    log_level: str = typer.Option(settings.LOG_LEVEL, "--log-level", help="DEBUG / INFO / WARNING"),
    version: bool = typer.Option(
        False, "--version", callback=_version_callback, is_eager=True, help="顯示版本"
    ),
):
    """設定 logging"""
    if log_level.upper() not in LOG_LEVELS:
        raise typer.BadParameter(f"未知的 log level: {log_level}", param_hint="--log-level")
    configure_logging(log_level)


# 註冊指令
app.command("fit")(fit_command)
app.command("score")(score_command)
app.command("benchmark")(benchmark_command)
app.command("report")(report_command)
app.command("inspect")(inspect_command)


def run():
    app()


if __name__ == "__main__":
    run()
