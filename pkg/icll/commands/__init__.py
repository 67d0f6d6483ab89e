from icll.commands.benchmark import benchmark as benchmark_command
from icll.commands.fit import fit as fit_command
from icll.commands.inspect import inspect as inspect_command
from icll.commands.report import report as report_command
from icll.commands.score import score as score_command

__all__ = ["benchmark_command", "fit_command", "inspect_command", "report_command", "score_command"]
