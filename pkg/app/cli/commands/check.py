import logging
from typing import List

from app.core.suites import run_suite
from app.models.run import CheckRow, RunConfig

logger = logging.getLogger(__name__)


def format_table(rows: List[CheckRow]) -> str:
	lines = [f"{'suite':<16} {'check':<44} {'result':<8} {'value':>12}  detail"]
	for row in rows:
		result = ("PASS" if row.passed else "FAIL") if row.asserted else "REPORT"
		lines.append(f"{row.suite.value:<16} {row.name:<44} {result:<8} {row.value:>12.4e}  {row.detail or ''}")
	return "\n".join(lines)


def handle(cfg: RunConfig) -> int:
	rows = run_suite(cfg.suite, cfg.samples, cfg.seed)
	print(format_table(rows))
	failed = [row for row in rows if row.asserted and not row.passed]
	if failed:
		logger.error(f"{len(failed)} asserted check(s) failed in suite {cfg.suite.value}")
		return 1
	return 0
