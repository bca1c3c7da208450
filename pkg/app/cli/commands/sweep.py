import logging
from pathlib import Path

from app.core.exceptions import NumericalError, ParamError
from app.core.nonmarkov import sweep
from app.models.coherence import OptimizerConfig
from app.models.run import RunConfig
from app.models.trajectory import SweepSpec
from app.utils.output import validate_csv, write_csv
from app.utils.svg import write_line_plot

logger = logging.getLogger(__name__)

COLUMNS = ("paramValue", "nCkd", "nCl1")


def handle(cfg: RunConfig) -> int:
	spec = SweepSpec(
		kind=cfg.channel,
		param=cfg.param,
		start=cfg.from_,
		stop=cfg.to,
		steps=cfg.steps,
		fixed=cfg.params,
		grid=cfg.grid,
		basis=cfg.basis_mode,
		normalization=cfg.normalization,
		initial_state=cfg.initial_state,
	)
	rows = sweep(spec, OptimizerConfig(), workers=cfg.workers)
	good = [row for row in rows if row.ok]
	if not good:
		numerical = [row for row in rows if row.failed_numerically]
		if numerical:
			raise NumericalError(f"every sweep point failed; first numerical error: {numerical[0].error}")
		raise ParamError(f"every sweep point failed; first error: {rows[0].error}")
	if len(good) < len(rows):
		logger.warning(f"{len(rows) - len(good)} sweep point(s) failed and are left out of the table")

	columns = {
		"paramValue": [row.param_value for row in good],
		"nCkd": [row.n_ckd for row in good],
		"nCl1": [row.n_cl1 for row in good],
	}
	out = cfg.out or Path(f"sweep-{spec.kind.value}-{spec.param}.csv")
	write_csv(out, columns)
	validate_csv(out, COLUMNS, monotone="paramValue")
	if cfg.svg is not None:
		write_line_plot(cfg.svg, columns["paramValue"], {"nCkd": columns["nCkd"], "nCl1": columns["nCl1"]}, title=f"{spec.kind.value} sweep", x_label=spec.param)
		logger.info(f"wrote plot to {cfg.svg}")
	return 0
