import logging
from pathlib import Path

from app.core.nonmarkov import fiducial_state, measure_from_trajectory, trajectory
from app.models.channel import build_channel
from app.models.coherence import OptimizerConfig
from app.models.run import RunConfig
from app.models.trajectory import CoherenceTrajectory
from app.utils.output import validate_csv, write_csv
from app.utils.svg import write_line_plot

logger = logging.getLogger(__name__)


def trajectory_columns(traj: CoherenceTrajectory) -> dict:
	return {
		"t": traj.times,
		"ckd": traj.ckd,
		"l1": traj.l1,
		"nc": traj.nc,
		traj.diagnostic_name: traj.diagnostic,
	}


def handle(cfg: RunConfig) -> int:
	channel = build_channel(cfg.channel, cfg.params)
	traj = trajectory(
		channel,
		fiducial_state(channel.kind),
		cfg.grid,
		cfg.basis_mode,
		OptimizerConfig(),
		cfg.normalization,
		cfg.nc_variant,
	)
	measure = measure_from_trajectory(traj)
	logger.info(f"n_ckd={measure.n_ckd:.10g} n_cl1={measure.n_cl1:.10g} over {len(measure.ascending_intervals)} ascent(s)")

	columns = trajectory_columns(traj)
	out = cfg.out or Path(f"traj-{channel.kind.value}.csv")
	write_csv(out, columns)
	validate_csv(out, list(columns), monotone="t")
	if cfg.svg is not None:
		series = {name: values for name, values in columns.items() if name != "t"}
		write_line_plot(cfg.svg, traj.times, series, title=f"{channel.kind.value} coherence", x_label="t")
		logger.info(f"wrote plot to {cfg.svg}")
	return 0
