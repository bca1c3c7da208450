"""Argument parsing and config-file merging for the command line."""

import argparse
from pathlib import Path
from typing import Any, Dict, Optional

from app.core.config import settings
from app.models.channel import CHANNEL_PARAMS
from app.models.run import RunConfig

CHANNEL_PARAM_KEYS = sorted({name for names in CHANNEL_PARAMS.values() for name in names})


def read_config_file(path: Path) -> Dict[str, str]:
	"""Flat ``key = value`` lines; '#' starts a comment; keys use '_' for '-'."""
	values: Dict[str, str] = {}
	for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
		line = raw.split("#", 1)[0].strip()
		if not line:
			continue
		if "=" not in line:
			raise ValueError(f"{path}:{number}: expected 'key = value'")
		key, value = (part.strip() for part in line.split("=", 1))
		values[key.replace("-", "_")] = value
	return values


def _run_options() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
	common.add_argument("--config", type=Path, help="flat key = value file; flags override it")
	common.add_argument("--log-level", dest="log_level", help=f"default {settings.LOG_LEVEL}")
	common.add_argument("--channel", choices=["dephase1q", "damp1q", "dephase2q", "damp2q"])
	for key in CHANNEL_PARAM_KEYS:
		common.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)
	common.add_argument("--t-max", dest="t_max", type=float)
	common.add_argument("--n", type=int)
	common.add_argument("--basis", choices=["fixed", "optimized"])
	common.add_argument("--angles", help="alpha_1,beta_1[,alpha_2,beta_2] for --basis fixed")
	common.add_argument("--normalization", choices=["half", "per-dimension"])
	common.add_argument("--nc-variant", dest="nc_variant", choices=["literal", "closed_form"])
	common.add_argument("--out", type=Path)
	common.add_argument("--svg", type=Path)
	return common


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(prog=settings.PLATFORM_NAME, description="Kirkwood-Dirac coherence and non-Markovianity of open qubit channels")
	parser.add_argument("--version", action="version", version=f"%(prog)s {settings.PLATFORM_VERSION}")
	sub = parser.add_subparsers(dest="command", required=True)
	common = _run_options()

	sub.add_parser("traj", parents=[common], help="coherence trajectory of one channel run")

	sweep = sub.add_parser("sweep", parents=[common], argument_default=argparse.SUPPRESS, help="measure over a parameter range")
	sweep.add_argument("--param")
	sweep.add_argument("--from", dest="from", type=float)
	sweep.add_argument("--to", type=float)
	sweep.add_argument("--steps", type=int)
	sweep.add_argument("--workers", type=int)
	sweep.add_argument("--initial-state", dest="initial_state", choices=["fiducial", "exhaustive"], help="exhaustive searches pure one-qubit states")

	check = sub.add_parser("check", help="property and oracle suites")
	check.add_argument("suite")
	check.add_argument("--samples", type=int, default=argparse.SUPPRESS)
	check.add_argument("--seed", type=int, default=argparse.SUPPRESS)
	check.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS)
	return parser


def merge_options(file_values: Dict[str, Any], flag_values: Dict[str, Any]) -> Dict[str, Any]:
	"""Flags win over the config file; channel parameters go into ``params``."""
	merged = {**file_values, **flag_values}
	merged.pop("config", None)
	merged.pop("log_level", None)
	params = {key: merged.pop(key) for key in CHANNEL_PARAM_KEYS if key in merged}
	if isinstance(merged.get("angles"), str):
		merged["angles"] = [a.strip() for a in merged["angles"].split(",") if a.strip()]
	merged["params"] = params
	return merged


def build_run_config(args: argparse.Namespace) -> RunConfig:
	flags = vars(args)
	file_values = read_config_file(flags["config"]) if "config" in flags else {}
	return RunConfig.model_validate(merge_options(file_values, flags))


def log_level_from(args: argparse.Namespace) -> Optional[str]:
	flags = vars(args)
	if "log_level" in flags:
		return flags["log_level"]
	if "config" in flags:
		try:
			return read_config_file(flags["config"]).get("log_level")
		except (OSError, ValueError):
			return None
	return None
