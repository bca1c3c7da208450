"""Parameter records for the four open-system channels."""

from dataclasses import dataclass, fields
from enum import Enum
import math
from typing import Any, Mapping

from app.core.exceptions import ParamError


class ChannelKind(str, Enum):
	DEPHASE_1Q = "dephase1q"
	DAMP_1Q = "damp1q"
	DEPHASE_2Q = "dephase2q"
	DAMP_2Q = "damp2q"

	@property
	def dim(self) -> int:
		return 2 if self in (ChannelKind.DEPHASE_1Q, ChannelKind.DAMP_1Q) else 4

	@property
	def is_dephasing(self) -> bool:
		return self in (ChannelKind.DEPHASE_1Q, ChannelKind.DEPHASE_2Q)


def _finite(name: str, value: float) -> None:
	if not math.isfinite(value):
		raise ParamError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class OhmicParams:
	"""Ohmic-family spectral density (w/w_c)^s exp(-w/w_c)."""

	s: float
	omega_c: float = 1.0

	def __post_init__(self) -> None:
		_finite("s", self.s)
		_finite("omega_c", self.omega_c)
		if self.s <= 0:
			raise ParamError(f"ohmicity s must be > 0, got {self.s}")
		if self.omega_c <= 0:
			raise ParamError(f"cutoff omega_c must be > 0, got {self.omega_c}")


@dataclass(frozen=True)
class LorentzParams:
	"""Lorentzian reservoir: coupling gamma0, width kappa, detuning varpi = w0 - w_c."""

	gamma0: float
	kappa: float
	varpi: float = 0.0

	def __post_init__(self) -> None:
		for f in fields(self):
			_finite(f.name, getattr(self, f.name))
		if self.gamma0 <= 0:
			raise ParamError(f"coupling gamma0 must be > 0, got {self.gamma0}")
		if self.kappa <= 0:
			raise ParamError(f"spectral width kappa must be > 0, got {self.kappa}")

	@property
	def is_weak_coupling(self) -> bool:
		"""Monotone |B| on resonance."""
		return self.varpi == 0 and self.kappa >= 2 * self.gamma0


@dataclass(frozen=True)
class TwoQubitDephasingParams:
	h1: float
	h2: float
	ohmic: OhmicParams
	coupling: float = 0.0

	def __post_init__(self) -> None:
		_finite("h1", self.h1)
		_finite("h2", self.h2)
		_finite("lambda", self.coupling)


ChannelParams = OhmicParams | LorentzParams | TwoQubitDephasingParams

_PARAM_TYPES: dict[ChannelKind, type] = {
	ChannelKind.DEPHASE_1Q: OhmicParams,
	ChannelKind.DAMP_1Q: LorentzParams,
	ChannelKind.DEPHASE_2Q: TwoQubitDephasingParams,
	ChannelKind.DAMP_2Q: LorentzParams,
}

# Parameter names each channel reads from a flat parameter map.
REQUIRED_PARAMS: dict[ChannelKind, tuple[str, ...]] = {
	ChannelKind.DEPHASE_1Q: ("s",),
	ChannelKind.DAMP_1Q: ("gamma0", "kappa"),
	ChannelKind.DEPHASE_2Q: ("s", "h1", "h2"),
	ChannelKind.DAMP_2Q: ("gamma0", "kappa"),
}

# Every name a channel accepts from a flat parameter map.
CHANNEL_PARAMS: dict[ChannelKind, tuple[str, ...]] = {
	ChannelKind.DEPHASE_1Q: ("s", "omega_c"),
	ChannelKind.DAMP_1Q: ("gamma0", "kappa", "varpi", "kappa_over_gamma0"),
	ChannelKind.DEPHASE_2Q: ("s", "omega_c", "h1", "h2", "lambda"),
	ChannelKind.DAMP_2Q: ("gamma0", "kappa", "varpi", "kappa_over_gamma0"),
}

PARAM_DEFAULTS: dict[str, float] = {"omega_c": 1.0, "varpi": 0.0, "lambda": 0.0}


@dataclass(frozen=True)
class ChannelModel:
	kind: ChannelKind
	params: ChannelParams

	def __post_init__(self) -> None:
		expected = _PARAM_TYPES[self.kind]
		if not isinstance(self.params, expected):
			raise ParamError(f"{self.kind.value} needs {expected.__name__}, got {type(self.params).__name__}")

	@property
	def dim(self) -> int:
		return self.kind.dim


def build_channel(kind: ChannelKind | str, values: Mapping[str, Any]) -> ChannelModel:
	"""Build a channel from a flat name -> number map.

	``kappa_over_gamma0`` may stand in for ``kappa``.
	"""
	kind = ChannelKind(kind)
	merged = {**PARAM_DEFAULTS, **{k: v for k, v in values.items() if v is not None}}
	if "kappa_over_gamma0" in merged and "gamma0" in merged:
		merged["kappa"] = float(merged["kappa_over_gamma0"]) * float(merged["gamma0"])
	missing = [name for name in REQUIRED_PARAMS[kind] if name not in merged]
	if missing:
		raise ParamError(f"channel {kind.value} is missing parameter(s): {', '.join(missing)}")
	get = lambda name: float(merged[name])  # noqa: E731
	if kind is ChannelKind.DEPHASE_1Q:
		params: ChannelParams = OhmicParams(s=get("s"), omega_c=get("omega_c"))
	elif kind is ChannelKind.DEPHASE_2Q:
		params = TwoQubitDephasingParams(
			h1=get("h1"),
			h2=get("h2"),
			coupling=get("lambda"),
			ohmic=OhmicParams(s=get("s"), omega_c=get("omega_c")),
		)
	else:
		params = LorentzParams(gamma0=get("gamma0"), kappa=get("kappa"), varpi=get("varpi"))
	return ChannelModel(kind=kind, params=params)
