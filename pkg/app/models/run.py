from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.kdq import NonclassicalityVariant
from app.core.qmath import BlochAngles
from app.models.channel import CHANNEL_PARAMS, REQUIRED_PARAMS, ChannelKind
from app.models.coherence import Normalization
from app.models.trajectory import BasisMode, InitialStateMode, TimeGrid


class Command(str, Enum):
	TRAJ = "traj"
	SWEEP = "sweep"
	CHECK = "check"


class Suite(str, Enum):
	A1 = "a1"
	A2 = "a2"
	A3 = "a3"
	A4 = "a4"
	A5 = "a5"
	KD_INVARIANTS = "kd-invariants"
	ORACLE_VOLTERRA = "oracle-volterra"


class RunConfig(BaseModel):
	"""One CLI invocation after config-file and flag merging."""

	command: Command
	channel: Optional[ChannelKind] = None
	params: Dict[str, float] = Field(default_factory=dict)
	t_max: float = Field(30.0, gt=0)
	n: int = Field(4096, ge=16)
	basis: str = Field("fixed", description="fixed or optimized")
	angles: Optional[List[float]] = Field(None, description="alpha_1, beta_1[, alpha_2, beta_2] for a fixed basis")
	normalization: Normalization = Normalization.PER_DIMENSION
	nc_variant: NonclassicalityVariant = NonclassicalityVariant.LITERAL
	param: Optional[str] = None
	from_: Optional[float] = Field(None, alias="from")
	to: Optional[float] = None
	steps: Optional[int] = Field(None, ge=1)
	workers: Optional[int] = Field(None, ge=1)
	initial_state: InitialStateMode = InitialStateMode.FIDUCIAL
	out: Optional[Path] = None
	svg: Optional[Path] = None
	suite: Optional[Suite] = None
	samples: Optional[int] = Field(None, ge=1)
	seed: int = 7

	model_config = ConfigDict(populate_by_name=True, extra="forbid")

	@field_validator("basis")
	def _basis_name(cls, v):
		if v not in ("fixed", "optimized"):
			raise ValueError(f"basis must be 'fixed' or 'optimized', got '{v}'")
		return v

	@field_validator("param")
	def _param_name(cls, v):
		return v.replace("-", "_") if v else v

	@model_validator(mode="after")
	def _command_inputs(self) -> "RunConfig":
		if self.command is Command.CHECK:
			if self.suite is None:
				raise ValueError("check needs a suite")
			return self
		if self.channel is None:
			raise ValueError("--channel is required")
		present = set(self.params)
		if "kappa_over_gamma0" in present:
			present.add("kappa")
		if self.command is Command.TRAJ and self.initial_state is InitialStateMode.EXHAUSTIVE:
			raise ValueError("exhaustive initial states apply to sweep only")
		if self.command is Command.SWEEP:
			missing_sweep = [name for name, v in (("param", self.param), ("from", self.from_), ("to", self.to), ("steps", self.steps)) if v is None]
			if missing_sweep:
				raise ValueError(f"sweep needs --{', --'.join(missing_sweep)}")
			if self.param not in CHANNEL_PARAMS[self.channel]:
				raise ValueError(f"parameter '{self.param}' does not apply to {self.channel.value}")
			if self.initial_state is InitialStateMode.EXHAUSTIVE and self.channel.dim != 2:
				raise ValueError(f"--initial-state exhaustive needs a one-qubit channel, not {self.channel.value}")
			present.add(self.param)
			if self.param == "kappa_over_gamma0":
				present.add("kappa")
		missing = [name for name in REQUIRED_PARAMS[self.channel] if name not in present]
		if missing:
			raise ValueError(f"{self.channel.value} needs parameter(s): {', '.join(missing)}")
		unknown = sorted(set(self.params) - set(CHANNEL_PARAMS[self.channel]))
		if unknown:
			raise ValueError(f"parameter(s) {', '.join(unknown)} do not apply to {self.channel.value}")
		if self.angles is not None and len(self.angles) != self.channel.dim:
			raise ValueError(f"--angles needs {self.channel.dim} values for {self.channel.value}")
		return self

	@property
	def grid(self) -> TimeGrid:
		return TimeGrid(t_max=self.t_max, n=self.n)

	@property
	def basis_mode(self) -> BasisMode:
		if self.basis == "optimized":
			return BasisMode.optimized()
		if self.angles is None:
			return BasisMode.canonical()
		pairs = zip(self.angles[::2], self.angles[1::2])
		return BasisMode.fixed([BlochAngles.wrapped(a, b) for a, b in pairs])


class CheckRow(BaseModel):
	"""One line of a check-suite report."""

	suite: Suite
	name: str
	passed: bool
	asserted: bool = True
	value: float
	detail: Optional[str] = None
