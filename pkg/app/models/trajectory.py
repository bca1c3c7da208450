from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Type

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.exceptions import DimensionError, KDError, NumericalError, ParamError
from app.core.qmath import BlochAngles, DensityMatrix
from app.models.channel import CHANNEL_PARAMS, ChannelKind, ChannelModel
from app.models.coherence import Normalization


class TimeGrid(BaseModel):
	"""Uniform grid 0 = t_0 < ... < t_{n-1} = t_max."""

	t_max: float = Field(..., gt=0)
	n: int = Field(..., ge=16)

	model_config = ConfigDict(frozen=True)

	@property
	def times(self) -> NDArray[np.float64]:
		return np.linspace(0.0, self.t_max, self.n)

	@property
	def step(self) -> float:
		return self.t_max / (self.n - 1)


class BasisKind(str, Enum):
	FIXED = "fixed"
	OPTIMIZED = "optimized"
	CANONICAL = "canonical"


# Second-basis angles that reproduce the closed-form coherence of each channel's fiducial state.
CANONICAL_ANGLES: Dict[ChannelKind, List[BlochAngles]] = {
	ChannelKind.DEPHASE_1Q: [BlochAngles(np.pi / 2, np.pi / 2)],
	ChannelKind.DAMP_1Q: [BlochAngles(np.pi / 2, np.pi / 2)],
	ChannelKind.DEPHASE_2Q: [BlochAngles(np.pi / 2, 0.0), BlochAngles(np.pi / 2, 0.0)],
	ChannelKind.DAMP_2Q: [BlochAngles(np.pi / 2, np.pi / 2), BlochAngles(np.pi / 2, 0.0)],
}


class BasisMode(BaseModel):
	kind: BasisKind = BasisKind.CANONICAL
	angles: Optional[List[BlochAngles]] = None

	model_config = ConfigDict(frozen=True)

	@model_validator(mode="after")
	def _angles_for_fixed(self) -> "BasisMode":
		if self.kind is BasisKind.FIXED and not self.angles:
			raise ValueError("fixed basis mode needs angles")
		return self

	@classmethod
	def fixed(cls, angles: List[BlochAngles]) -> "BasisMode":
		return cls(kind=BasisKind.FIXED, angles=list(angles))

	@classmethod
	def optimized(cls) -> "BasisMode":
		return cls(kind=BasisKind.OPTIMIZED)

	@classmethod
	def canonical(cls) -> "BasisMode":
		return cls(kind=BasisKind.CANONICAL)

	def angles_for(self, kind: ChannelKind) -> Optional[List[BlochAngles]]:
		"""Angles to hold fixed, or None when the basis is optimized per sample."""
		if self.kind is BasisKind.OPTIMIZED:
			return None
		angles = self.angles if self.kind is BasisKind.FIXED else CANONICAL_ANGLES[kind]
		if len(angles) != kind.dim // 2:
			raise ParamError(f"{kind.value} needs {kind.dim // 2} angle pair(s), got {len(angles)}")
		return angles


class InitialStateMode(str, Enum):
	FIDUCIAL = "fiducial"
	EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class CoherenceTrajectory:
	grid: TimeGrid
	ckd: NDArray[np.float64]
	l1: NDArray[np.float64]
	nc: NDArray[np.float64]
	diagnostic: NDArray[np.float64]
	channel: ChannelModel
	initial_state: DensityMatrix
	basis_mode: BasisMode
	normalization: Normalization = Normalization.PER_DIMENSION
	argmax_angles: List[List[BlochAngles]] = field(default_factory=list)

	def __post_init__(self) -> None:
		for name in ("ckd", "l1", "nc", "diagnostic"):
			values = np.asarray(getattr(self, name), dtype=float)
			if values.shape != (self.grid.n,):
				raise DimensionError(f"{name} has {values.size} samples, grid has {self.grid.n}")
			object.__setattr__(self, name, values)
		for name in ("ckd", "l1", "nc"):
			if np.any(getattr(self, name) < 0):
				raise ParamError(f"{name} trajectory has negative entries")

	@property
	def times(self) -> NDArray[np.float64]:
		return self.grid.times

	@property
	def diagnostic_name(self) -> str:
		return "R" if self.channel.kind.is_dephasing else "absB"


class MeasureResult(BaseModel):
	n_ckd: float = Field(..., ge=0)
	n_cl1: float = Field(0.0, ge=0)
	n_nc: float = Field(0.0, ge=0)
	ascending_intervals: List[Tuple[float, float]] = Field(default_factory=list)

	@field_validator("ascending_intervals")
	def _disjoint_and_ordered(cls, v):
		for (a, b) in v:
			if b < a:
				raise ValueError(f"interval ({a}, {b}) is reversed")
		for (_, b), (c, _) in zip(v[:-1], v[1:]):
			if c < b:
				raise ValueError("intervals overlap or are out of order")
		return v


SWEEPABLE = tuple(sorted({name for names in CHANNEL_PARAMS.values() for name in names}))


class SweepSpec(BaseModel):
	kind: ChannelKind
	param: str
	start: float
	stop: float
	steps: int = Field(..., ge=1)
	fixed: Dict[str, float] = Field(default_factory=dict)
	grid: TimeGrid
	basis: BasisMode = Field(default_factory=BasisMode.canonical)
	normalization: Normalization = Normalization.PER_DIMENSION
	initial_state: InitialStateMode = InitialStateMode.FIDUCIAL

	@field_validator("param")
	def _known_param(cls, v):
		v = v.replace("-", "_")
		if v not in SWEEPABLE:
			raise ValueError(f"unknown sweep parameter '{v}'")
		return v

	@model_validator(mode="after")
	def _param_fits_channel(self) -> "SweepSpec":
		if self.param not in CHANNEL_PARAMS[self.kind]:
			raise ValueError(f"parameter '{self.param}' does not apply to {self.kind.value}")
		if self.steps == 1 and self.start != self.stop:
			raise ValueError("a one-step sweep needs from == to")
		if self.steps > 1 and not self.start < self.stop:
			raise ValueError("sweep range needs from < to")
		if self.initial_state is InitialStateMode.EXHAUSTIVE and self.kind.dim != 2:
			raise ValueError(f"exhaustive initial states are only searched for one-qubit channels, not {self.kind.value}")
		return self

	@property
	def values(self) -> NDArray[np.float64]:
		return np.linspace(self.start, self.stop, self.steps)


class SweepRow(BaseModel):
	param_value: float
	n_ckd: Optional[float] = None
	n_cl1: Optional[float] = None
	error: Optional[str] = None
	error_type: Optional[Type[KDError]] = None

	@property
	def ok(self) -> bool:
		return self.error is None

	@property
	def failed_numerically(self) -> bool:
		return self.error_type is not None and issubclass(self.error_type, NumericalError)
