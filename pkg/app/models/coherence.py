"""Pydantic models for the coherence functional and its property checks."""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.core.qmath import BlochAngles


class Normalization(str, Enum):
    """Prefactor applied to max sum |Im P_KD|.

    HALF is the measure proper; PER_DIMENSION (1/d) coincides with HALF for a
    qubit and matches the printed two-qubit closed forms.
    """

    HALF = "half"
    PER_DIMENSION = "per-dimension"

    def factor(self, dim: int) -> float:
        return 0.5 if self is Normalization.HALF else 1.0 / dim


class OptimizerConfig(BaseModel):
    """Grid-then-Nelder-Mead search over second-basis Bloch angles."""

    grid_points: int = Field(default_factory=lambda: settings.OPTIMIZER_GRID_POINTS, ge=4, description="Grid points per angle (one qubit)")
    grid_points_two_qubit: int = Field(default_factory=lambda: settings.OPTIMIZER_GRID_POINTS_TWO_QUBIT, ge=4, description="Grid points per angle (two qubits)")
    refine_iters: int = Field(default_factory=lambda: settings.OPTIMIZER_REFINE_ITERS, ge=1, description="Nelder-Mead iterations per angle")
    tolerance: float = Field(default_factory=lambda: settings.OPTIMIZER_TOLERANCE, gt=0, description="Objective tolerance")

    model_config = ConfigDict(frozen=True)


class CoherenceResult(BaseModel):
    value: float = Field(..., ge=0, description="Normalized C_KD")
    raw_value: float = Field(..., ge=0, description="max sum |Im P_KD| before normalization")
    argmax_angles: List[BlochAngles] = Field(..., description="One angle pair per qubit, in the reference frame")
    evaluations: int = Field(..., ge=0)
    normalization: Normalization = Normalization.HALF


class CoherenceProperty(str, Enum):
    A1 = "a1"
    A2 = "a2"
    A3 = "a3"
    A4 = "a4"
    A5 = "a5"


class PropertyReport(BaseModel):
    """Outcome of one property check."""

    property: CoherenceProperty
    passed: bool
    asserted: bool = True
    lhs: float
    rhs: float
    slack: float = Field(..., description="Margin by which the checked relation holds (negative on violation)")
    direction: Optional[str] = None
    detail: Optional[str] = None
