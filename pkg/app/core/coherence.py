"""KD coherence C_KD and the l1-norm coherence it is compared against.

C_KD = factor * max over the second basis of sum |Im P_KD(mu, nu)|, with the
reference basis {|mu>} held fixed. The second basis is searched as
ref @ bloch(alpha, beta) for one qubit and ref @ (bloch (x) bloch) for two,
so rotating the state and the reference together leaves the value unchanged.
"""

import logging
from typing import Sequence

import numpy as np

from app.core.exceptions import DimensionError
from app.core.kdq import imag_l1, kd_imag_l1_batch, kd_table
from app.core.optimizer import maximize_angles
from app.core.qmath import (
    BlochAngles,
    DensityMatrix,
    OrthonormalBasis,
    angle_stack_to_bases,
)
from app.models.coherence import CoherenceResult, Normalization, OptimizerConfig


logger = logging.getLogger(__name__)


def _qubits(dim: int) -> int:
    return 1 if dim == 2 else 2


def second_basis_from_angles(ref_basis: OrthonormalBasis, angles: Sequence[BlochAngles]) -> OrthonormalBasis:
    """Second basis expressed in the frame of ``ref_basis``."""
    row = np.array([[a for pair in angles for a in pair.as_tuple()]])
    if row.shape[1] != 2 * _qubits(ref_basis.dim):
        raise DimensionError(f"{len(angles)} angle pair(s) do not fit dim {ref_basis.dim}")
    return OrthonormalBasis(ref_basis.mat @ angle_stack_to_bases(row)[0])


def ckd_raw_fixed(rho: DensityMatrix, ref_basis: OrthonormalBasis, second_basis: OrthonormalBasis) -> float:
    """Unnormalized sum |Im P_KD| for one basis pair."""
    return imag_l1(kd_table(rho, ref_basis, second_basis))


def ckd_fixed(
    rho: DensityMatrix,
    ref_basis: OrthonormalBasis,
    second_basis: OrthonormalBasis,
    normalization: Normalization = Normalization.HALF,
) -> float:
    return Normalization(normalization).factor(rho.dim) * ckd_raw_fixed(rho, ref_basis, second_basis)


def ckd(
    rho: DensityMatrix,
    ref_basis: OrthonormalBasis,
    cfg: OptimizerConfig | None = None,
    normalization: Normalization = Normalization.HALF,
    seeds: Sequence[Sequence[BlochAngles]] = (),
) -> CoherenceResult:
    """Maximize over second bases; ``seeds`` add extra starting points."""
    cfg = cfg or OptimizerConfig()
    normalization = Normalization(normalization)
    if ref_basis.dim != rho.dim:
        raise DimensionError(f"basis dim {ref_basis.dim} does not match state dim {rho.dim}")
    qubits = _qubits(rho.dim)
    ref = ref_basis.mat

    def objective(angle_rows: np.ndarray) -> np.ndarray:
        return kd_imag_l1_batch(rho.mat, ref, ref @ angle_stack_to_bases(angle_rows))

    seed_rows = [[a for pair in seed for a in pair.as_tuple()] for seed in seeds]
    if qubits == 1:
        # For a qubit sum |Im P| = 2 sin(alpha) |Im(c e^{i beta})|, c the local coherence.
        c = (ref.conj().T @ rho.mat @ ref)[0, 1]
        seed_rows.append([np.pi / 2, float(np.mod(np.pi / 2 - np.angle(c), 2 * np.pi))])
    found = maximize_angles(objective, qubits, cfg, seeds=seed_rows)
    logger.debug(f"C_KD search on dim {rho.dim}: raw {found.value:.12g} after {found.evaluations} evaluations")
    angles = [BlochAngles.wrapped(found.angles[2 * q], found.angles[2 * q + 1]) for q in range(qubits)]
    raw = max(found.value, 0.0)
    return CoherenceResult(
        value=normalization.factor(rho.dim) * raw,
        raw_value=raw,
        argmax_angles=angles,
        evaluations=found.evaluations,
        normalization=normalization,
    )


def l1_coherence(rho: DensityMatrix, ref_basis: OrthonormalBasis) -> float:
    if ref_basis.dim != rho.dim:
        raise DimensionError(f"basis dim {ref_basis.dim} does not match state dim {rho.dim}")
    local = ref_basis.mat.conj().T @ rho.mat @ ref_basis.mat
    return float(np.abs(local).sum() - np.abs(np.diag(local)).sum())
