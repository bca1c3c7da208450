"""Executable coherence-measure properties A1-A5.

Each check returns a ``PropertyReport``; A2 never asserts and only reports
which inequality direction was observed.
"""

import logging
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.coherence import ckd
from app.core.exceptions import DimensionError, MapError
from app.core.qmath import (
    BlochAngles,
    DensityMatrix,
    OrthonormalBasis,
    Subsystem,
    apply_kraus,
    kraus_completeness_defect,
    partial_trace,
)
from app.models.coherence import (
    CoherenceProperty,
    Normalization,
    OptimizerConfig,
    PropertyReport,
)


logger = logging.getLogger(__name__)

MAP_TOL = 1e-10
# States with an off-diagonal above this modulus must clear COHERENT_FLOOR.
COHERENT_OFFDIAG = 0.05
COHERENT_FLOOR = 1e-4


def _value(rho: DensityMatrix, ref: OrthonormalBasis, cfg: OptimizerConfig, **kwargs) -> float:
    return ckd(rho, ref, cfg, Normalization.HALF, **kwargs).value


def check_a1(rho: DensityMatrix, ref: OrthonormalBasis, cfg: OptimizerConfig) -> PropertyReport:
    """Faithfulness: C_KD vanishes exactly on incoherent states."""
    value = _value(rho, ref, cfg)
    incoherent = rho.is_diagonal_in(ref)
    local = ref.mat.conj().T @ rho.mat @ ref.mat
    largest = float(np.max(np.abs(local - np.diag(np.diag(local)))))
    floor = COHERENT_FLOOR if largest > COHERENT_OFFDIAG else cfg.tolerance
    if incoherent:
        slack = cfg.tolerance - value
    else:
        slack = value - floor
    return PropertyReport(
        property=CoherenceProperty.A1,
        passed=slack >= 0,
        lhs=value,
        rhs=cfg.tolerance if incoherent else floor,
        slack=slack,
        detail="incoherent" if incoherent else "coherent",
    )


def check_a2(
    states: Sequence[DensityMatrix],
    weights: Sequence[float],
    ref: OrthonormalBasis,
    cfg: OptimizerConfig,
) -> PropertyReport:
    """Compare C_KD of a mixture with the mixture of C_KD values (report only)."""
    w = np.asarray(weights, dtype=float)
    if len(states) != len(w) or np.any(w < 0) or abs(w.sum() - 1.0) > MAP_TOL:
        raise MapError("mixing weights must be non-negative, sum to 1 and match the states")
    mixture = DensityMatrix.from_array(sum(wi * s.mat for wi, s in zip(w, states)))
    lhs = _value(mixture, ref, cfg)
    rhs = float(sum(wi * _value(s, ref, cfg) for wi, s in zip(w, states)))
    convex = lhs <= rhs + cfg.tolerance
    concave = lhs >= rhs - cfg.tolerance
    direction = "equal" if convex and concave else ("convex" if convex else "concave")
    return PropertyReport(
        property=CoherenceProperty.A2,
        passed=True,
        asserted=False,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        direction=direction,
    )


def _require_unitary(u: NDArray) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > MAP_TOL:
        raise MapError("operator is not unitary")


def check_a3(rho: DensityMatrix, unitary: NDArray, ref: OrthonormalBasis, cfg: OptimizerConfig) -> PropertyReport:
    """Unitary covariance: C_KD[U rho U^+; U ref] = C_KD[rho; ref]."""
    _require_unitary(unitary)
    if np.shape(unitary)[0] != rho.dim:
        raise DimensionError("unitary does not match the state dimension")
    rotated = DensityMatrix.from_array(unitary @ rho.mat @ np.asarray(unitary).conj().T)
    lhs = _value(rotated, ref.rotated(unitary), cfg)
    rhs = _value(rho, ref, cfg)
    slack = 2 * cfg.tolerance - abs(lhs - rhs)
    return PropertyReport(property=CoherenceProperty.A3, passed=slack >= 0, lhs=lhs, rhs=rhs, slack=slack)


def check_a4(rho_ab: DensityMatrix, cfg: OptimizerConfig) -> PropertyReport:
    """Partial trace does not increase C_KD (both reductions checked)."""
    if rho_ab.dim != 4:
        raise DimensionError("partial-trace check needs a two-qubit state")
    ref2 = OrthonormalBasis.computational(2)
    ref4 = OrthonormalBasis.computational(4)
    pole = BlochAngles(0.0, 0.0)
    reduced_a = ckd(partial_trace(rho_ab, Subsystem.A), ref2, cfg, Normalization.HALF)
    reduced_b = ckd(partial_trace(rho_ab, Subsystem.B), ref2, cfg, Normalization.HALF)
    # Seeding with (reduced argmax, computational) guarantees the joint search
    # starts from a basis whose table already dominates the reduced one.
    seeds = [
        [reduced_a.argmax_angles[0], pole],
        [pole, reduced_b.argmax_angles[0]],
    ]
    joint = _value(rho_ab, ref4, cfg, seeds=seeds)
    lhs = max(reduced_a.value, reduced_b.value)
    slack = joint + cfg.tolerance - lhs
    return PropertyReport(property=CoherenceProperty.A4, passed=slack >= 0, lhs=lhs, rhs=joint, slack=slack)


def _is_incoherent_operator(op: NDArray, ref: OrthonormalBasis) -> bool:
    local = ref.mat.conj().T @ np.asarray(op) @ ref.mat
    return bool(np.all(np.sum(np.abs(local) > MAP_TOL, axis=0) <= 1))


def check_a5(
    rho: DensityMatrix,
    kraus: Sequence[NDArray],
    ref: OrthonormalBasis,
    cfg: OptimizerConfig,
) -> PropertyReport:
    """Monotonicity under an incoherent CPTP map given by Kraus operators."""
    if kraus_completeness_defect(kraus) > MAP_TOL:
        raise MapError("map is not trace preserving")
    if not all(_is_incoherent_operator(k, ref) for k in kraus):
        raise MapError("map is not incoherent in the reference basis")
    lhs = _value(apply_kraus(rho, kraus), ref, cfg)
    rhs = _value(rho, ref, cfg)
    slack = rhs + cfg.tolerance - lhs
    return PropertyReport(property=CoherenceProperty.A5, passed=slack >= 0, lhs=lhs, rhs=rhs, slack=slack)


def check_property(prop: CoherenceProperty | str, cfg: OptimizerConfig | None = None, **inputs) -> PropertyReport:
    """Dispatch to the A1-A5 checkers by name."""
    cfg = cfg or OptimizerConfig()
    prop = CoherenceProperty(prop)
    ref = inputs.get("ref")
    if prop is CoherenceProperty.A1:
        report = check_a1(inputs["rho"], ref, cfg)
    elif prop is CoherenceProperty.A2:
        report = check_a2(inputs["states"], inputs["weights"], ref, cfg)
    elif prop is CoherenceProperty.A3:
        report = check_a3(inputs["rho"], inputs["unitary"], ref, cfg)
    elif prop is CoherenceProperty.A4:
        report = check_a4(inputs["rho"], cfg)
    else:
        report = check_a5(inputs["rho"], inputs["kraus"], ref, cfg)
    if not report.passed:
        logger.warning(f"property {prop.value} violated: lhs={report.lhs:.12g} rhs={report.rhs:.12g}")
    return report


def incoherent_unitary(dim: int, rng: np.random.Generator) -> NDArray[np.complex128]:
    """Random phased permutation; for two qubits a product of one-qubit ones."""
    if dim == 4:
        return np.kron(incoherent_unitary(2, rng), incoherent_unitary(2, rng))
    perm = np.eye(dim)[rng.permutation(dim)]
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, dim))
    return perm * phases[None, :]


def random_unitary_mixture(dim: int, rng: np.random.Generator, terms: int = 3) -> list[NDArray[np.complex128]]:
    """Kraus form sqrt(p_k) U_k of a random mixture of incoherent unitaries."""
    p = rng.dirichlet(np.ones(terms))
    return [np.sqrt(pk) * incoherent_unitary(dim, rng) for pk in p]


def random_dephasing_kraus(dim: int, rng: np.random.Generator, terms: int = 2) -> list[NDArray[np.complex128]]:
    """Diagonal Kraus operators sum_k K_k^+ K_k = I."""
    weights = rng.dirichlet(np.ones(terms), size=dim)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, (dim, terms)))
    return [np.diag(np.sqrt(weights[:, k]) * phases[:, k]) for k in range(terms)]
