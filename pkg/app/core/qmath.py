"""Dense complex linear algebra and quantum-state primitives.

Everything here works on dimensions 2 and 4 only. Values are immutable: the
backing arrays are copied on construction and marked read-only.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import (
	BasisError,
	DimensionError,
	KrausError,
	NormalizationError,
	StateError,
)


ComplexMatrix = NDArray[np.complex128]

SUPPORTED_DIMS = (2, 4)
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
ORTHONORMAL_TOL = 1e-12
NORM_TOL = 1e-10
KRAUS_TOL = 1e-10


def _frozen(arr: NDArray) -> ComplexMatrix:
	out = np.array(arr, dtype=np.complex128, copy=True)
	out.flags.writeable = False
	return out


class Subsystem(str, Enum):
	A = "A"
	B = "B"


@dataclass(frozen=True)
class DensityMatrix:
	"""Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4."""

	mat: ComplexMatrix

	def __post_init__(self) -> None:
		mat = _frozen(self.mat)
		object.__setattr__(self, "mat", mat)
		if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] not in SUPPORTED_DIMS:
			raise DimensionError(f"density matrix must be 2x2 or 4x4, got shape {mat.shape}")
		if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
			raise StateError("density matrix is not Hermitian")
		trace = np.trace(mat)
		if abs(trace - 1.0) > TRACE_TOL:
			raise NormalizationError(f"density matrix trace is {trace.real:.12g}, expected 1")
		if np.min(np.linalg.eigvalsh(mat)) < -PSD_TOL:
			raise StateError("density matrix has a negative eigenvalue")

	@classmethod
	def from_array(cls, arr: NDArray) -> "DensityMatrix":
		"""Build from a numerically Hermitian array, removing roundoff asymmetry."""
		arr = np.asarray(arr, dtype=np.complex128)
		if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
			arr = 0.5 * (arr + arr.conj().T)
		return cls(arr)

	@property
	def dim(self) -> int:
		return self.mat.shape[0]

	def is_diagonal_in(self, basis: "OrthonormalBasis", tol: float = 1e-12) -> bool:
		local = basis.mat.conj().T @ self.mat @ basis.mat
		return bool(np.max(np.abs(local - np.diag(np.diag(local)))) <= tol)


@dataclass(frozen=True)
class OrthonormalBasis:
	"""Ordered orthonormal basis; vector k is column k of ``mat``."""

	mat: ComplexMatrix

	def __post_init__(self) -> None:
		mat = _frozen(self.mat)
		object.__setattr__(self, "mat", mat)
		if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] not in SUPPORTED_DIMS:
			raise DimensionError(f"basis must hold 2 or 4 vectors of matching length, got shape {mat.shape}")
		gram = mat.conj().T @ mat
		if np.max(np.abs(gram - np.eye(mat.shape[0]))) > ORTHONORMAL_TOL:
			raise BasisError("basis vectors are not orthonormal")

	@classmethod
	def from_vectors(cls, vectors: Sequence[NDArray]) -> "OrthonormalBasis":
		return cls(np.column_stack([np.asarray(v, dtype=np.complex128) for v in vectors]))

	@classmethod
	def computational(cls, dim: int) -> "OrthonormalBasis":
		return cls(np.eye(dim, dtype=np.complex128))

	@property
	def dim(self) -> int:
		return self.mat.shape[0]

	@property
	def vectors(self) -> list[NDArray[np.complex128]]:
		return [self.mat[:, k] for k in range(self.dim)]

	def rotated(self, unitary: NDArray) -> "OrthonormalBasis":
		return OrthonormalBasis(np.asarray(unitary) @ self.mat)


@dataclass(frozen=True)
class BlochAngles:
	alpha: float
	beta: float

	def __post_init__(self) -> None:
		if not 0.0 <= self.alpha <= np.pi:
			raise BasisError(f"alpha={self.alpha} outside [0, pi]")
		if not 0.0 <= self.beta < 2 * np.pi:
			raise BasisError(f"beta={self.beta} outside [0, 2pi)")

	@classmethod
	def wrapped(cls, alpha: float, beta: float) -> "BlochAngles":
		"""Map arbitrary angles onto the canonical ranges.

		(2pi - alpha, beta + pi) spans the same basis up to a global phase on
		the first vector, so folding alpha into [0, pi] leaves every KD
		quantity unchanged.
		"""
		alpha = float(np.mod(alpha, 2 * np.pi))
		beta = float(beta)
		if alpha > np.pi:
			alpha = 2 * np.pi - alpha
			beta += np.pi
		beta = float(np.mod(beta, 2 * np.pi))
		if beta >= 2 * np.pi:
			beta = 0.0
		return cls(alpha=alpha, beta=beta)

	def as_tuple(self) -> tuple[float, float]:
		return (self.alpha, self.beta)


def density_from_pure(psi: NDArray) -> DensityMatrix:
	psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
	norm = np.linalg.norm(psi)
	if abs(norm - 1.0) > NORM_TOL:
		raise NormalizationError(f"state vector has norm {norm:.12g}, expected 1")
	return DensityMatrix.from_array(np.outer(psi, psi.conj()))


def is_density_matrix(arr: NDArray) -> bool:
	try:
		DensityMatrix(arr)
	except (DimensionError, StateError, NormalizationError):
		return False
	return True


def tensor(a: NDArray, b: NDArray) -> NDArray[np.complex128]:
	return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(rho: DensityMatrix, keep: Subsystem | str) -> DensityMatrix:
	if rho.dim != 4:
		raise DimensionError(f"partial trace needs a two-qubit state, got dim {rho.dim}")
	keep = Subsystem(keep)
	r = rho.mat.reshape(2, 2, 2, 2)
	if keep is Subsystem.A:
		reduced = np.einsum("ijkj->ik", r)
	else:
		reduced = np.einsum("ijil->jl", r)
	return DensityMatrix.from_array(reduced)


def kraus_completeness_defect(kraus: Sequence[NDArray]) -> float:
	dim = np.asarray(kraus[0]).shape[0]
	total = sum(np.asarray(k).conj().T @ np.asarray(k) for k in kraus)
	return float(np.max(np.abs(total - np.eye(dim))))


def apply_kraus(rho: DensityMatrix, kraus: Sequence[NDArray]) -> DensityMatrix:
	if not kraus:
		raise KrausError("empty Kraus set")
	for k in kraus:
		if np.shape(k) != rho.mat.shape:
			raise DimensionError(f"Kraus operator shape {np.shape(k)} does not match state {rho.mat.shape}")
	defect = kraus_completeness_defect(kraus)
	if defect > KRAUS_TOL:
		raise KrausError(f"Kraus operators are not complete (max defect {defect:.3e})")
	out = sum(np.asarray(k) @ rho.mat @ np.asarray(k).conj().T for k in kraus)
	return DensityMatrix.from_array(out)


def bloch_unitary(alpha: float, beta: float) -> NDArray[np.complex128]:
	"""Columns cos(a/2)|0> + e^{ib} sin(a/2)|1> and sin(a/2)|0> - e^{ib} cos(a/2)|1>."""
	c, s = np.cos(alpha / 2), np.sin(alpha / 2)
	phase = np.exp(1j * beta)
	return np.array([[c, s], [phase * s, -phase * c]], dtype=np.complex128)


def bloch_basis(angles: BlochAngles) -> OrthonormalBasis:
	return OrthonormalBasis(bloch_unitary(angles.alpha, angles.beta))


def product_basis(first: BlochAngles, second: BlochAngles) -> OrthonormalBasis:
	"""Two-qubit basis |nu_1 +-> (x) |nu_2 +-> in (++, +-, -+, --) order."""
	return OrthonormalBasis(tensor(bloch_unitary(*first.as_tuple()), bloch_unitary(*second.as_tuple())))


def bloch_unitary_batch(alpha: NDArray, beta: NDArray) -> NDArray[np.complex128]:
	"""Stack of 2x2 Bloch unitaries, shape (n, 2, 2)."""
	alpha = np.asarray(alpha, dtype=float)
	beta = np.asarray(beta, dtype=float)
	c, s = np.cos(alpha / 2), np.sin(alpha / 2)
	phase = np.exp(1j * beta)
	out = np.empty(alpha.shape + (2, 2), dtype=np.complex128)
	out[..., 0, 0] = c
	out[..., 0, 1] = s
	out[..., 1, 0] = phase * s
	out[..., 1, 1] = -phase * c
	return out


def angle_stack_to_bases(angles: NDArray) -> NDArray[np.complex128]:
	"""(n, 2q) angle rows (alpha_1, beta_1, ...) -> (n, 2^q, 2^q) basis stack."""
	angles = np.atleast_2d(np.asarray(angles, dtype=float))
	qubits = angles.shape[1] // 2
	out = bloch_unitary_batch(angles[:, 0], angles[:, 1])
	for q in range(1, qubits):
		nxt = bloch_unitary_batch(angles[:, 2 * q], angles[:, 2 * q + 1])
		n, d = out.shape[0], out.shape[1]
		out = np.einsum("nij,nkl->nikjl", out, nxt).reshape(n, 2 * d, 2 * d)
	return out


def plus_state() -> DensityMatrix:
	return density_from_pure(np.array([1.0, 1.0]) / np.sqrt(2))


def bell_state() -> DensityMatrix:
	return density_from_pure(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))


def random_unitary(dim: int, rng: np.random.Generator) -> NDArray[np.complex128]:
	"""Haar-random unitary via QR of a Ginibre matrix."""
	z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
	q, r = np.linalg.qr(z)
	d = np.diag(r)
	return q * (d / np.abs(d))


def random_pure_state(dim: int, rng: np.random.Generator) -> NDArray[np.complex128]:
	psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
	return psi / np.linalg.norm(psi)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
	"""Ginibre-ensemble mixed state (Hilbert-Schmidt measure at full rank)."""
	rank = rank or dim
	g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
	rho = g @ g.conj().T
	return DensityMatrix.from_array(rho / np.trace(rho).real)


def random_diagonal_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
	p = rng.dirichlet(np.ones(dim))
	return DensityMatrix(np.diag(p).astype(np.complex128))
