"""Kirkwood-Dirac quasiprobability tables and the scalar functionals built on them."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DimensionError, MarginalError, OverlapError
from app.core.qmath import ComplexMatrix, DensityMatrix, OrthonormalBasis


MARGINAL_IMAG_TOL = 1e-8
OVERLAP_TOL = 1e-8


class NonclassicalityVariant(str, Enum):
	LITERAL = "literal"
	CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class KDTable:
	"""entries[mu, nu] = <nu|mu><mu|rho|nu>."""

	entries: ComplexMatrix
	basis_mu: OrthonormalBasis
	basis_nu: OrthonormalBasis

	def __post_init__(self) -> None:
		entries = np.array(self.entries, dtype=np.complex128, copy=True)
		entries.flags.writeable = False
		object.__setattr__(self, "entries", entries)
		d = self.basis_mu.dim
		if self.basis_nu.dim != d or entries.shape != (d, d):
			raise DimensionError(f"table shape {entries.shape} does not match basis dimensions")

	@property
	def dim(self) -> int:
		return self.entries.shape[0]

	@property
	def total(self) -> complex:
		return complex(self.entries.sum())


def _check_dims(rho: DensityMatrix, *bases: OrthonormalBasis) -> None:
	for basis in bases:
		if basis.dim != rho.dim:
			raise DimensionError(f"basis dim {basis.dim} does not match state dim {rho.dim}")


def kd_entries(rho_mat: NDArray, mu: NDArray, nu: NDArray) -> NDArray[np.complex128]:
	overlaps = mu.conj().T @ nu
	return overlaps.conj() * (mu.conj().T @ rho_mat @ nu)


def kd_table(rho: DensityMatrix, basis_mu: OrthonormalBasis, basis_nu: OrthonormalBasis) -> KDTable:
	_check_dims(rho, basis_mu, basis_nu)
	return KDTable(kd_entries(rho.mat, basis_mu.mat, basis_nu.mat), basis_mu, basis_nu)


def kd_entries_batch(rho_mat: NDArray, mu: NDArray, nu_stack: NDArray) -> NDArray[np.complex128]:
	"""KD tables for a stack of second bases, shape (n, d, d)."""
	mu_h = mu.conj().T
	overlaps = np.einsum("ij,njk->nik", mu_h, nu_stack)
	weighted = np.einsum("ij,njk->nik", mu_h @ rho_mat, nu_stack)
	return overlaps.conj() * weighted


def kd_imag_l1_batch(rho_mat: NDArray, mu: NDArray, nu_stack: NDArray) -> NDArray[np.float64]:
	return np.abs(kd_entries_batch(rho_mat, mu, nu_stack).imag).sum(axis=(1, 2))


def kd_marginals(table: KDTable) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
	"""Return (mu probabilities, nu probabilities)."""
	mu_probs = table.entries.sum(axis=1)
	nu_probs = table.entries.sum(axis=0)
	residual = max(np.max(np.abs(mu_probs.imag)), np.max(np.abs(nu_probs.imag)))
	if residual > MARGINAL_IMAG_TOL:
		raise MarginalError(f"marginal has imaginary residue {residual:.3e}; table is corrupted")
	return mu_probs.real.copy(), nu_probs.real.copy()


def reconstruct_state(table: KDTable) -> DensityMatrix:
	mu, nu = table.basis_mu.mat, table.basis_nu.mat
	overlaps = mu.conj().T @ nu
	smallest = float(np.min(np.abs(overlaps)))
	if smallest <= OVERLAP_TOL:
		raise OverlapError(f"bases have a vanishing overlap ({smallest:.3e}); state cannot be reconstructed")
	return DensityMatrix.from_array(mu @ (table.entries / overlaps.conj()) @ nu.conj().T)


def imag_l1(table: KDTable) -> float:
	return float(np.abs(table.entries.imag).sum())


def nonclassicality(
	rho: DensityMatrix,
	basis_mu: OrthonormalBasis,
	basis_nu: OrthonormalBasis,
	variant: NonclassicalityVariant | str = NonclassicalityVariant.LITERAL,
) -> float:
	"""Negativity plus nonreality of the KD decomposition.

	``literal`` sums |Re| and |Im| of the interference terms k != i with the
	projector indexed by the outer j. ``closed_form`` keeps the k = i terms
	and applies a global 1/d, so it equals (1/d) * sum(|Re P| + |Im P|).
	"""
	_check_dims(rho, basis_mu, basis_nu)
	variant = NonclassicalityVariant(variant)
	entries = kd_entries(rho.mat, basis_mu.mat, basis_nu.mat)
	if variant is NonclassicalityVariant.CLOSED_FORM:
		return float((np.abs(entries.real) + np.abs(entries.imag)).sum() / rho.dim)
	local = basis_mu.mat.conj().T @ rho.mat @ basis_mu.mat
	overlaps = basis_mu.mat.conj().T @ basis_nu.mat
	diagonal_terms = np.diag(local)[:, None] * np.abs(overlaps) ** 2
	interference = entries - diagonal_terms
	return float((np.abs(interference.real) + np.abs(interference.imag)).sum())
