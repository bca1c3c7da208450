"""Open-system channel maps for one and two qubits.

Dephasing is driven by the zero-temperature ohmic rate gamma(t) and its
integral zeta(t); amplitude damping by the complex amplitude B(t) of a
Lorentzian reservoir. Basis order is the computational one, |0> the ground
state, |1> excited; two-qubit index 2a + b for |ab>.
"""

import logging
import math
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from app.core.exceptions import DimensionError, IntegrationError, ParamError
from app.core.qmath import DensityMatrix
from app.models.channel import (
	ChannelKind,
	ChannelModel,
	LorentzParams,
	OhmicParams,
	TwoQubitDephasingParams,
)


logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-10
QUAD_LIMIT = 200
DEGENERATE_TOL = 1e-10
S_ONE_TOL = 1e-8


def _check_time(t: ArrayLike) -> None:
	if np.any(np.asarray(t, dtype=float) < 0):
		raise ParamError("time must be >= 0")


# ---------------------------------------------------------------- dephasing


def gamma_ohmic(t: ArrayLike, p: OhmicParams, literal: bool = False) -> NDArray[np.float64] | float:
	"""Time-dependent dephasing rate of the ohmic-family reservoir.

	``literal=True`` drops the ohmicity from the sine argument; that form is
	never negative and so never produces backflow.
	"""
	_check_time(t)
	x = p.omega_c * np.asarray(t, dtype=float)
	theta = np.arctan(x)
	phase = theta if literal else p.s * theta
	out = p.omega_c * gamma_fn(p.s) * np.sin(phase) / (1.0 + x * x) ** (p.s / 2)
	return float(out) if np.ndim(out) == 0 else out


def gamma_sign_changes(t_max: float, p: OhmicParams) -> list[float]:
	"""Zeros of gamma in (0, t_max): s * arctan(w_c t) = k pi."""
	roots = []
	k = 1
	while k * math.pi / p.s < math.pi / 2:
		root = math.tan(k * math.pi / p.s) / p.omega_c
		if root >= t_max:
			break
		roots.append(root)
		k += 1
	return roots


def _scalar_rate(p: OhmicParams, literal: bool) -> Callable[[float], float]:
	"""gamma_ohmic on plain floats, for the quadrature inner loop."""
	scale = p.omega_c * math.gamma(p.s)
	k = 1.0 if literal else p.s

	def rate(v: float) -> float:
		x = p.omega_c * v
		return scale * math.sin(k * math.atan(x)) / (1.0 + x * x) ** (p.s / 2)

	return rate


def _quad_segment(p: OhmicParams, a: float, b: float, literal: bool) -> float:
	out = quad(
		_scalar_rate(p, literal),
		a,
		b,
		epsabs=QUAD_EPSABS,
		limit=QUAD_LIMIT,
		full_output=1,
	)
	if len(out) > 3:
		raise IntegrationError(f"quadrature of gamma on [{a:.6g}, {b:.6g}] did not converge: {out[3]}")
	return float(out[0])


def _breakpoints(t: float, p: OhmicParams, literal: bool) -> list[float]:
	inner = [] if literal else gamma_sign_changes(t, p)
	return [0.0, *inner, t]


def zeta(t: float, p: OhmicParams, literal: bool = False) -> float:
	"""Integrated rate, split at the sign changes of gamma."""
	_check_time(t)
	t = float(t)
	if t == 0.0:
		return 0.0
	points = _breakpoints(t, p, literal)
	logger.debug(f"zeta(t={t:.6g}, s={p.s}): {len(points) - 1} segment(s)")
	return sum(_quad_segment(p, a, b, literal) for a, b in zip(points[:-1], points[1:]))


def zeta_closed_form(t: ArrayLike, p: OhmicParams) -> NDArray[np.float64] | float:
	"""Exact antiderivative of the ohmic rate."""
	_check_time(t)
	x = p.omega_c * np.asarray(t, dtype=float)
	if abs(p.s - 1.0) < S_ONE_TOL:
		out = 0.5 * np.log1p(x * x)
	else:
		m = p.s - 1.0
		out = gamma_fn(m) * (1.0 - np.cos(m * np.arctan(x)) / (1.0 + x * x) ** (m / 2))
	return float(out) if np.ndim(out) == 0 else out


def zeta_on_grid(times: Sequence[float], p: OhmicParams, literal: bool = False) -> NDArray[np.float64]:
	"""zeta at every grid time by cumulative segment quadrature."""
	times = np.asarray(times, dtype=float)
	_check_time(times)
	if np.any(np.diff(times) < 0):
		raise ParamError("grid times must be non-decreasing")
	t_end = float(times[-1]) if len(times) else 0.0
	knots = np.unique(np.concatenate([[0.0], times, _breakpoints(t_end, p, literal)[1:-1]]))
	pieces = [_quad_segment(p, a, b, literal) for a, b in zip(knots[:-1], knots[1:])]
	cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
	return cumulative[np.searchsorted(knots, times)]


def dephase_factor(t: float, p: OhmicParams, literal: bool = False) -> float:
	return math.exp(-2.0 * zeta(t, p, literal))


def _dephase_1q_mat(mat: NDArray, r: float) -> NDArray[np.complex128]:
	out = np.array(mat, dtype=np.complex128)
	out[0, 1] *= r
	out[1, 0] *= r
	return out


def dephasing_1q(rho0: DensityMatrix, t: float, p: OhmicParams, literal: bool = False) -> DensityMatrix:
	_require_dim(rho0, 2)
	return DensityMatrix.from_array(_dephase_1q_mat(rho0.mat, dephase_factor(t, p, literal)))


def dephasing_2q_factors(t: float, z: float, p: TwoQubitDephasingParams, literal: bool = False) -> NDArray[np.complex128]:
	"""Elementwise multiplier F with rho(t) = F * rho(0); F is Hermitian."""
	h1, h2, lam = p.h1, p.h2, p.coupling
	f = np.ones((4, 4), dtype=np.complex128)
	f[0, 3] = np.exp(-1j * (h1 + h2) * t - 8.0 * z)
	f[1, 2] = np.exp(-1j * (h1 - h2) * t - (2.0 * z if literal else 0.0))
	f[0, 1] = np.exp(-1j * (lam + h2) * t - 2.0 * z)
	f[0, 2] = np.exp(-1j * (lam + h1) * t - 2.0 * z)
	f[1, 3] = np.exp(1j * (lam - h1) * t - 2.0 * z)
	f[2, 3] = np.exp(1j * (lam - h2) * t - 2.0 * z)
	upper = np.triu_indices(4, 1)
	f[upper[1], upper[0]] = f[upper].conj()
	return f


def dephasing_2q(rho0: DensityMatrix, t: float, p: TwoQubitDephasingParams, literal: bool = False) -> DensityMatrix:
	"""Collective s_z dephasing of two coupled qubits.

	The |01>,|10> coherence has zero total-spin difference and keeps its
	modulus unless ``literal`` is set.
	"""
	_require_dim(rho0, 4)
	z = zeta(t, p.ohmic)
	return DensityMatrix.from_array(dephasing_2q_factors(t, z, p, literal) * rho0.mat)


# ------------------------------------------------------------ amplitude damping


def _b_parts(p: LorentzParams) -> tuple[complex, complex]:
	"""(kappa - i varpi, Delta) with Re Delta >= 0."""
	a = complex(p.kappa, -p.varpi)
	delta = np.sqrt(a * a - 2.0 * p.gamma0 * p.kappa + 0j)
	return a, delta


def b_analytic(t: ArrayLike, p: LorentzParams, literal: bool = False) -> NDArray[np.complex128] | complex:
	"""Excited-state amplitude B(t), B(0) = 1.

	Written with the two decaying exponentials separately so that large t
	stays finite. ``literal=True`` uses (kappa - i varpi)/2 as the sinh
	coefficient, which gives a nonzero initial slope.
	"""
	_check_time(t)
	tt = np.asarray(t, dtype=float)
	a, delta = _b_parts(p)
	if abs(delta) < DEGENERATE_TOL and not literal:
		out = np.exp(-a * tt / 2) * (1.0 + a * tt / 2)
	else:
		coef = a / 2 if literal else a / delta
		e1 = np.exp((delta - a) * tt / 2)
		e2 = np.exp(-(delta + a) * tt / 2)
		out = 0.5 * (e1 + e2) + coef * 0.5 * (e1 - e2)
	return complex(out) if np.ndim(out) == 0 else out


def b_derivative(t: ArrayLike, p: LorentzParams, literal: bool = False) -> NDArray[np.complex128] | complex:
	_check_time(t)
	tt = np.asarray(t, dtype=float)
	a, delta = _b_parts(p)
	if abs(delta) < DEGENERATE_TOL and not literal:
		out = -(a * a) * tt / 4 * np.exp(-a * tt / 2)
	else:
		coef = a / 2 if literal else a / delta
		e1 = (delta - a) / 2 * np.exp((delta - a) * tt / 2)
		e2 = -(delta + a) / 2 * np.exp(-(delta + a) * tt / 2)
		out = 0.5 * (e1 + e2) + coef * 0.5 * (e1 - e2)
	return complex(out) if np.ndim(out) == 0 else out


def damping_rate(t: ArrayLike, p: LorentzParams) -> NDArray[np.float64] | float:
	"""Decay rate -2 Re(B'/B) of the time-local master equation; infinite at zeros of B."""
	with np.errstate(divide="ignore", invalid="ignore"):
		out = -2.0 * np.real(np.asarray(b_derivative(t, p)) / np.asarray(b_analytic(t, p)))
	return float(out) if np.ndim(out) == 0 else out


def lamb_shift(t: ArrayLike, p: LorentzParams) -> NDArray[np.float64] | float:
	with np.errstate(divide="ignore", invalid="ignore"):
		out = -2.0 * np.imag(np.asarray(b_derivative(t, p)) / np.asarray(b_analytic(t, p)))
	return float(out) if np.ndim(out) == 0 else out


def kernel_lorentzian(tau: ArrayLike, p: LorentzParams) -> NDArray[np.complex128] | complex:
	"""Reservoir correlation function of the Lorentzian spectral density."""
	_check_time(tau)
	out = 0.5 * p.gamma0 * p.kappa * np.exp(-complex(p.kappa, -p.varpi) * np.asarray(tau, dtype=float))
	return complex(out) if np.ndim(out) == 0 else out


def kraus_damping(b: complex) -> list[NDArray[np.complex128]]:
	b2 = abs(b) ** 2
	if b2 > 1.0 + 1e-12:
		raise ParamError(f"|B|^2 = {b2:.12g} exceeds 1")
	k1 = np.array([[1.0, 0.0], [0.0, b]], dtype=np.complex128)
	k2 = np.array([[0.0, math.sqrt(max(0.0, 1.0 - b2))], [0.0, 0.0]], dtype=np.complex128)
	return [k1, k2]


def _damp_1q_mat(r: NDArray, b: complex) -> NDArray[np.complex128]:
	b2 = abs(b) ** 2
	out = np.empty((2, 2), dtype=np.complex128)
	out[1, 1] = b2 * r[1, 1]
	out[0, 0] = 1.0 - out[1, 1]
	out[0, 1] = np.conj(b) * r[0, 1]
	out[1, 0] = b * r[1, 0]
	return out


def damping_1q(rho0: DensityMatrix, t: float, p: LorentzParams) -> DensityMatrix:
	_require_dim(rho0, 2)
	return DensityMatrix.from_array(_damp_1q_mat(rho0.mat, complex(b_analytic(t, p))))


# Element k of the excited-first labelling |11>, |10>, |01>, |00> sits at index _EX[k].
_EX = (None, 3, 2, 1, 0)


def _damp_2q_mat(r: NDArray, b: complex) -> NDArray[np.complex128]:
	b2 = abs(b) ** 2
	g = lambda i, j: r[_EX[i], _EX[j]]  # noqa: E731
	upper = {
		(1, 1): b2 * b2 * g(1, 1),
		(2, 2): b2 * (1 - b2) * g(1, 1) + b2 * g(2, 2),
		(3, 3): b2 * (1 - b2) * g(1, 1) + b2 * g(3, 3),
		(1, 2): b2 * b * g(1, 2),
		(1, 3): b2 * b * g(1, 3),
		(1, 4): b * b * g(1, 4),
		(2, 3): b2 * g(2, 3),
		(2, 4): b * (1 - b2) * g(1, 3) + b * g(2, 4),
		(3, 4): b * (1 - b2) * g(1, 2) + b * g(3, 4),
	}
	upper[(4, 4)] = 1.0 - (upper[(1, 1)] + upper[(2, 2)] + upper[(3, 3)]).real
	out = np.empty((4, 4), dtype=np.complex128)
	for (i, j), value in upper.items():
		out[_EX[i], _EX[j]] = value
		out[_EX[j], _EX[i]] = np.conj(value)
	for k in range(1, 5):
		out[_EX[k], _EX[k]] = out[_EX[k], _EX[k]].real
	return out


def damping_2q(rho0: DensityMatrix, t: float, p: LorentzParams) -> DensityMatrix:
	"""Independent amplitude damping of two qubits in a common Lorentzian reservoir model.

	Same map as the Kraus set K_i (x) K_j of ``kraus_damping``.
	"""
	_require_dim(rho0, 4)
	return DensityMatrix.from_array(_damp_2q_mat(rho0.mat, complex(b_analytic(t, p))))


# ------------------------------------------------------------------ dispatch


def _require_dim(rho: DensityMatrix, dim: int) -> None:
	if rho.dim != dim:
		raise DimensionError(f"channel acts on dim {dim}, got a dim {rho.dim} state")


def channel_state(model: ChannelModel, rho0: DensityMatrix, t: float) -> DensityMatrix:
	"""Evolve ``rho0`` to time ``t`` under ``model``."""
	kind = model.kind
	if kind is ChannelKind.DEPHASE_1Q:
		return dephasing_1q(rho0, t, model.params)
	if kind is ChannelKind.DAMP_1Q:
		return damping_1q(rho0, t, model.params)
	if kind is ChannelKind.DEPHASE_2Q:
		return dephasing_2q(rho0, t, model.params)
	return damping_2q(rho0, t, model.params)


def channel_states(
	model: ChannelModel,
	rho0: DensityMatrix,
	times: Sequence[float],
) -> tuple[list[DensityMatrix], NDArray[np.float64]]:
	"""States on a whole grid plus the channel diagnostic (R or |B|) per sample.

	zeta is accumulated once over the grid instead of re-integrated per time.
	"""
	_require_dim(rho0, model.dim)
	times = np.asarray(times, dtype=float)
	kind = model.kind
	if kind.is_dephasing:
		ohmic = model.params if kind is ChannelKind.DEPHASE_1Q else model.params.ohmic
		z = zeta_on_grid(times, ohmic)
		diagnostic = np.exp(-2.0 * z)
		if kind is ChannelKind.DEPHASE_1Q:
			mats = [_dephase_1q_mat(rho0.mat, r) for r in diagnostic]
		else:
			mats = [dephasing_2q_factors(t, zi, model.params) * rho0.mat for t, zi in zip(times, z)]
	else:
		b = np.asarray(b_analytic(times, model.params))
		diagnostic = np.abs(b)
		step = _damp_1q_mat if kind is ChannelKind.DAMP_1Q else _damp_2q_mat
		mats = [step(rho0.mat, complex(bi)) for bi in b]
	logger.debug(f"{kind.value}: evolved {len(times)} samples")
	return [DensityMatrix.from_array(m) for m in mats], diagnostic
