"""Numerical oracle for the damping amplitude.

Solves dB/dt = -int_0^t G(t - u) B(u) du, B(0) = 1, on a uniform grid with
trapezoidal history quadrature and a Heun predictor-corrector step.
"""

import logging
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.core.channels import kernel_lorentzian
from app.core.exceptions import ParamError, StepSizeError
from app.models.channel import LorentzParams


logger = logging.getLogger(__name__)

MAX_STEP_KAPPA = 0.5
GRID_TOL = 1e-9

Kernel = Callable[[NDArray[np.float64]], NDArray[np.complex128]]


class VolterraSolver:
	"""One run of the integro-differential solver.

	History (B_j, dB_j) grows as the solver steps; instances are not meant to
	be shared between threads.
	"""

	def __init__(self, kernel: Kernel, step: float, rate_scale: float | None = None):
		if step <= 0:
			raise ParamError(f"step must be > 0, got {step}")
		if rate_scale is not None and step * rate_scale > MAX_STEP_KAPPA:
			raise StepSizeError(f"step {step:.3g} too coarse for kernel decay rate {rate_scale:.3g}")
		self.kernel = kernel
		self.step = step
		self._g = np.zeros(0, dtype=np.complex128)
		self.b = np.ones(1, dtype=np.complex128)
		self.db = np.zeros(1, dtype=np.complex128)

	def _ensure_kernel(self, n: int) -> None:
		if len(self._g) < n:
			self._g = np.asarray(self.kernel(self.step * np.arange(n)), dtype=np.complex128)

	def advance(self, steps: int) -> NDArray[np.complex128]:
		"""Take ``steps`` more steps; returns the full history."""
		start = len(self.b) - 1
		total = start + steps
		self._ensure_kernel(total + 1)
		g, h = self._g, self.step
		b = np.concatenate([self.b, np.zeros(steps, dtype=np.complex128)])
		db = np.concatenate([self.db, np.zeros(steps, dtype=np.complex128)])
		half_g0 = 0.5 * h * g[0]
		for n in range(start, total):
			# Known part of the trapezoid rule for the integral at t_{n+1}.
			known = h * (0.5 * g[n + 1] * b[0] + np.dot(g[n:0:-1], b[1:n + 1]))
			predicted = b[n] + h * db[n]
			db_pred = -(known + half_g0 * predicted)
			b[n + 1] = b[n] + 0.5 * h * (db[n] + db_pred)
			db[n + 1] = -(known + half_g0 * b[n + 1])
		self.b, self.db = b, db
		return b


def b_volterra(times: ArrayLike, p: LorentzParams) -> NDArray[np.complex128]:
	"""B(t) on a uniform grid starting at 0, Lorentzian kernel."""
	times = np.asarray(times, dtype=float)
	if times.ndim != 1 or len(times) < 2 or times[0] != 0.0:
		raise ParamError("grid must hold at least two times and start at 0")
	steps = np.diff(times)
	h = float(steps[0])
	if h <= 0 or np.max(np.abs(steps - h)) > GRID_TOL * max(1.0, times[-1]):
		raise ParamError("grid must be uniform and increasing")
	solver = VolterraSolver(lambda tau: kernel_lorentzian(tau, p), h, rate_scale=p.kappa)
	out = solver.advance(len(times) - 1)
	logger.debug(f"volterra: {len(times) - 1} steps of {h:.3g} for gamma0={p.gamma0}, kappa={p.kappa}")
	return out
