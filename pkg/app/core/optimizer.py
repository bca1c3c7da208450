"""Deterministic maximizer over Bloch-angle hypercubes.

A coarse lexicographic grid is evaluated in one vectorized call and its best
point, or a better seed, starts a Nelder-Mead refinement. Among the evaluated
candidates within TIE_TOL of the maximum the smallest canonical angle tuple wins.
"""

from dataclasses import dataclass
import logging
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from app.core.qmath import BlochAngles
from app.models.coherence import OptimizerConfig


logger = logging.getLogger(__name__)

BatchObjective = Callable[[NDArray[np.float64]], NDArray[np.float64]]

TIE_TOL = 1e-12
GRID_CHUNK = 8192


@dataclass(frozen=True)
class AngleSearchResult:
	angles: NDArray[np.float64]
	value: float
	evaluations: int


def angle_grid(qubits: int, points: int) -> NDArray[np.float64]:
	"""Rows (alpha_1, beta_1, ..., alpha_q, beta_q) in lexicographic order."""
	alpha = np.linspace(0.0, np.pi, points)
	beta = np.linspace(0.0, 2 * np.pi, points, endpoint=False)
	axes = [alpha, beta] * qubits
	mesh = np.meshgrid(*axes, indexing="ij")
	return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _evaluate_chunked(objective: BatchObjective, points: NDArray) -> NDArray[np.float64]:
	return np.concatenate([objective(points[i:i + GRID_CHUNK]) for i in range(0, len(points), GRID_CHUNK)])


def _canonical(x: NDArray) -> tuple[float, ...]:
	pairs = (BlochAngles.wrapped(x[2 * q], x[2 * q + 1]) for q in range(len(x) // 2))
	return tuple(v for angles in pairs for v in angles.as_tuple())


def maximize_angles(
	objective: BatchObjective,
	qubits: int,
	cfg: OptimizerConfig,
	seeds: Sequence[Sequence[float]] = (),
) -> AngleSearchResult:
	points = cfg.grid_points if qubits == 1 else cfg.grid_points_two_qubit
	grid = angle_grid(qubits, points)
	values = _evaluate_chunked(objective, grid)
	evaluations = len(grid)

	# Grid rows are canonical and lexicographic, so the first tie is the smallest.
	best_idx = int(np.flatnonzero(values >= values.max() - TIE_TOL)[0])
	candidates = [(grid[best_idx], float(values[best_idx]))]
	if seeds:
		seed_arr = np.asarray(seeds, dtype=float).reshape(len(seeds), 2 * qubits)
		seed_values = objective(seed_arr)
		evaluations += len(seed_arr)
		candidates.extend((x, float(v)) for x, v in zip(seed_arr, seed_values))
	start, start_value = max(candidates, key=lambda c: c[1])
	if start_value <= candidates[0][1] + TIE_TOL:
		start = candidates[0][0]

	spacing = np.pi / max(points - 1, 1)
	simplex = np.vstack([start] + [start + 0.5 * spacing * e for e in np.eye(2 * qubits)])
	res = minimize(
		lambda x: -float(objective(x[None, :])[0]),
		start,
		method="Nelder-Mead",
		options={
			"initial_simplex": simplex,
			"maxiter": cfg.refine_iters * 2 * qubits,
			"xatol": 1e-9,
			"fatol": cfg.tolerance * 1e-3,
		},
	)
	evaluations += int(res.nfev)
	candidates.append((np.asarray(res.x, dtype=float), float(-res.fun)))

	# Ties are broken among evaluated points only.
	top = max(value for _, value in candidates)
	best_x, best_value = min(
		((np.asarray(_canonical(x)), value) for x, value in candidates if value >= top - TIE_TOL),
		key=lambda c: tuple(c[0]),
	)
	logger.debug(f"angle search: {evaluations} evaluations, best {best_value:.12g}")
	return AngleSearchResult(angles=best_x, value=best_value, evaluations=evaluations)
