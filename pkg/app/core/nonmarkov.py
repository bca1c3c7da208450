"""Coherence trajectories and the positive-variation non-Markovianity measure."""

import asyncio
import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad
from scipy.optimize import brentq

from app.core.channels import (
    b_analytic,
    b_derivative,
    channel_states,
    gamma_ohmic,
    gamma_sign_changes,
    zeta_closed_form,
)
from app.core.coherence import ckd, ckd_fixed, l1_coherence, second_basis_from_angles
from app.core.config import settings
from app.core.exceptions import IntegrationError, KDError, ParamError
from app.core.kdq import NonclassicalityVariant, nonclassicality
from app.core.qmath import (
    BlochAngles,
    DensityMatrix,
    OrthonormalBasis,
    bell_state,
    density_from_pure,
    plus_state,
)
from app.models.channel import ChannelKind, ChannelModel, LorentzParams, OhmicParams, build_channel
from app.models.coherence import Normalization, OptimizerConfig
from app.models.trajectory import (
    BasisMode,
    CoherenceTrajectory,
    InitialStateMode,
    MeasureResult,
    SweepRow,
    SweepSpec,
    TimeGrid,
)

logger = logging.getLogger(__name__)

ROOT_SCAN_POINTS = 20000
ROOT_RTOL = 1e-10


def fiducial_state(kind: ChannelKind) -> DensityMatrix:
    """|+> for one-qubit channels, the Bell state |00> + |11> for two."""
    return plus_state() if ChannelKind(kind).dim == 2 else bell_state()


def trajectory(
    channel: ChannelModel,
    rho0: DensityMatrix,
    grid: TimeGrid,
    basis_mode: BasisMode | None = None,
    cfg: OptimizerConfig | None = None,
    normalization: Normalization = Normalization.PER_DIMENSION,
    nc_variant: NonclassicalityVariant = NonclassicalityVariant.LITERAL,
) -> CoherenceTrajectory:
    """Evaluate C_KD, l1 coherence and N_c at every grid sample."""
    basis_mode = basis_mode or BasisMode.canonical()
    cfg = cfg or OptimizerConfig()
    if rho0.dim != channel.dim:
        raise ParamError(f"{channel.kind.value} acts on dim {channel.dim}, initial state has dim {rho0.dim}")
    states, diagnostic = channel_states(channel, rho0, grid.times)
    ref = OrthonormalBasis.computational(channel.dim)
    fixed_angles = basis_mode.angles_for(channel.kind)

    ckd_values = np.empty(grid.n)
    nc_values = np.empty(grid.n)
    l1_values = np.array([l1_coherence(rho, ref) for rho in states])
    argmax: List[List[BlochAngles]] = []

    if fixed_angles is not None:
        second = second_basis_from_angles(ref, fixed_angles)
        for i, rho in enumerate(states):
            ckd_values[i] = ckd_fixed(rho, ref, second, normalization)
            nc_values[i] = nonclassicality(rho, ref, second, nc_variant)
    else:
        previous: Optional[List[BlochAngles]] = None
        for i, rho in enumerate(states):
            # Neighbouring samples share nearly the same optimum.
            found = ckd(rho, ref, cfg, normalization, seeds=[previous] if previous else ())
            previous = found.argmax_angles
            argmax.append(found.argmax_angles)
            ckd_values[i] = found.value
            nc_values[i] = nonclassicality(rho, ref, second_basis_from_angles(ref, found.argmax_angles), nc_variant)
    logger.info(f"trajectory {channel.kind.value}: {grid.n} samples, basis {basis_mode.kind.value}")
    return CoherenceTrajectory(
        grid=grid,
        ckd=ckd_values,
        l1=l1_values,
        nc=nc_values,
        diagnostic=diagnostic,
        channel=channel,
        initial_state=rho0,
        basis_mode=basis_mode,
        normalization=normalization,
        argmax_angles=argmax,
    )


def positive_variation(values: Sequence[float], grid: TimeGrid | Sequence[float]) -> MeasureResult:
    """Sum of rises of a sampled curve, with the maximal ascending runs.

    This is the integral of the positive slope of the piecewise-linear
    interpolant.
    """
    values = np.asarray(values, dtype=float)
    times = grid.times if isinstance(grid, TimeGrid) else np.asarray(grid, dtype=float)
    if values.ndim != 1 or len(values) < 2:
        raise ParamError("positive variation needs at least two samples")
    if times.shape != values.shape:
        raise ParamError(f"{len(values)} values on {len(times)} times")
    diffs = np.diff(values)
    rising = diffs > 0
    total = float(diffs[rising].sum())

    intervals = []
    edges = np.flatnonzero(np.diff(np.concatenate([[0], rising.astype(np.int8), [0]])))
    for start, stop in zip(edges[::2], edges[1::2]):
        intervals.append((float(times[start]), float(times[stop])))
    return MeasureResult(n_ckd=total, ascending_intervals=intervals)


def measure_from_trajectory(traj: CoherenceTrajectory) -> MeasureResult:
    result = positive_variation(traj.ckd, traj.grid)
    return result.model_copy(
        update={
            "n_cl1": positive_variation(traj.l1, traj.grid).n_ckd,
            "n_nc": positive_variation(traj.nc, traj.grid).n_ckd,
        }
    )


def n_ckd(
    channel: ChannelModel,
    rho0: DensityMatrix,
    grid: TimeGrid,
    basis_mode: BasisMode | None = None,
    cfg: OptimizerConfig | None = None,
    normalization: Normalization = Normalization.PER_DIMENSION,
) -> MeasureResult:
    return measure_from_trajectory(trajectory(channel, rho0, grid, basis_mode, cfg, normalization))


def n_ckd_exhaustive(
    channel: ChannelModel,
    grid: TimeGrid,
    basis_mode: BasisMode | None = None,
    cfg: OptimizerConfig | None = None,
    points: int = 8,
    normalization: Normalization = Normalization.PER_DIMENSION,
) -> tuple[MeasureResult, BlochAngles]:
    """Maximize the measure over pure single-qubit initial states on a Bloch grid.

    The poles are incoherent and skipped.
    """
    if channel.dim != 2:
        raise ParamError("exhaustive initial-state search is only available for one-qubit channels")
    best: Optional[tuple[MeasureResult, BlochAngles]] = None
    for theta in np.linspace(0.0, np.pi, points + 1)[1:-1]:
        for phi in np.linspace(0.0, 2 * np.pi, points, endpoint=False):
            psi = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
            result = n_ckd(channel, density_from_pure(psi), grid, basis_mode, cfg, normalization)
            if best is None or result.n_ckd > best[0].n_ckd:
                best = (result, BlochAngles(float(theta), float(phi)))
    logger.info(f"exhaustive search on {channel.kind.value}: best n_ckd {best[0].n_ckd:.6g}")
    return best


# ----------------------------------------------------------- analytic paths


def _negative_rate_intervals(p: OhmicParams, t_max: float) -> list[tuple[float, float]]:
    """Intervals of (0, t_max) where the ohmic rate is negative."""
    knots = [0.0, *gamma_sign_changes(t_max, p), t_max]
    return [(a, b) for k, (a, b) in enumerate(zip(knots[:-1], knots[1:])) if k % 2 == 1]


def _backflow_integral(p: OhmicParams, t_max: float, weight: float) -> float:
    total = 0.0
    for a, b in _negative_rate_intervals(p, t_max):
        value, _err, _info, *problem = quad(
            lambda t: -weight * gamma_ohmic(t, p) * math.exp(-2.0 * zeta_closed_form(t, p)),
            a,
            b,
            epsabs=1e-12,
            limit=200,
            full_output=1,
        )
        if problem:
            raise IntegrationError(f"backflow integral on [{a:.6g}, {b:.6g}] did not converge: {problem[0]}")
        total += value
    return total


def n_ckd_dephasing_analytic(p: OhmicParams, t_max: float) -> float:
    """-int gamma R over the negative-rate intervals, for C_KD = R/2."""
    if t_max <= 0:
        raise ParamError(f"t_max must be > 0, got {t_max}")
    return _backflow_integral(p, t_max, 1.0)


def n_cl1_dephasing_analytic(p: OhmicParams, t_max: float) -> float:
    if t_max <= 0:
        raise ParamError(f"t_max must be > 0, got {t_max}")
    return _backflow_integral(p, t_max, 2.0)


def _rising_intervals(slope: Callable[[NDArray], NDArray], t_max: float, samples: int) -> list[tuple[float, float]]:
    """Where ``slope`` > 0 on [0, t_max], endpoints refined with brentq."""
    t = np.linspace(0.0, t_max, samples)
    f = slope(t)
    roots = []
    for i in np.flatnonzero(f[:-1] * f[1:] < 0):
        roots.append(brentq(lambda x: float(slope(np.array([x]))[0]), t[i], t[i + 1], rtol=ROOT_RTOL))
    knots = [0.0, *roots, t_max]
    intervals = []
    for a, b in zip(knots[:-1], knots[1:]):
        if slope(np.array([0.5 * (a + b)]))[0] > 0:
            intervals.append((a, b))
    return intervals


def damping_ascending_intervals(p: LorentzParams, t_max: float, samples: int = ROOT_SCAN_POINTS) -> list[tuple[float, float]]:
    """Intervals where |B| increases; d|B|/dt has the sign of Re(conj(B) B')."""
    return _rising_intervals(lambda t: np.real(np.conj(b_analytic(t, p)) * b_derivative(t, p)), t_max, samples)


def n_ckd_damping_analytic(p: LorentzParams, t_max: float, two_qubit: bool = False) -> float:
    """Sum of rises of |B|/2, or of |B|^2/4 for the two-qubit channel."""
    if t_max <= 0:
        raise ParamError(f"t_max must be > 0, got {t_max}")

    def curve(t: float) -> float:
        b = abs(complex(b_analytic(t, p)))
        return b * b / 4 if two_qubit else b / 2

    return float(sum(curve(b) - curve(a) for a, b in damping_ascending_intervals(p, t_max)))


# -------------------------------------------------------------------- sweeps


def _sweep_row(spec: SweepSpec, value: float, cfg: OptimizerConfig) -> SweepRow:
    channel = build_channel(spec.kind, {**spec.fixed, spec.param: float(value)})
    if spec.initial_state is InitialStateMode.EXHAUSTIVE:
        result, _ = n_ckd_exhaustive(channel, spec.grid, spec.basis, cfg, normalization=spec.normalization)
    else:
        result = n_ckd(channel, fiducial_state(spec.kind), spec.grid, spec.basis, cfg, spec.normalization)
    return SweepRow(param_value=float(value), n_ckd=result.n_ckd, n_cl1=result.n_cl1)


async def sweep_async(
    spec: SweepSpec,
    cfg: OptimizerConfig | None = None,
    workers: int | None = None,
) -> List[SweepRow]:
    """Evaluate the measure at every sweep point; rows come back in parameter order.

    A failing point is kept as a row carrying the error message.
    """
    cfg = cfg or OptimizerConfig()
    semaphore = asyncio.Semaphore(workers or settings.SWEEP_WORKERS)

    async def run_row(index: int, value: float) -> tuple[int, SweepRow]:
        async with semaphore:
            try:
                row = await asyncio.to_thread(_sweep_row, spec, value, cfg)
            except KDError as e:
                logger.warning(f"sweep point {spec.param}={value:.6g} failed: {e}")
                row = SweepRow(param_value=float(value), error=str(e), error_type=type(e))
            return index, row

    results = await asyncio.gather(*(run_row(i, v) for i, v in enumerate(spec.values)))
    rows = [row for _, row in sorted(results, key=lambda pair: pair[0])]
    logger.info(f"sweep {spec.kind.value} over {spec.param}: {len(rows)} rows, {sum(not r.ok for r in rows)} failed")
    return rows


def sweep(spec: SweepSpec, cfg: OptimizerConfig | None = None, workers: int | None = None) -> List[SweepRow]:
    return asyncio.run(sweep_async(spec, cfg, workers))
