"""Randomized check suites behind the ``check`` command."""

from collections import Counter
import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from app.core.channels import b_analytic, b_derivative, kraus_damping
from app.core.kdq import kd_marginals, kd_table, reconstruct_state
from app.core.properties import (
    check_a1,
    check_a2,
    check_a3,
    check_a4,
    check_a5,
    random_dephasing_kraus,
    random_unitary_mixture,
)
from app.core.qmath import (
    OrthonormalBasis,
    density_from_pure,
    random_density_matrix,
    random_diagonal_state,
    random_pure_state,
    random_unitary,
)
from app.core.volterra import b_volterra
from app.models.channel import LorentzParams
from app.models.coherence import OptimizerConfig, PropertyReport
from app.models.run import CheckRow, Suite

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES: Dict[Suite, int] = {
    Suite.A1: 1000,
    Suite.A2: 100,
    Suite.A3: 100,
    Suite.A4: 200,
    Suite.A5: 1000,
    Suite.KD_INVARIANTS: 10000,
    Suite.ORACLE_VOLTERRA: 3,
}

ORACLE_TRIPLES = [(0.25, 1.0, 0.0), (5.0, 1.0, 0.0), (1.0, 1.0, 0.5)]
ORACLE_TOL = 1e-4
KD_TOL = 1e-9
MIN_OVERLAP = 1e-3


def _summary(suite: Suite, name: str, reports: List[PropertyReport]) -> CheckRow:
    failures = sum(not r.passed for r in reports)
    worst = min((r.slack for r in reports), default=0.0)
    return CheckRow(
        suite=suite,
        name=name,
        passed=failures == 0,
        value=worst,
        detail=f"{len(reports)} cases, {failures} violation(s), min slack {worst:.3e}",
    )


def _a1(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    ref2, ref4 = OrthonormalBasis.computational(2), OrthonormalBasis.computational(4)
    incoherent, coherent = [], []
    for i in range(samples):
        # Every tenth case is a two-qubit state.
        dim, ref = (4, ref4) if i % 10 == 9 else (2, ref2)
        if i % 2:
            incoherent.append(check_a1(random_diagonal_state(dim, rng), ref, cfg))
        else:
            coherent.append(check_a1(random_density_matrix(dim, rng), ref, cfg))
    return [
        _summary(Suite.A1, "incoherent states give zero", incoherent),
        _summary(Suite.A1, "coherent states give a positive value", coherent),
    ]


def _a2(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    ref = OrthonormalBasis.computational(2)
    directions: Counter = Counter()
    for _ in range(samples):
        states = [random_density_matrix(2, rng), random_density_matrix(2, rng)]
        p = float(rng.uniform())
        directions[check_a2(states, [p, 1 - p], ref, cfg).direction] += 1
    detail = ", ".join(f"{k} {directions.get(k, 0)}" for k in ("convex", "equal", "concave"))
    return [CheckRow(suite=Suite.A2, name="mixture vs mixed values", passed=True, asserted=False, value=float(directions.get("concave", 0)), detail=detail)]


def _a3(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    ref = OrthonormalBasis.computational(2)
    reports = [check_a3(random_density_matrix(2, rng), random_unitary(2, rng), ref, cfg) for _ in range(samples)]
    return [_summary(Suite.A3, "unitary covariance", reports)]


def _a4(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    reports = [check_a4(random_density_matrix(4, rng), cfg) for _ in range(samples)]
    return [_summary(Suite.A4, "partial trace does not increase", reports)]


def _a5(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    ref = OrthonormalBasis.computational(2)
    reports = []
    for i in range(samples):
        rho = random_density_matrix(2, rng)
        kind = i % 3
        if kind == 0:
            kraus = random_unitary_mixture(2, rng)
        elif kind == 1:
            kraus = random_dephasing_kraus(2, rng)
        else:
            kraus = kraus_damping(np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        reports.append(check_a5(rho, kraus, ref, cfg))
    return [_summary(Suite.A5, "monotone under incoherent maps", reports)]


def _kd_invariants(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    worst_total = worst_marginal = worst_reconstruction = 0.0
    skipped = 0
    for i in range(samples):
        dim = 2 if i % 2 == 0 else 4
        # Draws come in pairs of dimensions; every second pair is pure.
        rho = density_from_pure(random_pure_state(dim, rng)) if i % 4 >= 2 else random_density_matrix(dim, rng)
        mu = OrthonormalBasis(random_unitary(dim, rng))
        nu = OrthonormalBasis(random_unitary(dim, rng))
        table = kd_table(rho, mu, nu)
        worst_total = max(worst_total, abs(table.total - 1.0))
        p_mu, p_nu = kd_marginals(table)
        expected_mu = np.real(np.diag(mu.mat.conj().T @ rho.mat @ mu.mat))
        expected_nu = np.real(np.diag(nu.mat.conj().T @ rho.mat @ nu.mat))
        worst_marginal = max(worst_marginal, np.max(np.abs(p_mu - expected_mu)), np.max(np.abs(p_nu - expected_nu)))
        if np.min(np.abs(mu.mat.conj().T @ nu.mat)) < MIN_OVERLAP:
            skipped += 1
            continue
        worst_reconstruction = max(worst_reconstruction, float(np.max(np.abs(reconstruct_state(table).mat - rho.mat))))
    return [
        CheckRow(suite=Suite.KD_INVARIANTS, name="normalization", passed=worst_total <= KD_TOL, value=worst_total, detail=f"{samples} draws"),
        CheckRow(suite=Suite.KD_INVARIANTS, name="marginals", passed=worst_marginal <= KD_TOL, value=float(worst_marginal)),
        CheckRow(
            suite=Suite.KD_INVARIANTS,
            name="reconstruction",
            passed=worst_reconstruction <= 1e-8,
            value=worst_reconstruction,
            detail=f"{skipped} draw(s) skipped for near-zero overlap",
        ),
    ]


def _oracle_volterra(samples: int, rng: np.random.Generator, cfg: OptimizerConfig) -> List[CheckRow]:
    rows = []
    for gamma0, kappa, varpi in ORACLE_TRIPLES[:samples]:
        p = LorentzParams(gamma0=gamma0, kappa=kappa, varpi=varpi)
        h = 1e-3 / kappa
        times = h * np.arange(int(round(10.0 / kappa / h)) + 1)
        deviation = float(np.max(np.abs(b_volterra(times, p) - b_analytic(times, p))))
        rows.append(
            CheckRow(
                suite=Suite.ORACLE_VOLTERRA,
                name=f"gamma0={gamma0:g} kappa={kappa:g} varpi={varpi:g}",
                passed=deviation <= ORACLE_TOL,
                value=deviation,
                detail=f"max |B_volterra - B_analytic| over {len(times)} steps",
            )
        )
        slope = abs(complex(b_derivative(0.0, p)))
        literal_slope = abs(complex(b_derivative(0.0, p, literal=True)))
        rows.append(
            CheckRow(
                suite=Suite.ORACLE_VOLTERRA,
                name=f"initial slope gamma0={gamma0:g}",
                passed=slope <= 1e-12 and literal_slope > 1e-3,
                value=slope,
                detail=f"|B'(0)| = {slope:.2e}; printed sinh coefficient gives {literal_slope:.3g}",
            )
        )
    return rows


_RUNNERS: Dict[Suite, Callable[[int, np.random.Generator, OptimizerConfig], List[CheckRow]]] = {
    Suite.A1: _a1,
    Suite.A2: _a2,
    Suite.A3: _a3,
    Suite.A4: _a4,
    Suite.A5: _a5,
    Suite.KD_INVARIANTS: _kd_invariants,
    Suite.ORACLE_VOLTERRA: _oracle_volterra,
}


def run_suite(suite: Suite | str, samples: Optional[int] = None, seed: int = 7, cfg: OptimizerConfig | None = None) -> List[CheckRow]:
    suite = Suite(suite)
    samples = samples or DEFAULT_SAMPLES[suite]
    logger.info(f"running check suite {suite.value} with {samples} sample(s)")
    rows = _RUNNERS[suite](samples, np.random.default_rng(seed), cfg or OptimizerConfig())
    for row in rows:
        if row.asserted and not row.passed:
            logger.warning(f"{suite.value}: {row.name} failed ({row.detail})")
    return rows
