import numpy as np
import pytest

from app.core.coherence import ckd, ckd_fixed, ckd_raw_fixed, l1_coherence, second_basis_from_angles
from app.core.exceptions import DimensionError
from app.core.optimizer import angle_grid, maximize_angles
from app.core.kdq import kd_imag_l1_batch
from app.core.qmath import (
    BlochAngles,
    DensityMatrix,
    OrthonormalBasis,
    bell_state,
    plus_state,
    product_basis,
    random_density_matrix,
    random_diagonal_state,
    random_unitary,
)
from app.models.coherence import Normalization, OptimizerConfig


def test_plus_state_reaches_half(ref2, cfg):
    result = ckd(plus_state(), ref2, cfg)
    assert result.value == pytest.approx(0.5, abs=1e-9)
    assert result.raw_value == pytest.approx(1.0, abs=1e-9)
    assert result.argmax_angles[0].alpha == pytest.approx(np.pi / 2, abs=1e-4)


def test_qubit_value_is_modulus_of_coherence(rng, ref2, cfg):
    for _ in range(25):
        rho = random_density_matrix(2, rng)
        assert ckd(rho, ref2, cfg).value == pytest.approx(abs(rho.mat[0, 1]), abs=1e-9)


def test_optimum_is_relative_to_reference(rng, cfg):
    rho = random_density_matrix(2, rng)
    ref = OrthonormalBasis(random_unitary(2, rng))
    local = ref.mat.conj().T @ rho.mat @ ref.mat
    assert ckd(rho, ref, cfg).value == pytest.approx(abs(local[0, 1]), abs=1e-9)


def test_incoherent_states_vanish(rng, ref2, ref4, cfg):
    assert ckd(random_diagonal_state(2, rng), ref2, cfg).value < 1e-12
    assert ckd(random_diagonal_state(4, rng), ref4, cfg).value < 1e-12


def test_normalizations_differ_only_on_two_qubits(rng, ref2, ref4, coarse_cfg):
    rho2 = random_density_matrix(2, rng)
    half = ckd(rho2, ref2, coarse_cfg, Normalization.HALF).value
    per_dim = ckd(rho2, ref2, coarse_cfg, Normalization.PER_DIMENSION).value
    assert half == pytest.approx(per_dim)

    rho4 = bell_state()
    half4 = ckd(rho4, ref4, coarse_cfg, Normalization.HALF)
    per_dim4 = ckd(rho4, ref4, coarse_cfg, "per-dimension")
    assert per_dim4.value == pytest.approx(half4.value / 2, rel=1e-6)
    assert half4.value > 0.1


def test_fixed_basis_values(ref2, ref4):
    y = second_basis_from_angles(ref2, [BlochAngles(np.pi / 2, np.pi / 2)])
    assert ckd_fixed(plus_state(), ref2, y) == pytest.approx(0.5)
    # A real Bell coherence leaves the Hadamard-product table real.
    hh = second_basis_from_angles(ref4, [BlochAngles(np.pi / 2, 0.0)] * 2)
    assert ckd_raw_fixed(bell_state(), ref4, hh) == pytest.approx(0.0, abs=1e-15)


def test_second_basis_matches_product_basis(ref4):
    a, b = BlochAngles(0.4, 1.0), BlochAngles(1.9, 3.3)
    assert np.allclose(second_basis_from_angles(ref4, [a, b]).mat, product_basis(a, b).mat)
    with pytest.raises(DimensionError):
        second_basis_from_angles(ref4, [a])


def test_seeds_never_lower_the_result(rng, ref4, coarse_cfg):
    rho = random_density_matrix(4, rng)
    plain = ckd(rho, ref4, coarse_cfg)
    seeded = ckd(rho, ref4, coarse_cfg, seeds=[plain.argmax_angles])
    assert seeded.value >= plain.value - 1e-12


def test_dimension_mismatch(ref4, cfg):
    with pytest.raises(DimensionError):
        ckd(plus_state(), ref4, cfg)
    with pytest.raises(DimensionError):
        l1_coherence(plus_state(), ref4)


def test_l1_coherence(ref2, ref4):
    assert l1_coherence(plus_state(), ref2) == pytest.approx(1.0)
    assert l1_coherence(bell_state(), ref4) == pytest.approx(1.0)
    assert l1_coherence(DensityMatrix(np.diag([0.2, 0.8])), ref2) == 0.0


def test_angle_grid_order():
    grid = angle_grid(1, 4)
    assert grid.shape == (16, 2)
    assert np.all(grid[0] == 0.0)
    assert grid[1, 0] == 0.0 and grid[1, 1] == pytest.approx(np.pi / 2)


def test_maximizer_takes_first_of_tied_grid_points():
    cfg = OptimizerConfig(grid_points=5, refine_iters=1)
    flat = lambda rows: np.zeros(len(rows))  # noqa: E731
    found = maximize_angles(flat, 1, cfg)
    assert found.value == 0.0
    assert np.allclose(found.angles, 0.0)


def test_maximizer_finds_smooth_peak():
    target = np.array([1.1, 2.5])
    peak = lambda rows: -np.sum((np.atleast_2d(rows) - target) ** 2, axis=1)  # noqa: E731
    found = maximize_angles(peak, 1, OptimizerConfig())
    assert np.allclose(found.angles, target, atol=1e-4)


def test_qubit_value_is_bounded_by_half_l1(rng, ref2, cfg):
    for _ in range(10):
        rho = random_density_matrix(2, rng)
        assert ckd(rho, ref2, cfg).value <= 0.5 * l1_coherence(rho, ref2) + 1e-8


def test_value_ignores_phases_of_basis_vectors(rng, ref2, cfg):
    for dim in (2, 4):
        rho = random_density_matrix(dim, rng)
        mu = OrthonormalBasis(random_unitary(dim, rng))
        nu = OrthonormalBasis(random_unitary(dim, rng))
        phases = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, dim)))
        other = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, dim)))
        phased = ckd_fixed(rho, OrthonormalBasis(mu.mat @ phases), OrthonormalBasis(nu.mat @ other))
        assert phased == pytest.approx(ckd_fixed(rho, mu, nu), abs=1e-10)

    rho = random_density_matrix(2, rng)
    phased_ref = OrthonormalBasis(ref2.mat @ np.diag(np.exp(1j * np.array([0.4, -1.9]))))
    assert ckd(rho, phased_ref, cfg).value == pytest.approx(ckd(rho, ref2, cfg).value, abs=1e-9)


def test_optimizer_beats_random_bases(rng, ref2, cfg):
    for _ in range(3):
        rho = random_density_matrix(2, rng)
        z = (rng.standard_normal((200_000, 2, 2)) + 1j * rng.standard_normal((200_000, 2, 2))) / np.sqrt(2)
        q, _ = np.linalg.qr(z)
        best_random = 0.5 * float(np.max(kd_imag_l1_batch(rho.mat, ref2.mat, q)))
        assert ckd(rho, ref2, cfg).value >= best_random - 1e-6


def test_tie_break_survives_refinement(cfg):
    def ridge(x):
        return 1.0 - (x[:, 1] - 1.0) ** 2

    found = maximize_angles(ridge, 1, cfg, seeds=[(0.0, 1.0 + 1e-7)])
    assert found.value == pytest.approx(1.0, abs=1e-12)
    assert found.angles[0] == 0.0
    assert 0.0 <= found.angles[1] < 2 * np.pi
