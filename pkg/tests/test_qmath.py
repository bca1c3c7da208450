import numpy as np
import pytest

from app.core.exceptions import BasisError, DimensionError, KrausError, NormalizationError, StateError
from app.core.qmath import (
    BlochAngles,
    DensityMatrix,
    OrthonormalBasis,
    Subsystem,
    angle_stack_to_bases,
    apply_kraus,
    bell_state,
    bloch_unitary,
    density_from_pure,
    is_density_matrix,
    partial_trace,
    plus_state,
    product_basis,
    random_density_matrix,
    random_unitary,
    tensor,
)


def test_density_matrix_rejects_bad_inputs():
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(3) / 3)
    with pytest.raises(NormalizationError):
        DensityMatrix(np.eye(2))
    with pytest.raises(StateError):
        DensityMatrix(np.array([[0.5, 0.5], [0.1, 0.5]]))
    with pytest.raises(StateError):
        DensityMatrix(np.array([[1.5, 0.0], [0.0, -0.5]]))


def test_density_matrix_is_immutable():
    rho = plus_state()
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1.0


def test_from_array_removes_roundoff_asymmetry():
    arr = np.array([[0.5, 0.5 + 1e-14j], [0.5, 0.5]])
    rho = DensityMatrix.from_array(arr)
    assert np.allclose(rho.mat, rho.mat.conj().T, atol=0)


def test_is_density_matrix():
    assert is_density_matrix(np.diag([0.25, 0.75]))
    assert not is_density_matrix(np.diag([1.25, -0.25]))
    assert not is_density_matrix(np.eye(3) / 3)


def test_density_from_pure_checks_norm():
    with pytest.raises(NormalizationError):
        density_from_pure(np.array([1.0, 1.0]))


def test_partial_trace_of_product_state(rng):
    a = random_density_matrix(2, rng)
    b = random_density_matrix(2, rng)
    joint = DensityMatrix.from_array(tensor(a.mat, b.mat))
    assert np.allclose(partial_trace(joint, Subsystem.A).mat, a.mat, atol=1e-12)
    assert np.allclose(partial_trace(joint, "B").mat, b.mat, atol=1e-12)


def test_partial_trace_of_bell_is_maximally_mixed():
    assert np.allclose(partial_trace(bell_state(), Subsystem.A).mat, np.eye(2) / 2)
    with pytest.raises(DimensionError):
        partial_trace(plus_state(), Subsystem.A)


def test_apply_kraus_validation(rng):
    rho = random_density_matrix(2, rng)
    with pytest.raises(KrausError):
        apply_kraus(rho, [])
    with pytest.raises(KrausError):
        apply_kraus(rho, [0.5 * np.eye(2)])
    with pytest.raises(DimensionError):
        apply_kraus(rho, [np.eye(4)])
    u = random_unitary(2, rng)
    out = apply_kraus(rho, [u])
    assert np.allclose(out.mat, u @ rho.mat @ u.conj().T)


def test_bloch_unitary_is_unitary():
    for alpha, beta in [(0.0, 0.0), (np.pi / 2, np.pi / 2), (2.1, 5.9)]:
        u = bloch_unitary(alpha, beta)
        assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-14)


def test_angle_stack_matches_product_basis():
    a, b = BlochAngles(0.3, 1.1), BlochAngles(2.0, 4.0)
    stack = angle_stack_to_bases(np.array([[0.3, 1.1, 2.0, 4.0]]))
    assert np.allclose(stack[0], product_basis(a, b).mat)


def test_bloch_angles_ranges_and_wrapping():
    with pytest.raises(BasisError):
        BlochAngles(4.0, 0.0)
    with pytest.raises(BasisError):
        BlochAngles(1.0, 2 * np.pi)
    wrapped = BlochAngles.wrapped(2 * np.pi - 0.5, 0.2)
    assert wrapped.alpha == pytest.approx(0.5)
    assert wrapped.beta == pytest.approx(0.2 + np.pi)


def test_wrapped_angles_span_the_same_basis():
    raw = bloch_unitary(2 * np.pi - 0.7, 1.3)
    folded = BlochAngles.wrapped(2 * np.pi - 0.7, 1.3)
    canon = bloch_unitary(folded.alpha, folded.beta)
    # Same vectors up to a phase per column.
    overlaps = np.abs(canon.conj().T @ raw)
    assert np.allclose(np.sort(overlaps, axis=None)[-2:], 1.0, atol=1e-12)


def test_orthonormal_basis_rejects_non_orthonormal():
    with pytest.raises(BasisError):
        OrthonormalBasis(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DimensionError):
        OrthonormalBasis(np.eye(3))


def test_random_states_are_valid(rng):
    for dim in (2, 4):
        for rank in (1, dim):
            rho = random_density_matrix(dim, rng, rank=rank)
            assert np.linalg.matrix_rank(rho.mat, tol=1e-10) == rank
