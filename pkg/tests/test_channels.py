import math

import numpy as np
import pytest

from app.core import channels
from app.core.channels import (
    _damp_2q_mat,
    b_analytic,
    b_derivative,
    channel_state,
    channel_states,
    damping_1q,
    damping_2q,
    damping_rate,
    dephase_factor,
    dephasing_1q,
    dephasing_2q,
    gamma_ohmic,
    gamma_sign_changes,
    kernel_lorentzian,
    kraus_damping,
    lamb_shift,
    zeta,
    zeta_closed_form,
    zeta_on_grid,
)
from app.core.exceptions import DimensionError, IntegrationError, ParamError
from app.core.qmath import (
    DensityMatrix,
    apply_kraus,
    bell_state,
    plus_state,
    random_density_matrix,
    tensor,
)
from app.models.channel import (
    ChannelKind,
    ChannelModel,
    LorentzParams,
    OhmicParams,
    TwoQubitDephasingParams,
    build_channel,
)


OHMIC = OhmicParams(s=1.0)
WEAK = LorentzParams(gamma0=0.25, kappa=1.0)
STRONG = LorentzParams(gamma0=5.0, kappa=1.0)


def test_ohmic_rate_and_integral_at_unit_time():
    assert gamma_ohmic(1.0, OHMIC) == pytest.approx(0.5)
    assert zeta(1.0, OHMIC) == pytest.approx(math.log(2) / 2, abs=1e-10)
    assert math.exp(-2 * zeta(1.0, OHMIC)) == pytest.approx(0.5, abs=1e-10)
    assert zeta(0.0, OHMIC) == 0.0


def test_dephase_factor_turns_around_where_rate_changes_sign():
    assert dephase_factor(0.0, OHMIC) == 1.0
    assert dephase_factor(1.0, OHMIC) == pytest.approx(0.5, abs=1e-10)
    p = OhmicParams(s=3.0)
    root = math.sqrt(3)
    before, at, after = (dephase_factor(t, p) for t in (root - 0.5, root, root + 0.5))
    assert before > at
    assert after > at


def test_dephasing_plus_state_at_unit_time():
    rho = dephasing_1q(plus_state(), 1.0, OHMIC)
    assert np.allclose(rho.mat, [[0.5, 0.25], [0.25, 0.5]], atol=1e-10)


@pytest.mark.parametrize(
    "s, expected",
    [
        (0.5, []),
        (1.0, []),
        (2.0, []),
        (2.5, [math.tan(0.4 * math.pi)]),
        (3.0, [math.sqrt(3)]),
        (4.0, [1.0]),
    ],
)
def test_rate_sign_changes(s, expected):
    p = OhmicParams(s=s)
    roots = gamma_sign_changes(30.0, p)
    assert roots == pytest.approx(expected)
    times = np.linspace(0.01, 30.0, 3000)
    rate = gamma_ohmic(times, p)
    assert np.any(rate < 0) == bool(expected)
    for root in roots:
        assert gamma_ohmic(root, p) == pytest.approx(0.0, abs=1e-12)


def test_sign_changes_stop_at_horizon():
    assert gamma_sign_changes(1.5, OhmicParams(s=3.0)) == []


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 2.5, 3.0, 4.0])
def test_quadrature_matches_closed_form(s):
    p = OhmicParams(s=s, omega_c=1.3)
    for t in (0.2, 1.0, 4.0, 25.0):
        assert zeta(t, p) == pytest.approx(zeta_closed_form(t, p), abs=1e-8)
    assert np.all(zeta_closed_form(np.linspace(0, 30, 301), p) >= 0)


def test_zeta_on_grid_accumulates_segments():
    p = OhmicParams(s=3.0)
    times = np.linspace(0.0, 10.0, 41)
    on_grid = zeta_on_grid(times, p)
    assert on_grid[0] == 0.0
    assert np.allclose(on_grid, [zeta(t, p) for t in times], atol=1e-9)
    with pytest.raises(ParamError):
        zeta_on_grid([1.0, 0.5], p)


def test_unconverged_quadrature_raises(monkeypatch):
    monkeypatch.setattr(channels, "QUAD_LIMIT", 1)
    p = OhmicParams(s=0.5)
    with pytest.raises(IntegrationError):
        zeta(1000.0, p)
    with pytest.raises(IntegrationError):
        zeta_on_grid([0.0, 1000.0], p)


def test_literal_rate_is_never_negative():
    times = np.linspace(0.0, 50.0, 2001)
    for s in (2.5, 3.0, 4.0):
        assert np.all(gamma_ohmic(times, OhmicParams(s=s), literal=True) >= 0)


def test_negative_time_is_rejected():
    with pytest.raises(ParamError):
        zeta(-1.0, OHMIC)
    with pytest.raises(ParamError):
        b_analytic(-0.1, WEAK)


def test_b_starts_at_one_with_zero_slope():
    for p in (WEAK, STRONG, LorentzParams(gamma0=1.0, kappa=1.0, varpi=0.5)):
        assert b_analytic(0.0, p) == pytest.approx(1.0)
        assert abs(b_derivative(0.0, p)) < 1e-12
    assert abs(b_derivative(0.0, STRONG, literal=True)) > 1e-3


def test_b_weak_coupling_decays_monotonically():
    times = np.linspace(0.0, 30.0, 3001)
    modulus = np.abs(b_analytic(times, WEAK))
    assert np.all(np.diff(modulus) <= 1e-15)
    assert damping_rate(1.0, WEAK) > 0


def test_b_strong_coupling_revives():
    times = np.linspace(0.0, 10.0, 4001)
    modulus = np.abs(b_analytic(times, STRONG))
    assert np.any(np.diff(modulus) > 1e-6)
    rate = damping_rate(times[1:], STRONG)
    assert np.any(rate[np.isfinite(rate)] < 0)


def test_lamb_shift_follows_phase_of_b():
    times = np.linspace(0.5, 3.0, 2501)
    assert np.allclose(lamb_shift(times, WEAK), 0.0, atol=1e-12)
    p = LorentzParams(gamma0=1.0, kappa=1.0, varpi=0.8)
    phase = np.unwrap(np.angle(b_analytic(times, p)))
    shift = lamb_shift(times, p)
    assert np.max(np.abs(shift)) > 1e-2
    assert np.allclose(shift[1:-1], -2 * np.gradient(phase, times)[1:-1], atol=1e-5)


def test_b_is_continuous_through_degenerate_point():
    exact = LorentzParams(gamma0=1.0, kappa=2.0)
    nearby = LorentzParams(gamma0=1.0, kappa=2.0 * (1 + 1e-7))
    times = np.linspace(0.0, 10.0, 101)
    assert np.allclose(b_analytic(times, exact), b_analytic(times, nearby), atol=1e-5)
    assert np.allclose(b_analytic(times, exact), np.exp(-times) * (1 + times))


def test_b_stays_finite_at_long_times():
    out = b_analytic(np.array([1e3, 1e4]), STRONG)
    assert np.all(np.isfinite(out))
    assert np.all(np.abs(out) < 1e-10)


def test_lorentzian_kernel():
    p = LorentzParams(gamma0=2.0, kappa=1.5, varpi=0.3)
    assert kernel_lorentzian(0.0, p) == pytest.approx(1.5)
    assert kernel_lorentzian(1.0, p) == pytest.approx(1.5 * np.exp(-1.5 + 0.3j))


def test_damping_1q_matches_kraus_form(rng):
    p = LorentzParams(gamma0=2.0, kappa=1.0, varpi=0.7)
    rho0 = random_density_matrix(2, rng)
    for t in (0.3, 1.7, 4.0):
        b = b_analytic(t, p)
        assert np.allclose(damping_1q(rho0, t, p).mat, apply_kraus(rho0, kraus_damping(b)).mat, atol=1e-12)
    excited = DensityMatrix(np.diag([0.0, 1.0]))
    assert damping_1q(excited, 2.0, p).mat[1, 1].real == pytest.approx(abs(b_analytic(2.0, p)) ** 2)


def test_kraus_damping_rejects_amplitude_above_one():
    with pytest.raises(ParamError):
        kraus_damping(1.1)


def test_dephasing_2q_bell_coherence():
    p = TwoQubitDephasingParams(h1=0.2, h2=0.4, ohmic=OHMIC)
    t = 2.0
    rho = dephasing_2q(bell_state(), t, p)
    r = math.exp(-2 * zeta(t, OHMIC))
    assert abs(rho.mat[0, 3]) == pytest.approx(0.5 * r**4)
    assert rho.mat[0, 3] == pytest.approx(0.5 * r**4 * np.exp(-0.6j * t))
    assert np.allclose(np.diag(rho.mat), np.diag(bell_state().mat))


def test_dephasing_2q_keeps_flip_coherence(rng):
    p = TwoQubitDephasingParams(h1=0.3, h2=0.3, ohmic=OhmicParams(s=3.0), coupling=0.1)
    rho0 = random_density_matrix(4, rng)
    out = dephasing_2q(rho0, 3.0, p)
    assert abs(out.mat[1, 2]) == pytest.approx(abs(rho0.mat[1, 2]))
    literal = dephasing_2q(rho0, 3.0, p, literal=True)
    assert abs(literal.mat[1, 2]) < abs(rho0.mat[1, 2])


def test_damping_2q_bell():
    p = LorentzParams(gamma0=3.0, kappa=1.0, varpi=0.4)
    t = 1.3
    b = b_analytic(t, p)
    rho = damping_2q(bell_state(), t, p)
    assert rho.mat[3, 3].real == pytest.approx(abs(b) ** 4 / 2)
    assert rho.mat[3, 0] == pytest.approx(b * b / 2)
    assert abs(rho.mat[0, 3]) == pytest.approx(abs(b) ** 2 / 2)


def test_damping_2q_equals_product_kraus(rng):
    p = LorentzParams(gamma0=2.0, kappa=0.5, varpi=0.2)
    rho0 = random_density_matrix(4, rng)
    for t in (0.4, 2.5):
        ks = kraus_damping(b_analytic(t, p))
        joint = [tensor(a, b) for a in ks for b in ks]
        assert np.allclose(damping_2q(rho0, t, p).mat, apply_kraus(rho0, joint).mat, atol=1e-12)


def test_damping_2q_full_decay(rng):
    out = _damp_2q_mat(random_density_matrix(4, rng).mat, 0.0)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert np.allclose(out, expected)


def test_channel_outputs_are_states(rng):
    models = [
        build_channel("dephase1q", {"s": 3.0}),
        build_channel("damp1q", {"gamma0": 1.0, "kappa_over_gamma0": 0.3, "varpi": 0.5}),
        build_channel("dephase2q", {"s": 2.5, "h1": 0.1, "h2": 0.7, "lambda": 0.2}),
        build_channel("damp2q", {"gamma0": 1.0, "kappa": 0.4}),
    ]
    times = np.linspace(0.0, 12.0, 25)
    for model in models:
        rho0 = random_density_matrix(model.dim, rng)
        states, diagnostic = channel_states(model, rho0, times)
        assert len(states) == len(times) == len(diagnostic)
        assert np.allclose(states[0].mat, rho0.mat, atol=1e-12)
        assert diagnostic[0] == pytest.approx(1.0)
        assert np.allclose(states[7].mat, channel_state(model, rho0, times[7]).mat, atol=1e-9)


def test_channel_dimension_checks():
    model = build_channel("dephase2q", {"s": 1.0, "h1": 0.0, "h2": 0.0})
    with pytest.raises(DimensionError):
        channel_states(model, plus_state(), [0.0, 1.0])
    with pytest.raises(DimensionError):
        damping_1q(bell_state(), 1.0, WEAK)


def test_build_channel_validation():
    with pytest.raises(ParamError):
        build_channel("damp1q", {"gamma0": 1.0})
    with pytest.raises(ParamError):
        build_channel("dephase1q", {"s": -1.0})
    with pytest.raises(ParamError):
        ChannelModel(kind=ChannelKind.DAMP_1Q, params=OHMIC)
    model = build_channel("damp2q", {"gamma0": 2.0, "kappa_over_gamma0": 1.5})
    assert model.params.kappa == pytest.approx(3.0)
    assert not model.params.is_weak_coupling
