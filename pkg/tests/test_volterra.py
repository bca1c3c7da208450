import numpy as np
import pytest

from app.core.channels import b_analytic, kernel_lorentzian
from app.core.exceptions import ParamError, StepSizeError
from app.core.volterra import VolterraSolver, b_volterra
from app.models.channel import LorentzParams


def test_first_step():
    p = LorentzParams(gamma0=2.0, kappa=1.0)
    h = 0.01
    b = b_volterra(np.array([0.0, h]), p)
    g0, g1 = kernel_lorentzian(0.0, p), kernel_lorentzian(h, p)
    assert b[0] == 1.0
    assert b[1] == pytest.approx(1 - h * h * (g0 + g1) / 4, abs=1e-15)
    taylor = 1 - p.gamma0 * p.kappa * h**2 / 4 + p.gamma0 * p.kappa**2 * h**3 / 12
    assert b[1] == pytest.approx(taylor, abs=h**3)
    assert b[1] == pytest.approx(b_analytic(h, p), abs=h**3)


@pytest.mark.parametrize("gamma0, kappa, varpi", [(0.25, 1.0, 0.0), (5.0, 1.0, 0.0), (1.0, 1.0, 0.5)])
def test_agrees_with_closed_form(gamma0, kappa, varpi):
    p = LorentzParams(gamma0=gamma0, kappa=kappa, varpi=varpi)
    times = np.linspace(0.0, 10.0, 10001)
    assert np.max(np.abs(b_volterra(times, p) - b_analytic(times, p))) < 1e-4


def test_decoupled_limit_keeps_amplitude():
    p = LorentzParams(gamma0=1e-9, kappa=1.0)
    b = b_volterra(np.linspace(0.0, 5.0, 501), p)
    assert np.max(np.abs(b - 1.0)) < 1e-8


def test_constant_kernel_gives_oscillation():
    omega = 2.0
    solver = VolterraSolver(lambda tau: np.full(len(tau), omega**2, dtype=np.complex128), 1e-3)
    b = solver.advance(3000)
    times = 1e-3 * np.arange(3001)
    assert np.max(np.abs(b - np.cos(omega * times))) < 1e-4


def test_advancing_in_pieces_matches_one_run():
    p = LorentzParams(gamma0=3.0, kappa=0.8, varpi=0.2)
    kernel = lambda tau: kernel_lorentzian(tau, p)  # noqa: E731
    whole = VolterraSolver(kernel, 0.01).advance(400)
    pieces = VolterraSolver(kernel, 0.01)
    pieces.advance(150)
    assert np.allclose(pieces.advance(250), whole, atol=1e-14)


def test_coarse_step_is_rejected():
    with pytest.raises(StepSizeError):
        b_volterra(np.linspace(0.0, 10.0, 11), LorentzParams(gamma0=1.0, kappa=1.0))


def test_grid_validation():
    p = LorentzParams(gamma0=1.0, kappa=1.0)
    with pytest.raises(ParamError):
        b_volterra(np.array([0.0, 0.01, 0.03]), p)
    with pytest.raises(ParamError):
        b_volterra(np.array([0.1, 0.2, 0.3]), p)
    with pytest.raises(ParamError):
        b_volterra(np.array([0.0]), p)
    with pytest.raises(ParamError):
        VolterraSolver(lambda tau: np.zeros(len(tau)), 0.0)
