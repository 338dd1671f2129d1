"""Envelope, grid policy, and memory kernel of the chirped Lorentzian bath."""

import numpy as np
import pytest
from scipy.integrate import quad

from chirped_bath import (
    BathGrid,
    ModelParams,
    ValidationError,
    build_grid,
    chirped_detuning,
    coupling_at,
    rabi_frequency,
    structure_function,
    two_time_kernel,
    xi,
)
from oracles import kernel_oracle


def _wide_grid(spacing: float = 0.02, half: float = 300.0) -> BathGrid:
    n = int(round(half / spacing))
    return BathGrid(detunings=spacing * np.arange(-n, n + 1), spacing=spacing)


def test_params_validation():
    with pytest.raises(ValidationError):
        ModelParams(d=0.0)
    with pytest.raises(ValidationError):
        ModelParams(d=-1.0)
    with pytest.raises(ValidationError):
        ModelParams(d=1.0, gamma_si=-2.0e7)
    ModelParams(d=1.0, chi=-5.0)  # negative chirp is a legitimate sweep direction


def test_structure_function_peak_and_halfwidth():
    p = ModelParams(d=1.0)
    assert structure_function(0.0, p) == pytest.approx(1.0 / np.pi, rel=1e-12)
    assert structure_function(1.0, p) == pytest.approx(1.0 / (2.0 * np.pi), rel=1e-12)
    assert structure_function(-3.7, p) == structure_function(3.7, p)


def test_structure_function_normalization():
    """The envelope integrates to d^2 over a wide window."""
    p = ModelParams(d=8.0)
    total, _ = quad(lambda w: structure_function(w, p), -1e4, 1e4, points=[0.0], limit=200)
    assert abs(total - 64.0) / 64.0 < 1e-3


def test_chirped_detuning_linear_law():
    assert chirped_detuning(5.0, 0.0, 20.0) == 5.0
    assert chirped_detuning(-2.0, 0.1, 20.0) == pytest.approx(0.0, abs=1e-12)
    assert chirped_detuning(0.0, 1.0, 8.4) == pytest.approx(8.4)


def test_coupling_envelope_value():
    p = ModelParams(d=8.0)
    grid = build_grid(p, 1.0)
    g0 = coupling_at(0.0, 0.0, grid, p)
    assert g0 == pytest.approx(np.sqrt(0.1 * 64.0 / np.pi), rel=1e-12)
    assert g0 == pytest.approx(1.4273, abs=1e-4)


def test_coupling_sum_rule_time_independent():
    """Sum of g_k^2 over a wide fine grid reproduces d^2 at any instant;
    the Lorentzian tail outside +-300 carries only ~2 d^2/(300 pi)."""
    p = ModelParams(d=8.0, chi=20.0)
    grid = _wide_grid()
    for t in (0.0, 0.7):
        total = np.sum(coupling_at(grid.detunings, t, grid, p) ** 2)
        assert abs(total - 64.0) / 64.0 < 5e-3


def test_coupling_resonant_mode_is_maximal():
    p = ModelParams(d=8.0, chi=20.0)
    grid = _wide_grid()
    g = coupling_at(grid.detunings, 0.7, grid, p)
    assert np.argmax(g) == np.argmin(np.abs(grid.detunings + 20.0 * 0.7))


def test_coupling_translation_covariance():
    # only the combination delta0 + chi*t enters
    p = ModelParams(d=8.0, chi=20.0)
    grid = _wide_grid()
    assert coupling_at(-14.0, 0.7, grid, p) == pytest.approx(
        coupling_at(0.0, 0.0, grid, p), rel=1e-9
    )


def test_coupling_outside_window_rejected():
    p = ModelParams(d=8.0)
    grid = build_grid(p, 1.0)
    with pytest.raises(ValidationError):
        coupling_at(1000.0, 0.0, grid, p)


def test_grid_validation():
    with pytest.raises(ValidationError):
        BathGrid(detunings=np.array([0.0, 0.1, 0.3]), spacing=0.1)
    grid = build_grid(ModelParams(d=0.2), 1.0)
    with pytest.raises(ValueError):
        grid.detunings[0] = -99.0


def test_grid_policy_windows():
    """Strong coupling widens the window beyond the Rabi sidebands; a
    positive chirp deepens the low-frequency wing so every mode that will
    reach resonance exists from the start."""
    grid = build_grid(ModelParams(d=8.0), 1.0)
    assert grid.window[0] == pytest.approx(-48.0, abs=1e-9)
    assert grid.window[1] == pytest.approx(48.0, abs=1e-9)
    assert grid.size == 961
    assert grid.spacing == pytest.approx(0.1)

    up = build_grid(ModelParams(d=8.0, chi=400.0), 1.0)
    assert up.window[0] == pytest.approx(-448.0, abs=1e-9)
    assert up.window[1] == pytest.approx(48.0, abs=1e-9)

    down = build_grid(ModelParams(d=8.0, chi=-400.0), 1.0)
    assert down.window[0] == pytest.approx(-48.0, abs=1e-9)
    assert down.window[1] == pytest.approx(448.0, abs=1e-9)

    weak = build_grid(ModelParams(d=0.2), 5.0)
    assert weak.window == pytest.approx((-10.0, 10.0), abs=1e-9)
    assert weak.size == 201


def test_grid_mode_cap():
    with pytest.raises(ValidationError):
        build_grid(ModelParams(d=8.0, chi=1e6), 2.0)


@pytest.mark.parametrize("t", [0.0, 0.3, 2.0])
def test_kernel_equal_times(t):
    p = ModelParams(d=8.0, chi=400.0)
    assert two_time_kernel(t, t, p) == pytest.approx(64.0 + 0.0j, abs=1e-10)


def test_kernel_static_reduction():
    p = ModelParams(d=1.0)
    assert two_time_kernel(1.5, 0.5, p) == pytest.approx(np.exp(-1.0), abs=1e-9)
    for tau in np.linspace(0.0, 20.0, 41):
        assert abs(two_time_kernel(tau, 0.0, p) - np.exp(-tau)) < 1e-6


def test_kernel_collapses_under_fast_chirp():
    # by the time chi*(t - t') ~ 1 the kernel has lost most of K(0) = d^2
    p = ModelParams(d=8.0, chi=400.0)
    assert abs(two_time_kernel(0.05, 0.0, p)) < 0.2 * 64.0


def test_kernel_hermitian_and_stationary():
    p = ModelParams(d=8.0, chi=400.0)
    a = two_time_kernel(0.3, 0.1, p)
    assert a == pytest.approx(np.conj(two_time_kernel(0.1, 0.3, p)), rel=1e-12)
    # a linear chirp leaves the kernel a function of the lag alone
    assert a == pytest.approx(two_time_kernel(0.9, 0.7, p), rel=1e-12)


def test_kernel_rejects_negative_times():
    with pytest.raises(ValidationError):
        two_time_kernel(-0.1, -0.3, ModelParams(d=1.0))


@pytest.mark.parametrize(
    "tau,d,chi",
    [
        (0.5, 1.0, 0.0),
        (0.05, 8.0, 400.0),
        (0.3, 8.0, 20.0),
        (1.0, 8.0, 8.4),
        (2.0, 2.0, 30.0),
    ],
)
def test_kernel_matches_fourier_quadrature(tau, d, chi):
    """Cross-check against the independent semi-infinite cosine-weighted
    quadrature in oracles.py."""
    val = two_time_kernel(tau, 0.0, ModelParams(d=d, chi=chi))
    assert abs(val - kernel_oracle(tau, d, chi)) < 1e-7


def test_rabi_frequency():
    assert rabi_frequency(ModelParams(d=8.0)) == pytest.approx(np.sqrt(255.0), rel=1e-14)
    assert rabi_frequency(ModelParams(d=2.0)) == pytest.approx(np.sqrt(15.0), rel=1e-14)
    with pytest.raises(ValidationError):
        rabi_frequency(ModelParams(d=0.5))


def test_xi_values():
    assert xi(ModelParams(d=8.0, chi=400.0)) == pytest.approx(1600 * np.pi / 255, rel=1e-14)
    assert xi(ModelParams(d=8.0, chi=8.4)) == pytest.approx(0.41395, abs=1e-5)
    assert xi(ModelParams(d=8.0, chi=2.0)) == pytest.approx(0.098560, abs=1e-5)
    with pytest.raises(ValidationError):
        xi(ModelParams(d=0.4, chi=1.0))
