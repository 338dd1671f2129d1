"""Closed-form solutions and limits: the exact static strong-coupling
amplitude, the damped pseudomode pair, weak-coupling rates, the high-chirp
Markovian rate built on |K_0(i y)|^2, its large-chirp asymptote, and the
low-chirp perturbed Rabi frequency.

The Bessel pair J_0/Y_0 is evaluated in-module by a two-regime scheme
(power/log series below x = 10, Hankel amplitude-phase asymptotics above) so
the special-function path stays independently testable against quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _rk
from .dynamics import Trajectory
from .errors import ValidationError
from .model import ModelParams, rabi_frequency, xi

EULER_GAMMA = 0.5772156649015329
_BESSEL_SERIES_CUT = 10.0
_PSEUDOMODE_SAMPLE_EVERY = 1e-3

PERTURBED_RABI_MIN_D = 4.0
PERTURBED_RABI_MAX_XI = 0.2
ASYMPTOTIC_MIN_CHI = 10.0


def static_exact_ca(t, p: ModelParams):
    """Exact emitter amplitude for the static bath at strong coupling:
    e^{-t/2} [cos(Omega t / 2) + sin(Omega t / 2) / Omega]."""
    om = rabi_frequency(p)
    t = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * t) * (np.cos(0.5 * om * t) + np.sin(0.5 * om * t) / om)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PseudomodeState:
    """Emitter amplitude paired with the damped collective bath amplitude."""

    t: float
    c_a: complex
    b: complex


def pseudomode_solve(p: ModelParams, t_end: float, tol: float = 1e-10) -> Trajectory:
    """Integrate the two-amplitude pseudomode pair for the static bath:
    dc_a/dt = -i d b,  db/dt = -i d c_a - b.

    Valid only for chi = 0 (the pair represents the static Lorentzian
    memory exactly); any chirp is rejected rather than extrapolated.
    """
    if p.chi != 0.0:
        raise ValidationError(
            f"the pseudomode pair is exact only for a static bath; got chi = {p.chi}"
        )
    if not t_end > 0:
        raise ValidationError(f"t_end must be positive, got {t_end}")
    d = p.d

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([-1j * d * y[1], -1j * d * y[0] - y[1]], dtype=complex)

    times = np.append(np.arange(0.0, t_end, _PSEUDOMODE_SAMPLE_EVERY), t_end)
    y0 = np.array([1.0 + 0.0j, 0.0 + 0.0j])
    samples, _ = _rk.integrate(rhs, 0.0, y0, times, rel_tol=tol, abs_tol=tol)
    states = [
        PseudomodeState(t=float(t), c_a=complex(row[0]), b=complex(row[1]))
        for t, row in zip(times, samples)
    ]
    return Trajectory(times=times, pa=np.abs(samples[:, 0]) ** 2, states=states)


def weak_gamma_t(t, p: ModelParams):
    """Time-dependent weak-coupling decay rate 2 d^2 (1 - e^{-t})."""
    t = np.asarray(t, dtype=float)
    out = 2.0 * p.d * p.d * (1.0 - np.exp(-t))
    return out if out.ndim else float(out)


def _j0_series(x: float) -> float:
    q = 0.25 * x * x
    term, total = 1.0, 1.0
    for m in range(1, 200):
        term *= -q / (m * m)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _y0_series(x: float) -> float:
    q = 0.25 * x * x
    term = 1.0
    harmonic = 0.0
    total = 0.0
    for m in range(1, 200):
        term *= -q / (m * m)
        harmonic += 1.0 / m
        total -= term * harmonic
        if abs(term) * (harmonic + 1.0) < 1e-17 * max(abs(total), 1e-300):
            break
    return (2.0 / np.pi) * ((np.log(0.5 * x) + EULER_GAMMA) * _j0_series(x) + total)


def _hankel_pq(x: float) -> tuple[float, float]:
    """Amplitude-phase coefficients: P + iQ = sum_k i^k a_k / x^k with
    a_{k+1} = -a_k (2k+1)^2 / (8(k+1)), truncated where the series turns."""
    a = 1.0
    p_sum, q_sum = 1.0, 0.0
    xk = 1.0
    prev = np.inf
    for k in range(40):
        a_next = -a * (2 * k + 1) ** 2 / (8.0 * (k + 1))
        xk *= x
        term = a_next / xk
        if abs(term) >= prev:
            break
        prev = abs(term)
        r = (k + 1) % 4
        if r == 0:
            p_sum += term
        elif r == 1:
            q_sum += term
        elif r == 2:
            p_sum -= term
        else:
            q_sum -= term
        a = a_next
    return p_sum, q_sum


def j0(x: float) -> float:
    """Bessel function of the first kind, order zero."""
    x = abs(float(x))
    if x < _BESSEL_SERIES_CUT:
        return _j0_series(x)
    p_sum, q_sum = _hankel_pq(x)
    w = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p_sum * np.cos(w) - q_sum * np.sin(w))


def y0(x: float) -> float:
    """Bessel function of the second kind, order zero (x > 0)."""
    x = float(x)
    if x <= 0:
        raise ValidationError(f"y0 requires x > 0, got {x}")
    if x < _BESSEL_SERIES_CUT:
        return _y0_series(x)
    p_sum, q_sum = _hankel_pq(x)
    w = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p_sum * np.sin(w) + q_sum * np.cos(w))


def bessel_k0i_abs2(y: float) -> float:
    """|K_0(i y)|^2 = (pi^2/4)(J_0(y)^2 + Y_0(y)^2) for y > 0.

    Above the series cut the amplitude form (pi/(2y))(P^2 + Q^2) is used
    directly, avoiding the oscillatory phase entirely.
    """
    y = float(y)
    if y <= 0:
        raise ValidationError(f"bessel_k0i_abs2 requires y > 0, got {y}")
    if y < _BESSEL_SERIES_CUT:
        return 0.25 * np.pi**2 * (j0(y) ** 2 + y0(y) ** 2)
    p_sum, q_sum = _hankel_pq(y)
    return 0.5 * np.pi / y * (p_sum * p_sum + q_sum * q_sum)


def gamma_infinity(p: ModelParams) -> float:
    """Asymptotic Markovian decay rate under chirp:
    2 d^2 * [2 |K_0(i/x)|^2 / (pi x)] with x = 4 chi.

    Strictly positive and monotonically decreasing in chi; the chi -> 0
    limit is the static weak-coupling rate 2 d^2.
    """
    if not p.chi > 0:
        raise ValidationError(
            f"gamma_infinity requires chi > 0 (the static limit is 2 d^2), got chi = {p.chi}"
        )
    x = 4.0 * p.chi
    return 2.0 * p.d * p.d * (2.0 * bessel_k0i_abs2(1.0 / x) / (np.pi * x))


def gamma_infinity_asymptotic(p: ModelParams) -> float:
    """Large-chirp approximation d^2 [ln(4 chi)]^2 / (pi chi)."""
    if p.chi < ASYMPTOTIC_MIN_CHI:
        raise ValidationError(
            f"the large-chirp expansion needs chi >= {ASYMPTOTIC_MIN_CHI}, got {p.chi}"
        )
    return p.d * p.d * np.log(4.0 * p.chi) ** 2 / (np.pi * p.chi)


def markovian_ca(t, p: ModelParams):
    """High-chirp emitter amplitude exp(-gamma_infinity * t / 2)."""
    rate = gamma_infinity(p)
    t = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * rate * t)
    return out if out.ndim else float(out)


def perturbed_rabi(p: ModelParams) -> tuple[float, float]:
    """Low-chirp corrected Rabi frequency and largest accumulated phase:
    Omega' = Omega (1 + chi^2 / (4 Omega^2)), Delta_Phi = chi^2 / (4 Omega).

    Gated to the regime where the perturbation applies (d >= 4, xi <= 0.2).
    """
    if p.d < PERTURBED_RABI_MIN_D:
        raise ValidationError(
            f"perturbed_rabi needs d >= {PERTURBED_RABI_MIN_D} (got d = {p.d})"
        )
    x = xi(p)
    if abs(x) > PERTURBED_RABI_MAX_XI:
        raise ValidationError(
            f"perturbed_rabi needs |xi| <= {PERTURBED_RABI_MAX_XI} (got xi = {x:.4f})"
        )
    om = rabi_frequency(p)
    correction = p.chi * p.chi / (4.0 * om * om)
    return om * (1.0 + correction), correction * om


def weak_lowchirp_gamma(p: ModelParams) -> float:
    """Leading chirp correction to the weak-coupling rate: 2 d^2 (1 - 2 chi^2)."""
    return 2.0 * p.d * p.d * (1.0 - 2.0 * p.chi * p.chi)
