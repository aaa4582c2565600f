"""Steady state and linear probe response of the photon-magnon-phonon system."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import SystemParams, drive_amplitude, spin_count

DENOMINATOR_FLOOR = 1e-30


class SingularResponseWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SteadyState:
    a_s: complex
    m_s: complex
    b_s: complex
    delta_s: float
    G_mb: float
    converged: bool
    iterations: int
    residual: float = 0.0


@dataclass(frozen=True)
class ProbeResponse:
    x: float
    a1_over_Ep: complex
    chi: complex
    eps2: complex


def _coupled_amplitudes(params: SystemParams, delta_s: float, E_d: float):
    # (i D_a + k_a) a + i g m = 0 ;  i g a + (i D_s + k_m) m = E_d
    za = 1j * params.Delta_a + params.kappa_a
    zm = 1j * delta_s + params.kappa_m
    g = params.g_ma
    m_s = E_d / (zm + g * g / za)
    a_s = -1j * g * m_s / za
    return complex(a_s), complex(m_s)


def _phonon_amplitude(params: SystemParams, g_mb: float, m_s: complex) -> complex:
    return complex(-1j * g_mb * abs(m_s) ** 2 / (1j * params.omega_b + params.gamma_b))


def steady_state_residuals(params: SystemParams, g_mb: float, E_d: float, state: SteadyState):
    """Relative residuals of the four steady-state relations.

    Returned in the order (a_s, m_s, b_s, delta_s). Each relation is
    evaluated directly from its defining quotient, so this is independent of
    how the state was obtained.
    """
    a_rhs = -1j * params.g_ma * state.m_s / (1j * params.Delta_a + params.kappa_a)
    m_rhs = (-1j * params.g_ma * state.a_s + E_d) / (1j * state.delta_s + params.kappa_m)
    b_rhs = -1j * g_mb * abs(state.m_s) ** 2 / (1j * params.omega_b + params.gamma_b)
    d_rhs = params.Delta_m + g_mb * (state.b_s + state.b_s.conjugate()).real

    def rel(lhs, rhs):
        scale = max(abs(lhs), abs(rhs))
        return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale

    return (
        rel(state.a_s, a_rhs),
        rel(state.m_s, m_rhs),
        rel(state.b_s, b_rhs),
        rel(state.delta_s, d_rhs),
    )


def solve_steady_state(
    params: SystemParams,
    E_d: float,
    g_mb: float | None = None,
    damping: float = 0.5,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> SteadyState:
    """Self-consistent steady state under a magnon drive of strength ``E_d``.

    The effective detuning ``delta_s`` is found by damped fixed-point
    iteration; for each iterate the linear (a_s, m_s) system is solved
    exactly. Non-convergence is reported through ``converged=False`` with
    the last iterate, since the bistable regime is physical.
    """
    if g_mb is None:
        g_mb = params.coupling.g_mb
    if g_mb is None:
        raise ValueError("single-magnon coupling g_mb is required for the steady state")

    delta = params.Delta_m
    if E_d == 0.0:
        return SteadyState(0j, 0j, 0j, delta, 0.0, True, 0)

    converged = False
    step = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        _, m_s = _coupled_amplitudes(params, delta, E_d)
        b_s = _phonon_amplitude(params, g_mb, m_s)
        target = params.Delta_m + 2.0 * g_mb * b_s.real
        step = abs(target - delta)
        if step <= tol * max(abs(target), abs(delta)):
            delta = target
            converged = True
            break
        delta = (1.0 - damping) * delta + damping * target

    a_s, m_s = _coupled_amplitudes(params, delta, E_d)
    b_s = _phonon_amplitude(params, g_mb, m_s)
    residual = abs(params.Delta_m + 2.0 * g_mb * b_s.real - delta) / max(abs(delta), 1.0)
    return SteadyState(a_s, m_s, b_s, delta, g_mb * abs(m_s), converged, it, residual)


def drive_rate(params: SystemParams) -> float:
    """E_d implied by the drive-pathway fields of ``params.coupling``."""
    cs = params.coupling
    return drive_amplitude(cs.B0, spin_count(cs.D, cs.rho), cs.gamma_gyro)


def drive_for_coupling(params: SystemParams, g_mb: float, G_target: float) -> float:
    """Drive rate E_d that yields the effective coupling ``G_target``.

    Closed-form inverse of the steady state: the target fixes |m_s|, hence
    b_s and delta_s, and the magnon equation then gives |E_d|.
    """
    m_abs = G_target / g_mb
    b_s = -1j * g_mb * m_abs**2 / (1j * params.omega_b + params.gamma_b)
    delta_s = params.Delta_m + 2.0 * g_mb * b_s.real
    za = 1j * params.Delta_a + params.kappa_a
    zm = 1j * delta_s + params.kappa_m
    return m_abs * abs(zm + params.g_ma**2 / za)


def resolve_coupling(params: SystemParams, **solver) -> tuple[float, SteadyState | None]:
    """Effective coupling G_mb, solving the steady state in drive mode."""
    if params.coupling.direct:
        return params.coupling.G_mb, None
    state = solve_steady_state(params, drive_rate(params), **solver)
    return state.G_mb, state


def sideband_amplitude(params: SystemParams, G_mb: float, x):
    """First-order sideband amplitude normalised by the probe, a_1 / E_p.

    Accepts scalar or array ``x``.
    """
    x = np.asarray(x, dtype=float)
    gb = params.gamma_b - 1j * x
    inner = gb * (params.kappa_m - 1j * x) + G_mb**2
    den = (params.kappa_a - 1j * x) + params.g_ma**2 * gb / inner
    bad = (np.abs(inner) < DENOMINATOR_FLOOR) | (np.abs(den) < DENOMINATOR_FLOOR)
    if np.any(bad):
        warnings.warn(
            f"vanishing sideband denominator at {int(np.count_nonzero(bad))} point(s)",
            SingularResponseWarning,
            stacklevel=2,
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(bad, np.nan + 0j, 1.0 / den)
    else:
        out = 1.0 / den
    return out[()] if out.ndim == 0 else out


def permittivity(chi, chi_rotation: str = "none"):
    """Intracavity permittivity from the susceptibility.

    ``chi_rotation="i"`` puts the absorptive quadrature into Im(eps2); it is
    provided for sensitivity studies only.
    """
    if chi_rotation == "none":
        return 1.0 + chi
    if chi_rotation == "i":
        return 1.0 + 1j * chi
    raise ValueError(f"chi_rotation must be 'none' or 'i', got {chi_rotation!r}")


def chi_values(params: SystemParams, G_mb: float, x):
    """Vectorised susceptibility kappa_a * a_1 / E_p."""
    return params.kappa_a * sideband_amplitude(params, G_mb, x)


def susceptibility(params: SystemParams, G_mb: float, x: float, chi_rotation: str = "none") -> ProbeResponse:
    a1 = complex(sideband_amplitude(params, G_mb, x))
    chi = params.kappa_a * a1
    return ProbeResponse(float(x), a1, chi, complex(permittivity(chi, chi_rotation)))


def spectrum(params: SystemParams, G_mb: float, x_grid, chi_rotation: str = "none") -> list[ProbeResponse]:
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.size == 0:
        return []
    a1 = np.atleast_1d(sideband_amplitude(params, G_mb, x_grid))
    chi = params.kappa_a * a1
    eps2 = permittivity(chi, chi_rotation)
    return [
        ProbeResponse(float(xv), complex(av), complex(cv), complex(ev))
        for xv, av, cv, ev in zip(x_grid, a1, chi, eps2)
    ]
