"""Goos-Haenchen shift of the reflected probe by the stationary-phase method.

The lateral shift is S_r = -(lambda_p / 2 pi) d(arg R)/d(theta). The phase
slope is taken as Im(R'/R) with R' from a central difference of the complex
reflection coefficient, which needs no phase unwrapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .params import C_LIGHT, TWO_PI, Geometry
from .tmm import reflection

R_FLOOR = 1e-12
DEFAULT_H_THETA = 1e-6


@dataclass(frozen=True)
class ShiftSample:
    theta: float
    S_r_over_lambda: float
    S_r: float
    dphi_dtheta: float
    R: complex
    N_g: float | None = None
    singular: bool = False


def stencil_phase_slope(r_minus, r0, r_plus, h):
    """Im(R'/R) from a three-point stencil plus a singular mask."""
    r_minus, r0, r_plus = np.broadcast_arrays(r_minus, r0, r_plus)
    singular = ~(
        (np.abs(r0) >= R_FLOOR) & (np.abs(r_minus) >= R_FLOOR) & (np.abs(r_plus) >= R_FLOOR)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.imag((r_plus - r_minus) / (2.0 * h) / r0)
    return np.where(singular, np.nan, slope), singular


def phase_slope(eps2, geometry: Geometry, theta, omega_p, h: float = DEFAULT_H_THETA, c: float = C_LIGHT):
    """Vectorised d(phi_r)/d(theta); returns (slope, singular, R(theta))."""
    theta = np.asarray(theta, dtype=float)
    r0, s0 = reflection(eps2, geometry, theta, omega_p, c)
    rp, sp = reflection(eps2, geometry, theta + h, omega_p, c)
    rm, sm = reflection(eps2, geometry, theta - h, omega_p, c)
    slope, singular = stencil_phase_slope(rm, r0, rp, h)
    singular = singular | s0 | sp | sm
    return np.where(singular, np.nan, slope), singular, r0


def _check_stencil(theta: float, h: float) -> None:
    if not h > 0:
        raise ValueError(f"step h must be > 0, got {h!r}")
    if not (0.0 < theta - h and theta + h < math.pi / 2):
        raise ValueError(f"stencil theta +/- h must lie inside (0, pi/2), got theta={theta!r}, h={h!r}")


def phase_derivative(eps2, geometry: Geometry, theta: float, omega_p: float, h: float = DEFAULT_H_THETA,
                     c: float = C_LIGHT) -> float:
    """d(phi_r)/d(theta) at one angle; NaN when the phase is undefined."""
    _check_stencil(theta, h)
    slope, _, _ = phase_slope(eps2, geometry, theta, omega_p, h, c)
    return float(slope)


def phase_derivative_unwrapped(eps2, geometry: Geometry, theta: float, omega_p: float,
                               h: float = DEFAULT_H_THETA, c: float = C_LIGHT) -> float:
    """Same slope from unwrapped atan2 phase samples (independent second path)."""
    _check_stencil(theta, h)
    R, singular = reflection(eps2, geometry, np.array([theta - h, theta, theta + h]), omega_p, c)
    if np.any(singular) or np.any(np.abs(R) < R_FLOOR):
        return math.nan
    phi = np.unwrap(np.arctan2(R.imag, R.real))
    return float((phi[2] - phi[0]) / (2.0 * h))


def shift_over_lambda(slope):
    return -np.asarray(slope) / TWO_PI


def ghs(eps2, geometry: Geometry, theta: float, omega_p: float, h: float = DEFAULT_H_THETA,
        c: float = C_LIGHT) -> ShiftSample:
    _check_stencil(theta, h)
    slope, singular, r0 = phase_slope(eps2, geometry, theta, omega_p, h, c)
    s = float(shift_over_lambda(slope))
    lam = TWO_PI * c / omega_p
    return ShiftSample(float(theta), s, s * lam, float(slope), complex(r0), None, bool(singular))


def frequency_slope(eps2_fn: Callable, geometry: Geometry, theta, omega_a: float, x, h_omega: float,
                    c: float = C_LIGHT):
    """d(phi_r)/d(omega_p) with eps2 re-evaluated on the frequency stencil."""
    x = np.asarray(x, dtype=float)
    r0, s0 = reflection(eps2_fn(x), geometry, theta, omega_a + x, c)
    rp, sp = reflection(eps2_fn(x + h_omega), geometry, theta, omega_a + x + h_omega, c)
    rm, sm = reflection(eps2_fn(x - h_omega), geometry, theta, omega_a + x - h_omega, c)
    slope, singular = stencil_phase_slope(rm, r0, rp, h_omega)
    singular = singular | s0 | sp | sm
    return np.where(singular, np.nan, slope), singular


def group_index(eps2_fn: Callable, geometry: Geometry, theta: float, omega_a: float, x: float,
                h_omega: float, c: float = C_LIGHT) -> float:
    """Group index N_g = (c/L) d(phi_r)/d(omega_p), L = 2 d1 + d2.

    ``eps2_fn`` maps effective detuning to cavity permittivity, since moving
    the probe frequency changes both the optical path and the response.
    The factor c makes the result dimensionless. NaN when the reflection
    phase is undefined on the stencil.
    """
    if not h_omega > 0:
        raise ValueError(f"h_omega must be > 0, got {h_omega!r}")
    slope, _ = frequency_slope(eps2_fn, geometry, theta, omega_a, x, h_omega, c)
    return c * float(slope) / geometry.total_length
