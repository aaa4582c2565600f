"""Three-layer (mirror - cavity - mirror) transfer matrix and TE reflection.

Layer matrices use the convention

    m = [[cos(kx d),          i sin(kx d) k / kx],
         [i sin(kx d) kx / k,  cos(kx d)        ]]

with kx = (omega_p / c) sqrt(eps - sin^2 theta). The array functions in this
module broadcast over all their arguments; ``layer_matrix``/``stack`` are
scalar conveniences returning dataclasses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import C_LIGHT, Geometry

SERIES_THRESHOLD = 1e-6
DENOMINATOR_FLOOR = 1e-300


def normal_wavenumber(eps, theta):
    """sqrt(eps - sin^2 theta) on the branch Im >= 0 (Re >= 0 if real).

    Returned dimensionless, i.e. kx / k.
    """
    z = np.asarray(eps, dtype=complex) - np.sin(theta) ** 2
    q = np.sqrt(z)
    return np.where(q.imag < 0.0, -q, q)


def _sin_over_arg(u):
    # sin(u)/u with a series near zero; u may be complex
    u = np.asarray(u, dtype=complex)
    small = np.abs(u) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, u)
    u2 = u * u
    return np.where(small, 1.0 - u2 / 6.0 + u2 * u2 / 120.0, np.sin(safe) / safe)


def layer_entries(eps, d, theta, omega_p, c: float = C_LIGHT):
    """Entries (m11, m12, m21, m22) of a layer matrix as broadcast arrays."""
    k = np.asarray(omega_p, dtype=float) / c
    q = normal_wavenumber(eps, theta)
    d = np.asarray(d, dtype=float)
    phase = k * q * d
    cos = np.cos(phase)
    # k/kx * sin(kx d) = k d * sin(u)/u, finite as kx -> 0
    sinc = _sin_over_arg(phase)
    m12 = 1j * k * d * sinc
    m21 = 1j * q * q * k * d * sinc
    return cos, m12, m21, cos


def _matmul(a, b):
    a11, a12, a21, a22 = a
    b11, b12, b21, b22 = b
    return (
        a11 * b11 + a12 * b21,
        a11 * b12 + a12 * b22,
        a21 * b11 + a22 * b21,
        a21 * b12 + a22 * b22,
    )


def compose(matrices):
    """Left-to-right product of layer entry tuples."""
    matrices = list(matrices)
    if not matrices:
        raise ValueError("at least one layer is required")
    total = matrices[0]
    for m in matrices[1:]:
        total = _matmul(total, m)
    return total


def multilayer_entries(layers, theta, omega_p, c: float = C_LIGHT):
    """Total matrix of ``[(eps, d), ...]`` traversed in the given order."""
    return compose(layer_entries(eps, d, theta, omega_p, c) for eps, d in layers)


def stack_entries(eps2, geometry: Geometry, theta, omega_p, c: float = C_LIGHT):
    """Total matrix Q = m1 m2 m1 as a tuple of broadcast arrays."""
    m1 = layer_entries(geometry.eps1, geometry.d1, theta, omega_p, c)
    m2 = layer_entries(eps2, geometry.d2, theta, omega_p, c)
    return compose([m1, m2, m1])


def reflection_from_matrix(Q, q0):
    Q11, Q12, Q21, Q22 = Q
    num = q0 * (Q22 - Q11) - (q0 * q0 * Q12 - Q21)
    den = q0 * (Q22 + Q11) - (q0 * q0 * Q12 + Q21)
    singular = ~(np.abs(den) > DENOMINATOR_FLOOR)
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(singular, np.nan + 0j, num / np.where(singular, 1.0, den))
    return R, singular


def reflection(eps2, geometry: Geometry, theta, omega_p, c: float = C_LIGHT):
    """Complex reflection coefficient R and a singular-denominator mask."""
    Q = stack_entries(eps2, geometry, theta, omega_p, c)
    q0 = normal_wavenumber(geometry.eps0, theta)
    return reflection_from_matrix(Q, q0)


@dataclass(frozen=True)
class LayerMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    eps: complex
    d: float
    theta: float
    omega_p: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21


@dataclass(frozen=True)
class StackResult:
    Q: np.ndarray
    R: complex
    q0: complex
    phi_r: float
    mag_R: float
    singular: bool = False


def layer_matrix(eps, d: float, theta: float, omega_p: float, c: float = C_LIGHT) -> LayerMatrix:
    if d < 0:
        raise ValueError(f"layer thickness must be >= 0, got {d!r}")
    if not 0.0 <= theta < math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2), got {theta!r}")
    m11, m12, m21, m22 = (complex(v) for v in layer_entries(eps, d, theta, omega_p, c))
    return LayerMatrix(m11, m12, m21, m22, complex(eps), float(d), float(theta), float(omega_p))


def _stack_result(Q, R, q0, singular) -> StackResult:
    R = complex(R)
    phi = math.atan2(R.imag, R.real) if not singular else math.nan
    # atan2 returns -pi for (-0, -x); fold into (-pi, pi]
    if phi == -math.pi:
        phi = math.pi
    return StackResult(Q, R, complex(q0), phi, abs(R), bool(singular))


def stack(eps2, geometry: Geometry, theta: float, omega_p: float, c: float = C_LIGHT) -> StackResult:
    """Reflection of the mirror-cavity-mirror sandwich at one angle."""
    Q = stack_entries(eps2, geometry, theta, omega_p, c)
    q0 = normal_wavenumber(geometry.eps0, theta)
    R, singular = reflection_from_matrix(Q, q0)
    Qm = np.array([[complex(Q[0]), complex(Q[1])], [complex(Q[2]), complex(Q[3])]])
    return _stack_result(Qm, R, q0, singular)


def reflection_vs_angle(eps2, geometry: Geometry, theta_grid, omega_p, c: float = C_LIGHT) -> list[StackResult]:
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    Q = stack_entries(eps2, geometry, theta_grid, omega_p, c)
    Q = tuple(np.broadcast_to(q, theta_grid.shape) for q in Q)
    q0 = normal_wavenumber(geometry.eps0, theta_grid)
    R, singular = reflection_from_matrix(Q, q0)
    out = []
    for i in range(theta_grid.size):
        Qm = np.array([[Q[0][i], Q[1][i]], [Q[2][i], Q[3][i]]], dtype=complex)
        out.append(_stack_result(Qm, R[i], q0[i], singular[i]))
    return out
