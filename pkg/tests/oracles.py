"""Independent reference implementations used by the unit and acceptance tests."""

import numpy as np

from magnoghs.params import C_LIGHT


def airy_reflection(eps0, eps2, d, theta, omega_p):
    """TE Airy reflection of one slab between identical half-spaces."""
    k = omega_p / C_LIGHT
    q0 = np.sqrt(eps0 - np.sin(theta) ** 2 + 0j)
    q2 = np.sqrt(eps2 - np.sin(theta) ** 2 + 0j)
    r01 = (q0 - q2) / (q0 + q2)
    e = np.exp(2j * k * q2 * d)
    return r01 * (1 - e) / (1 - r01**2 * e)


def linearised_sideband(params, G, x):
    """a1/E_p from a direct 3x3 solve of the linearised fluctuation equations."""
    A = np.array(
        [
            [params.kappa_a - 1j * x, 1j * params.g_ma, 0.0],
            [1j * params.g_ma, params.kappa_m - 1j * x, 1j * G],
            [0.0, 1j * np.conj(G), params.gamma_b - 1j * x],
        ],
        dtype=complex,
    )
    return np.linalg.solve(A, np.array([1.0, 0.0, 0.0], dtype=complex))[0]
