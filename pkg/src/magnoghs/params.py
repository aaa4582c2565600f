"""Physical inputs of the cavity-magnomechanical reflector.

All rates and frequencies are stored as angular quantities in rad/s.
Lengths are in metres, magnetic fields in tesla.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from scipy import constants

TWO_PI = 2.0 * math.pi
C_LIGHT = constants.c
HBAR = constants.hbar

#: Upper limit on the effective magnon-phonon coupling for the stable regime.
STABILITY_LIMIT = TWO_PI * 1.5e6


class ConfigError(ValueError):
    """Invalid or inconsistent parameter set."""


def hz_to_rad(f: float) -> float:
    return f * TWO_PI


def rad_to_hz(w: float) -> float:
    return w / TWO_PI


@dataclass(frozen=True)
class CouplingSpec:
    """How the effective magnomechanical coupling G_mb is obtained.

    Either ``G_mb`` is given directly (the default mode), or the drive
    pathway is used: the single-magnon coupling ``g_mb`` together with the
    drive field ``B0`` and the sphere/spin data, from which ``G_mb`` follows
    from the steady state as ``g_mb * |m_s|``.
    """

    G_mb: float | None = 0.0
    g_mb: float | None = None
    B0: float | None = None
    D: float = 250e-6
    rho: float = 4.22e27
    gamma_gyro: float = TWO_PI * 28e9

    @property
    def direct(self) -> bool:
        return self.G_mb is not None

    @classmethod
    def from_drive(cls, g_mb: float, B0: float, **kw) -> "CouplingSpec":
        return cls(G_mb=None, g_mb=g_mb, B0=B0, **kw)

    def validate(self) -> None:
        if self.direct:
            if self.g_mb is not None or self.B0 is not None:
                raise ConfigError("coupling: give either G_mb or (g_mb, B0), not both")
            if not self.G_mb >= 0.0:
                raise ConfigError(f"coupling: G_mb must be >= 0, got {self.G_mb!r}")
            return
        if self.g_mb is None or self.B0 is None:
            raise ConfigError(
                "coupling: drive mode needs both g_mb and B0 "
                "(the single-magnon coupling has no default value)"
            )
        if not self.g_mb >= 0.0:
            raise ConfigError(f"coupling: g_mb must be >= 0, got {self.g_mb!r}")
        if not self.B0 >= 0.0:
            raise ConfigError(f"coupling: B0 must be >= 0, got {self.B0!r}")
        if not self.D > 0.0:
            raise ConfigError(f"coupling: sphere diameter D must be > 0, got {self.D!r}")
        if not self.rho > 0.0:
            raise ConfigError(f"coupling: spin density rho must be > 0, got {self.rho!r}")


@dataclass(frozen=True)
class SystemParams:
    omega_a: float
    omega_b: float
    kappa_a: float
    kappa_m: float
    gamma_b: float
    g_ma: float
    coupling: CouplingSpec = field(default_factory=CouplingSpec)
    # None means "red sideband", i.e. equal to omega_b
    delta_a: float | None = None
    delta_m: float | None = None

    @property
    def Delta_a(self) -> float:
        return self.omega_b if self.delta_a is None else self.delta_a

    @property
    def Delta_m(self) -> float:
        return self.omega_b if self.delta_m is None else self.delta_m

    def with_coupling(self, G_mb: float) -> "SystemParams":
        """Copy with a direct effective coupling."""
        return replace(self, coupling=replace(self.coupling, G_mb=G_mb, g_mb=None, B0=None))

    def validate(self, allow_unstable: bool = False) -> None:
        for name in ("omega_a", "omega_b", "kappa_a", "kappa_m", "gamma_b"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f"{name} must be > 0 (rad/s), got {value!r}")
        if not self.g_ma >= 0.0:
            raise ConfigError(f"g_ma must be >= 0, got {self.g_ma!r}")
        self.coupling.validate()
        if self.coupling.direct:
            check_stability(self.coupling.G_mb, allow_unstable)


def check_stability(G_mb: float, allow_unstable: bool = False) -> None:
    # slack of a few ulps so that 1.5 MHz given in any unit is accepted
    if G_mb > STABILITY_LIMIT * (1.0 + 1e-12) and not allow_unstable:
        raise ConfigError(
            f"G_mb/2pi = {rad_to_hz(G_mb) / 1e6:.6g} MHz exceeds the stable-regime "
            f"bound of 1.5 MHz (use allow_unstable to override)"
        )


@dataclass(frozen=True)
class Geometry:
    eps0: float = 1.0
    eps1: float = 2.2
    d1: float = 4e-3
    d2: float = 45e-3

    @property
    def total_length(self) -> float:
        return 2.0 * self.d1 + self.d2

    def validate(self) -> None:
        if not self.d1 >= 0.0:
            raise ConfigError(f"d1 must be >= 0, got {self.d1!r}")
        if not self.d2 > 0.0:
            raise ConfigError(f"d2 must be > 0, got {self.d2!r}")
        if not self.eps0 > 0.0:
            raise ConfigError(f"eps0 must be > 0, got {self.eps0!r}")
        if not self.eps1 > 0.0:
            raise ConfigError(f"eps1 must be real and > 0, got {self.eps1!r}")


@dataclass(frozen=True)
class ProbeSpec:
    x: float = 0.0
    theta: float = 1.42
    P: float = 1e-6
    hbar: float = HBAR
    c: float = C_LIGHT

    def validate(self) -> None:
        if not 0.0 <= self.theta < math.pi / 2:
            raise ConfigError(f"theta must lie in [0, pi/2), got {self.theta!r}")
        if not self.P >= 0.0:
            raise ConfigError(f"probe power must be >= 0, got {self.P!r}")


def default_params() -> tuple[SystemParams, Geometry]:
    """Parameter set of the reference YIG-sphere experiment."""
    system = SystemParams(
        omega_a=TWO_PI * 13.2e9,
        omega_b=TWO_PI * 15e6,
        kappa_a=TWO_PI * 2.1e6,
        kappa_m=TWO_PI * 0.1e6,
        gamma_b=TWO_PI * 150.0,
        g_ma=TWO_PI * 2.0e6,
        coupling=CouplingSpec(
            G_mb=0.0, D=250e-6, rho=4.22e27, gamma_gyro=TWO_PI * 28e9
        ),
    )
    return system, Geometry(eps0=1.0, eps1=2.2, d1=4e-3, d2=45e-3)


def spin_count(D: float, rho: float) -> float:
    """Number of spins in a sphere of diameter ``D`` with spin density ``rho``."""
    radius = 0.5 * D
    return rho * (4.0 / 3.0) * math.pi * radius**3


def drive_amplitude(B0: float, N: float, gamma_gyro: float) -> float:
    """Magnon drive rate E_d = sqrt(5N) * gamma * B0 / 4 in rad/s."""
    return math.sqrt(5.0 * N) * gamma_gyro * B0 / 4.0


def probe_amplitude(P: float, kappa_a: float, omega_p: float, hbar: float = HBAR) -> float:
    """Probe drive rate E_p; only needed for absolute field reporting."""
    return math.sqrt(2.0 * P * kappa_a / (hbar * omega_p))


def probe_frequency(omega_a: float, x):
    """Probe angular frequency for effective detuning ``x`` (red-sideband drive)."""
    return omega_a + x


def wavelength(omega_p, c: float = C_LIGHT):
    return TWO_PI * c / omega_p
