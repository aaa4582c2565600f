"""Flat ``key = value`` configuration with unit-suffixed keys.

Every physical field is addressed by its name plus a unit suffix, e.g.
``omega_a_ghz = 13.2``, ``kappa_a_mhz = 2.1``, ``d1_mm = 4`` or
``g_mb_direct_mhz = 0.5``. Cyclic frequencies (``_hz``, ``_khz``, ``_mhz``,
``_ghz``) are converted to rad/s on load; ``_rad_s`` gives angular values
verbatim. Canonical keys (``omega_a_rad_s``, ``d1_m``, ...) are what
:meth:`Config.items` emits, so a written header parses back bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .params import (
    ConfigError,
    CouplingSpec,
    Geometry,
    ProbeSpec,
    SystemParams,
    TWO_PI,
)

UNITS: dict[str, dict[str, float]] = {
    "angular": {"rad_s": 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9},
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6},
    "field": {"t": 1.0, "mt": 1e-3, "ut": 1e-6},
    "gyro": {"rad_s_per_t": 1.0, "ghz_per_t": 1e9},
    "density": {"per_m3": 1.0},
    "power": {"w": 1.0, "mw": 1e-3, "uw": 1e-6},
    "angle": {"rad": 1.0},
}
CANONICAL = {
    "angular": "rad_s",
    "length": "m",
    "field": "t",
    "gyro": "rad_s_per_t",
    "density": "per_m3",
    "power": "w",
    "angle": "rad",
}
# suffixes whose values are cyclic and pick up a factor 2 pi
CYCLIC = {("angular", "hz"), ("angular", "khz"), ("angular", "mhz"), ("angular", "ghz"),
          ("gyro", "ghz_per_t")}

# name -> (kind, default); kind None means a unitless scalar or option
FIELDS: dict[str, tuple[str | None, Any]] = {
    "omega_a": ("angular", TWO_PI * 13.2e9),
    "omega_b": ("angular", TWO_PI * 15e6),
    "kappa_a": ("angular", TWO_PI * 2.1e6),
    "kappa_m": ("angular", TWO_PI * 0.1e6),
    "gamma_b": ("angular", TWO_PI * 150.0),
    "g_ma": ("angular", TWO_PI * 2.0e6),
    "delta_a": ("angular", None),
    "delta_m": ("angular", None),
    "coupling_mode": (None, "direct"),
    "g_mb_direct": ("angular", 0.0),
    "g_mb": ("angular", None),
    "b0": ("field", None),
    "diameter": ("length", 250e-6),
    "rho": ("density", 4.22e27),
    "gamma_gyro": ("gyro", TWO_PI * 28e9),
    "eps0": (None, 1.0),
    "eps1": (None, 2.2),
    "d1": ("length", 4e-3),
    "d2": ("length", 45e-3),
    "x": ("angular", 0.0),
    "theta": ("angle", 1.42),
    "power": ("power", 1e-6),
    "h_theta": ("angle", 1e-6),
    "h_omega": ("angular", None),
    "chi_rotation": (None, "none"),
    "allow_unstable": (None, False),
    "solver_tol": (None, 1e-12),
    "solver_max_iter": (None, 10_000),
    "solver_damping": (None, 0.5),
}
OPTIONAL = {"delta_a", "delta_m", "g_mb", "b0", "h_omega"}
CHOICES = {"coupling_mode": ("direct", "drive"), "chi_rotation": ("none", "i")}
_BY_LENGTH = sorted(FIELDS, key=len, reverse=True)


def split_key(key: str) -> tuple[str, str | None]:
    """Split ``kappa_a_mhz`` into ``("kappa_a", "mhz")``."""
    key = key.strip().lower()
    for name in _BY_LENGTH:
        kind = FIELDS[name][0]
        if kind is None:
            if key == name:
                return name, None
            continue
        if key.startswith(name + "_") and key[len(name) + 1:] in UNITS[kind]:
            return name, key[len(name) + 1:]
    raise ConfigError(f"unknown configuration key {key!r}")


def unit_scale(name: str, suffix: str | None) -> float:
    kind = FIELDS[name][0]
    if kind is None:
        return 1.0
    scale = UNITS[kind][suffix]
    return TWO_PI * scale if (kind, suffix) in CYCLIC else scale


def to_internal(name: str, suffix: str | None, value: float) -> float:
    kind = FIELDS[name][0]
    if kind is None:
        return value
    scale = UNITS[kind][suffix]
    if (kind, suffix) in CYCLIC:
        return TWO_PI * (value * scale)
    return value * scale


def from_internal(name: str, suffix: str | None, value: float) -> float:
    kind = FIELDS[name][0]
    if kind is None:
        return value
    scale = UNITS[kind][suffix]
    if (kind, suffix) in CYCLIC:
        return value / TWO_PI / scale
    return value / scale


def _parse_scalar(name: str, suffix: str | None, raw: Any) -> Any:
    default = FIELDS[name][1]
    if isinstance(raw, str):
        text = raw.strip()
        if name in OPTIONAL and text.lower() in ("", "none"):
            return None
        if name in CHOICES:
            if text not in CHOICES[name]:
                raise ConfigError(f"{name}: expected one of {CHOICES[name]}, got {text!r}")
            return text
        if isinstance(default, bool):
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ConfigError(f"{name}: expected a boolean, got {text!r}")
        try:
            raw = int(text) if isinstance(default, int) else float(text)
        except ValueError:
            raise ConfigError(f"{name}: cannot parse number from {text!r}") from None
    if raw is None:
        if name in OPTIONAL:
            return None
        raise ConfigError(f"{name}: a value is required")
    if name in CHOICES:
        if raw not in CHOICES[name]:
            raise ConfigError(f"{name}: expected one of {CHOICES[name]}, got {raw!r}")
        return raw
    if isinstance(default, bool):
        return bool(raw)
    value = float(raw) if not isinstance(default, int) else int(raw)
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"{name}: value must be finite, got {raw!r}")
    return to_internal(name, suffix, value)


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_assignment(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


@dataclass(frozen=True)
class Config:
    """Resolved parameter set, stored in internal units."""

    values: Mapping[str, Any] = field(default_factory=lambda: {k: v[1] for k, v in FIELDS.items()})

    @classmethod
    def load(cls, path: str | Path | None = None, sets: Iterable[str] = (), **overrides) -> "Config":
        cfg = cls()
        if path is not None:
            cfg = cfg.update(read_config_file(path))
        cfg = cfg.update(dict(parse_assignment(s) for s in sets))
        return cfg.update(overrides) if overrides else cfg

    def update(self, items: Mapping[str, Any]) -> "Config":
        values = dict(self.values)
        for key, raw in items.items():
            name, suffix = split_key(key)
            values[name] = _parse_scalar(name, suffix, raw)
        return Config(values)

    def set_internal(self, **values) -> "Config":
        merged = dict(self.values)
        for name, value in values.items():
            if name not in FIELDS:
                raise ConfigError(f"unknown field {name!r}")
            merged[name] = value
        return Config(merged)

    def __getitem__(self, name: str):
        return self.values[name]

    def items(self) -> list[tuple[str, Any]]:
        """(canonical key, value) pairs in a fixed order."""
        out = []
        for name, (kind, _) in FIELDS.items():
            key = name if kind is None else f"{name}_{CANONICAL[kind]}"
            out.append((key, self.values[name]))
        return out

    # -- typed views -------------------------------------------------------

    def coupling(self) -> CouplingSpec:
        v = self.values
        common = dict(D=v["diameter"], rho=v["rho"], gamma_gyro=v["gamma_gyro"])
        if v["coupling_mode"] == "direct":
            return CouplingSpec(G_mb=v["g_mb_direct"], **common)
        return CouplingSpec(G_mb=None, g_mb=v["g_mb"], B0=v["b0"], **common)

    def system(self) -> SystemParams:
        v = self.values
        return SystemParams(
            omega_a=v["omega_a"],
            omega_b=v["omega_b"],
            kappa_a=v["kappa_a"],
            kappa_m=v["kappa_m"],
            gamma_b=v["gamma_b"],
            g_ma=v["g_ma"],
            coupling=self.coupling(),
            delta_a=v["delta_a"],
            delta_m=v["delta_m"],
        )

    def geometry(self) -> Geometry:
        v = self.values
        return Geometry(eps0=v["eps0"], eps1=v["eps1"], d1=v["d1"], d2=v["d2"])

    def probe(self) -> ProbeSpec:
        return ProbeSpec(x=self.values["x"], theta=self.values["theta"], P=self.values["power"])

    @property
    def h_omega(self) -> float:
        h = self.values["h_omega"]
        return 1e-6 * self.values["omega_b"] if h is None else h

    @property
    def solver_options(self) -> dict[str, Any]:
        v = self.values
        return dict(tol=v["solver_tol"], max_iter=v["solver_max_iter"], damping=v["solver_damping"])

    def validate(self, check_probe: bool = True) -> None:
        v = self.values
        self.system().validate(allow_unstable=v["allow_unstable"])
        self.geometry().validate()
        if check_probe:
            self.probe().validate()
        if not v["h_theta"] > 0:
            raise ConfigError(f"h_theta must be > 0, got {v['h_theta']!r}")
        if not self.h_omega > 0:
            raise ConfigError(f"h_omega must be > 0, got {self.h_omega!r}")
        if not 0 < v["solver_damping"] <= 1:
            raise ConfigError(f"solver_damping must lie in (0, 1], got {v['solver_damping']!r}")
        if not v["solver_max_iter"] >= 1:
            raise ConfigError("solver_max_iter must be >= 1")
