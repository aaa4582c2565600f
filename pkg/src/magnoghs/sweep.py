"""One- and two-axis parameter scans over the model.

A plan has an inner axis (``axis1``) and an optional outer axis (``axis2``).
Rows are emitted with ``axis2`` outermost. Work is split into one block per
outer value; blocks are pure and are always partitioned the same way, so the
output does not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .beamshift import frequency_slope, phase_slope, shift_over_lambda
from .config import FIELDS, Config, split_key
from .magnomech import chi_values, drive_rate, permittivity, resolve_coupling, solve_steady_state, steady_state_residuals
from .params import C_LIGHT, TWO_PI, ConfigError, check_stability

KINDS = ("spectrum", "ghs", "map", "kappa-sweep", "length-sweep", "steady-state")
KAPPA_RATIO = "kappa_ratio"


class SteadyStateError(RuntimeError):
    """The drive-mode steady state did not converge."""


def _fmt(v: float) -> str:
    return repr(float(v))


@dataclass(frozen=True)
class Axis:
    """A named grid over one configuration key (with unit suffix)."""

    name: str
    values: tuple[float, ...]
    spec: str

    @classmethod
    def linspace(cls, name: str, lo: float, hi: float, points: int) -> "Axis":
        _field_of(name)
        points = int(points)
        if points < 1:
            raise ConfigError(f"axis {name}: points must be >= 1, got {points}")
        if points > 1 and not lo < hi:
            raise ConfigError(f"axis {name}: need min < max when points > 1")
        values = tuple(float(v) for v in np.linspace(lo, hi, points))
        return cls(name, values, f"{name}={_fmt(lo)}:{_fmt(hi)}:{points}")

    @classmethod
    def from_values(cls, name: str, values: Sequence[float]) -> "Axis":
        _field_of(name)
        values = tuple(float(v) for v in values)
        if not values:
            raise ConfigError(f"axis {name}: at least one value required")
        return cls(name, values, f"{name}=" + ",".join(_fmt(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name=min:max:points`` or ``name=v1,v2,...``."""
        if "=" not in text:
            raise ConfigError(f"axis spec must look like name=min:max:points, got {text!r}")
        name, rhs = (s.strip() for s in text.split("=", 1))
        try:
            if ":" in rhs:
                lo, hi, n = rhs.split(":")
                return cls.linspace(name, float(lo), float(hi), int(n))
            return cls.from_values(name, [float(v) for v in rhs.split(",") if v.strip()])
        except ValueError:
            raise ConfigError(f"cannot parse axis spec {text!r}") from None

    @property
    def field(self) -> str:
        return _field_of(self.name)

    def __len__(self) -> int:
        return len(self.values)

    def apply(self, config: Config, value: float) -> Config:
        if self.name == KAPPA_RATIO:
            return config.set_internal(kappa_a=value * config["g_ma"])
        return config.update({self.name: value})


def _field_of(name: str) -> str:
    if name == KAPPA_RATIO:
        return "kappa_a"
    fld, _ = split_key(name)
    if isinstance(FIELDS[fld][1], (bool, str)):
        raise ConfigError(f"{name!r} is not a sweepable numeric field")
    return fld


@dataclass(frozen=True)
class SweepPlan:
    kind: str
    axis1: Axis | None = None
    axis2: Axis | None = None
    config: Config = field(default_factory=Config)

    @property
    def size(self) -> int:
        n1 = len(self.axis1) if self.axis1 else 1
        n2 = len(self.axis2) if self.axis2 else 1
        return n1 * n2


@dataclass
class SweepResult:
    metadata: list[tuple[str, Any]]
    columns: list[str]
    rows: np.ndarray
    # integer columns are written without a decimal point
    int_columns: frozenset = frozenset()

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def blocks(self, axis2_value=None):
        """Rows grouped by the outer axis value (or all rows)."""
        if axis2_value is None:
            return self.rows
        return self.rows[self.rows[:, 0] == axis2_value]


DEFAULT_AXES: dict[str, tuple[str | None, str | None]] = {
    "spectrum": ("x_mhz=-4:4:1601", "g_mb_direct_mhz=0,0.5"),
    "ghs": ("theta_rad=0.001:1.549:1549", "g_mb_direct_mhz=0,0.05,0.5"),
    "map": ("theta_rad=0.005:1.545:300", "g_mb_direct_mhz=0.01:1.5:300"),
    "kappa-sweep": ("kappa_ratio=0.2:3:561", None),
    "length-sweep": ("theta_rad=0.001:1.549:1549", "d2_mm=45,70,100"),
    "steady-state": (None, None),
}


def make_plan(kind: str, config: Config, axis1: str | None = None, axis2: str | None = None) -> SweepPlan:
    """Plan with per-kind default grids.

    A default outer axis is only used when neither axis was given and the
    field it sweeps is still at its default value. ``"none"`` disables an
    axis explicitly.
    """
    if kind not in KINDS:
        raise ConfigError(f"unknown sweep kind {kind!r}")
    d1, d2 = DEFAULT_AXES[kind]
    a1 = _axis_or_default(axis1, d1)
    if axis2 is None and axis1 is None and d2 is not None:
        fld = _field_of(d2.split("=", 1)[0])
        axis2 = d2 if config[fld] == FIELDS[fld][1] else "none"
    a2 = _axis_or_default(axis2, None if axis1 is not None else d2)
    plan = SweepPlan(kind, a1, a2, config)
    validate_plan(plan)
    return plan


def _axis_or_default(text: str | None, default: str | None) -> Axis | None:
    if text is not None and text.strip().lower() == "none":
        return None
    text = text if text is not None else default
    return Axis.parse(text) if text is not None else None


_INNER_FIELDS = {
    "spectrum": {"x"},
    "ghs": {"theta"},
    "length-sweep": {"theta"},
    "kappa-sweep": {"kappa_a"},
}
_MAP_FIELDS = {"theta", "g_mb_direct", "x"}


def validate_plan(plan: SweepPlan) -> None:
    """Surface every configuration error before any compute."""
    kind = plan.kind
    if kind == "steady-state":
        if plan.axis2 is not None:
            raise ConfigError("steady-state accepts at most one axis")
        if plan.config["coupling_mode"] != "drive":
            raise ConfigError("steady-state needs coupling_mode = drive with g_mb and b0 set")
    elif plan.axis1 is None:
        raise ConfigError(f"{kind}: an inner axis is required")
    if kind in _INNER_FIELDS and plan.axis1.field not in _INNER_FIELDS[kind]:
        raise ConfigError(f"{kind}: inner axis must sweep {sorted(_INNER_FIELDS[kind])}, got {plan.axis1.name}")
    if kind == "map":
        if plan.axis2 is None:
            raise ConfigError("map: two axes are required")
        names = {plan.axis1.field, plan.axis2.field}
        if not names <= _MAP_FIELDS or len(names) != 2:
            raise ConfigError(f"map: axes must be two distinct fields of {sorted(_MAP_FIELDS)}")
    if plan.axis1 is not None and plan.axis2 is not None and plan.axis1.field == plan.axis2.field:
        raise ConfigError("the two axes must sweep different fields")

    base = plan.config
    check_probe = kind != "steady-state"
    axes = [a for a in (plan.axis1, plan.axis2) if a is not None]
    if not axes:
        base.validate(check_probe=check_probe)
    for axis in axes:
        # a swept field may be the one missing from the base config
        other = [a for a in axes if a is not axis]
        start = other[0].apply(base, other[0].values[0]) if other else base
        for v in axis.values:
            axis.apply(start, v).validate(check_probe=check_probe)
    if check_probe:
        h = base["h_theta"]
        thetas = [base["theta"]]
        for axis in (plan.axis1, plan.axis2):
            if axis is not None and axis.field == "theta":
                thetas = [axis.apply(base, v)["theta"] for v in axis.values]
        for t in thetas:
            if not (0.0 < t - h and t + h < math.pi / 2):
                raise ConfigError(f"theta={t!r} leaves no room for the +/-{h!r} stencil inside (0, pi/2)")


# -- evaluation kernels ------------------------------------------------------


def _coupling(cfg: Config) -> float:
    params = cfg.system()
    G, state = resolve_coupling(params, **cfg.solver_options)
    if state is not None:
        if not state.converged:
            raise SteadyStateError(f"steady state did not converge (residual {state.residual:.3g})")
        check_stability(G, cfg["allow_unstable"])
    return G


def eps2_function(cfg: Config, G_mb: float) -> Callable:
    params = cfg.system()
    rotation = cfg["chi_rotation"]
    return lambda x: permittivity(chi_values(params, G_mb, x), rotation)


def shift_columns(cfg: Config, theta, x, with_group_index: bool = True) -> dict[str, np.ndarray]:
    """Vectorised GHS quantities for broadcastable ``theta`` and ``x``."""
    G = _coupling(cfg)
    eps2_fn = eps2_function(cfg, G)
    geom = cfg.geometry()
    omega_a = cfg["omega_a"]
    x = np.asarray(x, dtype=float)
    omega_p = omega_a + x
    slope, singular, r0 = phase_slope(eps2_fn(x), geom, theta, omega_p, cfg["h_theta"])
    s = shift_over_lambda(slope)
    lam = TWO_PI * C_LIGHT / omega_p
    out = {
        "s_r_over_lambda": s,
        "s_r_m": s * lam,
        "abs_r": np.abs(r0),
        "phi_r": np.arctan2(r0.imag, r0.real),
    }
    if with_group_index:
        fslope, _ = frequency_slope(eps2_fn, geom, theta, omega_a, x, cfg.h_omega)
        out["n_g"] = C_LIGHT * fslope / geom.total_length
    out["singular"] = singular.astype(float)
    return out


def _block_rows(plan: SweepPlan, outer_value, columns_fn) -> tuple[list[str], np.ndarray]:
    cfg = plan.config if outer_value is None else plan.axis2.apply(plan.config, outer_value)
    axis1 = plan.axis1
    inner = np.array(axis1.values) if axis1 is not None else np.array([np.nan])
    cols = columns_fn(cfg, axis1, inner)
    n = inner.size
    parts = []
    if plan.axis2 is not None:
        parts.append(np.full(n, outer_value))
    if axis1 is not None:
        parts.append(inner)
    parts.extend(np.broadcast_to(np.asarray(c, dtype=float), (n,)) for c in cols.values())
    return list(cols), np.column_stack(parts)


def _spectrum_cols(cfg: Config, axis1: Axis, inner):
    x = np.array([axis1.apply(cfg, v)["x"] for v in inner])
    chi = chi_values(cfg.system(), _coupling(cfg), x)
    return {"re_chi": chi.real, "im_chi": chi.imag}


def _vector_axis_values(cfg: Config, axis1: Axis, inner, name: str):
    return np.array([axis1.apply(cfg, v)[name] for v in inner])


def _shift_cols_factory(with_group_index: bool, keep: Sequence[str] | None = None):
    def cols(cfg: Config, axis1: Axis, inner):
        fld = axis1.field
        if fld in ("theta", "x"):
            theta = _vector_axis_values(cfg, axis1, inner, "theta") if fld == "theta" else cfg["theta"]
            x = _vector_axis_values(cfg, axis1, inner, "x") if fld == "x" else cfg["x"]
            out = shift_columns(cfg, theta, x, with_group_index)
        else:
            pointwise = [shift_columns(axis1.apply(cfg, v), cfg["theta"], cfg["x"], with_group_index) for v in inner]
            out = {k: np.array([float(p[k]) for p in pointwise]) for k in pointwise[0]}
            if fld == "kappa_a" and axis1.name != KAPPA_RATIO:
                kr = np.array([axis1.apply(cfg, v)["kappa_a"] / cfg["g_ma"] for v in inner])
                out = {"kappa_over_g_ma": kr, **out}
        if keep is not None:
            out = {k: out[k] for k in keep if k in out}
        return out

    return cols


def _steady_cols(cfg: Config, axis1: Axis | None, inner):
    rows = []
    for v in inner:
        c = cfg if axis1 is None else axis1.apply(cfg, v)
        params = c.system()
        E_d = drive_rate(params)
        st = solve_steady_state(params, E_d, **c.solver_options)
        res = max(steady_state_residuals(params, params.coupling.g_mb, E_d, st))
        rows.append([E_d, st.a_s.real, st.a_s.imag, st.m_s.real, st.m_s.imag, st.b_s.real, st.b_s.imag,
                     st.delta_s, st.G_mb, float(st.converged), float(st.iterations), res])
    arr = np.array(rows, dtype=float)
    names = ["e_d_rad_s", "re_a_s", "im_a_s", "re_m_s", "im_m_s", "re_b_s", "im_b_s",
             "delta_s_rad_s", "g_mb_eff_rad_s", "converged", "iterations", "residual"]
    return {n: arr[:, i] for i, n in enumerate(names)}


_KERNELS = {
    "spectrum": _spectrum_cols,
    "ghs": _shift_cols_factory(True),
    "length-sweep": _shift_cols_factory(True),
    "map": _shift_cols_factory(False, ("s_r_over_lambda", "abs_r", "singular")),
    "kappa-sweep": _shift_cols_factory(False),
    "steady-state": _steady_cols,
}
_INT_COLUMNS = frozenset({"singular", "converged", "iterations"})


def metadata(plan: SweepPlan) -> list[tuple[str, Any]]:
    meta: list[tuple[str, Any]] = [
        ("tool", "magnoghs"),
        ("version", __version__),
        ("kind", plan.kind),
        ("axis1", plan.axis1.spec if plan.axis1 else "none"),
        ("axis2", plan.axis2.spec if plan.axis2 else "none"),
        ("rows", plan.size),
    ]
    meta.extend(plan.config.items())
    return meta


def run_plan(plan: SweepPlan, threads: int = 1) -> SweepResult:
    validate_plan(plan)
    kernel = _KERNELS[plan.kind]
    outer = list(plan.axis2.values) if plan.axis2 is not None else [None]

    def block(v):
        return _block_rows(plan, v, kernel)

    if threads > 1 and len(outer) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, outer))
    else:
        parts = [block(v) for v in outer]

    columns = [a.name for a in (plan.axis2, plan.axis1) if a is not None] + parts[0][0]
    rows = np.vstack([p[1] for p in parts])
    if rows.shape[0] != plan.size:
        raise AssertionError(f"row count {rows.shape[0]} != plan size {plan.size}")
    return SweepResult(metadata(plan), columns, rows, _INT_COLUMNS & frozenset(columns))


def run_spectrum(plan: SweepPlan, threads: int = 1) -> SweepResult:
    return run_plan(_checked(plan, "spectrum"), threads)


def run_ghs_angle(plan: SweepPlan, threads: int = 1) -> SweepResult:
    return run_plan(_checked(plan, "ghs", "length-sweep"), threads)


def run_length_sweep(plan: SweepPlan, threads: int = 1) -> SweepResult:
    return run_plan(_checked(plan, "length-sweep"), threads)


def run_map(plan: SweepPlan, threads: int = 1) -> SweepResult:
    return run_plan(_checked(plan, "map"), threads)


def run_kappa_sweep(plan: SweepPlan, threads: int = 1) -> SweepResult:
    return run_plan(_checked(plan, "kappa-sweep"), threads)


def run_steady_state(plan: SweepPlan, threads: int = 1) -> SweepResult:
    return run_plan(_checked(plan, "steady-state"), threads)


def _checked(plan: SweepPlan, *kinds: str) -> SweepPlan:
    if plan.kind not in kinds:
        raise ConfigError(f"plan kind {plan.kind!r} not accepted here (expected {kinds})")
    return plan


def plan_from_metadata(meta: dict[str, str]) -> SweepPlan:
    """Rebuild a plan from an output header."""
    try:
        kind = meta["kind"]
        a1, a2 = meta["axis1"], meta["axis2"]
    except KeyError as exc:
        raise ConfigError(f"header lacks {exc.args[0]!r}") from None
    keys = {k: v for k, v in meta.items() if k not in ("tool", "version", "kind", "axis1", "axis2", "rows")}
    config = Config().update(keys)
    return SweepPlan(
        kind,
        None if a1 == "none" else Axis.parse(a1),
        None if a2 == "none" else Axis.parse(a2),
        config,
    )
