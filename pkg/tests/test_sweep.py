import io
import json

import numpy as np
import pytest

from magnoghs.config import Config
from magnoghs.output import read_csv, read_metadata, to_json_obj, write
from magnoghs.params import TWO_PI, ConfigError
from magnoghs.sweep import (
    Axis,
    SteadyStateError,
    make_plan,
    plan_from_metadata,
    run_ghs_angle,
    run_kappa_sweep,
    run_map,
    run_plan,
    run_spectrum,
    run_steady_state,
)

MHZ = TWO_PI * 1e6


def small(kind, axis1=None, axis2=None, **sets):
    cfg = Config.load(None, [f"{k}={v}" for k, v in sets.items()])
    return make_plan(kind, cfg, axis1, axis2)


def test_axis_parse():
    a = Axis.parse("theta_rad=0.1:1.5:15")
    assert len(a) == 15 and a.field == "theta"
    np.testing.assert_array_equal(a.values, np.linspace(0.1, 1.5, 15))
    b = Axis.parse("d2_mm=45,70,100")
    assert list(b.values) == [45.0, 70.0, 100.0]
    for bad in ("theta_rad", "theta_rad=1:2", "bogus_rad=1:2:3", "theta_rad=1:2:0"):
        with pytest.raises(ConfigError):
            Axis.parse(bad)


def test_axis_applies_units():
    cfg = Axis.parse("x_mhz=1,2").apply(Config.load(), 1.0)
    assert cfg["x"] == TWO_PI * 1e6


@pytest.mark.parametrize("kind,axis1,axis2", [
    ("spectrum", "x_mhz=-4:4:41", "g_mb_direct_mhz=0,0.5"),
    ("ghs", "theta_rad=0.01:1.5:31", "g_mb_direct_mhz=0,0.05,0.5"),
    ("map", "theta_rad=0.1:1.5:7", "g_mb_direct_mhz=0.1:1.2:5"),
    ("kappa-sweep", "kappa_ratio=0.2:3:9", "none"),
    ("length-sweep", "theta_rad=0.01:1.5:11", "d2_mm=45,70,100"),
])
def test_row_count_and_axis_columns(kind, axis1, axis2):
    plan = small(kind, axis1, axis2)
    res = run_plan(plan)
    assert res.rows.shape[0] == plan.size
    inner = Axis.parse(axis1)
    first = res.columns.index(inner.name)
    n1 = len(inner)
    for block in range(plan.size // n1):
        seg = res.rows[block * n1:(block + 1) * n1, first]
        np.testing.assert_array_equal(seg, inner.values)


def test_default_axes():
    plan = make_plan("ghs", Config.load())
    assert len(plan.axis1) == 1549 and list(plan.axis2.values) == [0.0, 0.05, 0.5]
    plan = make_plan("ghs", Config.load(None, ["g_mb_direct_mhz=0.2"]))
    assert plan.axis2 is None


def test_bad_plans():
    with pytest.raises(ConfigError):
        run_plan(small("map", "theta_rad=0.1:1:3", "theta_rad=0.2:1:3"))
    with pytest.raises(ConfigError):
        run_plan(small("steady-state"))
    with pytest.raises(ConfigError):
        run_plan(small("ghs", "theta_rad=0:1:3", "none"))
    with pytest.raises(ConfigError):
        run_plan(small("ghs", "theta_rad=0.1:1:3", "g_mb_direct_mhz=2"))


def test_unstable_allowed_when_requested():
    res = run_plan(small("ghs", "theta_rad=0.5,1.0", "g_mb_direct_mhz=2", allow_unstable="true"))
    assert res.rows.shape[0] == 2


def test_kind_checked_entry_points():
    plan = small("spectrum", "x_mhz=-1:1:5", "none")
    assert run_spectrum(plan).columns == ["x_mhz", "re_chi", "im_chi"]
    with pytest.raises(ValueError):
        run_ghs_angle(plan)
    with pytest.raises(ValueError):
        run_map(plan)


def test_spectrum_parity():
    res = run_plan(small("spectrum", "x_mhz=-4:4:801", "g_mb_direct_mhz=0,0.5"))
    for G in (0.0, 0.5):
        sel = res.column("g_mb_direct_mhz") == G
        im = res.column("im_chi")[sel]
        re = res.column("re_chi")[sel]
        assert np.max(np.abs(im + im[::-1])) < 1e-10
        assert np.max(np.abs(re - re[::-1])) < 1e-10


def test_kappa_sweep_columns():
    res = run_kappa_sweep(small("kappa-sweep", "kappa_ratio=0.5,1.0", "none"))
    assert res.columns[0] == "kappa_ratio"
    res = run_plan(small("kappa-sweep", "kappa_a_mhz=1,2", "none"))
    assert res.column("kappa_over_g_ma") == pytest.approx([0.5, 1.0])


def test_threads_are_deterministic():
    plan = small("ghs", "theta_rad=0.01:1.5:101", "g_mb_direct_mhz=0,0.05,0.3,0.5")
    a, b = io.StringIO(), io.StringIO()
    write(run_plan(plan, threads=1), a)
    write(run_plan(plan, threads=4), b)
    assert a.getvalue() == b.getvalue()


def test_csv_round_trip(tmp_path):
    res = run_plan(small("ghs", "theta_rad=0.01:1.5:21", "g_mb_direct_mhz=0,0.5"))
    path = tmp_path / "r.csv"
    with open(path, "w") as fh:
        write(res, fh)
    meta, cols, data = read_csv(path)
    assert cols == res.columns
    np.testing.assert_array_equal(data, res.rows)
    assert meta["kind"] == "ghs" and int(meta["rows"]) == 42


def test_json_round_trip(tmp_path):
    res = run_plan(small("map", "theta_rad=0.1:1.5:4", "g_mb_direct_mhz=0.1,0.2"))
    path = tmp_path / "r.json"
    with open(path, "w") as fh:
        write(res, fh, "json")
    obj = json.loads(path.read_text())
    assert obj["columns"] == res.columns
    np.testing.assert_array_equal(np.array(obj["rows"], dtype=float), res.rows)
    assert to_json_obj(res)["metadata"]["kind"] == "map"
    assert read_metadata(path)["axis1"] == "theta_rad=0.1:1.5:4"


def test_replay_from_header_is_exact(tmp_path):
    plan = small("length-sweep", "theta_rad=0.01:1.5:17", "d2_mm=45,70", x_mhz="0.3", eps1="2.5")
    path = tmp_path / "a.csv"
    with open(path, "w") as fh:
        write(run_plan(plan), fh)
    again = plan_from_metadata(read_metadata(path))
    buf = io.StringIO()
    write(run_plan(again), buf)
    assert buf.getvalue() == path.read_text()


def test_steady_state_zero_drive():
    res = run_steady_state(small("steady-state", coupling_mode="drive", g_mb_hz="1", b0_t="0"))
    row = dict(zip(res.columns, res.rows[0]))
    for k in ("e_d_rad_s", "re_a_s", "im_a_s", "re_m_s", "im_m_s", "re_b_s", "im_b_s", "g_mb_eff_rad_s"):
        assert row[k] == 0.0
    assert row["delta_s_rad_s"] == TWO_PI * 15e6 and row["converged"] == 1


def test_steady_state_residuals_small():
    res = run_plan(small("steady-state", "b0_t=1e-7,3e-7,1e-6", coupling_mode="drive", g_mb_hz="1"))
    assert np.all(res.column("converged") == 1)
    assert np.all(res.column("residual") < 1e-10)
    G = res.column("g_mb_eff_rad_s")
    assert np.all(np.diff(G) > 0)


def test_drive_mode_non_convergence_raises():
    plan = small("ghs", "theta_rad=0.5,1.0", "none", coupling_mode="drive", g_mb_hz="1",
                 b0_t="1e-6", solver_max_iter="1")
    with pytest.raises(SteadyStateError):
        run_plan(plan)


def test_reference_map_most_negative_at_weak_coupling():
    res = run_map(small("map", "theta_rad=0.005:1.545:100", "g_mb_direct_mhz=0.01:1.5:60"))
    s = res.column("s_r_over_lambda")
    i = int(np.nanargmin(s))
    assert s[i] < 0
    assert res.column("g_mb_direct_mhz")[i] == pytest.approx(0.01)


@pytest.mark.xfail(strict=True, reason="the kappa extremum at this coupling is a positive peak; see notes")
def test_reference_negative_kappa_dip():
    res = run_kappa_sweep(small("kappa-sweep", "kappa_ratio=0.2:3:561", "none",
                                g_mb_direct_mhz="0.01", theta_rad="0.97"))
    s = res.column("s_r_over_lambda")
    assert s[np.nanargmax(np.abs(s))] < 0
