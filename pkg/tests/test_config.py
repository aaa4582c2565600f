import math

import pytest

from magnoghs.config import Config, read_config_file, split_key
from magnoghs.params import TWO_PI, ConfigError, default_params


def test_defaults_equal_reference_parameters():
    system, geom = default_params()
    cfg = Config()
    assert cfg.system() == system
    assert cfg.geometry() == geom


def test_cyclic_units_convert_to_angular(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# reference cavity\n"
        "omega_a_ghz = 13.2\n"
        "kappa_a_mhz = 2.1   # cavity decay\n"
        "gamma_b_hz = 150\n"
        "g_mb_direct_khz = 500\n"
        "d1_mm = 4\n"
        "diameter_um = 250\n"
        "\n",
        encoding="utf-8",
    )
    cfg = Config.load(path)
    assert cfg["omega_a"] == pytest.approx(TWO_PI * 13.2e9, rel=1e-15)
    assert cfg["kappa_a"] == pytest.approx(TWO_PI * 2.1e6, rel=1e-15)
    assert cfg["gamma_b"] == pytest.approx(TWO_PI * 150, rel=1e-15)
    assert cfg["g_mb_direct"] == pytest.approx(TWO_PI * 0.5e6, rel=1e-15)
    assert cfg["d1"] == pytest.approx(4e-3, rel=1e-15)
    assert cfg["diameter"] == pytest.approx(250e-6, rel=1e-15)


def test_set_overrides_file(tmp_path):
    path = tmp_path / "a.cfg"
    path.write_text("d2_mm = 70\n", encoding="utf-8")
    cfg = Config.load(path, ["d2_mm=100"])
    assert cfg["d2"] == pytest.approx(0.1)


def test_canonical_items_round_trip_bitwise():
    cfg = Config.load(sets=["kappa_a_mhz=1.7", "theta_rad=1.08", "g_mb_direct_mhz=0.05", "chi_rotation=i"])
    again = Config().update({k: repr(v) if isinstance(v, float) else str(v) for k, v in cfg.items()})
    assert again.values == cfg.values


@pytest.mark.parametrize("key", ["omega_a", "omega_a_furlongs", "nonsense_mhz", "eps1_mhz"])
def test_unknown_keys_rejected(key):
    with pytest.raises(ConfigError):
        Config().update({key: "1"})


def test_bad_values_rejected(tmp_path):
    with pytest.raises(ConfigError):
        Config().update({"kappa_a_mhz": "fast"})
    with pytest.raises(ConfigError):
        Config().update({"chi_rotation": "j"})
    with pytest.raises(ConfigError):
        Config().update({"kappa_a_mhz": "inf"})
    path = tmp_path / "bad.cfg"
    path.write_text("kappa_a_mhz 2.1\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="bad.cfg:1"):
        read_config_file(path)


def test_split_key_prefers_longest_field():
    assert split_key("g_mb_direct_mhz") == ("g_mb_direct", "mhz")
    assert split_key("g_mb_hz") == ("g_mb", "hz")
    assert split_key("eps1") == ("eps1", None)


def test_validate_catches_nonpositive_rate():
    with pytest.raises(ConfigError, match="kappa_m"):
        Config().update({"kappa_m_mhz": "0"}).validate()


def test_optional_fields_accept_none():
    cfg = Config().update({"delta_a_mhz": "15.5"})
    assert cfg.system().Delta_a == pytest.approx(TWO_PI * 15.5e6)
    assert Config().update({"delta_a_mhz": "none"}).system().delta_a is None
    assert Config().h_omega == pytest.approx(1e-6 * TWO_PI * 15e6)


def test_drive_mode_system():
    cfg = Config().update({"coupling_mode": "drive", "g_mb_hz": "0.1", "b0_mt": "0.2"})
    cs = cfg.system().coupling
    assert not cs.direct
    assert cs.B0 == pytest.approx(0.2e-3)
    assert cs.g_mb == pytest.approx(TWO_PI * 0.1)
    cfg.validate()
    with pytest.raises(ConfigError, match="g_mb"):
        Config().update({"coupling_mode": "drive"}).validate()


def test_theta_validation():
    with pytest.raises(ConfigError):
        Config().update({"theta_rad": repr(math.pi / 2)}).validate()
