import pytest

from magnoghs.config import Config
from magnoghs.plotting import render
from magnoghs.sweep import make_plan, run_plan


@pytest.mark.parametrize("kind,axis1,axis2", [
    ("spectrum", "x_mhz=-4:4:81", None),
    ("ghs", "theta_rad=0.01:1.5:51", "none"),
    ("map", "theta_rad=0.1:1.5:6", "g_mb_direct_mhz=0.1:1:4"),
    ("kappa-sweep", "kappa_ratio=0.2:3:8", None),
])
def test_render_writes_image(tmp_path, kind, axis1, axis2):
    res = run_plan(make_plan(kind, Config.load(), axis1, axis2))
    for name in ("f.png", "f.pdf"):
        path = render(res, tmp_path / name)
        assert path.stat().st_size > 1000
