"""Static figures for sweep results, written next to the delimited output."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .sweep import SweepResult

LABELS = {
    "x_mhz": r"effective detuning $x/2\pi$ (MHz)",
    "x_rad_s": r"effective detuning $x$ (rad/s)",
    "theta_rad": r"incident angle $\theta$ (rad)",
    "g_mb_direct_mhz": r"$G_{mb}/2\pi$ (MHz)",
    "kappa_over_g_ma": r"$\kappa_a/g_{ma}$",
    "kappa_ratio": r"$\kappa_a/g_{ma}$",
    "d2_mm": r"$d_2$ (mm)",
    "re_chi": r"Re $\chi$",
    "s_r_over_lambda": r"$S_r/\lambda$",
    "g_mb_eff_rad_s": r"$G_{mb}$ (rad/s)",
}

_RC = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (5.0, 3.4),
    "savefig.dpi": 150,
}


def _label(name: str) -> str:
    return LABELS.get(name, name)


def _value_column(kind: str) -> str:
    return {"spectrum": "re_chi", "steady-state": "g_mb_eff_rad_s"}.get(kind, "s_r_over_lambda")


def render(result: SweepResult, path: str | Path) -> Path:
    """Render the main quantity of ``result`` to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    meta = dict(result.metadata)
    kind = meta.get("kind", "")
    value = _value_column(kind)
    cols = result.columns
    has_outer = meta.get("axis2", "none") != "none"
    xname = "kappa_over_g_ma" if kind == "kappa-sweep" else meta.get("axis1", "none").split("=", 1)[0]
    if xname not in cols:
        xname = cols[0]

    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        y = result.column(value)
        if kind == "map":
            outer = result.column(cols[0])
            n2 = np.unique(outer).size
            inner = result.column(cols[1])
            n1 = result.rows.shape[0] // n2
            z = y.reshape(n2, n1)
            mesh = ax.pcolormesh(inner.reshape(n2, n1), outer.reshape(n2, n1), z,
                                 shading="auto", cmap="RdBu_r",
                                 vmin=-np.nanmax(np.abs(z)), vmax=np.nanmax(np.abs(z)))
            fig.colorbar(mesh, ax=ax, label=_label(value))
            ax.set_xlabel(_label(cols[1]))
            ax.set_ylabel(_label(cols[0]))
        elif has_outer:
            outer = result.column(cols[0])
            for v in dict.fromkeys(outer.tolist()):
                sel = outer == v
                ax.plot(result.column(xname)[sel], y[sel], lw=1, label=f"{_label(cols[0])} = {v:g}")
            ax.legend(frameon=False)
            ax.set_xlabel(_label(xname))
            ax.set_ylabel(_label(value))
        else:
            ax.plot(result.column(xname), y, lw=1)
            ax.set_xlabel(_label(xname))
            ax.set_ylabel(_label(value))
        fig.tight_layout()
        path = Path(path)
        fig.savefig(path)
        plt.close(fig)
    return path
