"""Serialisation of sweep results: CSV with a metadata header, JSON, gnuplot."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import IO, Any

import numpy as np

from .sweep import SweepResult


def format_float(v: float) -> str:
    # 17 significant digits round-trip any double
    if math.isnan(v):
        return "nan"
    return format(float(v), ".17g")


def _format_meta(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(result: SweepResult, fh: IO[str]) -> None:
    for key, value in result.metadata:
        fh.write(f"# {key} = {_format_meta(value)}\n")
    fh.write(",".join(result.columns) + "\n")
    ints = [name in result.int_columns for name in result.columns]
    for row in result.rows:
        fh.write(",".join(str(int(v)) if is_int else format_float(v) for v, is_int in zip(row, ints)))
        fh.write("\n")


def to_json_obj(result: SweepResult) -> dict:
    ints = [name in result.int_columns for name in result.columns]
    rows = [
        [int(v) if is_int else (None if math.isnan(v) else float(v)) for v, is_int in zip(row, ints)]
        for row in result.rows
    ]
    meta = {k: (v if isinstance(v, (bool, int, float, str)) or v is None else str(v)) for k, v in result.metadata}
    return {"metadata": meta, "columns": list(result.columns), "rows": rows}


def write_json(result: SweepResult, fh: IO[str]) -> None:
    json.dump(to_json_obj(result), fh, allow_nan=False)
    fh.write("\n")


def write(result: SweepResult, fh: IO[str], fmt: str = "csv") -> None:
    if fmt == "csv":
        write_csv(result, fh)
    elif fmt == "json":
        write_json(result, fh)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_csv(path: str | Path) -> tuple[dict[str, str], list[str], np.ndarray]:
    """Metadata, column names and data of a CSV written by :func:`write_csv`."""
    meta: dict[str, str] = {}
    columns: list[str] = []
    data = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif not columns:
                columns = line.split(",")
            elif line:
                data.append([float(v) for v in line.split(",")])
    return meta, columns, np.array(data, dtype=float).reshape(-1, len(columns))


def read_metadata(path: str | Path) -> dict[str, str]:
    """Header of a CSV or JSON result file as strings."""
    path = Path(path)
    if path.suffix == ".json":
        obj = json.loads(path.read_text(encoding="utf-8"))
        return {k: _format_meta(v) for k, v in obj["metadata"].items()}
    return read_csv(path)[0]


def gnuplot_script(result: SweepResult, csv_path: str | Path) -> str:
    """A gnuplot script that plots the main quantity of ``csv_path``."""
    cols = result.columns
    kind = dict(result.metadata).get("kind", "")
    value = {"spectrum": "re_chi", "steady-state": "g_mb_eff_rad_s"}.get(kind, "s_r_over_lambda")
    if kind == "kappa-sweep":
        xcol = cols.index("kappa_over_g_ma") + 1
    else:
        axis1 = dict(result.metadata).get("axis1", "none").split("=", 1)[0]
        xcol = cols.index(axis1) + 1 if axis1 in cols else 1
    ycol = cols.index(value) + 1
    name = Path(csv_path).name
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{cols[xcol - 1]}'",
        f"set ylabel '{value}'",
    ]
    axis2 = dict(result.metadata).get("axis2", "none")
    if kind == "map":
        lines += [
            "set view map",
            f"set xlabel '{cols[1]}'",
            f"set ylabel '{cols[0]}'",
            f"splot '{name}' using 2:1:{ycol} with pm3d notitle",
        ]
    elif axis2 != "none":
        outer = sorted(set(result.rows[:, 0].tolist()), key=result.rows[:, 0].tolist().index)
        plots = [
            f"'{name}' using (${1} == {format_float(v)} ? ${xcol} : 1/0):{ycol} with lines "
            f"title '{cols[0]}={v:g}'"
            for v in outer
        ]
        lines.append("plot " + ", \\\n     ".join(plots))
    else:
        lines.append(f"plot '{name}' using {xcol}:{ycol} with lines")
    return "\n".join(lines) + "\n"
