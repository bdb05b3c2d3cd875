"""CSV / JSON output for runs and sweeps."""

from __future__ import annotations

import csv
import json
import math
import platform
from pathlib import Path

import numpy as np
import scipy
import yaml

from . import __version__
from .diagnostics import CSV_COLUMNS, DiagnosticsRecord
from .errors import ConfigurationError
from .experiment import ExperimentConfig, SweepResult

SUMMARY_COLUMNS = (
    "index", "axis", "value", "status", "error",
    "omega_R", "Omega_R", "T", "delta_t", "T0_Omega_R",
    "rho_L", "rho_M", "rho_RL", "rho_RR", "double_well", "max_rho_M",
    "S_R", "S_I", "S_dominant", "fid_sym", "fid_antisym", "fid_target", "delta_rho_A", "max_leak",
    "model_rho_L", "model_rho_M", "model_rho_RL", "model_rho_RR", "model_max_rho_M", "model_relative_phase",
)
WAVEFUNCTION_COLUMNS = ("x", "re_psi", "im_psi", "density")


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def write_config(config: ExperimentConfig, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    return path


def load_config_dict(path) -> dict:
    """Parse a JSON (by suffix) or YAML configuration file into a plain mapping."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"{path}: cannot parse configuration: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return data


def read_config(path) -> ExperimentConfig:
    """Load a configuration file written by :func:`write_config` (or by hand)."""
    return ExperimentConfig.from_dict(load_config_dict(path))


def write_timeseries(records, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for rec in records:
            w.writerow([repr(float(v)) for v in rec.as_row()])
    return path


def read_timeseries(path) -> list:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected header {rows[0] if rows else None}")
    return [DiagnosticsRecord.from_row(r) for r in rows[1:]]


def write_wavefunction(psi, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(WAVEFUNCTION_COLUMNS)
        for x, a in zip(psi.grid.x, psi.amplitudes):
            w.writerow([repr(float(x)), repr(float(a.real)), repr(float(a.imag)), repr(float(abs(a) ** 2))])
    return path


def _summary_rows(results, axis=None, values=None, errors=None):
    rows = []
    for i, res in enumerate(results):
        row = {"index": i, "axis": axis or "", "value": "" if values is None else values[i],
               "status": "ok" if res is not None else "error",
               "error": (errors or {}).get(i, "")}
        if res is not None:
            row.update(res.summary)
        rows.append(row)
    return rows


def write_summary(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, extrasaction="ignore")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return path


def emit_report(results, out_dir) -> dict:
    """Write every artefact of a list of runs (or a :class:`SweepResult`) into ``out_dir``.

    Per run ``i``: ``run_###.config.json``, ``run_###.timeseries.csv`` (protocol
    plus hold) and ``run_###.wavefunction.csv`` (state at the end of the
    protocol).  Always: ``summary.csv`` (one row per run) and ``manifest.json``.
    Returns the written paths keyed by artefact name.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc

    if isinstance(results, SweepResult):
        axis = results.axis
        values = [p.value for p in results.points]
        errors = {i: p.error for i, p in enumerate(results.points) if not p.ok}
        runs = [p.result for p in results.points]
    else:
        axis, values, errors, runs = None, None, None, list(results)

    written = {}
    manifest = {
        "package": "spatial_stirap",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sweep_axis": axis,
        "runs": [],
    }
    for i, res in enumerate(runs):
        entry = {"index": i, "value": None if values is None else values[i]}
        if res is None:
            entry["error"] = errors.get(i, "")
            manifest["runs"].append(entry)
            continue
        stem = f"run_{i:03d}"
        written[f"{stem}.config"] = write_config(res.config, out / f"{stem}.config.json")
        written[f"{stem}.timeseries"] = write_timeseries(res.all_records, out / f"{stem}.timeseries.csv")
        written[f"{stem}.wavefunction"] = write_wavefunction(res.final_state, out / f"{stem}.wavefunction.csv")
        entry.update({
            "config": res.config.to_dict(),
            "summary": {k: _json_safe(v) for k, v in res.summary.items()},
            "adiabaticity": {k: _json_safe(v) for k, v in vars(res.adiabaticity).items()},
            "wall_time": res.wall_time,
        })
        manifest["runs"].append(entry)

    written["summary"] = write_summary(_summary_rows(runs, axis, values, errors), out / "summary.csv")
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, default=_json_safe) + "\n")
    written["manifest"] = path
    return written
