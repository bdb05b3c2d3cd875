import csv
import json

import numpy as np
import pytest

from spatial_stirap.diagnostics import CSV_COLUMNS
from spatial_stirap.experiment import ExperimentConfig, run_protocol, run_sweep
from spatial_stirap.report import (
    SUMMARY_COLUMNS,
    WAVEFUNCTION_COLUMNS,
    emit_report,
    read_config,
    read_timeseries,
    write_config,
)

FAST = dict(n_points=1024, dt=0.02, record_stride=20)


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def run():
    return run_protocol(ExperimentConfig(**FAST), abort_on_leak=False)


def test_empty_list_gives_headers_only(tmp_path):
    written = emit_report([], tmp_path)
    assert rows(written["summary"]) == [list(SUMMARY_COLUMNS)]
    manifest = json.loads(written["manifest"].read_text())
    assert manifest["runs"] == [] and manifest["numpy"] == np.__version__


def test_single_run_artefacts(tmp_path, run):
    written = emit_report([run], tmp_path)
    wf = rows(written["run_000.wavefunction"])
    assert wf[0] == list(WAVEFUNCTION_COLUMNS)
    assert len(wf) - 1 == run.config.n_points
    ts = rows(written["run_000.timeseries"])
    assert ts[0] == list(CSV_COLUMNS)
    assert len(ts) - 1 == len(run.all_records)
    summary = rows(written["summary"])
    assert len(summary) == 2 and summary[1][SUMMARY_COLUMNS.index("status")] == "ok"
    manifest = json.loads(written["manifest"].read_text())
    assert manifest["runs"][0]["summary"]["rho_RL"] == run.summary["rho_RL"]


def test_wavefunction_values(tmp_path, run):
    written = emit_report([run], tmp_path)
    data = np.array(rows(written["run_000.wavefunction"])[1:], dtype=float)
    np.testing.assert_array_equal(data[:, 1] + 1j * data[:, 2], run.final_state.amplitudes)
    np.testing.assert_allclose(data[:, 3], run.final_state.density, rtol=1e-15)


def test_timeseries_round_trip(tmp_path, run):
    written = emit_report([run], tmp_path)
    assert read_timeseries(written["run_000.timeseries"]) == run.all_records


def test_config_echo_reproduces_run(tmp_path, run):
    path = write_config(run.config, tmp_path / "echo.json")
    again = run_protocol(read_config(path), abort_on_leak=False)
    assert again.summary == run.summary


def test_yaml_config(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("branch: '-'\nlayout:\n  d_R: 1.8\nsweep:\n  axis: d_R\n  values: [1.3, 1.5]\n")
    c = read_config(path)
    assert c.branch == "-" and c.d_R == 1.8 and c.sweep_values == (1.3, 1.5)


def test_sweep_summary_rows(tmp_path):
    c = ExperimentConfig(n_points=1024, dt=0.02, record_stride=50, hold_time=0.0, T_scale=0.2,
                         sweep_axis="d_R", sweep_values=(1.5, 0.9))
    written = emit_report(run_sweep(c, four_level=False, abort_on_leak=False), tmp_path)
    summary = rows(written["summary"])
    assert len(summary) == 3
    status = [r[SUMMARY_COLUMNS.index("status")] for r in summary[1:]]
    assert status == ["ok", "error"]
    assert "run_001.timeseries" not in written


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match=str(blocker)):
        emit_report([], blocker / "sub")
