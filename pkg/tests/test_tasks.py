import json

import numpy as np
import pytest

from antibunch import ConfigError, TaskError, optimal_conditions
from antibunch.cli import main
from antibunch.config import RunConfig, SweepAxis, load_config
from antibunch.tasks import metadata_path, run_task, write_csv, write_metadata

SMALL = dict(n1=3, n2=3, nb=3)


def small_config(task, **kw):
    return RunConfig(task=task, **{**SMALL, **kw})


def test_delta_sweep_columns_and_rows(tmp_path):
    cfg = small_config("delta-sweep", sweep=SweepAxis("delta", 0.0, 0.5, 2))
    result = run_task(cfg)
    assert result.columns == ("delta", "g2", "n1", "n2", "nb", "residual")
    assert result.rows.shape == (2, 6)
    assert result.ok.all()
    assert (result.column("residual") < 1e-10).all()
    path = tmp_path / "sweep.csv"
    write_csv(result, path)
    lines = path.read_bytes().split(b"\n")
    assert len(lines) == 4 and lines[-1] == b""  # header + 2 rows + final LF
    assert b"\r" not in path.read_bytes()


def test_csv_round_trip_is_bit_exact(tmp_path):
    cfg = small_config("delta-sweep", sweep=SweepAxis("delta", -0.3, 0.7, 3))
    result = run_task(cfg)
    path = tmp_path / "sweep.csv"
    write_csv(result, path)
    text = path.read_text(encoding="utf-8").strip().split("\n")
    parsed = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    good = result.good_rows()
    assert parsed.shape == good.shape
    assert (parsed == good).all()  # bit-for-bit through repr round-trip


def test_identical_configs_produce_identical_bytes(tmp_path):
    axis = SweepAxis("delta", 0.0, 1.0, 3)
    blobs = []
    for run in range(2):
        cfg = small_config("delta-sweep", sweep=axis)
        path = tmp_path / f"run{run}.csv"
        write_csv(run_task(cfg), path)
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]


def test_worker_pool_changes_nothing(tmp_path):
    axis = SweepAxis("delta", 0.0, 1.0, 4)
    serial = run_task(small_config("delta-sweep", sweep=axis), workers=1)
    pooled = run_task(small_config("delta-sweep", sweep=axis), workers=2)
    assert (serial.rows == pooled.rows).all()
    assert (serial.ok == pooled.ok).all()


def test_failed_points_are_flagged_not_fatal():
    # kappa <= 0 points violate the rate invariants and must be skipped
    cfg = small_config("delta-sweep", sweep=SweepAxis("kappa", -0.5, 0.5, 3))
    result = run_task(cfg)
    assert result.ok.sum() == 1
    assert len(result.failures) == 2
    assert result.good_rows()[0, 0] == 0.5


def test_all_points_failed_is_a_task_error():
    cfg = small_config("delta-sweep", sweep=SweepAxis("kappa", -1.0, -0.5, 2))
    with pytest.raises(TaskError):
        run_task(cfg)


def test_tau_series_structure():
    cfg = small_config("tau-series", tau_max=2.0, tau_points=9)
    result = run_task(cfg)
    assert result.columns == ("tau", "g2", "n1", "n2", "nb", "residual")
    tau = result.column("tau")
    assert len(tau) == 9 and tau[0] == 0.0 and tau[-1] == 2.0
    # constant steady-state diagnostics repeat on every row
    assert len(set(result.column("n1"))) == 1


def test_tau_series_custom_grid_via_sweep():
    cfg = small_config("tau-series", sweep=SweepAxis("tau", 0.0, 1.0, 5))
    result = run_task(cfg)
    assert len(result.column("tau")) == 5
    bad = small_config("tau-series", sweep=SweepAxis("tau", 0.5, 1.0, 5))
    with pytest.raises(ConfigError, match="start at 0"):
        run_task(bad)


def test_tau_var_rejected_outside_tau_task():
    cfg = small_config("delta-sweep", sweep=SweepAxis("tau", 0.0, 1.0, 5))
    with pytest.raises(ConfigError):
        run_task(cfg)
    cfg = small_config("tau-series", sweep=SweepAxis("delta", 0.0, 1.0, 5))
    with pytest.raises(ConfigError, match="sweeps tau"):
        run_task(cfg)


def test_contour_long_format():
    cfg = small_config("contour",
                       sweep=SweepAxis("delta", 0.0, 0.4, 3),
                       sweep2=SweepAxis("u", 0.1, 0.3, 2))
    result = run_task(cfg)
    assert result.columns == ("delta", "u", "log10_g2", "n1", "n2", "nb", "residual")
    rows = result.good_rows()
    assert rows.shape == (6, 7)
    # row-major ordering: second axis fastest
    assert list(rows[:2, 1]) == [0.1, 0.3]
    assert list(rows[:2, 0]) == [0.0, 0.0]


def test_contour_rejects_identical_axes():
    cfg = small_config("contour", sweep=SweepAxis("delta", 0.0, 0.4, 3),
                       sweep2=SweepAxis("delta", 0.0, 0.4, 3))
    with pytest.raises(ConfigError, match="differ"):
        run_task(cfg)


def test_reference_sweep_locates_the_dip():
    # 101 points over delta in [-1, 2] at g = 2 with the two-decimal
    # reference nonlinearity: the global minimum sits one grid step
    # (0.03) from the closed-form optimum
    cfg = RunConfig(task="delta-sweep", g=2.0, u=0.69)
    result = run_task(cfg)
    rows = result.good_rows()
    assert rows.shape[0] == 101
    assert rows[0, 0] == -1.0 and rows[-1, 0] == 2.0
    location = rows[rows[:, 1].argmin(), 0]
    assert abs(location - 0.66) <= 0.03 + 1e-12


def test_dephasing_sweep_default_axis_contains_reference_rates():
    cfg = RunConfig(task="dephasing-sweep", **SMALL)
    result = run_task(cfg)
    grid = result.column("gamma_p")
    assert len(grid) == 11
    for wanted in (0.0, 0.001, 0.01):
        assert np.isclose(grid, wanted).any()
    assert (np.diff(result.column("g2")) > 0).all()


def test_optimal_table_values():
    result = run_task(RunConfig(task="optimal-table"))
    assert result.columns == ("g", "delta_opt", "u_opt", "det_abs")
    rows = result.good_rows()
    assert list(rows[:, 0]) == [1.0, 1.5, 2.0, 2.5]
    for g, delta_opt, u_opt, det_abs in rows:
        pt = optimal_conditions(g)
        assert delta_opt == pytest.approx(pt.delta_opt)
        assert u_opt == pytest.approx(pt.u_opt)
        assert det_abs < 1e-10


def test_optimal_table_flags_degenerate_couplings():
    cfg = RunConfig(task="optimal-table", delta=0.1, u=0.1,
                    sweep=SweepAxis("g", 0.5, 1.0, 2))
    result = run_task(cfg)
    assert result.ok.sum() == 1
    assert len(result.failures) == 1


def test_optimal_table_rejects_other_sweep_vars():
    cfg = RunConfig(task="optimal-table", sweep=SweepAxis("delta", 0.0, 1.0, 3))
    with pytest.raises(ConfigError):
        run_task(cfg)


def test_unknown_task_rejected():
    with pytest.raises(ConfigError):
        run_task(RunConfig(task="resonance-sweep"))


def test_thermal_sweep_uses_thermal_cutoff():
    cfg = RunConfig(task="thermal-sweep", n1=3, n2=3,
                    sweep=SweepAxis("n_th", 0.0, 0.2, 2))
    params = cfg.system_params(thermal_task=True, n_th=0.1)
    assert params.dims.nb == 10


def test_metadata_sidecar(tmp_path):
    cfg = small_config("optimal-table")
    result = run_task(cfg)
    csv_path = tmp_path / "table.csv"
    write_csv(result, csv_path)
    write_metadata(result, cfg, csv_path, wall_time=0.25, workers=1)
    sidecar = metadata_path(csv_path)
    assert sidecar.name == "table.meta.json"
    meta = json.loads(sidecar.read_text())
    assert meta["task"] == "optimal-table"
    assert meta["rows_written"] == 4
    assert "numpy" in meta["versions"]


# -- command-line interface ------------------------------------------------

def run_cli(args):
    return main(args)


def test_cli_optimal_end_to_end(tmp_path, capsys):
    out = tmp_path / "optimal.csv"
    code = run_cli(["optimal", "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert metadata_path(out).exists()
    assert (tmp_path / "optimal.png").exists()
    assert "wrote 4/4 rows" in capsys.readouterr().out


def test_cli_no_plot_skips_figure(tmp_path):
    out = tmp_path / "optimal.csv"
    assert run_cli(["optimal", "--out", str(out), "--no-plot"]) == 0
    assert not (tmp_path / "optimal.png").exists()


def test_cli_sweep_with_config_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n1 = 3\nn2 = 3\nnb = 3\n"
                   "sweep.var = delta\nsweep.start = 0\nsweep.stop = 1\n"
                   "sweep.count = 3\n", encoding="utf-8")
    out = tmp_path / "sweep.csv"
    code = run_cli(["sweep", "--config", str(cfg), "--out", str(out),
                    "--override", "sweep.count = 2", "--no-plot"])
    assert code == 0
    assert len(out.read_text().strip().split("\n")) == 3  # header + 2 rows


def test_cli_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kerr = 0.5\n", encoding="utf-8")
    code = run_cli(["sweep", "--config", str(cfg),
                    "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "config error" in capsys.readouterr().err


def test_cli_missing_config_file(tmp_path, capsys):
    code = run_cli(["sweep", "--config", str(tmp_path / "none.cfg"),
                    "--out", str(tmp_path / "x.csv")])
    assert code == 1


def test_cli_solver_error_exit_code(tmp_path, capsys):
    code = run_cli(["optimal", "--out", str(tmp_path / "x.csv"),
                    "--override", "delta=0.1", "--override", "u=0.1",
                    "--override", "sweep.var=g", "--override", "sweep.start=0.2",
                    "--override", "sweep.stop=0.5", "--override", "sweep.count=2",
                    "--no-plot"])
    assert code == 2
    assert "solver error" in capsys.readouterr().err


def test_cli_plot_renders_for_every_task(tmp_path):
    tasks = [
        (["tau", "--override", "tau_points=5", "--override", "tau_max=1.0"], "tau.csv"),
        (["thermal", "--override", "sweep.var=n_th", "--override", "sweep.start=0",
          "--override", "sweep.stop=0.2", "--override", "sweep.count=2",
          "--override", "nb=4"], "thermal.csv"),
        (["contour", "--override", "sweep.var=delta", "--override", "sweep.start=0",
          "--override", "sweep.stop=0.4", "--override", "sweep.count=2",
          "--override", "sweep2.var=u", "--override", "sweep2.start=0.1",
          "--override", "sweep2.stop=0.3", "--override", "sweep2.count=2"], "contour.csv"),
    ]
    for extra, name in tasks:
        out = tmp_path / name
        args = extra + ["--out", str(out)]
        for small in ("n1=3", "n2=3"):
            args += ["--override", small]
        assert run_cli(args) == 0
        assert out.with_suffix(".png").exists()
