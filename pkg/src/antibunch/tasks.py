"""Figure-reproduction tasks: sweeps, tau series, contours, optimal table.

Every task produces a SweepResult table; write_csv serializes it with
shortest round-trip float formatting so identical configs yield identical
bytes.  Grid points are independent; a process pool evaluates them when
workers > 1 and rows are reassembled in grid order either way.
"""

import json
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .analytics import determinant_condition, optimal_conditions
from .config import SweepAxis, TASKS
from .dynamics import g2_tau
from .errors import AntibunchError, ConfigError, TaskError
from .fock import number
from .liouville import (build_liouvillian, expectation, g2_zero,
                        residual_norm, steady_state)
from .model import build_collapse_ops, build_hamiltonian

DEFAULT_AXES = {
    "delta-sweep": SweepAxis("delta", -1.0, 2.0, 101),
    "thermal-sweep": SweepAxis("n_th", 0.0, 1.0, 21),
    "dephasing-sweep": SweepAxis("gamma_p", 0.0, 0.01, 11),
    "contour": SweepAxis("delta", -1.0, 2.0, 61),
    "optimal-table": SweepAxis("g", 1.0, 2.5, 4),
}
DEFAULT_CONTOUR_AXIS2 = SweepAxis("u", 0.0, 2.0, 61)


@dataclass(frozen=True)
class SweepResult:
    """Task output: one row per grid point, failed points masked out.

    ``rows`` always spans the full grid; ``ok`` marks rows that solved and
    are written/summarized, ``failures`` records the rest.
    """

    task: str
    columns: tuple
    rows: np.ndarray
    ok: np.ndarray
    failures: tuple

    def good_rows(self):
        return self.rows[self.ok]

    def column(self, name):
        return self.good_rows()[:, self.columns.index(name)]


def _steady_row(params, log_value):
    hamiltonian = build_hamiltonian(params)
    liou = build_liouvillian(hamiltonian, build_collapse_ops(params))
    rho = steady_state(liou)
    g2 = g2_zero(rho)
    if log_value:
        value = math.log10(g2) if g2 > 0.0 else float("-inf")
    else:
        value = g2
    return (
        value,
        expectation(number("a1", params.dims), rho).real,
        expectation(number("a2", params.dims), rho).real,
        expectation(number("b", params.dims), rho).real,
        residual_norm(liou, rho),
    )


def _evaluate_point(payload):
    index, config, overrides, thermal, log_value = payload
    try:
        params = config.system_params(thermal_task=thermal, **overrides)
        return index, _steady_row(params, log_value), None
    except (AntibunchError, np.linalg.LinAlgError) as exc:
        return index, None, f"{type(exc).__name__}: {exc}"


def _gather(payloads, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_point, payloads, chunksize=4))
    else:
        results = [_evaluate_point(p) for p in payloads]
    results.sort(key=lambda item: item[0])
    return results


def _assemble(task, columns, axis_values, results):
    n = len(axis_values)
    width = len(columns)
    rows = np.full((n, width), np.nan)
    ok = np.zeros(n, dtype=bool)
    failures = []
    for index, values, error in results:
        rows[index, :len(axis_values[index])] = axis_values[index]
        if error is None:
            rows[index, len(axis_values[index]):] = values
            ok[index] = True
        else:
            failures.append((index, error))
    if not ok.any():
        raise TaskError(f"every grid point of task {task!r} failed; "
                        f"first error: {failures[0][1]}")
    return SweepResult(task=task, columns=tuple(columns), rows=rows, ok=ok,
                       failures=tuple(failures))


def _run_1d_sweep(config, task, workers):
    axis = config.sweep or DEFAULT_AXES[task]
    if axis.var == "tau":
        raise ConfigError("tau can only be swept by the tau task")
    thermal = task == "thermal-sweep" or axis.var == "n_th"
    grid = axis.grid()
    payloads = [
        (i, config, {axis.var: value}, thermal, False)
        for i, value in enumerate(grid)
    ]
    results = _gather(payloads, workers)
    columns = (axis.var, "g2", "n1", "n2", "nb", "residual")
    return _assemble(task, columns, [(v,) for v in grid], results)


def _run_contour(config, workers):
    axis1 = config.sweep or DEFAULT_AXES["contour"]
    axis2 = config.sweep2 or DEFAULT_CONTOUR_AXIS2
    if "tau" in (axis1.var, axis2.var):
        raise ConfigError("tau can only be swept by the tau task")
    if axis1.var == axis2.var:
        raise ConfigError(f"contour axes must differ, both are {axis1.var!r}")
    thermal = "n_th" in (axis1.var, axis2.var)
    pairs = [(x, y) for x in axis1.grid() for y in axis2.grid()]
    payloads = [
        (i, config, {axis1.var: x, axis2.var: y}, thermal, True)
        for i, (x, y) in enumerate(pairs)
    ]
    results = _gather(payloads, workers)
    columns = (axis1.var, axis2.var, "log10_g2", "n1", "n2", "nb", "residual")
    return _assemble("contour", columns, pairs, results)


def _run_tau_series(config):
    axis = config.sweep
    if axis is not None:
        if axis.var != "tau":
            raise ConfigError(f"the tau task sweeps tau, not {axis.var!r}")
        tau_grid = axis.grid()
        if tau_grid[0] != 0.0:
            raise ConfigError("tau sweeps must start at 0")
    else:
        tau_grid = np.linspace(0.0, config.tau_max, config.tau_points)
    params = config.system_params()
    hamiltonian = build_hamiltonian(params)
    liou = build_liouvillian(hamiltonian, build_collapse_ops(params))
    rho = steady_state(liou)
    series = g2_tau(liou, rho, tau_grid)
    constants = (
        expectation(number("a1", params.dims), rho).real,
        expectation(number("a2", params.dims), rho).real,
        expectation(number("b", params.dims), rho).real,
        residual_norm(liou, rho),
    )
    n = len(tau_grid)
    rows = np.column_stack([series.tau, series.values,
                            np.tile(constants, (n, 1))])
    return SweepResult(task="tau-series",
                       columns=("tau", "g2", "n1", "n2", "nb", "residual"),
                       rows=rows, ok=np.ones(n, dtype=bool), failures=())


def _run_optimal_table(config):
    axis = config.sweep or DEFAULT_AXES["optimal-table"]
    if axis.var != "g":
        raise ConfigError(f"the optimal table sweeps g, not {axis.var!r}")
    grid = axis.grid()
    rows = np.full((len(grid), 4), np.nan)
    ok = np.zeros(len(grid), dtype=bool)
    failures = []
    for i, g in enumerate(grid):
        rows[i, 0] = g
        try:
            pt = optimal_conditions(g, config.kappa)
        except AntibunchError as exc:
            failures.append((i, f"{type(exc).__name__}: {exc}"))
            continue
        det = determinant_condition(pt.delta_opt, pt.u_opt, g, config.kappa, 0.0)
        rows[i, 1:] = (pt.delta_opt, pt.u_opt, abs(det))
        ok[i] = True
    if not ok.any():
        raise TaskError("no real optimum exists anywhere on the g grid")
    return SweepResult(task="optimal-table",
                       columns=("g", "delta_opt", "u_opt", "det_abs"),
                       rows=rows, ok=ok, failures=tuple(failures))


def run_task(config, workers=1):
    """Execute the configured task and return its result table."""
    if config.task not in TASKS:
        raise ConfigError(f"unknown task {config.task!r}; expected one of "
                          f"{', '.join(TASKS)}")
    if config.task == "tau-series":
        return _run_tau_series(config)
    if config.task == "contour":
        return _run_contour(config, workers)
    if config.task == "optimal-table":
        return _run_optimal_table(config)
    return _run_1d_sweep(config, config.task, workers)


def write_csv(result, path):
    """UTF-8 CSV, LF endings, shortest round-trip decimal floats."""
    lines = [",".join(result.columns)]
    for row in result.good_rows():
        lines.append(",".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def metadata_path(csv_path):
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".meta.json")


def write_metadata(result, config, csv_path, wall_time, workers):
    """Sidecar with the config echo, versions, and timing; the CSV itself
    stays free of anything run-dependent."""
    meta = {
        "task": result.task,
        "config": config.echo(),
        "grid_size": int(result.rows.shape[0]),
        "rows_written": int(result.ok.sum()),
        "failures": [{"index": int(i), "error": e} for i, e in result.failures],
        "workers": workers,
        "wall_time_s": wall_time,
        "versions": {
            "antibunch": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    with open(metadata_path(csv_path), "w", encoding="utf-8") as handle:
        json.dump(meta, handle, indent=2)
        handle.write("\n")
