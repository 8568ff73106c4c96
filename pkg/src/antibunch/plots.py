"""Figure rendering for task results (written next to the CSV output)."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

AXIS_LABELS = {
    "delta": r"$\Delta/\kappa$",
    "u": r"$U/\kappa$",
    "g": r"$g/\kappa$",
    "kappa": r"$\kappa$",
    "gamma": r"$\gamma/\kappa$",
    "omega": r"$\Omega/\kappa$",
    "n_th": r"$n_\mathrm{th}$",
    "gamma_p": r"$\gamma_p/\kappa$",
    "tau": r"$\kappa\tau$",
}


def _line_panel(ax, result, xname, logy):
    x = result.column(xname)
    y = result.column("g2")
    if logy:
        ax.semilogy(x, y, lw=1.2)
    else:
        ax.plot(x, y, lw=1.2, marker="o", ms=3)
    ax.axhline(1.0, color="0.6", lw=0.8, ls="--")
    ax.set_xlabel(AXIS_LABELS.get(xname, xname))
    ax.set_ylabel(r"$g^{(2)}_{a_1}(0)$" if xname != "tau" else r"$g^{(2)}_{a_1}(\tau)$")
    ax.grid(alpha=0.3)


def _contour_panel(ax, fig, result):
    xname, yname = result.columns[0], result.columns[1]
    rows = result.good_rows()
    x = np.unique(rows[:, 0])
    y = np.unique(rows[:, 1])
    if len(x) * len(y) == len(rows):
        z = rows[:, 2].reshape(len(x), len(y))
        mesh = ax.pcolormesh(x, y, z.T, shading="auto", cmap="viridis")
    else:
        # failed points leave holes; fall back to scattered coloring
        mesh = ax.scatter(rows[:, 0], rows[:, 1], c=rows[:, 2], s=6,
                          cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=r"$\log_{10} g^{(2)}_{a_1}(0)$")
    ax.set_xlabel(AXIS_LABELS.get(xname, xname))
    ax.set_ylabel(AXIS_LABELS.get(yname, yname))


def _optimal_panel(ax, result):
    g = result.column("g")
    ax.plot(g, result.column("delta_opt"), marker="o", label=r"$\Delta_\mathrm{opt}/\kappa$")
    ax.plot(g, result.column("u_opt"), marker="s", label=r"$U_\mathrm{opt}/\kappa$")
    ax.set_xlabel(AXIS_LABELS["g"])
    ax.set_ylabel("optimal value")
    ax.legend()
    ax.grid(alpha=0.3)


def render(result, path):
    """Render the task's standard figure to ``path`` (format by suffix)."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    if result.task == "contour":
        _contour_panel(ax, fig, result)
    elif result.task == "optimal-table":
        _optimal_panel(ax, result)
    elif result.task == "tau-series":
        _line_panel(ax, result, "tau", logy=False)
    elif result.task in ("thermal-sweep", "dephasing-sweep"):
        _line_panel(ax, result, result.columns[0], logy=False)
    else:
        _line_panel(ax, result, result.columns[0], logy=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def figure_path(csv_path):
    return Path(csv_path).with_suffix(".png")
