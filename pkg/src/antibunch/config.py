"""Run configuration: flat key=value files, overrides, and defaults.

Config keys (all optional): delta, u, g, kappa, gamma, omega, n_th,
gamma_p, n1, n2, nb, tau_max, tau_points, sweep.var, sweep.start,
sweep.stop, sweep.count, sweep2.var/start/stop/count, legacy_lb_kappa.

Unset delta/u default to the interference optimum for the configured
coupling; unset nb defaults to 6, raised to 10 whenever the mechanical
bath is thermally occupied.
"""

from dataclasses import dataclass

import numpy as np

from .analytics import optimal_conditions
from .errors import ConfigError, NoRealSolutionError
from .fock import ModeDims
from .model import SystemParams

TASKS = ("delta-sweep", "tau-series", "contour", "thermal-sweep",
         "dephasing-sweep", "optimal-table")

SWEEP_VARS = ("delta", "u", "g", "kappa", "gamma", "omega", "n_th", "gamma_p", "tau")

# config-space name -> SystemParams field
PARAM_FIELDS = {
    "delta": "delta",
    "u": "kerr",
    "g": "coupling",
    "kappa": "kappa",
    "gamma": "gamma",
    "omega": "drive",
    "n_th": "n_th",
    "gamma_p": "gamma_p",
}

_FLOAT_KEYS = ("delta", "u", "g", "kappa", "gamma", "omega", "n_th", "gamma_p", "tau_max")
_INT_KEYS = ("n1", "n2", "nb", "tau_points")
_BOOL_KEYS = ("legacy_lb_kappa",)
_AXIS_PREFIXES = ("sweep", "sweep2")

DEFAULT_NB = 6
THERMAL_NB = 10


@dataclass(frozen=True)
class SweepAxis:
    """One linear sweep axis."""

    var: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.var not in SWEEP_VARS:
            raise ConfigError(f"unknown sweep variable {self.var!r}; "
                              f"choose one of {', '.join(SWEEP_VARS)}")
        if self.scale != "linear":
            raise ConfigError(f"unsupported sweep scale {self.scale!r}")
        if self.count < 2:
            raise ConfigError(f"sweep.count must be >= 2, got {self.count}")
        if not self.start < self.stop:
            raise ConfigError(f"sweep.start ({self.start:g}) must be below "
                              f"sweep.stop ({self.stop:g})")

    def grid(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Everything a task run needs besides the task name and output path."""

    delta: float | None = None
    u: float | None = None
    g: float = 1.0
    kappa: float = 1.0
    gamma: float = 0.001
    omega: float = 0.01
    n_th: float = 0.0
    gamma_p: float = 0.0
    n1: int = 4
    n2: int = 4
    nb: int | None = None
    tau_max: float = 20.0
    tau_points: int = 200
    sweep: SweepAxis | None = None
    sweep2: SweepAxis | None = None
    legacy_lb_kappa: bool = False
    task: str | None = None
    output_path: str | None = None

    def resolved_nb(self, thermal_task=False):
        if self.nb is not None:
            return self.nb
        if thermal_task or self.n_th > 0:
            return THERMAL_NB
        return DEFAULT_NB

    def resolved_point(self):
        """(delta, u) with unset values at the interference optimum."""
        if self.delta is not None and self.u is not None:
            return self.delta, self.u
        try:
            pt = optimal_conditions(self.g, self.kappa)
        except NoRealSolutionError as exc:
            raise ConfigError(
                f"delta/u defaults are the interference optimum, which does "
                f"not exist at g = {self.g:g}, kappa = {self.kappa:g}; set "
                "delta and u explicitly") from exc
        delta = self.delta if self.delta is not None else pt.delta_opt
        u = self.u if self.u is not None else pt.u_opt
        return delta, u

    def system_params(self, thermal_task=False, **overrides):
        """Build SystemParams, applying config-space overrides by name."""
        delta, u = self.resolved_point()
        values = {
            "delta": delta,
            "kerr": u,
            "coupling": self.g,
            "kappa": self.kappa,
            "gamma": self.gamma,
            "drive": self.omega,
            "n_th": self.n_th,
            "gamma_p": self.gamma_p,
        }
        for key, value in overrides.items():
            values[PARAM_FIELDS[key]] = value
        dims = ModeDims(self.n1, self.n2, self.resolved_nb(thermal_task))
        try:
            return SystemParams(dims=dims, legacy_lb_kappa=self.legacy_lb_kappa,
                                **values)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self):
        """Plain dict of the effective configuration (sidecar metadata)."""
        out = {}
        for name in ("delta", "u", "g", "kappa", "gamma", "omega", "n_th",
                     "gamma_p", "n1", "n2", "nb", "tau_max", "tau_points",
                     "legacy_lb_kappa", "task", "output_path"):
            out[name] = getattr(self, name)
        for name in ("sweep", "sweep2"):
            axis = getattr(self, name)
            out[name] = None if axis is None else {
                "var": axis.var, "start": axis.start, "stop": axis.stop,
                "count": axis.count, "scale": axis.scale}
        return out


def _parse_value(key, raw, line):
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key} expects a number, got {raw!r}", line=line)
    if key in _INT_KEYS:
        try:
            return int(raw, 10)
        except ValueError:
            raise ConfigError(f"{key} expects an integer, got {raw!r}", line=line)
    if key in _BOOL_KEYS:
        lowered = raw.lower()
        if lowered in ("true", "false"):
            return lowered == "true"
        raise ConfigError(f"{key} expects true or false, got {raw!r}", line=line)
    raise ConfigError(f"unknown key {key!r}", line=line)


def _parse_axis_item(prefix, attr, raw, line):
    if attr == "var":
        return raw
    if attr == "count":
        try:
            return int(raw, 10)
        except ValueError:
            raise ConfigError(f"{prefix}.count expects an integer, got {raw!r}",
                              line=line)
    if attr in ("start", "stop"):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{prefix}.{attr} expects a number, got {raw!r}",
                              line=line)
    if attr == "scale":
        return raw
    raise ConfigError(f"unknown key {prefix}.{attr!r}", line=line)


def _build_config(items):
    """Assemble a RunConfig from [(key, raw_value, line)] entries."""
    plain = {}
    axes = {"sweep": {}, "sweep2": {}}
    for key, raw, line in items:
        if "." in key:
            prefix, _, attr = key.partition(".")
            if prefix not in _AXIS_PREFIXES:
                raise ConfigError(f"unknown key {key!r}", line=line)
            axes[prefix][attr] = _parse_axis_item(prefix, attr, raw, line)
        elif key in _FLOAT_KEYS or key in _INT_KEYS or key in _BOOL_KEYS:
            plain[key] = _parse_value(key, raw, line)
        else:
            raise ConfigError(f"unknown key {key!r}", line=line)
    for prefix in _AXIS_PREFIXES:
        entries = axes[prefix]
        if not entries:
            continue
        missing = [a for a in ("var", "start", "stop", "count") if a not in entries]
        if missing:
            raise ConfigError(
                f"{prefix} axis is incomplete; missing {', '.join(missing)}")
        plain[prefix] = SweepAxis(**entries)
    try:
        return RunConfig(**plain)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_lines(lines, items, source=""):
    for lineno, rawline in enumerate(lines, start=1):
        stripped = rawline.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"expected key = value, got {stripped!r}{source}", line=lineno)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if not key or not value:
            raise ConfigError(
                f"expected key = value, got {stripped!r}{source}", line=lineno)
        items.append((key, value, lineno))


def load_config(path, overrides=()):
    """Parse a config file plus `key=value` override strings.

    Overrides are applied after the file, later entries winning.  The
    resulting RunConfig is validated eagerly (a SystemParams is built once)
    so bad rate values fail here, not mid-sweep.
    """
    items = []
    if path is not None:
        with open(path, "r", encoding="utf-8") as handle:
            _parse_lines(handle, items)
    override_items = []
    _parse_lines(overrides, override_items, source=" (from --override)")
    items.extend((key, value, None) for key, value, _ in override_items)
    config = _build_config(items)
    config.system_params()
    return config
