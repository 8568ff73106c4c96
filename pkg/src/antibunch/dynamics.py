"""Time evolution under the Liouvillian and delayed photon correlations.

g2(tau) is computed by the regression route: apply a1 to both sides of the
steady state, propagate the conditional operator under the same generator,
and read out the photon number.  The conditional operator is deliberately
not renormalized while it evolves; its trace carries the detection
probability.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DimensionError, IntegrationError, UndefinedCorrelationError
from .liouville import DensityMatrix, expectation
from .fock import annihilator, creator, number

RTOL = 1e-8
ATOL = 1e-12


@dataclass(frozen=True)
class CorrelationSeries:
    """g2 samples on a delay grid (units of 1/kappa)."""

    tau: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if tau.ndim != 1 or tau.shape != values.shape:
            raise DimensionError("tau and values must be 1-d arrays of equal length")
        if tau[0] != 0.0 or np.any(np.diff(tau) <= 0):
            raise ValueError("tau grid must start at 0 and increase strictly")
        tau.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "values", values)


def propagate(liouvillian, mat0, times, rtol=RTOL, atol=ATOL):
    """Integrate mat_dot = L(mat) for a raw matrix, sampled at ``times``.

    Returns an array of shape (len(times), d, d).  Works for conditional
    operators as well as proper states; no normalization is applied.
    """
    d = liouvillian.dims.total
    mat0 = np.asarray(mat0, dtype=complex)
    if mat0.shape != (d, d):
        raise DimensionError(f"initial matrix shape {mat0.shape} does not match ({d}, {d})")
    times = np.asarray(times, dtype=float)
    generator = liouvillian.matrix

    def rhs(_, y):
        return generator @ y

    first = times[0]
    out = np.empty((len(times), d, d), dtype=complex)
    if first == 0.0:
        out[0] = mat0
        remaining = times[1:]
        start = 1
    else:
        remaining = times
        start = 0
    if len(remaining):
        sol = solve_ivp(rhs, (0.0, float(remaining[-1])), mat0.ravel(),
                        t_eval=remaining, rtol=rtol, atol=atol)
        if not sol.success:
            last = float(sol.t[-1]) if len(sol.t) else 0.0
            raise IntegrationError(f"integrator failed: {sol.message}", last_time=last)
        out[start:] = sol.y.T.reshape(len(remaining), d, d)
    return out


def evolve(liouvillian, rho0, t):
    """State at time t >= 0 starting from rho0.

    Solver round-off is cleaned up the same way the steady-state solve
    does it (hermitize and renormalize) before validation.
    """
    if rho0.dims != liouvillian.dims:
        raise DimensionError(f"state dims {rho0.dims} do not match {liouvillian.dims}")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0:
        return rho0
    mat = propagate(liouvillian, rho0.data, np.array([0.0, float(t)]))[-1]
    mat = 0.5 * (mat + mat.conj().T)
    mat = mat / mat.trace().real
    return DensityMatrix(liouvillian.dims, mat)


def g2_tau(liouvillian, rho_ss, tau_grid=None, tau_max=20.0, tau_points=200):
    """Delayed second-order correlation of mode a1 over a tau grid.

    The grid defaults to ``tau_points`` uniform samples on [0, tau_max].
    Negative delays follow from stationarity, g2(-tau) = g2(tau), and are
    not computed.
    """
    dims = liouvillian.dims
    if rho_ss.dims != dims:
        raise DimensionError(f"state dims {rho_ss.dims} do not match {dims}")
    if tau_grid is None:
        tau_grid = np.linspace(0.0, float(tau_max), int(tau_points))
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid[0] != 0.0 or np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau grid must start at 0 and increase strictly; "
                         "negative delays follow from stationarity, "
                         "g2(-tau) = g2(tau)")

    n1 = number("a1", dims)
    mean_n = expectation(n1, rho_ss).real
    if mean_n <= 0.0:
        raise UndefinedCorrelationError(
            f"mode a1 photon number {mean_n:g} is not positive; g2 undefined")

    a1 = annihilator("a1", dims).data
    ad1 = creator("a1", dims).data
    conditional0 = a1 @ rho_ss.data @ ad1
    # The conditional operator is not renormalized along the way -- its
    # trace carries the detection probability.  It is prescaled by that
    # (constant) trace so the integrator tolerances see an O(1) state;
    # the scale is restored at readout.  Exact by linearity.
    scale = conditional0.trace().real
    states = propagate(liouvillian, conditional0 / scale, tau_grid)
    traces = np.array([states[i].trace().real for i in range(len(tau_grid))])
    if traces.min() < -1e-6 or traces.max() > 1.0 + 1e-6:
        warnings.warn(
            "conditional detection weight left [0, <n1>] during propagation "
            f"(range {scale * traces.min():.3e}..{scale * traces.max():.3e}); "
            "results may be unreliable", stacklevel=2)
    n1_data = n1.data
    values = np.array([
        (n1_data.multiply(states[i].T)).sum().real for i in range(len(tau_grid))
    ]) * (scale / mean_n**2)
    return CorrelationSeries(tau_grid, values)
