"""Closed-form and semi-analytic machinery for the interference optimum.

This module carries the weak-drive amplitude model (six basis amplitudes,
two-excitation manifold) that serves both as physics output and as an
independent cross-check of the master-equation solver, plus the
determinant condition whose root gives the optimal (delta, u) pair.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import (DegenerateParametersError, NoRealSolutionError,
                     UndefinedCorrelationError)


@dataclass(frozen=True)
class OptimalPoint:
    """Detuning/nonlinearity pair giving complete destructive interference
    of the two-photon pathways (units of the rate arguments)."""

    delta_opt: float
    u_opt: float
    branch: str


def optimal_conditions(g, kappa=1.0, branch="plus"):
    """Closed-form optimal (delta, u) for photon antibunching in mode a1.

    delta_opt = +-(1/2) sqrt(2 sqrt(g^2 (5 g^2 + 2 k^2)) - 4 g^2 - k^2)
    u_opt     = delta (4 delta^2 + 2 g^2 + 5 k^2) / (2 (2 g^2 - k^2))

    Real solutions require g > kappa/sqrt(2); at the boundary the
    nonlinearity denominator vanishes together with the radicand.
    """
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    g2 = g * g
    k2 = kappa * kappa
    radicand = 2.0 * np.sqrt(g2 * (5.0 * g2 + 2.0 * k2)) - 4.0 * g2 - k2
    if radicand < 0.0:
        raise NoRealSolutionError(
            f"no real optimum for g = {g:g}, kappa = {kappa:g} "
            "(detuning radicand negative; need g > kappa/sqrt(2))",
            reason="radicand")
    denominator = 2.0 * (2.0 * g2 - k2)
    if denominator <= 0.0:
        raise NoRealSolutionError(
            f"degenerate optimum at g = {g:g}, kappa = {kappa:g} "
            "(nonlinearity denominator vanishes at g = kappa/sqrt(2))",
            reason="denominator")
    delta = 0.5 * np.sqrt(radicand)
    if branch == "minus":
        delta = -delta
    u = delta * (4.0 * delta * delta + 2.0 * g2 + 5.0 * k2) / denominator
    return OptimalPoint(delta_opt=float(delta), u_opt=float(u), branch=branch)


@dataclass(frozen=True)
class AmplitudeState:
    """Amplitudes of the truncated two-excitation ansatz.

    Component order follows the excitation ladder |000>, |100>, |011>,
    |200>, |111>, |022> of the (a1, a2, b) occupation numbers.
    """

    c000: complex
    c100: complex
    c011: complex
    c200: complex
    c111: complex
    c022: complex

    def as_array(self):
        return np.array([self.c000, self.c100, self.c011,
                         self.c200, self.c111, self.c022], dtype=complex)

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != (6,):
            raise ValueError(f"expected 6 amplitudes, got shape {values.shape}")
        return cls(*values)

    def normalized(self):
        norm = np.linalg.norm(self.as_array())
        if norm == 0.0:
            raise ValueError("cannot normalize the zero state")
        return AmplitudeState.from_array(self.as_array() / norm)


def _amplitude_system(p):
    """Coefficient matrix M and drive vector v of i dc/dt = M c + v for
    the five excited amplitudes (c100, c011, c200, c111, c022)."""
    delta, u, g = p.delta, p.kerr, p.coupling
    kappa, gamma, omega = p.kappa, p.gamma, p.drive
    s2 = np.sqrt(2.0)
    m = np.array([
        [delta - 0.5j * kappa, g, s2 * omega, 0.0, 0.0],
        [g, delta - 0.5j * (kappa + gamma), 0.0, omega, 0.0],
        [s2 * omega, 0.0, 2.0 * (delta + u - 0.5j * kappa), s2 * g, 0.0],
        [0.0, omega, s2 * g, 2.0 * (delta - 0.5j * kappa) - 0.5j * gamma, 2.0 * g],
        [0.0, 0.0, 0.0, 2.0 * g, 2.0 * (delta + u - 0.5j * (kappa + gamma))],
    ], dtype=complex)
    return m


def amplitude_rhs(state, p):
    """Time derivative of the amplitude ansatz under the decay-dressed
    Hamiltonian, with c000 held constant (weak-drive hierarchy)."""
    m = _amplitude_system(p)
    c = state.as_array()
    drive = np.array([p.drive * c[0], 0.0, 0.0, 0.0, 0.0], dtype=complex)
    dexc = -1j * (m @ c[1:] + drive)
    return AmplitudeState(0.0, *dexc)


def amplitude_steady_state(p):
    """Stationary amplitudes with c000 = 1 (direct 5x5 complex solve)."""
    m = _amplitude_system(p)
    rhs = np.array([-p.drive, 0.0, 0.0, 0.0, 0.0], dtype=complex)
    try:
        excited = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateParametersError(
            f"amplitude system is singular at delta={p.delta:g}, u={p.kerr:g}, "
            f"g={p.coupling:g}") from exc
    return AmplitudeState(1.0, *excited)


def g2_from_amplitudes(state):
    """Leading-order g2(0) of mode a1 evaluated on the truncated ansatz:
    2|c200|^2 / (|c100|^2 + 2|c200|^2 + |c111|^2)^2."""
    mean_n = (abs(state.c100) ** 2 + 2.0 * abs(state.c200) ** 2
              + abs(state.c111) ** 2)
    if abs(state.c100) == 0.0:
        raise UndefinedCorrelationError(
            "single-photon amplitude vanishes; g2 undefined")
    return 2.0 * abs(state.c200) ** 2 / mean_n ** 2


def determinant_condition(delta, u, g, kappa=1.0, gamma=0.0):
    """Interference-closure determinant; zero exactly at the optimum.

    The two-excitation stationary equations are reduced to a 3x3 system in
    (c111, c022, c000-scale) by eliminating c100 and c011 through their
    one-excitation stationary values.  The drive amplitude (and the
    one-excitation denominator) factor out of the third column, so the
    result is drive-independent.  The returned value is normalized by the
    product of the row norms, bounding its magnitude by one.
    """
    x = delta - 0.5j * kappa
    y = delta - 0.5j * (kappa + gamma)
    m = np.array([
        [g, 0.0, -y],
        [2.0 * x - 0.5j * gamma, 2.0 * g, g],
        [2.0 * g, 2.0 * (delta + u - 0.5j * (kappa + gamma)), 0.0],
    ], dtype=complex)
    det = np.linalg.det(m)
    scale = np.prod(np.linalg.norm(m, axis=1))
    return complex(det / scale)


def optimal_from_determinant(g, kappa=1.0, gamma=0.0, branch="plus", initial=None):
    """Numerical root of the determinant condition in (delta, u).

    This is the only route offered at gamma > 0; the closed form of
    :func:`optimal_conditions` holds at gamma = 0 and seeds the search.
    """
    if initial is None:
        seed = optimal_conditions(g, kappa, branch=branch)
        initial = (seed.delta_opt, seed.u_opt)

    def equations(z):
        value = determinant_condition(z[0], z[1], g, kappa, gamma)
        return [value.real, value.imag]

    sol = optimize.root(equations, x0=np.asarray(initial, dtype=float), method="hybr")
    residual = abs(determinant_condition(sol.x[0], sol.x[1], g, kappa, gamma))
    if not sol.success or residual > 1e-10:
        raise DegenerateParametersError(
            f"determinant root search failed for g = {g:g}: {sol.message} "
            f"(|det| = {residual:.3e})")
    return OptimalPoint(delta_opt=float(sol.x[0]), u_opt=float(sol.x[1]),
                        branch=branch)
