"""Liouvillian assembly, steady-state solve, and steady-state observables.

Density matrices are vectorized row-major (C order), so rho -> A rho B maps
to kron(A, B.T) acting on rho.ravel().  The steady state is found by a
direct sparse solve with one equation replaced by the trace constraint.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionError, SteadyStateError, UndefinedCorrelationError
from .fock import ModeDims, annihilator, creator, number

TRACE_PRESERVATION_TOL = 1e-10
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
MIN_EIGVAL_TOL = -1e-8
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Dense, validated state on the full space.

    Construction enforces hermiticity, unit trace, and positivity up to
    the documented solver tolerances.
    """

    dims: ModeDims
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)  # own copy; frozen below
        d = self.dims.total
        if data.shape != (d, d):
            raise DimensionError(f"state shape {data.shape} does not match dims ({d}, {d})")
        herm = np.abs(data - data.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ValueError(f"state is not hermitian (defect {herm:.3e})")
        tr = data.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"state trace {tr} differs from 1")
        min_eig = float(np.linalg.eigvalsh(data)[0])
        if min_eig < MIN_EIGVAL_TOL:
            raise ValueError(f"state has negative eigenvalue {min_eig:.3e}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def pure(cls, dims, occupations):
        """|n1, n2, nb><n1, n2, nb| for an occupation tuple."""
        d = dims.total
        data = np.zeros((d, d), dtype=complex)
        idx = dims.index_of(*occupations)
        data[idx, idx] = 1.0
        return cls(dims, data)

    @classmethod
    def vacuum(cls, dims):
        return cls.pure(dims, (0, 0, 0))


class Liouvillian:
    """Sparse superoperator acting on row-major vectorized states."""

    __slots__ = ("dims", "matrix", "trace_defect")

    def __init__(self, dims, matrix, trace_defect):
        self.dims = dims
        self.matrix = matrix
        self.trace_defect = trace_defect

    def apply(self, rho_data):
        """Apply the generator to a (not necessarily normalized) matrix."""
        d = self.dims.total
        return (self.matrix @ np.asarray(rho_data, dtype=complex).ravel()).reshape(d, d)

    def __repr__(self):
        return f"Liouvillian(dims={self.dims}, nnz={self.matrix.nnz})"


def _dissipator_superop(op_data, rate, eye):
    """rate * (L . L^dag - (1/2){L^dag L, .}) in vectorized form."""
    ldl = op_data.conjugate().transpose() @ op_data
    return rate * (sp.kron(op_data, op_data.conjugate(), format="csr")
                   - 0.5 * sp.kron(ldl, eye, format="csr")
                   - 0.5 * sp.kron(eye, ldl.transpose(), format="csr"))


def build_liouvillian(hamiltonian, collapse_ops):
    """Generator of rho_dot = -i[H, rho] + sum of standard dissipators.

    Trace preservation (the vectorized identity being a left null vector)
    is verified at construction.
    """
    dims = hamiltonian.dims
    d = dims.total
    eye = sp.identity(d, dtype=complex, format="csr")
    h = hamiltonian.data
    mat = -1j * (sp.kron(h, eye, format="csr") - sp.kron(eye, h.transpose(), format="csr"))
    for c in collapse_ops:
        if c.operator.dims != dims:
            raise DimensionError(
                f"collapse operator dims {c.operator.dims} do not match {dims}")
        mat = mat + _dissipator_superop(c.operator.data, c.rate, eye)
    mat = mat.tocsr()
    id_vec = np.zeros(d * d, dtype=complex)
    id_vec[:: d + 1] = 1.0
    trace_defect = float(np.abs(mat.transpose() @ id_vec).max())
    if trace_defect > TRACE_PRESERVATION_TOL:
        raise ValueError(f"Liouvillian is not trace-preserving (defect {trace_defect:.3e})")
    return Liouvillian(dims, mat, trace_defect)


def steady_state(liouvillian):
    """Unique steady state of the Liouvillian.

    One row of L is replaced by the trace constraint and the resulting
    system solved directly; the result is hermitized, renormalized, and
    checked against the residual bound.
    """
    d = liouvillian.dims.total
    coo = liouvillian.matrix.tocoo()
    keep = coo.row != 0
    diag_cols = np.arange(d, dtype=coo.col.dtype) * (d + 1)
    data = np.concatenate([coo.data[keep], np.ones(d, dtype=complex)])
    rows = np.concatenate([coo.row[keep], np.zeros(d, dtype=coo.row.dtype)])
    cols = np.concatenate([coo.col[keep], diag_cols])
    system = sp.csc_matrix((data, (rows, cols)), shape=coo.shape)
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    solution = spla.spsolve(system, rhs)
    if not np.all(np.isfinite(solution)):
        raise SteadyStateError("steady-state system is singular")
    rho = solution.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    trace = rho.trace().real
    if abs(trace) < 1e-12:
        raise SteadyStateError("steady-state candidate has vanishing trace")
    rho = rho / trace
    residual = float(np.abs(liouvillian.matrix @ rho.ravel()).max())
    if residual > RESIDUAL_TOL:
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL:g}; "
            "no unique steady state at these parameters")
    return DensityMatrix(liouvillian.dims, rho)


def residual_norm(liouvillian, state):
    """Max-norm of L(rho), the figure of merit reported per sweep point."""
    return float(np.abs(liouvillian.apply(state.data)).max())


def expectation(operator, state):
    """Tr[A rho]."""
    if operator.dims != state.dims:
        raise DimensionError(f"operator dims {operator.dims} do not match state {state.dims}")
    return complex(operator.data.multiply(state.data.T).sum())


def mode_populations(state, mode):
    """Occupation-number distribution of one mode (marginal diagonal)."""
    dims = state.dims
    cube = state.data.diagonal().real.reshape(dims.n1, dims.n2, dims.nb)
    axes = {"a1": (1, 2), "a2": (0, 2), "b": (0, 1)}[mode]
    return cube.sum(axis=axes)


def g2_zero(state):
    """Equal-time second-order correlation of mode a1.

    Tr[rho a1'a1'a1a1] / Tr[rho a1'a1]^2; raises when the mode holds no
    photons (the correlation is undefined there).
    """
    dims = state.dims
    a1 = annihilator("a1", dims)
    ad1 = creator("a1", dims)
    mean_n = expectation(number("a1", dims), state).real
    if mean_n <= 0.0:
        raise UndefinedCorrelationError(
            f"mode a1 photon number {mean_n:g} is not positive; g2 undefined")
    numerator = expectation(ad1 @ ad1 @ a1 @ a1, state).real
    value = numerator / mean_n**2
    # round-off from near-vacuum states can give a tiny negative numerator
    return max(value, 0.0)
