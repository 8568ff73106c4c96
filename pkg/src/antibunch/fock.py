"""Truncated Fock-space operator algebra for the three-mode system.

All operators live on the tensor product of three truncated bosonic modes
with the fixed ordering a1 (x) a2 (x) b.  Everything is stored sparse; the
full Hilbert-space dimension is D = n1 * n2 * nb.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError

MODES = ("a1", "a2", "b")

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class ModeDims:
    """Fock cutoffs of the two cavity modes and the mechanical mode.

    A cutoff of n keeps the number states 0..n-1.
    """

    n1: int
    n2: int
    nb: int

    def __post_init__(self):
        for name in ("n1", "n2", "nb"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
                raise DimensionError(f"{name} must be an integer >= 2, got {n!r}")

    @property
    def total(self):
        """Dimension of the full tensor-product space."""
        return self.n1 * self.n2 * self.nb

    def cutoff(self, mode):
        if mode not in MODES:
            raise DimensionError(f"unknown mode {mode!r}, expected one of {MODES}")
        return {"a1": self.n1, "a2": self.n2, "b": self.nb}[mode]

    def index_of(self, occ_a1, occ_a2, occ_b):
        """Flat basis index of the number state |occ_a1, occ_a2, occ_b>."""
        for occ, n in ((occ_a1, self.n1), (occ_a2, self.n2), (occ_b, self.nb)):
            if not 0 <= occ < n:
                raise DimensionError(f"occupation {occ} outside cutoff {n}")
        return (occ_a1 * self.n2 + occ_a2) * self.nb + occ_b

    def occupations(self, index):
        """Inverse of :meth:`index_of`."""
        if not 0 <= index < self.total:
            raise DimensionError(f"basis index {index} outside space of size {self.total}")
        index, occ_b = divmod(index, self.nb)
        occ_a1, occ_a2 = divmod(index, self.n2)
        return occ_a1, occ_a2, occ_b


class QOperator:
    """Sparse complex operator on the full three-mode space.

    Instances are immutable by convention: ``data`` must never be modified
    in place, so operators can be shared freely across workers.  The
    ``hermitian`` flag is a propagated hint -- it is only set when
    hermiticity is provable from the construction (see the arithmetic
    methods below) and is verified against HERMITIAN_TOL at tagging time.
    """

    __slots__ = ("dims", "data", "hermitian")

    def __init__(self, dims, data, hermitian=False):
        if not isinstance(dims, ModeDims):
            raise DimensionError(f"dims must be ModeDims, got {type(dims).__name__}")
        data = sp.csr_matrix(data, dtype=complex)
        expected = (dims.total, dims.total)
        if data.shape != expected:
            raise DimensionError(f"operator shape {data.shape} does not match dims {expected}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "hermitian", bool(hermitian))

    def __setattr__(self, name, value):
        raise AttributeError("QOperator is immutable")

    def _check_same_dims(self, other):
        if not isinstance(other, QOperator):
            raise TypeError(f"expected QOperator, got {type(other).__name__}")
        if other.dims != self.dims:
            raise DimensionError(f"operator dims {other.dims} do not match {self.dims}")

    # -- arithmetic (dimension-checked, no silent broadcasting) ----------

    def __add__(self, other):
        self._check_same_dims(other)
        return QOperator(self.dims, self.data + other.data,
                         hermitian=self.hermitian and other.hermitian)

    def __sub__(self, other):
        self._check_same_dims(other)
        return QOperator(self.dims, self.data - other.data,
                         hermitian=self.hermitian and other.hermitian)

    def __neg__(self):
        return QOperator(self.dims, -self.data, hermitian=self.hermitian)

    def __mul__(self, scalar):
        if isinstance(scalar, QOperator):
            raise TypeError("use @ for operator products; * is for scalars")
        scalar = complex(scalar)
        real_scalar = scalar.imag == 0.0
        return QOperator(self.dims, scalar * self.data,
                         hermitian=self.hermitian and real_scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check_same_dims(other)
        # hermiticity of a product is not provable cheaply; drop the hint
        return QOperator(self.dims, self.data @ other.data)

    def dag(self):
        """Adjoint.  Applying it twice reproduces the operator exactly."""
        return QOperator(self.dims, self.data.conjugate().transpose(),
                         hermitian=self.hermitian)

    # -- queries ----------------------------------------------------------

    def hermiticity_defect(self):
        """Max-norm of A - A^dagger."""
        diff = self.data - self.data.conjugate().transpose()
        return 0.0 if diff.nnz == 0 else float(np.abs(diff.data).max())

    def tagged_hermitian(self):
        """Return a hermitian-flagged copy after verifying the defect."""
        defect = self.hermiticity_defect()
        if defect >= HERMITIAN_TOL:
            raise ValueError(f"operator is not hermitian (defect {defect:.3e})")
        return QOperator(self.dims, self.data, hermitian=True)

    def element(self, bra, ket):
        """Matrix element <bra|A|ket> for occupation tuples bra, ket."""
        return complex(self.data[self.dims.index_of(*bra), self.dims.index_of(*ket)])

    def toarray(self):
        return self.data.toarray()

    def __repr__(self):
        return (f"QOperator(dims={self.dims}, nnz={self.data.nnz}, "
                f"hermitian={self.hermitian})")


def ladder(n, kind):
    """Single-mode ladder operator on an n-level truncated Fock space.

    "lower" has entries M[k-1, k] = sqrt(k); "raise" is its adjoint.
    Returns a plain sparse n x n block (not yet embedded).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
        raise DimensionError(f"mode cutoff must be an integer >= 2, got {n!r}")
    amps = np.sqrt(np.arange(1, n))
    lower = sp.diags(amps, offsets=1, shape=(n, n), dtype=complex, format="csr")
    if kind == "lower":
        return lower
    if kind == "raise":
        return lower.conjugate().transpose().tocsr()
    raise ValueError(f"kind must be 'lower' or 'raise', got {kind!r}")


def embed_mode(op, mode, dims):
    """Embed a single-mode block into the full space I (x) op (x) I.

    The mode ordering is fixed to a1 (x) a2 (x) b.
    """
    op = sp.csr_matrix(op, dtype=complex)
    n = dims.cutoff(mode)
    if op.shape != (n, n):
        raise DimensionError(
            f"block shape {op.shape} does not match cutoff {n} of mode {mode!r}")
    eye = sp.identity
    if mode == "a1":
        full = sp.kron(op, eye(dims.n2 * dims.nb, dtype=complex), format="csr")
    elif mode == "a2":
        full = sp.kron(sp.kron(eye(dims.n1, dtype=complex), op),
                       eye(dims.nb, dtype=complex), format="csr")
    else:
        full = sp.kron(eye(dims.n1 * dims.n2, dtype=complex), op, format="csr")
    defect = abs(op - op.conjugate().transpose())
    block_hermitian = defect.nnz == 0 or float(defect.data.max()) < HERMITIAN_TOL
    return QOperator(dims, full, hermitian=block_hermitian)


def annihilator(mode, dims):
    return embed_mode(ladder(dims.cutoff(mode), "lower"), mode, dims)


def creator(mode, dims):
    return embed_mode(ladder(dims.cutoff(mode), "raise"), mode, dims)


def number(mode, dims):
    n = dims.cutoff(mode)
    block = ladder(n, "raise") @ ladder(n, "lower")
    return embed_mode(block, mode, dims)


def identity(dims):
    return QOperator(dims, sp.identity(dims.total, dtype=complex, format="csr"),
                     hermitian=True)
