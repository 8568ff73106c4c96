"""Physical model: Hamiltonians and collapse operators.

The system is two Kerr-nonlinear cavity modes (a1, a2) cross-coupled to one
mechanical mode (b) through the three-mode conversion g(a1^dag a2 b + h.c.),
with a coherent drive on a1 only.  All rates are in units of the shared
cavity decay kappa unless the caller chooses otherwise.
"""

import warnings
from dataclasses import dataclass, field

from .errors import DimensionError
from .fock import ModeDims, QOperator, annihilator, creator, number


class StrongDriveWarning(UserWarning):
    """The drive exceeds the weak-drive regime (drive > 0.1 kappa)."""


@dataclass(frozen=True)
class SystemParams:
    """All model rates plus the Fock truncation.

    delta     cavity detuning from the drive
    kerr      Kerr nonlinearity U (same for both cavities)
    coupling  three-mode conversion rate g
    kappa     cavity decay (shared by a1 and a2)
    gamma     mechanical damping
    drive     drive amplitude on a1
    n_th      thermal phonon occupation of the mechanical bath
    gamma_p   pure-dephasing rate of both cavity modes
    legacy_lb_kappa   use kappa instead of gamma as the mechanical
                      dissipator prefactor (compatibility switch)
    """

    delta: float
    kerr: float
    coupling: float
    kappa: float = 1.0
    gamma: float = 0.001
    drive: float = 0.01
    n_th: float = 0.0
    gamma_p: float = 0.0
    dims: ModeDims = field(default_factory=lambda: ModeDims(4, 4, 4))
    legacy_lb_kappa: bool = False

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        for name in ("gamma", "drive", "n_th", "gamma_p"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if not isinstance(self.dims, ModeDims):
            raise DimensionError("dims must be a ModeDims instance")
        if self.drive > 0.1 * self.kappa:
            warnings.warn(
                f"drive = {self.drive:g} exceeds 0.1*kappa = {0.1 * self.kappa:g}; "
                "results leave the weak-drive regime the model is built for",
                StrongDriveWarning, stacklevel=2)

    def replace(self, **changes):
        """Return a copy with the given fields replaced."""
        from dataclasses import replace as _replace
        return _replace(self, **changes)


@dataclass(frozen=True)
class CollapseOp:
    """A collapse operator together with the rate multiplying its
    (1/2)(2 L rho L^dag - L^dag L rho - rho L^dag L) dissipator."""

    operator: QOperator
    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError(f"collapse rate must be positive, got {self.rate}")


def build_hamiltonian(p):
    """Hermitian system Hamiltonian in the drive rotating frame.

    H = delta (n1 + n2) + U (a1'^2 a1^2 + a2'^2 a2^2)
        + g (a1' a2 b + a1 a2' b') + drive (a1' + a1)
    """
    a1, a2, b = (annihilator(m, p.dims) for m in ("a1", "a2", "b"))
    ad1, ad2, bd = (creator(m, p.dims) for m in ("a1", "a2", "b"))
    h = (p.delta * (number("a1", p.dims) + number("a2", p.dims))
         + p.kerr * (ad1 @ ad1 @ a1 @ a1 + ad2 @ ad2 @ a2 @ a2)
         + p.coupling * (ad1 @ a2 @ b + a1 @ ad2 @ bd)
         + p.drive * (ad1 + a1))
    return h.tagged_hermitian()


def build_effective_hamiltonian(p):
    """Non-hermitian Hamiltonian with the decay rates folded in.

    Equals the hermitian Hamiltonian minus (i/2)(kappa n1 + kappa n2
    + gamma nb); used by the truncated amplitude model.
    """
    n1 = number("a1", p.dims)
    n2 = number("a2", p.dims)
    nb = number("b", p.dims)
    return (build_hamiltonian(p)
            + (-0.5j * p.kappa) * (n1 + n2)
            + (-0.5j * p.gamma) * nb)


def build_collapse_ops(p):
    """Collapse operators in fixed order, zero-rate entries dropped.

    (a1, kappa), (a2, kappa), (b, gm*(n_th+1)), (b^dag, gm*n_th),
    (n1, gamma_p), (n2, gamma_p), where gm is gamma or -- with the
    legacy_lb_kappa switch -- kappa.
    """
    mech = p.kappa if p.legacy_lb_kappa else p.gamma
    ops = [
        CollapseOp(annihilator("a1", p.dims), p.kappa),
        CollapseOp(annihilator("a2", p.dims), p.kappa),
    ]
    if mech * (p.n_th + 1.0) > 0:
        ops.append(CollapseOp(annihilator("b", p.dims), mech * (p.n_th + 1.0)))
    if mech * p.n_th > 0:
        ops.append(CollapseOp(creator("b", p.dims), mech * p.n_th))
    if p.gamma_p > 0:
        ops.append(CollapseOp(number("a1", p.dims), p.gamma_p))
        ops.append(CollapseOp(number("a2", p.dims), p.gamma_p))
    return ops
