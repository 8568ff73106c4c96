import numpy as np
import pytest

from antibunch import (ModeDims, StrongDriveWarning, SystemParams,
                       annihilator, build_collapse_ops,
                       build_effective_hamiltonian, build_hamiltonian,
                       creator, number)


def make_params(**kw):
    base = dict(delta=0.3, kerr=0.7, coupling=1.2, kappa=1.0, gamma=0.001,
                drive=0.01, dims=ModeDims(3, 3, 3))
    base.update(kw)
    return SystemParams(**base)


def test_rate_validation():
    with pytest.raises(ValueError):
        make_params(kappa=0.0)
    with pytest.raises(ValueError):
        make_params(kappa=-1.0)
    for field in ("gamma", "drive", "n_th", "gamma_p"):
        with pytest.raises(ValueError):
            make_params(**{field: -0.1})


def test_strong_drive_warning_threshold():
    with pytest.warns(StrongDriveWarning):
        make_params(drive=0.2)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        make_params(drive=0.1)  # at the threshold, no warning


def test_hamiltonian_matrix_elements():
    p = make_params()
    h = build_hamiltonian(p)
    assert h.element((1, 0, 0), (0, 0, 0)) == pytest.approx(p.drive)
    assert h.element((0, 1, 1), (1, 0, 0)) == pytest.approx(p.coupling)
    assert h.element((2, 0, 0), (2, 0, 0)) == pytest.approx(2 * p.delta + 2 * p.kerr)


def test_hamiltonian_is_verified_hermitian():
    rng = np.random.default_rng(7)
    for _ in range(5):
        p = make_params(delta=rng.uniform(-2, 2), kerr=rng.uniform(0, 2),
                        coupling=rng.uniform(0, 3), drive=rng.uniform(0, 0.1))
        h = build_hamiltonian(p)
        assert h.hermitian
        assert h.hermiticity_defect() < 1e-12


def test_effective_hamiltonian_diagonal_elements():
    p = make_params()
    h_eff = build_effective_hamiltonian(p)
    assert h_eff.element((1, 0, 0), (1, 0, 0)) == pytest.approx(p.delta - 0.5j * p.kappa)
    assert h_eff.element((0, 1, 1), (0, 1, 1)) == pytest.approx(
        p.delta - 0.5j * (p.kappa + p.gamma))
    assert not h_eff.hermitian


def test_effective_hamiltonian_decomposition():
    p = make_params()
    h = build_hamiltonian(p)
    h_eff = build_effective_hamiltonian(p)
    hermitian_part = 0.5 * (h_eff + h_eff.dag())
    assert np.array_equal(hermitian_part.toarray(), h.toarray())
    anti = 0.5 * (h_eff - h_eff.dag())
    expected = -0.5j * (p.kappa * (number("a1", p.dims) + number("a2", p.dims))
                        + p.gamma * number("b", p.dims))
    assert np.abs(anti.toarray() - expected.toarray()).max() < 1e-15


def test_anti_hermitian_part_matches_decay_dissipators():
    # -(i/2) sum rate L^dag L over the cavity and mechanical decay channels
    p = make_params(n_th=0.0, gamma_p=0.0)
    h = build_hamiltonian(p)
    h_eff = build_effective_hamiltonian(p)
    anti = (h_eff - h).toarray()
    acc = np.zeros_like(anti)
    for c in build_collapse_ops(p):
        ldl = (c.operator.dag() @ c.operator).toarray()
        acc += -0.5j * c.rate * ldl
    assert np.abs(anti - acc).max() < 1e-15


def test_collapse_ops_zero_temperature():
    p = make_params(n_th=0.0, gamma_p=0.0)
    ops = build_collapse_ops(p)
    assert len(ops) == 3
    rates = [c.rate for c in ops]
    assert rates == [p.kappa, p.kappa, p.gamma]


def test_collapse_ops_thermal_rates():
    p = make_params(n_th=0.5)
    ops = build_collapse_ops(p)
    assert len(ops) == 4
    assert ops[2].rate == pytest.approx(p.gamma * 1.5)
    assert ops[3].rate == pytest.approx(p.gamma * 0.5)
    # the upward channel really is b^dag
    bd = creator("b", p.dims)
    assert np.array_equal(ops[3].operator.toarray(), bd.toarray())


def test_collapse_ops_dephasing():
    p = make_params(gamma_p=0.01)
    ops = build_collapse_ops(p)
    assert len(ops) == 5
    assert ops[3].rate == ops[4].rate == pytest.approx(0.01)
    assert np.array_equal(ops[3].operator.toarray(), number("a1", p.dims).toarray())
    assert np.array_equal(ops[4].operator.toarray(), number("a2", p.dims).toarray())


def test_collapse_ops_legacy_prefactor_switch():
    p = make_params(n_th=0.25, legacy_lb_kappa=True)
    ops = build_collapse_ops(p)
    assert ops[2].rate == pytest.approx(p.kappa * 1.25)
    assert ops[3].rate == pytest.approx(p.kappa * 0.25)


def test_collapse_ops_drop_zero_rates():
    p = make_params(gamma=0.0, n_th=0.0)
    ops = build_collapse_ops(p)
    assert len(ops) == 2  # only the two cavity decays survive


def test_coupling_term_conservation_laws():
    # coupling alone: one a1 photon converts to an (a2 photon + b phonon) pair
    p = make_params(delta=0.0, kerr=0.0, drive=0.0, coupling=1.7)
    h_g = build_hamiltonian(p)
    n1 = number("a1", p.dims)
    n2 = number("a2", p.dims)
    nb = number("b", p.dims)
    total = n1 + n2
    diff = n2 - nb
    for conserved in (total, diff):
        comm = conserved @ h_g - h_g @ conserved
        assert np.abs(comm.toarray()).max() < 1e-14
