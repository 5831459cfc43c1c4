import math

import numpy as np
import pytest

from qilab import dense_engine as de
from qilab import spectrum as sp
from qilab.shapes import SystemShape


def _haar(d, seed):
    return de.haar_unitary(d, np.random.default_rng(seed))


def _random_density(d, rng):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def test_vec_roundtrip():
    rng = np.random.default_rng(0)
    rho = _random_density(4, rng)
    assert np.array_equal(sp.unvec(sp.vec(rho)), rho)
    with pytest.raises(ValueError):
        sp.unvec(np.zeros(3))


def test_identity_channel():
    shape = SystemShape(0, 2, 1)
    u = np.eye(8, dtype=complex)
    m = sp.build_superoperator(u, shape, "pure-zero")
    assert np.abs(m - np.eye(16)).max() < 1e-12
    spec = sp.spectrum_of(m)
    assert np.abs(spec.eigenvalues - 1).max() < 1e-12
    assert spec.tau_eig == math.inf
    # the unit eigenspace is degenerate; any valid fixed density matrix
    # is acceptable
    fp = spec.fixed_point
    assert np.trace(fp).real == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.eigvalsh(fp).min() > -1e-10
    assert np.abs(sp.apply_superoperator(m, fp) - fp).max() < 1e-10


def test_swap_is_replacement_channel():
    shape = SystemShape(0, 1, 1)
    swap = np.eye(4)[[0, 2, 1, 3]].astype(complex)
    m = sp.build_superoperator(swap, shape, "pure-zero")
    spec = sp.spectrum_of(m)
    mods = sorted(np.abs(spec.eigenvalues), reverse=True)
    assert mods[0] == pytest.approx(1.0, abs=1e-10)
    assert max(mods[1:]) < 1e-10
    assert np.abs(spec.fixed_point - np.diag([1.0, 0.0])).max() < 1e-10
    assert spec.tau_eig == 0.0


@pytest.mark.parametrize("reset_mode", ["pure-zero", "fully-mixed"])
def test_superoperator_matches_dense_channel(reset_mode):
    shape = SystemShape(0, 2, 1)
    rng = np.random.default_rng(1)
    u = de.haar_unitary(8, rng)
    m = sp.build_superoperator(u, shape, reset_mode)
    for _ in range(100):
        rho = _random_density(4, rng)
        out = sp.apply_superoperator(m, rho)
        ref, _, _ = de.evolve_and_measure(
            de.DenseState(2, rho, "mixed"), u, shape, "unmonitored", reset_mode, rng
        )
        assert np.abs(out - ref.data).max() < 1e-10


def test_dephasing_superoperator_matches_dense_channel():
    shape = SystemShape(0, 2, 1)
    rng = np.random.default_rng(2)
    u = de.haar_unitary(8, rng)
    m = sp.build_superoperator(u, shape, "none")
    assert m.shape == (64, 64)
    for _ in range(30):
        rho = _random_density(8, rng)
        out = sp.apply_superoperator(m, rho)
        ref, _, _ = de.evolve_and_measure(
            de.DenseState(3, rho, "mixed"), u, shape, "unmonitored", "none", rng
        )
        assert np.abs(out - ref.data).max() < 1e-10


def test_superoperator_trace_and_positivity():
    shape = SystemShape(0, 2, 2)
    rng = np.random.default_rng(3)
    u = de.haar_unitary(16, rng)
    for mode in ("pure-zero", "fully-mixed"):
        m = sp.build_superoperator(u, shape, mode)
        # trace preservation: vec(I) is a left fixed vector
        left = m.conj().T @ sp.vec(np.eye(4, dtype=complex))
        assert np.abs(left - sp.vec(np.eye(4))).max() < 1e-10
        for _ in range(20):
            rho = _random_density(4, rng)
            out = sp.apply_superoperator(m, rho)
            assert np.trace(out).real == pytest.approx(1.0, abs=1e-10)
            assert np.linalg.eigvalsh((out + out.conj().T) / 2).min() > -1e-8


def test_build_superoperator_errors():
    shape = SystemShape(0, 2, 1)
    with pytest.raises(ValueError):
        sp.build_superoperator(np.eye(4), shape, "pure-zero")
    with pytest.raises(ValueError):
        sp.build_superoperator(np.eye(8), shape, "laplace")
    with pytest.raises(ValueError):
        sp.build_superoperator(
            np.eye(2**8), SystemShape(0, 7, 1), "pure-zero"
        )
    with pytest.raises(ValueError):
        sp.build_superoperator(np.eye(2**8), SystemShape(0, 6, 2), "none")
    with pytest.raises(ValueError):
        sp.spectrum_of(np.zeros((4, 3)))
    # a contraction with no unit eigenvalue is not a channel
    with pytest.raises(ValueError):
        sp.spectrum_of(0.5 * np.eye(4))


def test_spectrum_sorted_and_conjugate_pairs():
    shape = SystemShape(0, 3, 1)
    spec = sp.spectrum_of(sp.build_superoperator(_haar(16, 4), shape, "pure-zero"))
    mods = np.abs(spec.eigenvalues)
    assert all(mods[i] >= mods[i + 1] - 1e-12 for i in range(len(mods) - 1))
    assert mods.max() <= 1 + 1e-8
    # non-real eigenvalues come in conjugate pairs
    w = spec.eigenvalues
    complexes = w[np.abs(w.imag) > 1e-8]
    for lam in complexes:
        assert np.abs(complexes - lam.conjugate()).min() < 1e-8
    # lambda1 reported with non-negative imaginary part for a pair
    if abs(spec.lambda1.imag) > 1e-8:
        assert spec.lambda1.imag > 0
    # deterministic across repeated diagonalization
    spec2 = sp.spectrum_of(sp.build_superoperator(_haar(16, 4), shape, "pure-zero"))
    assert np.abs(spec.eigenvalues - spec2.eigenvalues).max() < 1e-12
    assert spec.lambda1 == spec2.lambda1


def test_fixed_point_is_fixed_density_matrix():
    shape = SystemShape(0, 3, 2)
    for seed in range(4):
        m = sp.build_superoperator(_haar(32, seed), shape, "pure-zero")
        spec = sp.spectrum_of(m)
        fp = spec.fixed_point
        assert np.trace(fp).real == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.eigvalsh(fp).min() > -1e-8
        assert np.abs(sp.apply_superoperator(m, fp) - fp).max() < 1e-8


def test_haar_bulk_radius_scale():
    """Most non-unit eigenvalues sit inside the 1.3/sqrt(d_B) disk."""
    shape = SystemShape(0, 3, 2)
    outliers = total = 0
    for seed in range(5):
        spec = sp.spectrum_of(
            sp.build_superoperator(_haar(32, 10 + seed), shape, "pure-zero")
        )
        mods = np.abs(spec.eigenvalues[1:])
        outliers += int((mods > 1.3 / 2.0).sum())
        total += mods.size
        assert spec.bulk_radius_estimate < 1.3 / 2.0
    assert outliers / total < 0.05


def test_hamiltonian_channel_has_outlier():
    params = de.HamiltonianParams.random_ising(6, np.random.default_rng(5))
    u = de.hamiltonian_unitary(params, 6)
    shape = SystemShape(0, 3, 3)
    spec = sp.spectrum_of(sp.build_superoperator(u, shape, "pure-zero"))
    assert abs(spec.lambda1) > 1.3 / math.sqrt(8)
    assert spec.tau_eig > 1.0


def test_probe_state_construction():
    shape = SystemShape(0, 2, 1)
    m = sp.build_superoperator(_haar(8, 6), shape, "pure-zero")
    spec = sp.spectrum_of(m)
    a_max = sp.max_mixing(spec.fixed_point, spec.sigma1)
    assert a_max > 0
    rho = sp.probe_state(spec.fixed_point, spec.sigma1, a_max / 2)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-8)
    assert np.linalg.eigvalsh(rho).min() > -1e-10
    # a = 0 is a product state: zero mutual information
    rho0 = sp.probe_state(spec.fixed_point, spec.sigma1, 0.0)
    st = de.DenseState(3, rho0, "mixed")
    assert de.qmi(st, [0], [1, 2]) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        sp.probe_state(spec.fixed_point, spec.sigma1, 4 * a_max + 1.0)


def test_probe_evolution_matches_spectral_prediction():
    shape = SystemShape(0, 2, 1)
    m = sp.build_superoperator(_haar(8, 7), shape, "pure-zero")
    spec = sp.spectrum_of(m)
    a = sp.max_mixing(spec.fixed_point, spec.sigma1) / 2
    block = spec.fixed_point + a * (spec.sigma1 + spec.sigma1.conj().T)
    for t in range(6):
        pred = (
            spec.fixed_point
            + a * spec.lambda1**t * spec.sigma1
            + a * np.conj(spec.lambda1) ** t * spec.sigma1.conj().T
        )
        assert np.abs(block - pred).max() < 1e-8
        block = sp.apply_superoperator(m, block)


def test_probe_qmi_decays_with_lambda1():
    params = de.HamiltonianParams.random_ising(5, np.random.default_rng(8))
    u = de.hamiltonian_unitary(params, 5)
    shape = SystemShape(0, 2, 3)
    m = sp.build_superoperator(u, shape, "pure-zero")
    spec = sp.spectrum_of(m)
    rho = sp.probe_state(spec.fixed_point, spec.sigma1)
    d = spec.dim
    qmis = []
    for t in range(8):
        st = de.DenseState(3, rho, "mixed")
        qmis.append(de.qmi(st, [0], [1, 2]))
        evolved = sp.apply_superoperator(m, rho[d:, d:] * 2) / 2
        top = sp.apply_superoperator(m, rho[:d, :d] * 2) / 2
        rho = np.zeros_like(rho)
        rho[:d, :d] = top
        rho[d:, d:] = evolved
    assert qmis[0] > 0
    # decay rate governed by |lambda1|^2 on the QMI scale: check the
    # empirical ratio stays within a factor-two band of the prediction
    mod = abs(spec.lambda1)
    for t in range(1, 6):
        if qmis[t] < 1e-12:
            break
        ratio = qmis[t] / qmis[0]
        assert ratio < 4 * mod ** (2 * t) + 1e-9
        assert ratio > mod ** (4 * t) / 4 - 1e-9
