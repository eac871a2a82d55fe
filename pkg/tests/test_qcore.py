import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qswarm.qcore import (DensityMatrix, DensityMatrixError, Ket, KetError, QubitRegister, outer, tensor,
                          partial_trace, partial_trace_array, trace_distance, frobenius_half_sq, purity,
                          von_neumann_entropy, fidelity, psd_sqrt, matrix_exp, svd, project_to_density,
                          permute_basis, reverse_basis)

from oracles import partial_trace_loops, expm_taylor


def ket(*amps):
    return Ket(np.array(amps, dtype=complex))


def test_ket_normalization():
    k = Ket.normalized([1, 1])
    assert_allclose(k.amplitudes, [math.sqrt(0.5)] * 2)
    with pytest.raises(KetError):
        Ket(np.array([1.0, 1.0]))
    with pytest.raises(KetError):
        Ket(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(KetError):
        Ket.normalized([0, 0])


def test_ket_is_read_only():
    k = ket(1, 0)
    with pytest.raises(ValueError):
        k.amplitudes[0] = 0


def test_density_matrix_validation():
    with pytest.raises(DensityMatrixError, match='Hermitian'):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(DensityMatrixError, match='trace'):
        DensityMatrix(np.eye(2))
    with pytest.raises(DensityMatrixError, match='positive'):
        DensityMatrix(np.array([[1.5, 0], [0, -0.5]]))
    with pytest.raises(DensityMatrixError, match='power of 2'):
        DensityMatrix(np.eye(3) / 3)


def test_density_matrix_defects_without_validation():
    m = DensityMatrix(np.array([[0.25, 0], [0.25, 0.5]]), validate=False)
    d = m.defects()
    assert d['hermiticity'] == pytest.approx(0.25)
    assert d['trace'] == pytest.approx(0.25)
    assert not m.is_valid()


def test_tolerance_env_override(monkeypatch):
    m = np.diag([0.5 + 5e-7, 0.5])
    with pytest.raises(DensityMatrixError):
        DensityMatrix(m)
    monkeypatch.setenv('QSWARM_TOL', '1e-6')
    assert DensityMatrix(m).dim == 2
    monkeypatch.setenv('QSWARM_TOL', 'abc')
    with pytest.raises(ValueError, match='QSWARM_TOL'):
        DensityMatrix(m)


def test_register_ordering():
    reg = QubitRegister(2)
    assert reg.index((1, 0)) == 2
    assert reg.bits(1) == (0, 1)
    assert reg.bit(2, 0) == 1
    with pytest.raises(ValueError):
        reg.bits(4)


def test_outer_and_tensor():
    p = DensityMatrix(outer(ket(1, 0), ket(1, 0)))
    q = DensityMatrix(outer(ket(0, 1), ket(0, 1)))
    pq = tensor(p, q)
    assert pq.dim == 4
    assert pq.matrix[1, 1] == 1


def test_partial_trace_matches_loops():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    for traced in ([0], [1], [2], [0, 2], [1, 2]):
        assert_allclose(partial_trace_array(rho, 3, traced), partial_trace_loops(rho, 3, traced), atol=1e-12)


def test_partial_trace_errors():
    rho = DensityMatrix(np.eye(4) / 4)
    reg = QubitRegister(2)
    with pytest.raises(ValueError):
        partial_trace(rho, reg, [])
    with pytest.raises(ValueError):
        partial_trace(rho, reg, [2])
    with pytest.raises(ValueError):
        partial_trace(rho, reg, [0, 1])
    with pytest.raises(ValueError):
        partial_trace(rho, QubitRegister(3), [0])


def test_partial_trace_of_product_state():
    a = DensityMatrix(np.array([[0.9, 0.2], [0.2, 0.1]]))
    b = DensityMatrix(np.array([[0.5, 0.5j], [-0.5j, 0.5]]))
    ab = tensor(a, b)
    assert_allclose(partial_trace(ab, QubitRegister(2), [1]).matrix, a.matrix, atol=1e-12)
    assert_allclose(partial_trace(ab, QubitRegister(2), [0]).matrix, b.matrix, atol=1e-12)


def test_trace_distance_target_example():
    s = DensityMatrix(np.array([[0.9, 0.2], [0.2, 0.1]]))
    t = DensityMatrix(np.diag([1.0, 0.0]))
    assert trace_distance(s, t) == pytest.approx(math.sqrt(0.05), abs=1e-9)
    assert frobenius_half_sq(s, t) == pytest.approx(0.05, abs=1e-12)
    assert trace_distance(s, s) == 0


def test_trace_distance_orthogonal_states():
    a = DensityMatrix(np.diag([1.0, 0.0]))
    b = DensityMatrix(np.diag([0.0, 1.0]))
    assert trace_distance(a, b) == pytest.approx(1.0)
    assert fidelity(a, b) == pytest.approx(0.0, abs=1e-12)


def test_purity_and_entropy():
    mixed = DensityMatrix(np.eye(4) / 4)
    pure = DensityMatrix(outer(ket(0, 1), ket(0, 1)))
    assert purity(mixed) == pytest.approx(0.25)
    assert purity(pure) == pytest.approx(1.0)
    assert von_neumann_entropy(mixed) == pytest.approx(2.0)
    assert von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-12)


def test_fidelity_identical_states():
    rho = DensityMatrix(np.array([[0.75, 0.25], [0.25, 0.25]]))
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)


def test_psd_sqrt():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    r = psd_sqrt(m)
    assert_allclose(r @ r, m, atol=1e-12)
    with pytest.raises(DensityMatrixError):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_matrix_exp_matches_taylor():
    h = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, -0.7]])
    assert_allclose(matrix_exp(-1j * 2.5 * h), expm_taylor(-1j * 2.5 * h), atol=1e-10)
    with pytest.raises(ValueError):
        matrix_exp(np.ones((2, 3)))


def test_svd_reconstruction_and_phase():
    m = np.array([[0.75, 0, 0, 0.25], [0, 0, 0, 0], [0, 0, 0, 0], [0.25, 0, 0, 0.25]], dtype=complex)
    u, s, v = svd(m)
    assert_allclose(u @ np.diag(s) @ v.conj().T, m, atol=1e-12)
    assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    for j in range(4):
        k = np.argmax(np.abs(u[:, j]))
        assert u[k, j].real > 0
        assert abs(u[k, j].imag) < 1e-12


def test_fidelity_with_maximally_mixed_state():
    zero = DensityMatrix(np.diag([1.0, 0.0]))
    assert fidelity(zero, DensityMatrix(np.eye(2) / 2)) == pytest.approx(0.5, abs=1e-12)


def test_matrix_exp_of_random_skew_hermitian():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    skew = 0.5 * (a - a.conj().T)
    u = matrix_exp(skew)
    assert_allclose(u, expm_taylor(skew, terms=40), atol=1e-9)
    assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


def test_svd_of_diagonal_matrix():
    u, s, v = svd(np.diag([3.0, 1.0]))
    assert_allclose(u, np.eye(2), atol=1e-12)
    assert_allclose(s, [3.0, 1.0])
    assert_allclose(v, np.eye(2), atol=1e-12)


def test_svd_with_zero_row():
    u, s, v = svd(np.array([[3.0, 1.0], [0.0, 0.0]]))
    assert s[-1] == pytest.approx(0.0, abs=1e-12)
    assert s[0] == pytest.approx(math.sqrt(10.0))
    tall = np.array([[3.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    u, s, v = svd(tall)
    assert u.shape == (3, 3)
    assert_allclose(u[:, :2] @ np.diag(s) @ v.conj().T, tall, atol=1e-12)


def test_partial_trace_keeps_middle_factor():
    factors = [DensityMatrix(np.diag(d)) for d in ([0.9, 0.1], [0.3, 0.7], [0.5, 0.5])]
    product = tensor(tensor(factors[0], factors[1]), factors[2])
    middle = partial_trace(product, QubitRegister(3), [0, 2])
    assert_allclose(middle.matrix, factors[1].matrix, atol=1e-12)
    assert_allclose(middle.matrix, partial_trace_loops(product.matrix, 3, [0, 2]), atol=1e-12)


def test_project_to_density():
    rho = project_to_density(np.array([[0.25, 0], [0.25, 0.5]]))
    assert rho.is_valid()
    already = DensityMatrix(np.array([[0.9, 0.2], [0.2, 0.1]]))
    assert_allclose(project_to_density(already.matrix).matrix, already.matrix, atol=1e-12)


def test_reverse_basis():
    printed = np.zeros((4, 4))
    printed[0, 0] = 1
    canonical = reverse_basis(printed)
    assert canonical[3, 3] == 1
    assert_allclose(reverse_basis(canonical), printed)
    with pytest.raises(ValueError):
        permute_basis(np.eye(2), [0, 0])
