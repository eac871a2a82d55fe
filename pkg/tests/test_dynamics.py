import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qswarm.qcore import DensityMatrix, svd
from qswarm.dynamics import (Hamiltonian, Dissipator, EvolutionOperator, hamiltonian_sigma_z,
                             hamiltonian_from_energies, lindblad_terms, lindblad_generator, stability_indicator,
                             evolve_unitary, unitary_from_hamiltonian, residuals, recover_evolution_paper,
                             recover_evolution_procrustes, rotation_onto, integrate_lindblad, target_dissipators)

from oracles import expm_taylor

RHO_T0 = DensityMatrix(np.array([[0.9, 0.2], [0.2, 0.1]]))
RHO_T1 = DensityMatrix(np.array([[0.1, 0.2], [0.2, 0.9]]))

WORKING_T0 = DensityMatrix(np.array([[0.75, 0, 0, 0.25], [0, 0, 0, 0], [0, 0, 0, 0], [0.25, 0, 0, 0.25]]))
WORKING_T1 = DensityMatrix(np.array([[0.15, 0, 0, 0.35], [0, 0, 0, 0], [0, 0, 0, 0], [0.35, 0, 0, 0.85]]))

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]])


def test_hamiltonian_sigma_z():
    h = hamiltonian_sigma_z(1.0)
    assert_allclose(h.matrix, np.diag([0.5, -0.5]))
    assert h.delta_e == 1.0
    h2 = hamiltonian_sigma_z(2.0, n_qubits=2, qubit=1)
    assert_allclose(np.diag(h2.matrix).real, [1, -1, 1, -1])
    assert hamiltonian_from_energies(3.0, 1.0).delta_e == 2.0
    with pytest.raises(ValueError):
        hamiltonian_sigma_z(math.inf)
    with pytest.raises(ValueError):
        hamiltonian_sigma_z(1.0, n_qubits=1, qubit=1)
    with pytest.raises(ValueError, match='Hermitian'):
        Hamiltonian(np.array([[0, 1], [0, 0]]))


def test_dissipator_rate():
    with pytest.raises(ValueError):
        Dissipator(SIGMA_MINUS, -1.0)


def test_commutator_term():
    terms = lindblad_terms(RHO_T1, hamiltonian_sigma_z(1.0))
    assert_allclose(terms.commutator, -1j * np.array([[0, 0.2], [-0.2, 0]]), atol=1e-12)
    assert_allclose(terms.total(), terms.commutator)
    assert not np.any(terms.jump)


def test_jump_conventions():
    rho = DensityMatrix(np.diag([0.2, 0.8]))
    h = Hamiltonian(np.zeros((2, 2)))
    standard = lindblad_terms(rho, h, [Dissipator(SIGMA_MINUS)], convention='standard')
    assert_allclose(standard.jump, np.diag([0.8, 0.0]))
    assert_allclose(standard.left_anticommutator, np.diag([0.0, -0.4]))
    assert_allclose(standard.right_anticommutator, np.diag([0.0, -0.4]))
    assert_allclose(standard.total(), np.diag([0.8, -0.8]))
    printed = lindblad_terms(rho, h, [Dissipator(SIGMA_MINUS)], convention='printed')
    assert_allclose(printed.jump, np.diag([0.0, 0.2]))
    with pytest.raises(ValueError, match='convention'):
        lindblad_terms(rho, h, convention='other')


def test_generator_accepts_non_physical_input():
    rho = np.array([[0.25, 0], [0.25, 0.5]])
    out = lindblad_generator(rho, hamiltonian_sigma_z(1.0))
    assert_allclose(out, -1j * np.array([[0, 0], [-0.25, 0]]), atol=1e-12)


def test_generator_shape_mismatch():
    with pytest.raises(ValueError, match='shape'):
        lindblad_generator(RHO_T0, hamiltonian_sigma_z(1.0, n_qubits=2))


def test_stability_indicator_marginal():
    report = stability_indicator(RHO_T0, RHO_T1, hamiltonian_sigma_z(1.0))
    assert report.value == pytest.approx(0.0, abs=1e-12)
    assert report.verdict == 'marginal'


def test_stability_indicator_sign():
    rho0 = DensityMatrix(np.diag([0.2, 0.8]))
    rho1 = DensityMatrix(np.diag([0.6, 0.4]))
    h = Hamiltonian(np.zeros((2, 2)), delta_e=1.0)
    # decay toward |0> keeps pushing along the last move
    report = stability_indicator(rho0, rho1, h, [Dissipator(SIGMA_MINUS)], convention='standard')
    assert report.value.real > 0


def test_unitary_from_hamiltonian():
    h = hamiltonian_sigma_z(1.0)
    u = unitary_from_hamiltonian(h, 0.7)
    assert u.is_unitary
    assert_allclose(u.matrix, expm_taylor(-0.7j * h.matrix), atol=1e-12)
    rho = evolve_unitary(RHO_T0, u)
    assert_allclose(np.diag(rho.matrix), np.diag(RHO_T0.matrix), atol=1e-12)
    assert abs(rho.matrix[0, 1]) == pytest.approx(0.2)


def test_evolve_unitary_modes():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert_allclose(evolve_unitary(RHO_T0, x).matrix, [[0.1, 0.2], [0.2, 0.9]], atol=1e-12)
    left = evolve_unitary(RHO_T0, x, mode='left')
    assert_allclose(left.matrix, [[0.2, 0.1], [0.9, 0.2]], atol=1e-12)
    assert not left.is_valid()
    with pytest.raises(ValueError):
        evolve_unitary(RHO_T0, x, mode='right')
    with pytest.raises(ValueError, match='shape'):
        evolve_unitary(RHO_T0, np.eye(4))


def test_non_unitary_operator_defect():
    op = EvolutionOperator(np.diag([1.0, 0.5]))
    assert not op.is_unitary
    assert op.unitarity_defect == pytest.approx(0.75)


def test_recovery_on_working_example():
    paper = recover_evolution_paper(WORKING_T0, WORKING_T1)
    procrustes = recover_evolution_procrustes(WORKING_T0, WORKING_T1)
    assert paper.is_unitary
    assert procrustes.is_unitary
    assert procrustes.residual <= paper.residual + 1e-12
    assert procrustes.residual == pytest.approx(residuals(procrustes, WORKING_T0, WORKING_T1).left)


def test_procrustes_identity_for_identical_states():
    rho = DensityMatrix(np.diag([0.7, 0.3]))
    op = recover_evolution_procrustes(rho, rho)
    assert_allclose(op.matrix, np.eye(2), atol=1e-12)
    assert op.residual == pytest.approx(0.0, abs=1e-12)


def test_procrustes_identity_for_orthogonal_supports():
    a = DensityMatrix(np.diag([1.0, 0.0]))
    b = DensityMatrix(np.diag([0.0, 1.0]))
    assert_allclose(recover_evolution_procrustes(a, b).matrix, np.eye(2))


def test_procrustes_maps_pure_states():
    a = DensityMatrix(np.diag([1.0, 0.0]))
    b = DensityMatrix(0.5 * np.ones((2, 2)))
    op = recover_evolution_procrustes(a, b)
    assert_allclose(evolve_unitary(a, op).matrix, b.matrix, atol=1e-12)


def test_conjugate_evolution_rotates_coherences():
    t = 0.3
    u = unitary_from_hamiltonian(Hamiltonian(np.diag([1.0, -1.0])), t)
    out = evolve_unitary(RHO_T0, u).matrix
    assert_allclose(np.diag(out), np.diag(RHO_T0.matrix), atol=1e-12)
    assert out[0, 1] == pytest.approx(0.2 * np.exp(-2j * t))
    assert out[1, 0] == pytest.approx(0.2 * np.exp(2j * t))


def test_paper_recovery_of_identical_diagonal_states():
    rho = DensityMatrix(np.diag([0.75, 0.25]))
    op = recover_evolution_paper(rho, rho)
    assert_allclose(op.matrix, np.eye(2), atol=1e-12)
    assert op.residual == pytest.approx(0.0, abs=1e-12)


def test_recovery_of_identical_coherent_states():
    # the literal formula gives U V V U^dag = U U here, not the identity
    paper = recover_evolution_paper(WORKING_T0, WORKING_T0)
    u, _, v = svd(WORKING_T0.matrix)
    assert paper.is_unitary
    assert_allclose(paper.matrix, u @ v @ v @ u.conj().T, atol=1e-12)
    assert paper.residual > 0.1
    best = recover_evolution_procrustes(WORKING_T0, WORKING_T0)
    assert best.residual == pytest.approx(0.0, abs=1e-12)
    assert_allclose(evolve_unitary(WORKING_T0, best).matrix, WORKING_T0.matrix, atol=1e-12)


def test_recovery_residuals_are_logged(caplog):
    with caplog.at_level(logging.INFO, logger='qswarm.log'):
        recover_evolution_paper(WORKING_T0, WORKING_T1)
        recover_evolution_procrustes(WORKING_T0, WORKING_T1)
    infos = [r.getMessage() for r in caplog.records if r.levelno == logging.INFO]
    assert any(m.startswith('paper recovery: one-sided residual') for m in infos)
    assert any(m.startswith('procrustes recovery: one-sided residual') for m in infos)


def test_rotation_onto():
    op = rotation_onto([1.0, 0.0], [0.0, 1.0])
    assert op.is_unitary
    assert_allclose(op.matrix @ [1.0, 0.0], [0.0, 1.0], atol=1e-12)
    a = np.array([0.6, 0.8j, 0.0, 0.0])
    e = np.array([0.0, 0.0, 0.5, -0.5j]) * np.sqrt(2)
    op = rotation_onto(a, e)
    assert op.is_unitary
    assert_allclose(op.matrix @ a, e, atol=1e-12)
    with pytest.raises(ValueError):
        rotation_onto([1.0, 0.0], [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(ValueError, match='zero'):
        rotation_onto([0.0, 0.0], [1.0, 0.0])


def test_recovery_dimension_mismatch():
    with pytest.raises(ValueError, match='dimension'):
        recover_evolution_paper(RHO_T0, WORKING_T0)
    with pytest.raises(ValueError, match='dimension'):
        recover_evolution_procrustes(RHO_T0, WORKING_T0)


def test_integrate_lindblad_relaxes_to_target():
    rho = DensityMatrix(np.diag([0.0, 1.0]))
    h = Hamiltonian(np.zeros((2, 2)))
    out = integrate_lindblad(rho, h, target_dissipators([1.0, 0.0]), t=1.0, convention='standard')
    assert out.matrix[1, 1].real == pytest.approx(math.exp(-1.0), abs=1e-3)
    assert np.trace(out.matrix).real == pytest.approx(1.0)
    assert out.is_valid()


def test_integrate_lindblad_unitary_part():
    h = hamiltonian_sigma_z(1.0)
    out = integrate_lindblad(RHO_T0, h, t=0.5, dt=1e-4)
    exact = evolve_unitary(RHO_T0, unitary_from_hamiltonian(h, 0.5))
    assert_allclose(out.matrix, exact.matrix, atol=1e-3)


def test_integrate_lindblad_arguments():
    h = hamiltonian_sigma_z(1.0)
    assert integrate_lindblad(RHO_T0, h, t=0.0) is RHO_T0
    with pytest.raises(ValueError):
        integrate_lindblad(RHO_T0, h, t=-1.0)
    with pytest.raises(ValueError):
        integrate_lindblad(RHO_T0, h, dt=0.0)
