# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Time evolution of swarm density matrices.

Hamiltonians are in units with hbar = 1. The Lindblad generator follows

    L(rho) = -i[H, rho] + sum_a g_a (J_a - 1/2 L_a^dag L_a rho - 1/2 rho L_a^dag L_a)

with the jump term ``J = L^T rho L^*`` (``convention='printed'``) or
``J = L rho L^dag`` (``convention='standard'``). The two agree for real
symmetric jump operators; the printed form is only trace preserving then.
"""

import math
from typing import NamedTuple
from dataclasses import dataclass, InitVar

import numpy as np

from qswarm import log
from qswarm import constants
from qswarm.qcore import DensityMatrix, as_matrix, matrix_exp, svd, project_to_density

__all__ = ['Hamiltonian',
           'Dissipator',
           'EvolutionOperator',
           'LindbladTerms',
           'StabilityReport',
           'Residuals',
           'hamiltonian_sigma_z',
           'hamiltonian_from_energies',
           'lindblad_terms',
           'lindblad_generator',
           'stability_indicator',
           'evolve_unitary',
           'unitary_from_hamiltonian',
           'recover_evolution_paper',
           'recover_evolution_procrustes',
           'rotation_onto',
           'residuals',
           'integrate_lindblad',
           'target_dissipators']

CONVENTIONS = ('printed', 'standard')
APPLICATIONS = ('conjugate', 'left')

SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    matrix: np.ndarray
    delta_e: float = None
    tol: InitVar[float] = None

    def __post_init__(self, tol):
        tol = constants.HERM_TOL if tol is None else tol
        m = as_matrix(self.matrix, 'Hamiltonian')
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("Hamiltonian is not Hermitian")
        object.__setattr__(self, 'matrix', m)

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Dissipator:
    """Jump operator with a constant rate."""
    operator: np.ndarray
    rate: float = 1.0

    def __post_init__(self):
        op = as_matrix(self.operator, 'jump operator')
        if op.shape[0] != op.shape[1]:
            raise ValueError(f"jump operator must be square, got shape {op.shape}")
        if not self.rate >= 0:
            raise ValueError(f"dissipation rate must be non-negative, got {self.rate}")
        object.__setattr__(self, 'operator', op)
        object.__setattr__(self, 'rate', float(self.rate))


@dataclass(frozen=True, eq=False)
class EvolutionOperator:
    """Evolution matrix with its unitarity defect ``||O^dag O - I||_F``.

    *residual* is the one-sided fit ``||O rho0 - rho1||_F`` when the operator
    was recovered from two snapshots.
    """
    matrix: np.ndarray
    residual: float = None
    unitarity_defect: float = None

    def __post_init__(self):
        m = as_matrix(self.matrix, 'evolution operator')
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"evolution operator must be square, got shape {m.shape}")
        defect = float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]), 'fro'))
        object.__setattr__(self, 'matrix', m)
        object.__setattr__(self, 'unitarity_defect', defect)
        if defect > constants.UNITARY_TOL:
            log.warning(f"evolution operator is not unitary (defect {defect:.3g})")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def is_unitary(self):
        return self.unitarity_defect <= constants.UNITARY_TOL


class LindbladTerms(NamedTuple):
    commutator: np.ndarray
    jump: np.ndarray
    left_anticommutator: np.ndarray
    right_anticommutator: np.ndarray

    def total(self):
        return self.commutator + self.jump + self.left_anticommutator + self.right_anticommutator


class StabilityReport(NamedTuple):
    value: complex
    verdict: str


class Residuals(NamedTuple):
    left: float
    conjugate: float


def hamiltonian_sigma_z(delta_e, n_qubits=1, qubit=0):
    """``(delta_e / 2) sigma_z`` acting on *qubit* of an *n_qubits* register."""
    if not math.isfinite(delta_e):
        raise ValueError(f"energy scale must be finite, got {delta_e}")
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {n_qubits} qubits")
    m = np.ones((1, 1), dtype=np.complex128)
    for q in range(n_qubits):
        m = np.kron(m, SIGMA_Z if q == qubit else np.eye(2))
    return Hamiltonian(0.5 * delta_e * m, delta_e=float(delta_e))


def hamiltonian_from_energies(e_now, e_prev, n_qubits=1, qubit=0):
    """sigma_z Hamiltonian with ``delta_e = e_now - e_prev``."""
    return hamiltonian_sigma_z(e_now - e_prev, n_qubits=n_qubits, qubit=qubit)


def _check_dims(rho, h, dissipators):
    if h.shape != rho.shape:
        raise ValueError(f"Hamiltonian shape {h.shape} does not match density shape {rho.shape}")
    for d in dissipators:
        if d.operator.shape != rho.shape:
            raise ValueError(f"jump operator shape {d.operator.shape} does not match density shape {rho.shape}")


def lindblad_terms(rho, H, dissipators=(), convention='printed'):
    """Separate contributions of the Lindblad generator.

    *rho* may be a :class:`DensityMatrix` or any square array, so that
    non-physical inputs can be evaluated as well.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}, expected one of {CONVENTIONS}")
    rho = as_matrix(rho, 'rho')
    h = H.matrix if isinstance(H, Hamiltonian) else as_matrix(H, 'Hamiltonian')
    _check_dims(rho, h, dissipators)

    zero = np.zeros_like(rho)
    commutator = -1j * (h @ rho - rho @ h)
    jump, left, right = zero.copy(), zero.copy(), zero.copy()
    for d in dissipators:
        L = d.operator
        LdL = L.conj().T @ L
        if convention == 'printed':
            jump = jump + d.rate * (L.T @ rho @ L.conj())
        else:
            jump = jump + d.rate * (L @ rho @ L.conj().T)
        left = left - 0.5 * d.rate * (LdL @ rho)
        right = right - 0.5 * d.rate * (rho @ LdL)
    return LindbladTerms(commutator, jump, left, right)


def lindblad_generator(rho, H, dissipators=(), convention='printed'):
    return lindblad_terms(rho, H, dissipators, convention).total()


def stability_indicator(rho0, rho1, H, dissipators=(), convention='printed', tol=1e-12):
    """``Tr[L(rho1) (rho1 - rho0)]`` and the verdict read from ``Im(value) * delta_e``.

    Negative means stable, positive unstable, zero marginal.
    """
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    gen = lindblad_generator(rho1, H, dissipators, convention)
    value = complex(np.trace(gen @ (rho1.matrix - rho0.matrix)))
    scale = H.delta_e if isinstance(H, Hamiltonian) and H.delta_e is not None else 1.0
    signed = value.imag * scale
    if signed < -tol:
        verdict = 'stable'
    elif signed > tol:
        verdict = 'unstable'
    else:
        verdict = 'marginal'
    return StabilityReport(value, verdict)


def evolve_unitary(rho, O, mode='conjugate'):
    """Apply *O* as ``O rho O^dag`` (conjugate) or ``O rho`` (left).

    The left action does not preserve the density properties; its result is
    returned unvalidated and the defects are logged.
    """
    if mode not in APPLICATIONS:
        raise ValueError(f"unknown application mode {mode!r}, expected one of {APPLICATIONS}")
    o = O.matrix if isinstance(O, EvolutionOperator) else as_matrix(O, 'evolution operator')
    if o.shape != rho.matrix.shape:
        raise ValueError(f"operator shape {o.shape} does not match density shape {rho.matrix.shape}")
    if mode == 'conjugate':
        return DensityMatrix(o @ rho.matrix @ o.conj().T)
    out = DensityMatrix(o @ rho.matrix, validate=False)
    defects = out.defects()
    if any(v > constants.default_tol() for v in defects.values()):
        log.info("one-sided evolution left the density set: hermiticity %.3g, trace %.3g, psd %.3g"
                 % (defects['hermiticity'], defects['trace'], defects['psd']))
    return out


def unitary_from_hamiltonian(H, t):
    """``exp(-i H t)``."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return EvolutionOperator(matrix_exp(-1j * t * H.matrix))


def residuals(O, rho0, rho1):
    """One-sided and conjugate Frobenius residuals of *O* mapping *rho0* to *rho1*."""
    o = O.matrix if isinstance(O, EvolutionOperator) else as_matrix(O)
    left = np.linalg.norm(o @ rho0.matrix - rho1.matrix, 'fro')
    conj = np.linalg.norm(o @ rho0.matrix @ o.conj().T - rho1.matrix, 'fro')
    return Residuals(float(left), float(conj))


def recover_evolution_paper(rho0, rho1):
    """``O = U' (V'^dag)^-1 V U^dag`` from ``rho0 = U S V^dag`` and ``rho1 = U' S' V'^dag``.

    ``(V'^dag)^-1`` is taken as ``V'``.
    """
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    u0, _, v0 = svd(rho0.matrix)
    u1, _, v1 = svd(rho1.matrix)
    o = u1 @ v1 @ v0 @ u0.conj().T
    res = residuals(o, rho0, rho1)
    log.info(f"paper recovery: one-sided residual {res.left:.3g}, conjugate residual {res.conjugate:.3g}")
    return EvolutionOperator(o, residual=res.left)


def recover_evolution_procrustes(rho0, rho1):
    """Unitary minimizing ``||O rho0 - rho1||_F``: ``O = W X^dag`` with ``rho1 rho0^dag = W S X^dag``."""
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    overlap = rho1.matrix @ rho0.matrix.conj().T
    if np.max(np.abs(overlap)) <= constants.NORM_TOL:
        # every unitary fits equally well
        o = np.eye(rho0.dim, dtype=np.complex128)
    else:
        w, _, x = svd(overlap)
        o = w @ x.conj().T
    res = residuals(o, rho0, rho1)
    log.info(f"procrustes recovery: one-sided residual {res.left:.3g}, conjugate residual {res.conjugate:.3g}")
    return EvolutionOperator(o, residual=res.left)


def rotation_onto(source, target):
    """Unitary taking the ket *source* exactly onto the ket *target*.

    Defined for orthogonal kets as well, where the density-level recovery
    has no overlap to work with. The orthogonal complement of *source* is
    mapped onto that of *target*.
    """
    a = np.asarray(getattr(source, 'amplitudes', source), dtype=np.complex128)
    e = np.asarray(getattr(target, 'amplitudes', target), dtype=np.complex128)
    if a.shape != e.shape or a.ndim != 1:
        raise ValueError(f"kets must be vectors of the same size, got {a.shape} and {e.shape}")
    na, ne = np.linalg.norm(a), np.linalg.norm(e)
    if na <= constants.NORM_TOL or ne <= constants.NORM_TOL:
        raise ValueError("cannot rotate a zero vector")
    w, _, x = svd(np.outer(e / ne, (a / na).conj()))
    return EvolutionOperator(w @ x.conj().T)


def integrate_lindblad(rho, H, dissipators=(), t=1.0, dt=constants.DT, convention='printed'):
    """Fixed-step Euler propagation of the Lindblad equation up to time *t*.

    Each step renormalizes the trace and symmetrizes the Hermitian part; the
    final state is projected onto the density set.
    """
    if t < 0:
        raise ValueError(f"integration time must be non-negative, got {t}")
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    n_steps = int(math.ceil(t / dt)) if t > 0 else 0
    if n_steps == 0:
        return rho
    step = t / n_steps
    m = np.array(rho.matrix)
    for _ in range(n_steps):
        m = m + step * lindblad_generator(m, H, dissipators, convention)
        m = 0.5 * (m + m.conj().T)
        m = m / np.trace(m).real
    return project_to_density(m)


def target_dissipators(target, rate=1.0):
    """Jump operators ``|e><k|`` that relax any state onto the pure state *target*.

    With the standard jump term they generate ``d rho/dt = rate (|e><e| - rho)``.
    """
    e = np.asarray(target.amplitudes if hasattr(target, 'amplitudes') else target, dtype=np.complex128)
    dim = e.size
    ops = []
    for k in range(dim):
        L = np.zeros((dim, dim), dtype=np.complex128)
        L[:, k] = e
        ops.append(Dissipator(L, rate))
    return ops
