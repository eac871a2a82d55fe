# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Dense complex linear-algebra kernels and quantum-information primitives.

Basis convention: the canonical index of ``|q1 q2 ... qn>`` is the binary
value of the bit string with ``q1`` as the most significant bit, so for two
qubits the order is ``|00>, |01>, |10>, |11>``.

All matrices are stored as read-only ``complex128`` numpy arrays.
"""

from dataclasses import dataclass, InitVar

import numpy as np
import scipy.linalg

from qswarm import constants

__author__ = "qswarm developers"
__copyright__ = "Copyright (c) 2026, UChicago Argonne, LLC."
__docformat__ = 'restructuredtext en'
__all__ = ['DensityMatrixError',
           'KetError',
           'Ket',
           'DensityMatrix',
           'QubitRegister',
           'outer',
           'tensor',
           'partial_trace',
           'trace_distance',
           'frobenius_half_sq',
           'purity',
           'von_neumann_entropy',
           'fidelity',
           'psd_sqrt',
           'matrix_exp',
           'svd',
           'project_to_density',
           'permute_basis',
           'reverse_basis']


class KetError(ValueError):
    pass


class DensityMatrixError(ValueError):
    pass


def as_matrix(m, name='matrix'):
    """Return *m* as a read-only 2-D complex array with finite entries.

    Accepts numpy arrays, nested sequences and :class:`DensityMatrix`.
    """
    if isinstance(m, DensityMatrix):
        return m.matrix
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


def _n_qubits(dim):
    return int(dim).bit_length() - 1


def _hermitian_part(m):
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized amplitude vector over a ``2**n`` qubit basis."""
    amplitudes: np.ndarray
    tol: InitVar[float] = None

    def __post_init__(self, tol):
        tol = constants.default_tol() if tol is None else tol
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if not _is_power_of_two(amp.size) or amp.size < 2:
            raise KetError(f"ket dimension {amp.size} is not a power of 2")
        if not np.all(np.isfinite(amp)):
            raise KetError("ket has non-finite amplitudes")
        norm2 = float(np.vdot(amp, amp).real)
        if abs(norm2 - 1.0) > tol:
            raise KetError(f"ket norm squared {norm2:.17g} differs from 1 by more than {tol:g}")
        amp.flags.writeable = False
        object.__setattr__(self, 'amplitudes', amp)

    @classmethod
    def normalized(cls, amplitudes):
        amp = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise KetError("cannot normalize the zero vector")
        return cls(amp / norm)

    @property
    def dim(self):
        return self.amplitudes.size

    @property
    def n_qubits(self):
        return _n_qubits(self.dim)

    def __eq__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semi-definite, unit-trace matrix.

    Args:
        matrix: square array of size ``2**n``.
        validate: when False the three density properties are not enforced;
            use :meth:`defects` to inspect them.
        tol: tolerance override for the Hermiticity, trace and PSD checks.
    """
    matrix: np.ndarray
    validate: InitVar[bool] = True
    tol: InitVar[float] = None

    def __post_init__(self, validate, tol):
        m = as_matrix(self.matrix, 'density matrix')
        if m.shape[0] != m.shape[1]:
            raise DensityMatrixError(f"density matrix must be square, got shape {m.shape}")
        if not _is_power_of_two(m.shape[0]):
            raise DensityMatrixError(f"density matrix dimension {m.shape[0]} is not a power of 2")
        object.__setattr__(self, 'matrix', m)
        if validate:
            tol = constants.default_tol() if tol is None else tol
            d = self.defects()
            if d['hermiticity'] > tol:
                raise DensityMatrixError(f"matrix is not Hermitian (max |M - M^dag| = {d['hermiticity']:.3g})")
            if d['trace'] > tol:
                raise DensityMatrixError(f"trace differs from 1 by {d['trace']:.3g}")
            if d['psd'] > tol:
                raise DensityMatrixError(f"matrix is not positive semi-definite (min eigenvalue {-d['psd']:.3g})")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def n_qubits(self):
        return _n_qubits(self.dim)

    def defects(self):
        """Deviation from each density-matrix property (0 means satisfied)."""
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        trace = float(abs(np.trace(m) - 1.0))
        min_eig = float(np.min(np.linalg.eigvalsh(_hermitian_part(m))))
        return {'hermiticity': herm, 'trace': trace, 'psd': max(0.0, -min_eig)}

    def is_valid(self, tol=None):
        tol = constants.default_tol() if tol is None else tol
        return all(v <= tol for v in self.defects().values())

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    __hash__ = None


@dataclass(frozen=True)
class QubitRegister:
    """Register of *n_qubits* qubits in the canonical (q1 most significant) ordering."""
    n_qubits: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"a register needs at least one qubit, got {self.n_qubits}")

    @property
    def dim(self):
        return 2 ** self.n_qubits

    def index(self, bits):
        if len(bits) != self.n_qubits:
            raise ValueError(f"expected {self.n_qubits} bits, got {len(bits)}")
        idx = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b}")
            idx = (idx << 1) | int(b)
        return idx

    def bits(self, index):
        if not 0 <= index < self.dim:
            raise ValueError(f"basis index {index} out of range for {self.n_qubits} qubits")
        return tuple((index >> (self.n_qubits - 1 - q)) & 1 for q in range(self.n_qubits))

    def bit(self, index, qubit):
        return (index >> (self.n_qubits - 1 - qubit)) & 1


def outer(a, b):
    """Outer product ``|a><b|``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    m = np.outer(a.amplitudes, b.amplitudes.conj())
    m.flags.writeable = False
    return m


def tensor(a, b):
    """Kronecker product of two density matrices."""
    return DensityMatrix(np.kron(a.matrix, b.matrix))


def partial_trace_array(m, n_qubits, traced_qubits):
    """Partial trace of any ``2**n`` square array, Hermitian or not."""
    m = as_matrix(m)
    if m.shape != (2 ** n_qubits, 2 ** n_qubits):
        raise ValueError(f"matrix shape {m.shape} does not match a {n_qubits}-qubit register")
    traced = set(traced_qubits)
    if not traced:
        raise ValueError("traced qubit set is empty")
    if any(q < 0 or q >= n_qubits for q in traced):
        raise ValueError(f"traced qubits {sorted(traced)} out of range 0..{n_qubits - 1}")
    if len(traced) == n_qubits:
        raise ValueError("cannot trace out every qubit")

    t = m.reshape((2,) * (2 * n_qubits))
    for q in sorted(traced, reverse=True):
        half = t.ndim // 2
        t = np.trace(t, axis1=q, axis2=q + half)
    d = 2 ** (n_qubits - len(traced))
    return t.reshape(d, d)


def partial_trace(m, reg, traced_qubits):
    """Reduced density matrix after tracing out *traced_qubits* of register *reg*."""
    if m.dim != reg.dim:
        raise ValueError(f"density matrix dimension {m.dim} does not match register dimension {reg.dim}")
    return DensityMatrix(partial_trace_array(m.matrix, reg.n_qubits, traced_qubits))


def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def trace_distance(a, b):
    """Trace distance ``1/2 Tr|a - b|`` in [0, 1]."""
    _check_same_dim(a, b)
    eig = np.linalg.eigvalsh(_hermitian_part(a.matrix - b.matrix))
    return float(np.clip(0.5 * np.sum(np.abs(eig)), 0.0, 1.0))


def frobenius_half_sq(a, b):
    """Half the squared Frobenius norm of ``a - b``.

    Diagnostic only: this is the trace-distance formula with the matrix
    square root left out.
    """
    _check_same_dim(a, b)
    diff = a.matrix - b.matrix
    return float(0.5 * np.real(np.trace(diff.conj().T @ diff)))


def purity(m):
    """``Tr(rho^2)``, 1 for pure states and ``1/dim`` for the maximally mixed state."""
    return float(np.real(np.trace(m.matrix @ m.matrix)))


def von_neumann_entropy(m, base=2):
    """``-sum(l log l)`` over the eigenvalues of *m*."""
    eig = np.clip(np.linalg.eigvalsh(_hermitian_part(m.matrix)), 0.0, None)
    eig = eig[eig > 0]
    return float(-np.sum(eig * np.log(eig)) / np.log(base))


def psd_sqrt(m, tol=None):
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in ``(-tol, 0)`` are clamped to zero.

    Raises:
        DensityMatrixError: when an eigenvalue is below ``-tol`` or *m* is
            not Hermitian.
    """
    tol = constants.default_tol() if tol is None else tol
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"psd_sqrt needs a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise DensityMatrixError("psd_sqrt needs a Hermitian matrix")
    eig, vec = np.linalg.eigh(_hermitian_part(m))
    if eig[0] < -tol:
        raise DensityMatrixError(f"matrix is not positive semi-definite (min eigenvalue {eig[0]:.3g})")
    root = np.sqrt(np.clip(eig, 0.0, None))
    return (vec * root) @ vec.conj().T


def fidelity(a, b):
    """Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))**2`` in [0, 1]."""
    _check_same_dim(a, b)
    ra = psd_sqrt(a.matrix)
    inner = _hermitian_part(ra @ b.matrix @ ra)
    eig = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(np.clip(np.sum(np.sqrt(eig)) ** 2, 0.0, 1.0))


def matrix_exp(m):
    """Matrix exponential (scaling and squaring Pade)."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(m)


def svd(m):
    """Singular value decomposition ``m = U diag(S) V^dag``.

    The phase of every column of U is fixed so that its largest-magnitude
    entry is real and positive; the matching column of V gets the same phase.

    Returns:
        tuple: ``(U, S, V)`` with S descending. V is returned, not V^dag.
    """
    m = as_matrix(m)
    try:
        u, s, vh = scipy.linalg.svd(m, full_matrices=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise RuntimeError(f"SVD did not converge for a {m.shape[0]}x{m.shape[1]} matrix: {e}")
    u = np.array(u, dtype=np.complex128)
    v = np.array(vh, dtype=np.complex128).conj().T
    for j in range(u.shape[1]):
        k = int(np.argmax(np.abs(u[:, j])))
        phase = u[k, j] / abs(u[k, j])
        u[:, j] /= phase
        if j < s.size:
            v[:, j] /= phase
    return u, s, v


def project_to_density(m):
    """Nearest density matrix in Frobenius norm.

    Takes the Hermitian part and projects its eigenvalues onto the
    probability simplex.
    """
    h = _hermitian_part(as_matrix(m))
    eig, vec = np.linalg.eigh(h)
    # simplex projection of the eigenvalue vector
    mu = np.sort(eig)[::-1]
    cssv = np.cumsum(mu) - 1.0
    ind = np.arange(1, mu.size + 1)
    rho = ind[mu - cssv / ind > 0][-1]
    theta = cssv[rho - 1] / rho
    lam = np.clip(eig - theta, 0.0, None)
    return DensityMatrix((vec * lam) @ vec.conj().T)


def permute_basis(m, perm):
    """Reorder rows and columns: ``result[i][j] = m[perm[i]][perm[j]]``."""
    m = as_matrix(m)
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(m.shape[0])):
        raise ValueError(f"{perm.tolist()} is not a permutation of 0..{m.shape[0] - 1}")
    return m[np.ix_(perm, perm)]


def reverse_basis(m):
    """Map between the canonical ordering and the reversed ordering ``|11>, |10>, |01>, |00>``."""
    m = as_matrix(m)
    return permute_basis(m, np.arange(m.shape[0])[::-1])
