# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Robot and swarm states.

A robot is a register of up to three qubits, each with a role: position
along x, position along y, or success in target finding. A swarm is a
weighted set of robots composed either as a mixed state (the swarm density
matrix keeps the single-robot dimension) or as a tensor product.
"""

import enum
from dataclasses import dataclass

import numpy as np

from qswarm import log
from qswarm import constants
from qswarm.qcore import (DensityMatrix, Ket, KetError, QubitRegister, outer,
                          partial_trace, partial_trace_array)

__all__ = ['QubitRole',
           'SwarmMode',
           'RobotState',
           'SwarmState',
           'robot_from_amplitudes',
           'robot_density',
           'swarm_density',
           'robot_from_tensor_swarm',
           'reduced_position',
           'reduced_swarm',
           'position_distribution',
           'position_probability',
           'barycenter_probability',
           'barycenter_gap',
           'swarm_potential_energy',
           'ideal_target_swarm']


class QubitRole(enum.Enum):
    POSITION_X = 'PositionX'
    POSITION_Y = 'PositionY'
    SUCCESS = 'Success'


class SwarmMode(enum.Enum):
    MIXED = 'mixed'
    TENSOR = 'tensor'


POSITION_ROLES = (QubitRole.POSITION_X, QubitRole.POSITION_Y)


def as_roles(roles):
    """Convert role names or :class:`QubitRole` members to a tuple of roles."""
    out = []
    for r in roles:
        try:
            out.append(r if isinstance(r, QubitRole) else QubitRole(r))
        except ValueError:
            raise ValueError(f"unknown qubit role {r!r}, expected one of {[q.value for q in QubitRole]}")
    out = tuple(out)
    if not out:
        raise ValueError("a robot needs at least one qubit role")
    if len(set(out)) != len(out):
        raise ValueError(f"qubit roles must be unique within a robot, got {[r.value for r in out]}")
    return out


def position_qubits(roles):
    return [q for q, r in enumerate(roles) if r in POSITION_ROLES]


def success_qubits(roles):
    return [q for q, r in enumerate(roles) if r is QubitRole.SUCCESS]


@dataclass(frozen=True, eq=False)
class RobotState:
    """A robot: identifier, qubit roles and either a ket or a mixed state."""
    id: str
    roles: tuple
    ket: Ket = None
    density: DensityMatrix = None

    def __post_init__(self):
        roles = as_roles(self.roles)
        object.__setattr__(self, 'roles', roles)
        if (self.ket is None) == (self.density is None):
            raise ValueError(f"robot {self.id}: exactly one of ket or density must be given")
        dim = self.ket.dim if self.ket is not None else self.density.dim
        if dim != 2 ** len(roles):
            raise ValueError(f"robot {self.id}: state dimension {dim} does not match {len(roles)} roles")
        if len(roles) > 3:
            log.warning(f"robot {self.id} has {len(roles)} qubits, more than the 3 roles of the model")

    @property
    def n_qubits(self):
        return len(self.roles)

    @property
    def dim(self):
        return 2 ** len(self.roles)

    @property
    def is_pure(self):
        return self.ket is not None


@dataclass(frozen=True, eq=False)
class SwarmState:
    """Weighted robots composed in *mode*; weights default to ``1/N``."""
    robots: tuple
    weights: tuple = None
    mode: SwarmMode = SwarmMode.MIXED

    def __post_init__(self):
        robots = tuple(self.robots)
        if not robots:
            raise ValueError("a swarm needs at least one robot")
        mode = self.mode if isinstance(self.mode, SwarmMode) else SwarmMode(self.mode)
        if self.weights is None:
            weights = np.full(len(robots), 1.0 / len(robots))
        else:
            weights = np.array(self.weights, dtype=float).reshape(-1)
        if weights.size != len(robots):
            raise ValueError(f"{weights.size} weights for {len(robots)} robots")
        if not np.all(np.isfinite(weights)):
            raise ValueError(f"weights must be finite, got {weights.tolist()}")
        if np.any(weights < 0):
            raise ValueError(f"weights must be non-negative, got {weights.tolist()}")
        total = float(np.sum(weights))
        if abs(total - 1.0) > constants.WEIGHT_TOL:
            raise ValueError(f"weights sum {total:.6g} != 1")
        if mode is SwarmMode.MIXED:
            signature = robots[0].roles
            for r in robots[1:]:
                if r.roles != signature:
                    raise ValueError(f"mixed swarm robots must share roles: {r.id} has "
                                     f"{[x.value for x in r.roles]}, expected {[x.value for x in signature]}")
        weights.flags.writeable = False
        object.__setattr__(self, 'robots', robots)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'mode', mode)

    @property
    def roles(self):
        """Shared role signature (mixed mode)."""
        return self.robots[0].roles

    def with_robots(self, robots):
        return SwarmState(tuple(robots), self.weights, self.mode)


def robot_from_amplitudes(id, roles, amplitudes, renormalize=False):
    """Build a pure robot from amplitudes in canonical basis order.

    Raises:
        ValueError: wrong length, zero vector, or norm violation when
            *renormalize* is False.
    """
    roles = as_roles(roles)
    amp = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    if amp.size != 2 ** len(roles):
        raise ValueError(f"robot {id}: {amp.size} amplitudes for {len(roles)} qubits (expected {2 ** len(roles)})")
    if not np.any(amp):
        raise KetError(f"robot {id}: amplitude vector is zero")
    ket = Ket.normalized(amp) if renormalize else Ket(amp)
    return RobotState(id, roles, ket=ket)


def robot_density(r):
    if r.ket is not None:
        return DensityMatrix(outer(r.ket, r.ket))
    return r.density


def swarm_density(s):
    """Mixed: ``sum_i w_i rho_i``. Tensor: ``rho_1 x ... x rho_N``."""
    if s.mode is SwarmMode.MIXED:
        dims = {r.dim for r in s.robots}
        if len(dims) != 1:
            raise ValueError(f"mixed swarm robots have different dimensions {sorted(dims)}")
        m = sum(w * robot_density(r).matrix for w, r in zip(s.weights, s.robots))
        return DensityMatrix(m)
    m = np.ones((1, 1), dtype=np.complex128)
    for r in s.robots:
        m = np.kron(m, robot_density(r).matrix)
    return DensityMatrix(m)


def robot_from_tensor_swarm(rho_swarm, s, i):
    """Recover robot *i* by tracing out every other robot of a tensor swarm."""
    if s.mode is not SwarmMode.TENSOR:
        raise ValueError("individual robot recovery is only defined for tensor-mode swarms")
    if not 0 <= i < len(s.robots):
        raise ValueError(f"robot index {i} out of range for {len(s.robots)} robots")
    n = sum(r.n_qubits for r in s.robots)
    if rho_swarm.dim != 2 ** n:
        raise ValueError(f"swarm density dimension {rho_swarm.dim} does not match {n} qubits")
    if len(s.robots) == 1:
        return rho_swarm
    start = sum(r.n_qubits for r in s.robots[:i])
    keep = set(range(start, start + s.robots[i].n_qubits))
    traced = [q for q in range(n) if q not in keep]
    return partial_trace(rho_swarm, QubitRegister(n), traced)


def reduced_position(rho, roles):
    """Trace out the success qubits, keeping the position qubits."""
    roles = as_roles(roles)
    if rho.dim != 2 ** len(roles):
        raise ValueError(f"density dimension {rho.dim} does not match {len(roles)} roles")
    if not position_qubits(roles):
        raise ValueError("no position qubit to keep")
    traced = success_qubits(roles)
    if not traced:
        raise ValueError("roles have no success qubit to trace out")
    return partial_trace(rho, QubitRegister(len(roles)), traced)


def reduced_swarm(s):
    """Weighted mean of the robots' reduced position matrices."""
    m = sum(w * reduced_position(robot_density(r), r.roles).matrix for w, r in zip(s.weights, s.robots))
    return DensityMatrix(m)


def position_distribution(rho, roles):
    """Probabilities of the position outcomes.

    Outcomes are ordered canonically over the position qubits, in register order.
    """
    roles = as_roles(roles)
    pos = position_qubits(roles)
    if not pos:
        raise ValueError("roles have no position qubit")
    diag = np.real(np.diag(rho.matrix))
    others = [q for q in range(len(roles)) if q not in pos]
    if others:
        diag = np.real(np.diag(partial_trace_array(np.diag(diag), len(roles), others)))
    return np.clip(diag, 0.0, 1.0)


def position_probability(r, basis_outcome, role=QubitRole.POSITION_X):
    """Probability that the robot's *role* qubit is measured as *basis_outcome*."""
    if basis_outcome not in (0, 1):
        raise ValueError(f"basis outcome must be 0 or 1, got {basis_outcome}")
    if role not in r.roles:
        raise ValueError(f"robot {r.id} has no {role.value} qubit")
    q = r.roles.index(role)
    reg = QubitRegister(r.n_qubits)
    diag = np.real(np.diag(robot_density(r).matrix))
    p = sum(diag[i] for i in range(reg.dim) if reg.bit(i, q) == basis_outcome)
    return float(np.clip(p, 0.0, 1.0))


def barycenter_probability(s, basis_outcome, role=QubitRole.POSITION_X):
    """Weighted mean of the robots' position probabilities."""
    missing = [r.id for r in s.robots if role not in r.roles]
    if missing:
        raise ValueError(f"robots {missing} have no {role.value} qubit")
    return float(sum(w * position_probability(r, basis_outcome, role) for w, r in zip(s.weights, s.robots)))


def barycenter_gap(s, target_bit, role=QubitRole.POSITION_X):
    """Distance ``|P_barycenter(target) - 1|`` to the barycenter of the ideal swarm."""
    return abs(barycenter_probability(s, target_bit, role) - 1.0)


def swarm_potential_energy(s, k=1.0, role=QubitRole.POSITION_X):
    """Barycentric potential ``sum_i k / (x_i - B)``.

    ``x_i`` is the probability of robot *i* being at 1 and ``B`` the
    barycenter probability.
    """
    b = barycenter_probability(s, 1, role)
    energy = 0.0
    for r in s.robots:
        gap = position_probability(r, 1, role) - b
        if abs(gap) < constants.NORM_TOL:
            raise ValueError(f"robot {r.id} sits on the swarm barycenter, its potential is undefined")
        energy += k / gap
    return energy


def ideal_target_swarm(roles, target_bits):
    """Projector onto the target position bits with success = 1."""
    roles = as_roles(roles)
    pos = position_qubits(roles)
    target_bits = tuple(int(b) for b in target_bits)
    if len(target_bits) != len(pos):
        raise ValueError(f"{len(target_bits)} target bits for {len(pos)} position qubits")
    bits = [1] * len(roles)
    for q, b in zip(pos, target_bits):
        bits[q] = b
    reg = QubitRegister(len(roles))
    m = np.zeros((reg.dim, reg.dim), dtype=np.complex128)
    idx = reg.index(bits)
    m[idx, idx] = 1.0
    return DensityMatrix(m)
