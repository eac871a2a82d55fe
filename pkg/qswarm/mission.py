# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Closed-loop target reaching.

Each iteration goes from the local robot states to the global swarm density
matrix and back:

1. build the mixed swarm density matrix from the robot kets;
2. recover a unitary that moves it toward the target estimate, or turn its
   dominant state onto the estimate when the recovered step gets no closer;
3. apply it, optionally followed by a Lindblad relaxation toward the
   dominant state of the estimate;
4. reassign the robot kets with the smallest displacement that reproduces
   the new density matrix;
5. read the proximity sensors and refine the target estimate.

The loop stops when the swarm is within ``delta`` (trace distance) of the
true target or after ``max_iterations`` iterations.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares, linear_sum_assignment
from tqdm import tqdm

from qswarm import log
from qswarm import constants
from qswarm import utils
from qswarm.qcore import DensityMatrix, Ket, QubitRegister, outer, trace_distance, project_to_density
from qswarm.swarm import (SwarmMode, RobotState, swarm_density, robot_density, position_distribution,
                          position_qubits, ideal_target_swarm)
from qswarm.dynamics import (APPLICATIONS, EvolutionOperator, Hamiltonian, evolve_unitary,
                             recover_evolution_paper, recover_evolution_procrustes,
                             integrate_lindblad, target_dissipators, rotation_onto)

__all__ = ['ReassignmentError',
           'SensorModel',
           'TargetEstimate',
           'MissionConfig',
           'MissionRecord',
           'MissionTrace',
           'Reassignment',
           'TargetCheck',
           'sense_proximity',
           'update_target_estimate',
           'plan_reassignment',
           'reassign_local_states',
           'check_target_reached',
           'run_mission']

RECOVERIES = ('procrustes', 'paper')

# slack on the distance comparison that decides whether a unitary step is kept
REJECT_TOL = 1e-12

# residual below which a reassignment counts as exact
EXACT_TOL = 1e-12


class ReassignmentError(ValueError):
    pass


@dataclass(frozen=True)
class SensorModel:
    """Proximity sensors: exact probability of sitting on the target plus clamped Gaussian noise."""
    true_target: tuple
    noise_std: float = 0.0
    rng_seed: int = constants.SEED

    def __post_init__(self):
        bits = tuple(int(b) for b in self.true_target)
        if not bits or any(b not in (0, 1) for b in bits):
            raise ValueError(f"target bits must be a non-empty list of 0/1, got {self.true_target!r}")
        if not self.noise_std >= 0:
            raise ValueError(f"noise_std must be non-negative, got {self.noise_std}")
        object.__setattr__(self, 'true_target', bits)

    def rng(self):
        return np.random.default_rng(self.rng_seed)


@dataclass(frozen=True, eq=False)
class TargetEstimate:
    """Estimated target density; confidence is its largest eigenvalue."""
    rho: DensityMatrix
    confidence: float = None

    def __post_init__(self):
        if self.confidence is None:
            eig = np.linalg.eigvalsh(self.rho.matrix)
            object.__setattr__(self, 'confidence', float(np.clip(eig[-1], 0.0, 1.0)))

    def dominant(self):
        """Eigenvector of the largest eigenvalue, largest entry made real positive.

        A degenerate top eigenspace is resolved toward the highest-index
        basis state with the largest weight in it, so the choice does not
        depend on the eigensolver.
        """
        tol = constants.default_tol()
        eig, vec = np.linalg.eigh(self.rho.matrix)
        top = vec[:, eig >= eig[-1] - tol]
        if top.shape[1] == 1:
            v = top[:, 0]
        else:
            p = top @ top.conj().T
            weight = np.real(np.diag(p))
            j = int(np.flatnonzero(weight >= weight.max() - tol)[-1])
            v = p[:, j] / np.linalg.norm(p[:, j])
        k = int(np.argmax(np.abs(v)))
        return Ket(v * (abs(v[k]) / v[k]))


@dataclass(frozen=True, eq=False)
class MissionConfig:
    swarm: object
    sensor: SensorModel
    delta: float = constants.DELTA
    max_iterations: int = constants.MAX_ITERATIONS
    eta: float = constants.ETA
    recovery: str = 'procrustes'
    application: str = 'conjugate'
    relaxation_rate: float = 0.0
    relaxation_time: float = constants.RELAXATION_TIME
    dt: float = constants.DT

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if not 0 < self.eta <= 1:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if self.recovery not in RECOVERIES:
            raise ValueError(f"unknown recovery {self.recovery!r}, expected one of {RECOVERIES}")
        if self.application not in APPLICATIONS:
            raise ValueError(f"unknown application {self.application!r}, expected one of {APPLICATIONS}")
        if not self.relaxation_rate >= 0:
            raise ValueError(f"relaxation_rate must be non-negative, got {self.relaxation_rate}")
        if not self.relaxation_time >= 0:
            raise ValueError(f"relaxation_time must be non-negative, got {self.relaxation_time}")
        if self.swarm.mode is not SwarmMode.MIXED:
            raise ValueError("missions run on mixed-mode swarms")
        not_pure = [r.id for r in self.swarm.robots if not r.is_pure]
        if not_pure:
            raise ValueError(f"robots {not_pure} are mixed states; missions need ket robots")
        n_pos = len(position_qubits(self.swarm.roles))
        if n_pos != len(self.sensor.true_target):
            raise ValueError(f"{len(self.sensor.true_target)} target bits for {n_pos} position qubits")


@dataclass(frozen=True, eq=False)
class MissionRecord:
    iteration: int
    rho_swarm: DensityMatrix
    rho_estimate: DensityMatrix
    operator: EvolutionOperator
    operator_rejected: bool
    operator_rotated: bool
    distance_to_estimate: float
    distance_to_target: float
    displacements: tuple
    reassignment_residual: float
    converged: bool

    def to_dict(self):
        return OrderedDict([
            ('iteration', self.iteration),
            ('converged', self.converged),
            ('distance_to_target', self.distance_to_target),
            ('distance_to_estimate', self.distance_to_estimate),
            ('displacements', list(self.displacements)),
            ('reassignment_residual', self.reassignment_residual),
            ('operator_rejected', self.operator_rejected),
            ('operator_rotated', self.operator_rotated),
            ('unitarity_defect', self.operator.unitarity_defect),
            ('rho_swarm', utils.encode_matrix(self.rho_swarm.matrix)),
            ('rho_estimate', utils.encode_matrix(self.rho_estimate.matrix)),
            ('operator', utils.encode_matrix(self.operator.matrix)),
        ])


@dataclass(frozen=True, eq=False)
class MissionTrace:
    records: tuple
    final_swarm: object = None

    @property
    def converged(self):
        return bool(self.records) and self.records[-1].converged

    @property
    def iterations(self):
        return len(self.records)

    @property
    def final_distance(self):
        return self.records[-1].distance_to_target if self.records else None

    def to_records(self):
        return [r.to_dict() for r in self.records]

    def summary(self):
        return OrderedDict([('converged', self.converged),
                            ('iterations', self.iterations),
                            ('final_distance', self.final_distance)])


class Reassignment(NamedTuple):
    swarm: object
    residual: float
    displacements: tuple
    feasible: bool


class TargetCheck(NamedTuple):
    reached: bool
    distance: float


def _position_index(bits):
    return QubitRegister(len(bits)).index(bits)


def sense_proximity(model, r, rng=None):
    """Reading in [0, 1]: probability that the robot's position bits equal the target, plus noise."""
    dist = position_distribution(robot_density(r), r.roles)
    if dist.size != 2 ** len(model.true_target):
        raise ValueError(f"robot {r.id} has {dist.size} position outcomes for {len(model.true_target)} target bits")
    value = dist[_position_index(model.true_target)]
    if model.noise_std > 0:
        rng = model.rng() if rng is None else rng
        value = value + rng.normal(0.0, model.noise_std)
    return float(np.clip(value, 0.0, 1.0))


def sense_swarm(model, s, rng):
    return [(i, sense_proximity(model, r, rng)) for i, r in enumerate(s.robots)]


def _outcome_projector(roles, outcome):
    n_pos = len(position_qubits(roles))
    return ideal_target_swarm(roles, QubitRegister(n_pos).bits(outcome)).matrix


def update_target_estimate(est, readings, eta, s):
    """Convex update ``(1 - eta) est + eta innovation``.

    A robot reading proximity ``p`` puts weight ``p`` on its most likely
    position and spreads ``1 - p`` over the other positions; robots are mixed
    with the swarm weights. Positions are projectors with success = 1.
    """
    readings = list(readings)
    if not readings:
        raise ValueError("no sensor readings")
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    if eta == 0:
        return est
    innovation = np.zeros_like(est.rho.matrix)
    total = 0.0
    for i, p in readings:
        if not 0 <= p <= 1:
            raise ValueError(f"proximity of robot {i} must be in [0, 1], got {p}")
        r = s.robots[i]
        dist = position_distribution(robot_density(r), r.roles)
        k = dist.size
        best = int(np.argmax(dist))
        w = float(s.weights[i]) if len(readings) > 1 else 1.0
        for outcome in range(k):
            q = p if outcome == best else (1.0 - p) / (k - 1)
            if q > 0:
                innovation = innovation + w * q * _outcome_projector(r.roles, outcome)
        total += w
    if total == 0:
        raise ValueError("readings come only from zero-weight robots")
    innovation = innovation / total
    return TargetEstimate(DensityMatrix((1.0 - eta) * est.rho.matrix + eta * innovation))


def _mixture(kets, weights):
    return (kets.T * weights) @ kets.conj()


def _residual(kets, weights, target):
    return float(np.linalg.norm(_mixture(kets, weights) - target, 'fro'))


def _align(new, old):
    """Rotate the global phase of each row of *new* onto the matching row of *old*."""
    out = np.array(new)
    for i in range(new.shape[0]):
        ov = np.vdot(new[i], old[i])
        if abs(ov) > 0:
            out[i] = new[i] * (ov / abs(ov))
    return out


def _displacements(new, old):
    return np.sum(np.abs(_align(new, old) - old) ** 2, axis=1)


def _spectral_kets(target, n):
    """Equal-weight decomposition of *target* into *n* pure states.

    Exact when the rank is at most *n*; otherwise the leading *n*
    eigencomponents are kept.
    """
    eig, vec = np.linalg.eigh(target)
    order = np.argsort(eig)[::-1][:n]
    lam = np.clip(eig[order], 0.0, None)
    lam = lam / np.sum(lam)
    vec = vec[:, order]
    j = np.arange(n)[:, None]
    k = np.arange(lam.size)[None, :]
    phases = np.exp(2j * np.pi * j * k / n)
    return (phases * np.sqrt(lam)[None, :]) @ vec.T


def _assign(candidate, old):
    """Match candidate kets to robots by minimal total displacement."""
    n = old.shape[0]
    cost = np.array([[2.0 - 2.0 * abs(np.vdot(candidate[j], old[i])) for j in range(n)] for i in range(n)])
    rows, cols = linear_sum_assignment(cost)
    return candidate[cols[np.argsort(rows)]]


def _least_squares_kets(target, old, weights, max_steps):
    n, d = old.shape

    def unpack(x):
        z = (x[:n * d] + 1j * x[n * d:]).reshape(n, d)
        norms = np.linalg.norm(z, axis=1, keepdims=True)
        return z / np.where(norms == 0, 1.0, norms)

    def fun(x):
        diff = _mixture(unpack(x), weights) - target
        return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

    x0 = np.concatenate([old.real.ravel(), old.imag.ravel()])
    sol = least_squares(fun, x0, jac='3-point', method='trf', max_nfev=max_steps,
                        xtol=1e-12, ftol=1e-12, gtol=1e-12)
    return unpack(sol.x)


def plan_reassignment(rho_new, s, tol=constants.REASSIGN_TOL, max_steps=constants.REASSIGN_MAX_STEPS,
                      candidates=(), strict=False):
    """Smallest-displacement robot kets whose mixture reproduces *rho_new*.

    Tried in turn: the current kets, any *candidates* (lists of kets), the
    equal-weight spectral decomposition (equal weights only) and a local
    least-squares fit started from the current kets. Among the candidates
    within *tol* the one with the smallest weighted displacement wins, except
    that an exact candidate is kept over an approximate one that is shorter
    by less than ``sqrt(tol)``: near a pure target a residual of *tol* on the
    density matrix still leaves ket errors of order ``sqrt(tol)``.
    """
    if s.mode is not SwarmMode.MIXED:
        raise ValueError("reassignment needs a mixed-mode swarm")
    if any(not r.is_pure for r in s.robots):
        raise ValueError("reassignment needs ket robots")
    if rho_new.dim != s.robots[0].dim:
        raise ValueError(f"density dimension {rho_new.dim} does not match robot dimension {s.robots[0].dim}")

    weights = np.asarray(s.weights)
    old = np.array([r.ket.amplitudes for r in s.robots])
    target = rho_new.matrix
    n = old.shape[0]

    current = _residual(old, weights, target)
    if current <= tol:
        return Reassignment(s, current, tuple([0.0] * n), True)

    options = [np.array(c, dtype=np.complex128) for c in candidates]
    if np.allclose(weights, 1.0 / n):
        options.append(_assign(_spectral_kets(target, n), old))
    options.append(_least_squares_kets(target, old, weights, max_steps))

    scored = []
    for kets in options:
        kets = _align(kets / np.linalg.norm(kets, axis=1, keepdims=True), old)
        res = _residual(kets, weights, target)
        disp = _displacements(kets, old)
        scored.append((res, float(np.dot(weights, disp)), kets, disp))

    feasible = [c for c in scored if c[0] <= tol]
    if feasible:
        res, total, kets, disp = min(feasible, key=lambda c: c[1])
        exact = [c for c in feasible if c[0] <= EXACT_TOL]
        if exact and res > EXACT_TOL:
            best_exact = min(exact, key=lambda c: c[1])
            if best_exact[1] <= total + np.sqrt(tol):
                res, _, kets, disp = best_exact
    else:
        res, _, kets, disp = min(scored, key=lambda c: c[0])
        msg = f"no reassignment within {tol:g}, best residual {res:.3g}"
        if strict:
            raise ReassignmentError(msg)
        log.warning(msg)

    robots = [RobotState(r.id, r.roles, ket=Ket.normalized(k)) for r, k in zip(s.robots, kets)]
    return Reassignment(s.with_robots(robots), res, tuple(float(d) for d in disp), res <= tol)


def reassign_local_states(rho_new, s, tol=constants.REASSIGN_TOL, max_steps=constants.REASSIGN_MAX_STEPS,
                          candidates=(), strict=False):
    """Robot states moved with the smallest displacements so that they reproduce *rho_new*."""
    return plan_reassignment(rho_new, s, tol, max_steps, candidates, strict).swarm


def check_target_reached(rho_s, rho_t, delta):
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    distance = trace_distance(rho_s, rho_t)
    return TargetCheck(distance < delta, distance)


def _dominant_ket(rho):
    _, vec = np.linalg.eigh(rho.matrix)
    return vec[:, -1]


def _recover(cfg, rho, est):
    if cfg.recovery == 'paper':
        return recover_evolution_paper(rho, est.rho)
    return recover_evolution_procrustes(rho, est.rho)


def run_mission(cfg, progress=False):
    """Run the target-reaching loop; non-convergence is reported in the trace, not raised."""
    s = cfg.swarm
    dim = s.robots[0].dim
    rho_target = ideal_target_swarm(s.roles, cfg.sensor.true_target)
    rng = cfg.sensor.rng()
    zero_h = Hamiltonian(np.zeros((dim, dim)))

    prior = TargetEstimate(DensityMatrix(np.eye(dim) / dim))
    est = update_target_estimate(prior, sense_swarm(cfg.sensor, s, rng), 1.0, s)

    records = []
    for iteration in tqdm(range(1, cfg.max_iterations + 1), desc='mission', disable=not progress):
        rho = swarm_density(s)
        e = est.dominant()
        t_e = DensityMatrix(outer(e, e))

        before = trace_distance(rho, t_e)
        op = _recover(cfg, rho, est)
        evolved = evolve_unitary(rho, op, cfg.application)
        if cfg.application == 'left':
            evolved = project_to_density(evolved.matrix)

        rotated = False
        if (cfg.application == 'conjugate' and before > REJECT_TOL
                and trace_distance(evolved, t_e) > before - REJECT_TOL):
            # no overlap with the estimate to recover from: turn the dominant state onto it
            op = rotation_onto(_dominant_ket(rho), e)
            evolved = evolve_unitary(rho, op)
            rotated = True
            log.debug(f"iteration {iteration}: recovered step made no progress, rotated the dominant state")

        rejected = trace_distance(evolved, t_e) > before + REJECT_TOL
        if rejected:
            log.debug(f"iteration {iteration}: step moves away from the estimate, kept the swarm in place")
            op = EvolutionOperator(np.eye(dim))
            evolved = rho

        candidates = []
        if cfg.application == 'conjugate' and not rejected:
            candidates.append([op.matrix @ r.ket.amplitudes for r in s.robots])
        if cfg.relaxation_rate > 0:
            evolved = integrate_lindblad(evolved, zero_h, target_dissipators(e, cfg.relaxation_rate),
                                         t=cfg.relaxation_time, dt=cfg.dt, convention='standard')

        plan = plan_reassignment(evolved, s, candidates=candidates)
        s = plan.swarm

        est = update_target_estimate(est, sense_swarm(cfg.sensor, s, rng), cfg.eta, s)
        rho_now = swarm_density(s)
        check = check_target_reached(rho_now, rho_target, cfg.delta)
        records.append(MissionRecord(
            iteration=iteration,
            rho_swarm=rho_now,
            rho_estimate=est.rho,
            operator=op,
            operator_rejected=bool(rejected),
            operator_rotated=rotated and not rejected,
            distance_to_estimate=trace_distance(rho_now, est.rho),
            distance_to_target=check.distance,
            displacements=plan.displacements,
            reassignment_residual=plan.residual,
            converged=check.reached))
        log.debug(f"iteration {iteration}: distance to target {check.distance:.6g}, "
                  f"reassignment residual {plan.residual:.3g}")
        if check.reached:
            break

    trace = MissionTrace(tuple(records), s)
    if trace.converged:
        log.info(f"target reached after {trace.iterations} iterations (distance {trace.final_distance:.6g})")
    else:
        log.warning(f"target not reached after {trace.iterations} iterations (distance {trace.final_distance:.6g})")
    return trace
