# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Scenario files (JSON, schema version 1).

A scenario lists the robots of a swarm with their qubit roles and states,
the optional swarm weights and composition mode, and two optional blocks:
``dynamics`` (Hamiltonian energy gap, jump operators, recovery and
application variants) and ``mission`` (target bits and loop parameters).
Complex numbers are ``[re, im]`` pairs; matrices are ``{dim, entries}``.

Example::

    {
      "schema_version": 1,
      "robots": [
        {"id": "R1", "roles": ["PositionX", "Success"],
         "amplitudes": [[0.7071067811865476, 0], [0, 0], [0.7071067811865476, 0], [0, 0]]}
      ],
      "mission": {"target_bits": [1]}
    }
"""

import json
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from qswarm import log
from qswarm import constants
from qswarm import utils
from qswarm.qcore import DensityMatrix, Ket, KetError, DensityMatrixError
from qswarm.swarm import QubitRole, SwarmMode, SwarmState, RobotState
from qswarm.dynamics import (APPLICATIONS, CONVENTIONS, Dissipator, hamiltonian_sigma_z)
from qswarm.mission import RECOVERIES, MissionConfig, SensorModel

__all__ = ['ScenarioError',
           'RobotSpec',
           'DynamicsSpec',
           'MissionSpec',
           'ScenarioFile',
           'parse_scenario',
           'serialize_scenario',
           'load_scenario']

ROBOT_KEYS = ('id', 'roles', 'amplitudes', 'density')
TOP_KEYS = ('schema_version', 'robots', 'weights', 'mode', 'dynamics', 'mission', 'description')


class ScenarioError(ValueError):
    """Schema violation at *path* (for example ``robots[1].amplitudes``)."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class RobotSpec:
    id: str
    roles: tuple
    amplitudes: tuple = None
    density: tuple = None

    def to_robot(self):
        roles = tuple(QubitRole(r) for r in self.roles)
        if self.amplitudes is not None:
            return RobotState(self.id, roles, ket=Ket(np.array(self.amplitudes)))
        return RobotState(self.id, roles, density=DensityMatrix(np.array(self.density)))


@dataclass(frozen=True)
class DynamicsSpec:
    delta_e: float = 1.0
    dissipators: tuple = ()
    recovery: str = 'procrustes'
    application: str = 'conjugate'
    convention: str = 'printed'
    hamiltonian_qubit: int = 0


@dataclass(frozen=True)
class MissionSpec:
    target_bits: tuple
    delta: float = constants.DELTA
    max_iterations: int = constants.MAX_ITERATIONS
    eta: float = constants.ETA
    noise_std: float = 0.0
    seed: int = constants.SEED
    relaxation_rate: float = 0.0
    relaxation_time: float = constants.RELAXATION_TIME
    dt: float = constants.DT


@dataclass(frozen=True)
class ScenarioFile:
    robots: tuple
    weights: tuple = None
    mode: str = SwarmMode.MIXED.value
    dynamics: DynamicsSpec = None
    mission: MissionSpec = None
    description: str = None
    schema_version: int = constants.SCHEMA_VERSION

    @property
    def n_qubits(self):
        return len(self.robots[0].roles)

    def to_swarm(self):
        return SwarmState(tuple(r.to_robot() for r in self.robots), self.weights, SwarmMode(self.mode))

    def hamiltonian(self):
        dyn = self.dynamics or DynamicsSpec()
        return hamiltonian_sigma_z(dyn.delta_e, n_qubits=self.n_qubits, qubit=dyn.hamiltonian_qubit)

    def dissipators(self):
        dyn = self.dynamics or DynamicsSpec()
        return [Dissipator(np.array(m), g) for m, g in dyn.dissipators]

    def mission_config(self, seed=None):
        if self.mission is None:
            raise ScenarioError('mission', "scenario has no mission block")
        m = self.mission
        dyn = self.dynamics or DynamicsSpec()
        sensor = SensorModel(m.target_bits, m.noise_std, m.seed if seed is None else seed)
        return MissionConfig(self.to_swarm(), sensor, delta=m.delta, max_iterations=m.max_iterations, eta=m.eta,
                             recovery=dyn.recovery, application=dyn.application,
                             relaxation_rate=m.relaxation_rate, relaxation_time=m.relaxation_time, dt=m.dt)


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _number(obj, key, path, default, cast=float, check=None, message=''):
    if key not in obj:
        return default
    v = obj[key]
    if not _is_number(v) or (cast is int and int(v) != v):
        raise ScenarioError(f"{path}.{key}", f"expected {'an integer' if cast is int else 'a number'}, got {v!r}")
    v = cast(v)
    if check is not None and not check(v):
        raise ScenarioError(f"{path}.{key}", f"{message}, got {v}")
    return v


def _choice(obj, key, path, default, choices):
    v = obj.get(key, default)
    if v not in choices:
        raise ScenarioError(f"{path}.{key}", f"expected one of {list(choices)}, got {v!r}")
    return v


def _unknown_keys(obj, allowed, path):
    extra = [k for k in obj if k not in allowed]
    if extra:
        raise ScenarioError(path, f"unknown fields {extra}")


def _matrix(obj, path):
    try:
        m = utils.decode_matrix(obj, path)
    except ValueError as e:
        raise ScenarioError(path, str(e).split(': ', 1)[-1])
    return tuple(tuple(complex(z) for z in row) for row in m)


def _parse_robot(obj, path):
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    _unknown_keys(obj, ROBOT_KEYS, path)
    if 'id' not in obj or not isinstance(obj['id'], str) or not obj['id']:
        raise ScenarioError(f"{path}.id", "expected a non-empty string")
    roles = obj.get('roles')
    if not isinstance(roles, list) or not roles:
        raise ScenarioError(f"{path}.roles", "expected a non-empty list of roles")
    names = [r.value for r in QubitRole]
    for i, r in enumerate(roles):
        if r not in names:
            raise ScenarioError(f"{path}.roles[{i}]", f"unknown role {r!r}, expected one of {names}")
    if len(set(roles)) != len(roles):
        raise ScenarioError(f"{path}.roles", "roles must be unique")
    dim = 2 ** len(roles)

    if ('amplitudes' in obj) == ('density' in obj):
        raise ScenarioError(path, "exactly one of amplitudes or density must be given")
    if 'amplitudes' in obj:
        amps = obj['amplitudes']
        if not isinstance(amps, list):
            raise ScenarioError(f"{path}.amplitudes", "expected a list of [re, im] pairs")
        if len(amps) != dim:
            raise ScenarioError(f"{path}.amplitudes", f"{len(amps)} amplitudes for {len(roles)} qubits (expected {dim})")
        try:
            values = [utils.decode_complex(a, f"{path}.amplitudes[{i}]") for i, a in enumerate(amps)]
        except ValueError as e:
            raise ScenarioError(f"{path}.amplitudes", str(e))
        try:
            Ket(np.array(values))
        except KetError as e:
            raise ScenarioError(f"{path}.amplitudes", str(e))
        return RobotSpec(obj['id'], tuple(roles), amplitudes=tuple(values))

    density = _matrix(obj['density'], f"{path}.density")
    if len(density) != dim:
        raise ScenarioError(f"{path}.density", f"dimension {len(density)} does not match {len(roles)} qubits")
    try:
        DensityMatrix(np.array(density))
    except DensityMatrixError as e:
        raise ScenarioError(f"{path}.density", str(e))
    return RobotSpec(obj['id'], tuple(roles), density=density)


def _parse_dynamics(obj, n_qubits):
    path = 'dynamics'
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    _unknown_keys(obj, [f.name for f in DynamicsSpec.__dataclass_fields__.values()], path)
    d = DynamicsSpec()
    dissipators = obj.get('dissipators', [])
    if not isinstance(dissipators, list):
        raise ScenarioError(f"{path}.dissipators", "expected a list")
    parsed = []
    for i, entry in enumerate(dissipators):
        p = f"{path}.dissipators[{i}]"
        if not isinstance(entry, dict) or 'l_matrix' not in entry:
            raise ScenarioError(p, "expected an object with l_matrix and gamma")
        _unknown_keys(entry, ('l_matrix', 'gamma'), p)
        m = _matrix(entry['l_matrix'], f"{p}.l_matrix")
        if len(m) != 2 ** n_qubits:
            raise ScenarioError(f"{p}.l_matrix", f"dimension {len(m)} does not match the robot dimension {2 ** n_qubits}")
        gamma = _number(entry, 'gamma', p, 1.0, check=lambda v: v >= 0, message="rate must be non-negative")
        parsed.append((m, gamma))
    qubit = _number(obj, 'hamiltonian_qubit', path, d.hamiltonian_qubit, cast=int,
                    check=lambda v: 0 <= v < n_qubits, message=f"must index one of {n_qubits} qubits")
    return DynamicsSpec(
        delta_e=_number(obj, 'delta_e', path, d.delta_e, check=np.isfinite, message="must be finite"),
        dissipators=tuple(parsed),
        recovery=_choice(obj, 'recovery', path, d.recovery, RECOVERIES),
        application=_choice(obj, 'application', path, d.application, APPLICATIONS),
        convention=_choice(obj, 'convention', path, d.convention, CONVENTIONS),
        hamiltonian_qubit=qubit)


def _parse_mission(obj):
    path = 'mission'
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    _unknown_keys(obj, list(MissionSpec.__dataclass_fields__), path)
    bits = obj.get('target_bits')
    if not isinstance(bits, list) or not bits or any(b not in (0, 1) or isinstance(b, bool) for b in bits):
        raise ScenarioError(f"{path}.target_bits", f"expected a non-empty list of 0/1, got {bits!r}")
    return MissionSpec(
        target_bits=tuple(bits),
        delta=_number(obj, 'delta', path, constants.DELTA, check=lambda v: v > 0, message="must be positive"),
        max_iterations=_number(obj, 'max_iterations', path, constants.MAX_ITERATIONS, cast=int,
                               check=lambda v: v >= 1, message="must be at least 1"),
        eta=_number(obj, 'eta', path, constants.ETA, check=lambda v: 0 < v <= 1, message="must be in (0, 1]"),
        noise_std=_number(obj, 'noise_std', path, 0.0, check=lambda v: v >= 0, message="must be non-negative"),
        seed=_number(obj, 'seed', path, constants.SEED, cast=int, check=lambda v: v >= 0, message="must be non-negative"),
        relaxation_rate=_number(obj, 'relaxation_rate', path, 0.0, check=lambda v: v >= 0,
                                message="must be non-negative"),
        relaxation_time=_number(obj, 'relaxation_time', path, constants.RELAXATION_TIME, check=lambda v: v >= 0,
                                message="must be non-negative"),
        dt=_number(obj, 'dt', path, constants.DT, check=lambda v: v > 0, message="must be positive"))


def parse_scenario(text):
    """Parse and validate a scenario from UTF-8 JSON (``bytes`` or ``str``).

    Raises:
        ScenarioError: malformed JSON or a schema violation, with the field path.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ScenarioError('$', f"not UTF-8: {e}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError('$', f"malformed JSON: {e}")
    if not isinstance(obj, dict):
        raise ScenarioError('$', "expected a JSON object")
    _unknown_keys(obj, TOP_KEYS, '$')

    version = obj.get('schema_version')
    if version != constants.SCHEMA_VERSION or isinstance(version, bool):
        raise ScenarioError('schema_version', f"expected {constants.SCHEMA_VERSION}, got {version!r}")

    robots = obj.get('robots')
    if not isinstance(robots, list) or not robots:
        raise ScenarioError('robots', "expected a non-empty list")
    specs = tuple(_parse_robot(r, f"robots[{i}]") for i, r in enumerate(robots))
    ids = [r.id for r in specs]
    if len(set(ids)) != len(ids):
        raise ScenarioError('robots', f"robot ids must be unique, got {ids}")

    mode = _choice(obj, 'mode', '$', SwarmMode.MIXED.value, [m.value for m in SwarmMode])
    if mode == SwarmMode.MIXED.value:
        for i, r in enumerate(specs[1:], start=1):
            if r.roles != specs[0].roles:
                raise ScenarioError(f"robots[{i}].roles", f"mixed swarm robots must share roles {list(specs[0].roles)}")

    weights = None
    if obj.get('weights') is not None:
        w = obj['weights']
        if not isinstance(w, list) or not all(_is_number(v) for v in w):
            raise ScenarioError('weights', "expected a list of numbers")
        if len(w) != len(specs):
            raise ScenarioError('weights', f"{len(w)} weights for {len(specs)} robots")
        if not all(np.isfinite(v) for v in w):
            raise ScenarioError('weights', "weights must be finite")
        if any(v < 0 for v in w):
            raise ScenarioError('weights', "weights must be non-negative")
        total = float(sum(w))
        if abs(total - 1.0) > constants.WEIGHT_TOL:
            raise ScenarioError('weights', f"weights sum {total:.6g} != 1")
        weights = tuple(float(v) for v in w)

    dynamics = _parse_dynamics(obj['dynamics'], len(specs[0].roles)) if obj.get('dynamics') is not None else None
    mission = _parse_mission(obj['mission']) if obj.get('mission') is not None else None
    description = obj.get('description')
    if description is not None and not isinstance(description, str):
        raise ScenarioError('description', "expected a string")

    scenario = ScenarioFile(specs, weights, mode, dynamics, mission, description)
    if mission is not None:
        n_pos = sum(r in ('PositionX', 'PositionY') for r in specs[0].roles)
        if len(mission.target_bits) != n_pos:
            raise ScenarioError('mission.target_bits', f"{len(mission.target_bits)} bits for {n_pos} position qubits")
    log.debug(f"parsed scenario with {len(specs)} robots in {mode} mode")
    return scenario


def _scenario_dict(s):
    out = OrderedDict()
    out['schema_version'] = s.schema_version
    if s.description is not None:
        out['description'] = s.description
    out['mode'] = s.mode
    robots = []
    for r in s.robots:
        entry = OrderedDict([('id', r.id), ('roles', list(r.roles))])
        if r.amplitudes is not None:
            entry['amplitudes'] = [utils.encode_complex(z) for z in r.amplitudes]
        else:
            entry['density'] = utils.encode_matrix(np.array(r.density))
        robots.append(entry)
    out['robots'] = robots
    if s.weights is not None:
        out['weights'] = list(s.weights)
    if s.dynamics is not None:
        d = s.dynamics
        out['dynamics'] = OrderedDict([
            ('delta_e', d.delta_e),
            ('dissipators', [OrderedDict([('l_matrix', utils.encode_matrix(np.array(m))), ('gamma', g)])
                             for m, g in d.dissipators]),
            ('recovery', d.recovery),
            ('application', d.application),
            ('convention', d.convention),
            ('hamiltonian_qubit', d.hamiltonian_qubit)])
    if s.mission is not None:
        m = s.mission
        out['mission'] = OrderedDict([(name, getattr(m, name)) for name in MissionSpec.__dataclass_fields__])
        out['mission']['target_bits'] = list(m.target_bits)
    return out


def serialize_scenario(s):
    """JSON text of *s* with every default written out."""
    return utils.dumps(_scenario_dict(s)) + '\n'


def load_scenario(fname):
    """Read and parse a scenario file; I/O errors propagate as ``OSError``."""
    with open(fname, 'rb') as f:
        data = f.read()
    log.info(f"loading scenario {fname}")
    return parse_scenario(data)
