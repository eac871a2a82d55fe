# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Command implementations. Each ``cmd_*`` takes the parsed argument namespace,
writes its primary output to stdout or ``--out`` and returns nothing;
failures are raised and mapped to exit codes by :func:`qswarm.__main__.main`.
"""

import os
from collections import OrderedDict

import numpy as np
import pandas as pd

from qswarm import log
from qswarm import utils
from qswarm import paper_check
from qswarm.qcore import purity, von_neumann_entropy, trace_distance
from qswarm.swarm import (QubitRole, SwarmMode, robot_density, swarm_density, reduced_position, reduced_swarm,
                          barycenter_probability, position_qubits, success_qubits)
from qswarm.dynamics import (evolve_unitary, unitary_from_hamiltonian, integrate_lindblad,
                             recover_evolution_paper, recover_evolution_procrustes, residuals)
from qswarm.mission import run_mission
from qswarm.scenario import load_scenario

__all__ = ['cmd_density',
           'cmd_evolve',
           'cmd_propagate',
           'cmd_mission',
           'cmd_surface',
           'cmd_paper_check',
           'density_report',
           'surface_grid']


def _require(args, name):
    value = getattr(args, name, None)
    if value is None:
        raise ValueError(f"--{name} is required")
    return value


def density_report(s):
    """Swarm density, purity, entropy, barycenter and reduced position matrices of a swarm."""
    rho = swarm_density(s)
    report = OrderedDict()
    report['mode'] = s.mode.value
    report['n_robots'] = len(s.robots)
    report['swarm_density'] = rho.matrix
    report['purity'] = purity(rho)
    report['entropy'] = von_neumann_entropy(rho)

    barycenter = OrderedDict()
    for role in (QubitRole.POSITION_X, QubitRole.POSITION_Y):
        if all(role in r.roles for r in s.robots):
            barycenter[role.value] = barycenter_probability(s, 1, role)
    report['barycenter'] = barycenter

    reduced = OrderedDict()
    for r in s.robots:
        if position_qubits(r.roles) and success_qubits(r.roles):
            reduced[r.id] = reduced_position(robot_density(r), r.roles).matrix
    report['reduced_positions'] = reduced
    if s.mode is SwarmMode.MIXED and reduced:
        report['reduced_swarm'] = reduced_swarm(s).matrix
    return report


def _encode(report):
    out = OrderedDict()
    for k, v in report.items():
        if isinstance(v, np.ndarray):
            out[k] = utils.encode_matrix(v)
        elif isinstance(v, dict):
            out[k] = _encode(v)
        else:
            out[k] = v
    return out


def cmd_density(args):
    s = load_scenario(_require(args, 'scenario')).to_swarm()
    report = density_report(s)
    log.info(f"swarm of {len(s.robots)} robots, purity {report['purity']:.6g}")
    if args.format == 'json':
        utils.write_json(_encode(report), args.out)
        return
    out_dir = args.out if args.out is not None else '.'
    os.makedirs(out_dir, exist_ok=True)
    utils.write_matrix_csv(os.path.join(out_dir, 'swarm_density.csv'), report['swarm_density'])
    for rid, m in report['reduced_positions'].items():
        utils.write_matrix_csv(os.path.join(out_dir, f"reduced_{rid}.csv"), m)
    if 'reduced_swarm' in report:
        utils.write_matrix_csv(os.path.join(out_dir, 'reduced_swarm.csv'), report['reduced_swarm'])


def _operator_report(op, rho0, rho1):
    res = residuals(op, rho0, rho1)
    return OrderedDict([('operator', utils.encode_matrix(op.matrix)),
                        ('unitarity_defect', op.unitarity_defect),
                        ('is_unitary', op.is_unitary),
                        ('residual_left', res.left),
                        ('residual_conjugate', res.conjugate)])


def cmd_evolve(args):
    s0 = load_scenario(_require(args, 'scenario0')).to_swarm()
    s1 = load_scenario(_require(args, 'scenario1')).to_swarm()
    rho0, rho1 = swarm_density(s0), swarm_density(s1)
    if rho0.dim != rho1.dim:
        raise ValueError(f"swarm dimensions differ: {rho0.dim} vs {rho1.dim}")
    report = OrderedDict([('dim', rho0.dim),
                          ('paper', _operator_report(recover_evolution_paper(rho0, rho1), rho0, rho1)),
                          ('procrustes', _operator_report(recover_evolution_procrustes(rho0, rho1), rho0, rho1))])
    utils.write_json(report, args.out)


def cmd_propagate(args):
    scenario = load_scenario(_require(args, 'scenario'))
    s = scenario.to_swarm()
    if s.mode is not SwarmMode.MIXED:
        raise ValueError("propagate needs a mixed-mode swarm")
    if args.time < 0:
        raise ValueError(f"--time must be non-negative, got {args.time}")
    rho = swarm_density(s)
    h = scenario.hamiltonian()
    dissipators = scenario.dissipators()
    report = OrderedDict([('time', args.time), ('delta_e', h.delta_e)])
    if dissipators:
        convention = scenario.dynamics.convention
        rho_t = integrate_lindblad(rho, h, dissipators, t=args.time, dt=args.dt, convention=convention)
        report['propagator'] = f"lindblad ({convention})"
    else:
        u = unitary_from_hamiltonian(h, args.time)
        rho_t = evolve_unitary(rho, u)
        report['propagator'] = 'unitary'
        report['unitary'] = utils.encode_matrix(u.matrix)
    report['rho'] = utils.encode_matrix(rho_t.matrix)
    report['purity'] = purity(rho_t)
    report['trace_distance_to_initial'] = trace_distance(rho, rho_t)
    utils.write_json(report, args.out)


def cmd_mission(args):
    scenario = load_scenario(_require(args, 'scenario'))
    cfg = scenario.mission_config(seed=args.seed)
    trace = run_mission(cfg, progress=args.progress)
    if args.summary:
        utils.write_json(trace.summary(), args.out)
    else:
        utils.write_json_lines(trace.to_records(), args.out)


def _role_probabilities(r):
    """Joint probabilities over (x, y) basis endpoints; y is omitted without a PositionY qubit."""
    diag = np.real(np.diag(robot_density(r).matrix))
    n = r.n_qubits
    qx = r.roles.index(QubitRole.POSITION_X)
    qy = r.roles.index(QubitRole.POSITION_Y) if QubitRole.POSITION_Y in r.roles else None
    p = np.zeros((2, 2))
    for i, v in enumerate(diag):
        bx = (i >> (n - 1 - qx)) & 1
        by = (i >> (n - 1 - qy)) & 1 if qy is not None else 0
        p[bx, by] += v
    p = np.clip(p, 0.0, None)
    return p if qy is not None else p[:, 0]


def surface_grid(s, resolution):
    """Interpolated position probabilities per robot as a DataFrame.

    Linear in x (bilinear in x and y when every robot has a PositionY
    qubit) between the basis-endpoint probabilities.
    """
    if resolution < 2:
        raise ValueError(f"--resolution must be at least 2, got {resolution}")
    missing = [r.id for r in s.robots if QubitRole.POSITION_X not in r.roles]
    if missing:
        raise ValueError(f"robots {missing} have no PositionX qubit")
    two_d = all(QubitRole.POSITION_Y in r.roles for r in s.robots)
    axis = np.linspace(0.0, 1.0, resolution)
    rows = []
    for r in s.robots:
        p = _role_probabilities(r)
        if two_d:
            for x in axis:
                for y in axis:
                    v = ((1 - x) * (1 - y) * p[0, 0] + (1 - x) * y * p[0, 1]
                         + x * (1 - y) * p[1, 0] + x * y * p[1, 1])
                    rows.append((x, y, r.id, v))
        else:
            p = p if p.ndim == 1 else p.sum(axis=1)
            for x in axis:
                rows.append((x, r.id, (1 - x) * p[0] + x * p[1]))
    columns = ['x', 'y', 'robot_id', 'amplitude'] if two_d else ['x', 'robot_id', 'amplitude']
    return pd.DataFrame(rows, columns=columns)


def cmd_surface(args):
    s = load_scenario(_require(args, 'scenario')).to_swarm()
    df = surface_grid(s, args.resolution)
    header = ("# amplitude: position probability interpolated between basis endpoints (presentation only); "
              "endpoint values sum to 1 per robot, the grid is not normalized\n")
    text = header + df.to_csv(index=False, float_format='%.17g')
    if args.out is None:
        print(text, end='')
    else:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
        log.info(f"surface written to {args.out}")


def cmd_paper_check(args):
    results = paper_check.run_checks()
    if args.json:
        utils.write_json([r.to_dict() for r in results], args.out)
    elif args.out is None:
        print(paper_check.format_report(results), end='')
    else:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(paper_check.format_report(results))
    paper_check.verify(results, strict=args.strict_paper)
