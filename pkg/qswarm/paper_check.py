# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Ledger of the published worked examples.

Every check recomputes one published number or matrix from its state
definitions and classifies it as ``PASS`` (reproduced within the tolerance)
or ``DIVERGES`` (both values are reported). The expected classification of
each check is stored in ``paper_ledger.yml``; a run whose classifications
differ from the ledger raises :class:`LedgerMismatch`.
"""

import os
from collections import OrderedDict
from typing import NamedTuple

import numpy as np

from qswarm import log
from qswarm import utils
from qswarm.qcore import (DensityMatrix, as_matrix, trace_distance, frobenius_half_sq, purity, reverse_basis)
from qswarm.swarm import (QubitRole, SwarmMode, SwarmState, robot_from_amplitudes, robot_density, swarm_density,
                          reduced_position, reduced_swarm, position_probability, barycenter_probability,
                          barycenter_gap)
from qswarm.dynamics import (Dissipator, hamiltonian_sigma_z, lindblad_terms, stability_indicator,
                             recover_evolution_paper, recover_evolution_procrustes)

__all__ = ['LedgerMismatch',
           'CheckResult',
           'LEDGER_FILE',
           'load_ledger',
           'run_checks',
           'verify']

LEDGER_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'paper_ledger.yml')

PASS = 'PASS'
DIVERGES = 'DIVERGES'

CHECK_TOL = 1e-9

CHECKS = OrderedDict()


class LedgerMismatch(RuntimeError):
    pass


class CheckResult(NamedTuple):
    name: str
    description: str
    status: str
    expected: str
    computed: object
    published: object

    def to_dict(self):
        return OrderedDict([('name', self.name),
                            ('description', self.description),
                            ('status', self.status),
                            ('expected', self.expected),
                            ('computed', _jsonable(self.computed)),
                            ('published', _jsonable(self.published))])


def check(fn):
    CHECKS[fn.__name__] = fn
    return fn


def _jsonable(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, dict):
        return OrderedDict((k, _jsonable(x)) for k, x in v.items())
    a = np.asarray(v)
    if np.iscomplexobj(a):
        if a.ndim == 2:
            return utils.encode_matrix(a)
        if a.ndim == 0:
            return utils.encode_complex(a)
    a = np.real(a)
    return a.tolist() if a.ndim else float(a)


def _close(computed, published):
    c = np.asarray(computed, dtype=np.complex128)
    p = np.asarray(published, dtype=np.complex128)
    return c.shape == p.shape and bool(np.allclose(c, p, rtol=0.0, atol=CHECK_TOL))


def _published_matrix(entry):
    pub = entry['published']
    if isinstance(pub, dict) and 'real' in pub:
        m = np.array(pub['real'], dtype=float) + 1j * np.array(pub['imag'], dtype=float)
    else:
        m = np.array(pub, dtype=np.complex128)
    if entry.get('ordering') == 'reversed':
        m = np.array(reverse_basis(m))
    return m


# worked-example states, canonical basis with the first listed qubit most significant

TOY_ROLES = (QubitRole.POSITION_X, QubitRole.SUCCESS)
LINE_ROLES = (QubitRole.POSITION_X, )
WORKING_ROLES = (QubitRole.POSITION_X, QubitRole.POSITION_Y)


def toy_swarm(mode=SwarmMode.MIXED):
    """Robot half way along x with no success, and a robot on the target with success."""
    h = np.sqrt(0.5)
    r1 = robot_from_amplitudes('R1', TOY_ROLES, [h, 0, h, 0])
    r2 = robot_from_amplitudes('R2', TOY_ROLES, [0, 0, 0, 1])
    return SwarmState((r1, r2), mode=mode)


def case_a_swarms():
    a, b = np.sqrt(0.8), np.sqrt(0.2)
    t0 = SwarmState((robot_from_amplitudes('R1', LINE_ROLES, [1, 0]),
                     robot_from_amplitudes('R2', LINE_ROLES, [a, b])))
    t1 = SwarmState((robot_from_amplitudes('R1', LINE_ROLES, [0, 1]),
                     robot_from_amplitudes('R2', LINE_ROLES, [b, a])))
    return t0, t1


def working_swarms():
    h = np.sqrt(0.5)
    t0 = SwarmState((robot_from_amplitudes('P1', WORKING_ROLES, [h, 0, 0, h]),
                     robot_from_amplitudes('P2', WORKING_ROLES, [1, 0, 0, 0])))
    t1 = SwarmState((robot_from_amplitudes('P1', WORKING_ROLES, [np.sqrt(0.2), 0, 0, np.sqrt(0.8)]),
                     robot_from_amplitudes('P2', WORKING_ROLES, [np.sqrt(0.1), 0, 0, np.sqrt(0.9)])))
    return t0, t1


def _published_reduced_swarm(ledger):
    return _published_matrix(ledger['checks']['reduced_swarm'])


def _generator_setup(ledger):
    h = hamiltonian_sigma_z(float(ledger.get('delta_e', 1.0)))
    jump = Dissipator(np.diag([1.0, 0.0]))
    return h, [jump]


@check
def toy_rho1(ledger):
    return robot_density(toy_swarm().robots[0]).matrix


@check
def toy_rho2(ledger):
    return robot_density(toy_swarm().robots[1]).matrix


@check
def position_probabilities(ledger):
    return [position_probability(r, 1) for r in toy_swarm().robots]


@check
def barycenter(ledger):
    return barycenter_probability(toy_swarm(), 1)


@check
def barycenter_gap_check(ledger):
    return barycenter_gap(toy_swarm(), 1)


@check
def reduced_rho2(ledger):
    r = toy_swarm().robots[1]
    return reduced_position(robot_density(r), r.roles).matrix


@check
def reduced_rho1(ledger):
    r = toy_swarm().robots[0]
    return reduced_position(robot_density(r), r.roles).matrix


@check
def mixed_swarm(ledger):
    return swarm_density(toy_swarm()).matrix


@check
def mixed_trace(ledger):
    return float(np.trace(swarm_density(toy_swarm()).matrix).real)


@check
def mixed_purity(ledger):
    return purity(swarm_density(toy_swarm()))


@check
def reduced_swarm_check(ledger):
    return reduced_swarm(toy_swarm()).matrix


@check
def commutator_term(ledger):
    h, _ = _generator_setup(ledger)
    return lindblad_terms(_published_reduced_swarm(ledger), h).commutator


@check
def dissipator_terms(ledger):
    h, jumps = _generator_setup(ledger)
    terms = lindblad_terms(_published_reduced_swarm(ledger), h, jumps, convention='printed')
    return OrderedDict([('jump', terms.jump),
                        ('left', terms.left_anticommutator),
                        ('right', terms.right_anticommutator)])


@check
def generator_total(ledger):
    h, jumps = _generator_setup(ledger)
    return lindblad_terms(_published_reduced_swarm(ledger), h, jumps, convention='printed').total()


@check
def case_a_t0(ledger):
    return swarm_density(case_a_swarms()[0]).matrix


@check
def case_a_t1(ledger):
    return swarm_density(case_a_swarms()[1]).matrix


@check
def stability_indicator_check(ledger):
    t0, t1 = case_a_swarms()
    h = hamiltonian_sigma_z(float(ledger.get('delta_e', 1.0)))
    report = stability_indicator(swarm_density(t0), swarm_density(t1), h)
    return report.value.imag / h.delta_e


@check
def target_distance(ledger):
    t0, _ = case_a_swarms()
    return trace_distance(swarm_density(t0), DensityMatrix(np.diag([1.0, 0.0])))


@check
def target_distance_diagnostic(ledger):
    t0, _ = case_a_swarms()
    return frobenius_half_sq(swarm_density(t0), DensityMatrix(np.diag([1.0, 0.0])))


@check
def working_t0(ledger):
    return swarm_density(working_swarms()[0]).matrix


@check
def working_t1(ledger):
    return swarm_density(working_swarms()[1]).matrix


@check
def recovery_unitary(ledger):
    t0, t1 = working_swarms()
    op = recover_evolution_paper(swarm_density(t0), swarm_density(t1))
    return OrderedDict([('unitarity_defect', op.unitarity_defect), ('is_unitary', op.is_unitary)])


@check
def procrustes_residual(ledger):
    t0, t1 = working_swarms()
    rho0, rho1 = swarm_density(t0), swarm_density(t1)
    paper = recover_evolution_paper(rho0, rho1)
    best = recover_evolution_procrustes(rho0, rho1)
    return OrderedDict([('paper', paper.residual), ('procrustes', best.residual),
                        ('not_worse', best.residual <= paper.residual + CHECK_TOL)])


# ledger names that clash with imported functions
ALIASES = {'barycenter_gap': 'barycenter_gap_check',
           'reduced_swarm': 'reduced_swarm_check',
           'stability_indicator': 'stability_indicator_check'}


def _classify(name, entry, computed):
    pub = entry.get('published')
    if name in ('recovery_unitary', ):
        return PASS if computed['is_unitary'] else DIVERGES
    if name in ('procrustes_residual', ):
        return PASS if computed['not_worse'] else DIVERGES
    if name == 'dissipator_terms':
        ok = all(_close(computed[k], _published_matrix({'published': pub[k]})) for k in ('jump', 'left', 'right'))
        return PASS if ok else DIVERGES
    if isinstance(computed, np.ndarray) and computed.ndim == 2:
        return PASS if _close(computed, _published_matrix(entry)) else DIVERGES
    return PASS if _close(computed, pub) else DIVERGES


def load_ledger(fname=LEDGER_FILE):
    ledger = utils.yaml_load(fname)
    if not isinstance(ledger, dict) or 'checks' not in ledger:
        raise ValueError(f"{fname}: not a check ledger")
    unknown = [n for n in ledger['checks'] if ALIASES.get(n, n) not in CHECKS]
    if unknown:
        raise ValueError(f"{fname}: no check implements {unknown}")
    return ledger


def run_checks(ledger=None):
    """Evaluate every ledger entry in order."""
    ledger = load_ledger() if ledger is None else ledger
    results = []
    for name, entry in ledger['checks'].items():
        computed = CHECKS[ALIASES.get(name, name)](ledger)
        status = _classify(name, entry, computed)
        result = CheckResult(name, entry.get('description', ''), status, entry.get('expected', PASS),
                             computed, entry.get('published'))
        if status == DIVERGES:
            log.info(f"{name}: computed {_jsonable(computed)} differs from published {result.published}")
        results.append(result)
    return results


def verify(results, strict=False):
    """Raise :class:`LedgerMismatch` on a classification change, or on any divergence when *strict*."""
    changed = [r.name for r in results if r.status != r.expected]
    if changed:
        raise LedgerMismatch(f"classification differs from the ledger for {changed}")
    if strict:
        diverging = [r.name for r in results if r.status == DIVERGES]
        if diverging:
            raise LedgerMismatch(f"published values diverge for {diverging}")


def format_report(results):
    lines = []
    for r in results:
        lines.append(f"{r.status:<9} {r.name:<28} {r.description}")
        if r.status == DIVERGES:
            lines.append(f"{'':<9} computed:  {utils.dumps(_jsonable(r.computed)).replace(chr(10), ' ')}")
            lines.append(f"{'':<9} published: {r.published}")
    n_pass = sum(r.status == PASS for r in results)
    lines.append(f"{len(results)} checks: {n_pass} PASS, {len(results) - n_pass} DIVERGES")
    return '\n'.join(lines) + '\n'
