import json
import os

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from qswarm import utils
from qswarm.cli import surface_grid, density_report
from qswarm.scenario import load_scenario


def decode(obj):
    return utils.decode_matrix(obj)


def test_no_command(run_cli, capsys):
    assert run_cli() == 1


def test_density_json(run_cli, scenario_file, capsys):
    assert run_cli('density', '--scenario', scenario_file('toy_mixed_swarm')) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['mode'] == 'mixed'
    assert report['purity'] == pytest.approx(0.5)
    assert report['barycenter']['PositionX'] == pytest.approx(0.75)
    assert_allclose(decode(report['reduced_swarm']), [[0.25, 0.25], [0.25, 0.75]], atol=1e-12)
    assert_allclose(decode(report['reduced_positions']['R2']), np.diag([0, 1]), atol=1e-12)


def test_density_csv(run_cli, scenario_file, tmp_path):
    out = tmp_path / 'csv'
    assert run_cli('density', '--scenario', scenario_file('toy_mixed_swarm'), '--format', 'csv',
                   '--out', str(out)) == 0
    assert sorted(os.listdir(out)) == ['reduced_R1.csv', 'reduced_R2.csv', 'reduced_swarm.csv', 'swarm_density.csv']
    m = pd.read_csv(out / 'swarm_density.csv', header=None).to_numpy(dtype=float)
    assert m.shape == (4, 4)
    assert m[3, 3] == pytest.approx(0.5)
    assert m[0, 2] == pytest.approx(0.25)


def test_density_tensor_mode(scenario_file):
    report = density_report(load_scenario(scenario_file('toy_pure_swarm')).to_swarm())
    assert report['swarm_density'].shape == (16, 16)
    assert report['purity'] == pytest.approx(1.0)
    assert 'reduced_swarm' not in report


def test_missing_arguments_and_files(run_cli, tmp_path):
    assert run_cli('density') == 1
    assert run_cli('density', '--scenario', str(tmp_path / 'missing.json')) == 2
    bad = tmp_path / 'bad.json'
    bad.write_text('{"schema_version": 1, "robots": []}')
    assert run_cli('density', '--scenario', str(bad)) == 1


def test_evolve(run_cli, scenario_file, capsys):
    assert run_cli('evolve', '--scenario0', scenario_file('working_t0'),
                   '--scenario1', scenario_file('working_t1')) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['dim'] == 4
    assert report['procrustes']['is_unitary']
    assert report['paper']['is_unitary']
    assert report['procrustes']['residual_left'] <= report['paper']['residual_left'] + 1e-12


def test_evolve_identical_snapshots(run_cli, scenario_file, capsys):
    assert run_cli('evolve', '--scenario0', scenario_file('working_t0'),
                   '--scenario1', scenario_file('working_t0')) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['procrustes']['residual_left'] == pytest.approx(0.0, abs=1e-12)
    assert report['paper']['residual_left'] > 0.1


def test_evolve_dimension_mismatch(run_cli, scenario_file):
    assert run_cli('evolve', '--scenario0', scenario_file('case_a_t0'),
                   '--scenario1', scenario_file('working_t1')) == 1


def test_propagate_unitary(run_cli, scenario_file, capsys):
    assert run_cli('propagate', '--scenario', scenario_file('case_a_t0'), '--time', '2.0') == 0
    report = json.loads(capsys.readouterr().out)
    assert report['propagator'] == 'unitary'
    assert report['purity'] == pytest.approx(0.9)
    rho = decode(report['rho'])
    assert_allclose(np.diag(rho).real, [0.9, 0.1], atol=1e-12)


def test_propagate_lindblad(run_cli, scenario_file, capsys):
    assert run_cli('propagate', '--scenario', scenario_file('toy_mixed_swarm'), '--time', '0.5') == 0
    report = json.loads(capsys.readouterr().out)
    assert report['propagator'] == 'lindblad (standard)'
    rho = decode(report['rho'])
    assert np.trace(rho).real == pytest.approx(1.0)
    assert report['trace_distance_to_initial'] > 0


def test_propagate_errors(run_cli, scenario_file):
    assert run_cli('propagate', '--scenario', scenario_file('toy_pure_swarm')) == 1
    assert run_cli('propagate', '--scenario', scenario_file('case_a_t0'), '--time', '-1') == 1


def test_mission_trace(run_cli, scenario_file, capsys):
    assert run_cli('mission', '--scenario', scenario_file('at_target_mission')) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record['iteration'] == 1
    assert record['converged'] is True


def test_mission_summary(run_cli, scenario_file, capsys):
    assert run_cli('mission', '--scenario', scenario_file('noisy_mission'), '--summary') == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary == {'converged': False, 'iterations': 5, 'final_distance': pytest.approx(0.5)}


def test_mission_needs_mission_block(run_cli, scenario_file):
    assert run_cli('mission', '--scenario', scenario_file('case_a_t0')) == 1


def test_mission_output_is_reproducible(run_cli, scenario_file, tmp_path):
    first, second = tmp_path / 'a.jsonl', tmp_path / 'b.jsonl'
    for out in (first, second):
        assert run_cli('mission', '--scenario', scenario_file('toy_mission'), '--out', str(out)) == 0
    assert first.read_bytes() == second.read_bytes()


def test_surface_endpoints(run_cli, scenario_file, tmp_path):
    out = tmp_path / 'surface.csv'
    assert run_cli('surface', '--scenario', scenario_file('case_a_t0'), '--resolution', '2', '--out', str(out)) == 0
    text = out.read_text()
    assert text.startswith('# ')
    df = pd.read_csv(out, comment='#')
    assert list(df.columns) == ['x', 'robot_id', 'amplitude']
    r1 = df[df.robot_id == 'R1'].amplitude.to_numpy()
    r2 = df[df.robot_id == 'R2'].amplitude.to_numpy()
    assert_allclose(r1, [1.0, 0.0], atol=1e-12)
    assert_allclose(r2, [0.8, 0.2], atol=1e-12)


def test_surface_two_axes(scenario_file):
    df = surface_grid(load_scenario(scenario_file('working_t0')).to_swarm(), 3)
    assert list(df.columns) == ['x', 'y', 'robot_id', 'amplitude']
    assert len(df) == 2 * 9
    p1 = df[df.robot_id == 'P1']
    corner = p1[(p1.x == 1.0) & (p1.y == 1.0)].amplitude.item()
    center = p1[(p1.x == 0.5) & (p1.y == 0.5)].amplitude.item()
    assert corner == pytest.approx(0.5)
    assert center == pytest.approx(0.25)


def test_surface_resolution(run_cli, scenario_file):
    assert run_cli('surface', '--scenario', scenario_file('case_a_t0'), '--resolution', '1') == 1


def test_paper_check(run_cli, capsys):
    assert run_cli('paper-check') == 0
    out = capsys.readouterr().out
    assert 'PASS' in out and 'DIVERGES' in out
    assert run_cli('paper-check', '--strict-paper') == 3


def test_paper_check_json(run_cli, capsys):
    assert run_cli('paper-check', '--json') == 0
    results = json.loads(capsys.readouterr().out)
    assert len(results) >= 10
    assert {r['status'] for r in results} == {'PASS', 'DIVERGES'}


def test_init_writes_config(run_cli, tmp_path, scenario_file, capsys):
    home, logs = tmp_path / 'home', tmp_path / 'logs'
    assert run_cli('init', '--home', str(home), '--log-home', str(logs)) == 0
    assert home.is_dir() and logs.is_dir()
    text = (tmp_path / 'qswarm.conf').read_text()
    assert '[home]' in text
    assert str(logs) in text
    assert run_cli('density', '--scenario', scenario_file('case_a_t0')) == 0
    assert (logs / 'qswarm.log').exists()
