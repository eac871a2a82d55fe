from pathlib import Path

import pytest

SCENARIOS = Path(__file__).resolve().parents[1] / 'scenarios' / 'paper'


@pytest.fixture(autouse=True)
def _default_tolerance(monkeypatch):
    monkeypatch.delenv('QSWARM_TOL', raising=False)


@pytest.fixture
def scenario_file():
    def _path(name):
        return str(SCENARIOS / f"{name}.json")
    return _path


@pytest.fixture
def run_cli(tmp_path):
    """Run ``qswarm`` in-process with an isolated (missing) configuration file."""
    from qswarm.__main__ import main

    def _run(*argv):
        return main(list(argv) + ['--config', str(tmp_path / 'qswarm.conf')])
    return _run
