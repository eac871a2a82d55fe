import argparse

from qswarm import config


def density_parser():
    parser = argparse.ArgumentParser()
    subparsers = parser.add_subparsers()
    config.Params(sections=config.DENSITY_PARAMS).add_arguments(subparsers.add_parser('density'))
    return parser


def test_get_config_name():
    assert config.get_config_name(['density', '--config', 'a.conf']) == 'a.conf'
    assert config.get_config_name(['density', '--config=b.conf']) == 'b.conf'
    assert config.get_config_name(['density']) == config.CONFIG_FILE_NAME


def test_defaults():
    args = config.Params(sections=config.MISSION_PARAMS).get_defaults()
    assert args.format == 'json'
    assert args.seed is None
    assert not args.summary
    assert not args.verbose


def test_written_defaults_round_trip(tmp_path):
    fname = str(tmp_path / 'qswarm.conf')
    config.write(fname)
    assert config.config_to_list(fname, sections=('density', 'general')) == ['--format=json']
    assert config.config_to_list(str(tmp_path / 'missing.conf')) == []


def test_config_values_are_overridden_by_command_line(tmp_path):
    fname = tmp_path / 'qswarm.conf'
    fname.write_text("[density]\nformat = csv\nscenario = a.json\n\n[mission]\nseed = 3\n")
    parser = density_parser()
    args = config.parse_known_args(parser, ['density', '--config', str(fname)], sections=('density', 'general'))
    assert args.format == 'csv'
    assert args.scenario == 'a.json'
    assert not hasattr(args, 'seed')
    args = config.parse_known_args(parser, ['density', '--format', 'json', '--config', str(fname)],
                                   sections=('density', 'general'))
    assert args.format == 'json'


def test_write_selected_sections(tmp_path):
    fname = str(tmp_path / 'qswarm.conf')
    args = argparse.Namespace(home=tmp_path / 'h', log_home=tmp_path / 'l', resolution=7)
    config.write(fname, args=args, sections=config.HOME_PARAMS)
    text = (tmp_path / 'qswarm.conf').read_text()
    assert f"home = {tmp_path / 'h'}" in text
    assert f"resolution = {config.SECTIONS['surface']['resolution']['default']}" in text


def test_log_values():
    args = config.Params(sections=config.SURFACE_PARAMS).get_defaults()
    config.log_values(args)
