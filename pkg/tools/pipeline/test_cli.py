"""コマンドラインの終了コードのテスト"""
import pytest

import src.pipeline.runner as runner_module
from src.logprep import (
    EXIT_CONFIG,
    EXIT_INVARIANT,
    EXIT_IO,
    EXIT_OK,
    EXIT_UNEXPECTED,
    build_parser,
    collect_overrides,
    main,
)
from src.utils.config_manager import ConfigManager
from src.utils.errors import InvariantViolationError


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ConfigManager.ENV_OVERRIDES:
        monkeypatch.delenv(name, raising=False)
    return tmp_path


def _main(workdir, *args):
    return main(['--log-dir', str(workdir / 'logs'), *args])


def _fixture(workdir):
    code = _main(workdir, 'fixture', '--records', '60', '--irrelevant', '10', '--users', '5',
                 '--out', str(workdir / 'fx'))
    assert code == EXIT_OK
    return workdir / 'fx' / 'fixture.log'


def test_overrides_skip_unset_flags():
    args = build_parser().parse_args(['run', '--input', 'a.log', '--timeout-min', '10'])
    overrides = collect_overrides(args)
    assert overrides['input.paths'] == ['a.log']
    assert overrides['sessions.timeout_minutes'] == 10.0
    assert overrides['sessions.path_completion'] is None
    assert overrides['output.dir'] is None


def test_no_path_completion_flag():
    args = build_parser().parse_args(['run', '--input', 'a.log', '--no-path-completion'])
    assert collect_overrides(args)['sessions.path_completion'] is False


def test_fixture_then_run(workdir):
    log_path = _fixture(workdir)
    assert _main(workdir, 'run', '--input', str(log_path), '--out', str(workdir / 'out')) == EXIT_OK
    assert (workdir / 'out' / 'stats.json').is_file()
    assert list((workdir / 'logs').glob('*_logprep_run.log'))


def test_detect(workdir, capsys):
    log_path = _fixture(workdir)
    capsys.readouterr()
    assert _main(workdir, 'detect', '--input', str(log_path)) == EXIT_OK
    assert f"{log_path}\tNCSA_COMBINED" in capsys.readouterr().out.splitlines()


def test_infeasible_fixture(workdir):
    assert _main(workdir, 'fixture', '--records', '10', '--users', '20', '--irrelevant', '0') == EXIT_CONFIG


def test_topology_without_graph(workdir):
    log_path = _fixture(workdir)
    assert _main(workdir, 'run', '--input', str(log_path), '--identity', 'topology') == EXIT_CONFIG


def test_invalid_timeout(workdir):
    log_path = _fixture(workdir)
    assert _main(workdir, 'run', '--input', str(log_path), '--timeout-min', '0') == EXIT_CONFIG


def test_missing_input(workdir):
    assert _main(workdir, 'run', '--input', str(workdir / 'missing.log')) == EXIT_IO


def test_missing_config(workdir):
    assert _main(workdir, '--config', 'nope.yaml', 'detect', '--input', 'a.log') == EXIT_IO


def test_w3c_data_before_fields(workdir):
    log_path = workdir / 'bad.log'
    log_path.write_text("#Version: 1.0\n2012-01-19 04:30:00 10.0.0.1 GET /a 200\n", encoding='utf-8')
    code = _main(workdir, 'run', '--input', str(log_path), '--format', 'w3c', '--out', str(workdir / 'out'))
    assert code == EXIT_IO


def test_invariant_violation(workdir, monkeypatch):
    log_path = _fixture(workdir)

    def _broken(*args, **kwargs):
        raise InvariantViolationError("records_parsed ≠ records_after_cleaning + removed")

    monkeypatch.setattr(runner_module, 'compute_stats', _broken)
    assert _main(workdir, 'run', '--input', str(log_path), '--out', str(workdir / 'out')) == EXIT_INVARIANT


def test_internal_value_error_is_unexpected(workdir, monkeypatch, capsys):
    log_path = _fixture(workdir)

    def _broken(*args, **kwargs):
        raise ValueError("invalid literal for int()")

    monkeypatch.setattr(runner_module, 'compute_stats', _broken)
    code = _main(workdir, 'run', '--input', str(log_path), '--out', str(workdir / 'out'))
    assert code == EXIT_UNEXPECTED
    assert '予期しないエラー' in capsys.readouterr().err


def test_invalid_log_level(workdir):
    log_path = _fixture(workdir)
    assert _main(workdir, '--log-level', 'LOUD', 'detect', '--input', str(log_path)) == EXIT_CONFIG


def test_unparsable_config(workdir):
    (workdir / 'broken.yaml').write_text("sessions: [1, 2\n", encoding='utf-8')
    assert _main(workdir, '--config', 'broken.yaml', 'detect', '--input', 'a.log') == EXIT_CONFIG
