"""
Tests for the fw-cli entry point: output, exit codes and configuration
"""

import json
import os
import sys
from pathlib import Path

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import pytest

from expr_grammar import parse, render
from fw_cli import EXIT_FAILED, EXIT_MODEL, EXIT_OK, EXIT_USAGE, main

GOLDEN = Path(__file__).resolve().parent.parent / 'golden'


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ('FW_SEED', 'FW_TOL', 'FW_LOG_FILE', 'FW_EPS_SINGULAR', 'FW_CLAMP_TOL', 'FW_REAL_TOL'):
        monkeypatch.delenv(name, raising=False)


def run_json(capsys, argv):
    code = main(argv + ['--format', 'json'])
    return code, json.loads(capsys.readouterr().out)


# symbolic ------------------------------------------------------------------------

def test_sfw_order_two_prints_expression(capsys):
    assert main(['symbolic', 'sfw', '--order', '2']) == EXIT_OK
    out = capsys.readouterr().out.strip()
    assert parse(out) == parse((GOLDEN / 'sfw_order2.txt').read_text(encoding='utf-8'))


def test_sfw_matches_golden_file(capsys):
    code, data = run_json(capsys, ['symbolic', 'sfw', '--order', '4', '--golden', str(GOLDEN / 'sfw_order4.txt')])
    assert code == EXIT_OK
    assert data['cases'][0]['residual'] == '0'


def test_hfw_against_wrong_golden_fails(capsys):
    code, data = run_json(capsys, ['symbolic', 'hfw', '--order', '2', '--golden', str(GOLDEN / 'sfw_order2.txt')])
    assert code == EXIT_FAILED
    assert data['summary']['failed'] == 1


def test_verify_fw1950(capsys):
    code, data = run_json(capsys, ['symbolic', 'verify-fw1950', '--order', '3'])
    assert code == EXIT_FAILED
    case = data['cases'][0]
    assert case['details']['verdict'] == 'not-FW'
    expected = render(parse((GOLDEN / 'fw1950_residual_order3.txt').read_text(encoding='utf-8')))
    assert case['residual'] == expected


def test_verify_fw1950_expected_outcome(capsys):
    assert main(['symbolic', 'verify-fw1950', '--expect', 'not-fw']) == EXIT_OK
    assert main(['symbolic', 'verify-fw1950', '--expect', 'is-fw']) == EXIT_FAILED


def test_verify_candidate(capsys):
    candidate = render(parse('-1/2*i*mu*beta*O - 1/4*i*mu^2*[O,E]'))
    assert main(['symbolic', 'verify', '--candidate', candidate, '--order', '2']) == EXIT_OK
    assert main(['symbolic', 'verify', '--candidate', 'mu*O', '--order', '1', '--expect', 'not-fw']) == EXIT_OK


def test_identity_lambda_squared(capsys):
    code, data = run_json(capsys, ['symbolic', 'identity', '--name', 'lambda-squared', '--order', '4'])
    assert code == EXIT_OK
    assert data['cases'][0]['residual'] == '0'


def test_parse_prints_canonical_form(capsys):
    assert main(['symbolic', 'parse', 'O*beta + E']) == EXIT_OK
    assert capsys.readouterr().out == 'E - beta*O\n'


@pytest.mark.parametrize('argv', [
    ['symbolic', 'parse', 'beta*X'],
    ['symbolic', 'verify', '--candidate', 'beta*'],
    ['symbolic', 'sfw', '--order', '0'],
    ['symbolic', 'identity', '--name', 'no-such-identity'],
    ['numeric', 'run'],
    ['symbolic', 'sfw', '--tol', '-1'],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


# numeric ------------------------------------------------------------------------

def test_run_free_dirac(capsys):
    code, data = run_json(capsys, ['numeric', 'run', '--model', 'free-dirac', '--m', '1', '--p', '0,0,1'])
    assert code == EXIT_OK
    names = [case['name'] for case in data['cases']]
    assert 'h_fw_oracle' in names
    assert data['summary']['failed'] == 0


def test_run_without_odd_part_reports_identity(capsys):
    code, data = run_json(capsys, ['numeric', 'run', '--model', 'random-block', '--dim', '6', '--scale', '0'])
    assert code == EXIT_OK
    assert any(case['name'] == 'u_identity' for case in data['cases'])


def test_run_rejects_odd_dimension(capsys):
    assert main(['numeric', 'run', '--model', 'random-block', '--dim', '7']) == EXIT_MODEL


def test_run_dump(capsys, tmp_path):
    dump = tmp_path / 'dump.json'
    assert main(['numeric', 'run', '--model', 'free-dirac', '--dump', str(dump)]) == EXIT_OK
    data = json.loads(dump.read_text(encoding='utf-8'))
    assert set(data) >= {'u', 's_fw', 'h_fw', 'diagnostics'}


def test_small_sweep(capsys):
    code, data = run_json(capsys, ['numeric', 'sweep', '--count', '3', '--seed', '5', '--dim', '4'])
    assert code == EXIT_OK
    assert data['summary'] == {'passed': 3, 'failed': 0, 'errored': 0}
    assert set(data['details']['maxima']) >= {'unitarity', 'off_block'}
    assert data['seed'] == 5


def test_seed_environment_overrides_flag(capsys, monkeypatch):
    monkeypatch.setenv('FW_SEED', '7')
    _, data = run_json(capsys, ['numeric', 'sweep', '--count', '2', '--seed', '5'])
    assert data['seed'] == 7


def test_output_is_deterministic(capsys):
    argv = ['numeric', 'sweep', '--count', '4', '--seed', '11', '--format', 'json']
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_out_file(capsys, tmp_path):
    out = tmp_path / 'report.txt'
    assert main(['symbolic', 'identity', '--name', 'sfw-odd', '--out', str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ''
    assert 'SUMMARY: 1 passed, 0 failed, 0 errored' in out.read_text(encoding='utf-8')


def test_convergence(capsys):
    code, data = run_json(capsys, ['numeric', 'convergence', '--order', '1', '2', '3', '--seed', '42'])
    assert code == EXIT_OK
    assert [case['name'] for case in data['cases']] == ['order-1', 'order-2', 'order-3']


def test_divergence_expected(capsys):
    argv = ['numeric', 'convergence', '--order', '3', '--scale', '4.0', '--seed', '42']
    assert main(argv) == EXIT_FAILED
    assert main(argv + ['--expect', 'diverge']) == EXIT_OK


def test_verbose_logs_to_stderr_and_file(capsys, monkeypatch, tmp_path):
    log_path = tmp_path / 'fw.log'
    monkeypatch.setenv('FW_LOG_FILE', str(log_path))
    assert main(['symbolic', 'sfw', '--order', '1', '-v']) == EXIT_OK
    assert 'fw-cli symbolic sfw' in capsys.readouterr().err
    assert 'finished with exit code 0' in log_path.read_text(encoding='utf-8')


def test_out_in_missing_directory_is_usage_error(capsys, tmp_path):
    out = tmp_path / 'missing' / 'report.txt'
    assert main(['symbolic', 'sfw', '--order', '1', '--out', str(out)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert '❌ File error' in err
    assert 'Traceback' not in err
    assert not out.exists()


def test_spin1_without_real_draw_is_model_error(capsys, monkeypatch):
    monkeypatch.setenv('FW_REAL_TOL', '1e-300')
    argv = ['numeric', 'run', '--model', 'spin1-pseudo', '--seed', '3', '--scale', '0.3', '--max-retries', '1']
    assert main(argv) == EXIT_MODEL
    assert 'no real spectrum after 1 draws' in capsys.readouterr().err
