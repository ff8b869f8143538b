import io
import json

import pytest

from conftest import fixture_path
from src.cli import dispatch


def run(*argv):
    stream = io.StringIO()
    code = dispatch(list(argv) + ['--json'], stream)
    return code, json.loads(stream.getvalue())


def test_params_at_rho():
    code, report = run('params', '--k', '3', '--M', '123')
    assert code == 0
    assert report['witnesses'] == {'epsilon': '3', 'rho': '123',
                                   'gamma': '126'}
    assert report['details']['almost_equal_degrees'] == ['42', '42', '42']
    assert report['inputs']['k'] == '3'
    assert report['seed'] is None


def test_slopes_nonsingular_tail():
    code, report = run('slopes', '--k', '3', '--M', '96')
    assert code == 0
    assert report['verdict'] == 'pass'
    assert report['witnesses']['tail'] == '1331/1000'
    code, report = run('slopes', '--k', '3', '--M', '30')
    assert code == 1
    assert report['verdict'] == 'fail'


def test_slopes_multiquadratic_and_scan():
    code, report = run('slopes', '--k', '3', '--M', '128', '--multiquadratic')
    assert code == 0
    assert sorted(report['witnesses']) == ['tail_l2', 'tail_l3']
    code, report = run('slopes', '--k', '3', '--M', '95', '--scan', '96')
    assert code == 1
    assert '95' in report['details']['failures']


def test_slopes_l_alone_selects_the_multiquadratic_tail():
    code, report = run('slopes', '--k', '3', '--M', '128', '--l', '2')
    assert code == 0
    assert report['details']['verdicts'][0]['inequality'].startswith('9/8')
    assert list(report['witnesses']) == ['tail']
    # (33/32)^3 (32/31)^2 > 9/8
    code, report = run('slopes', '--k', '3', '--M', '96', '--l', '2')
    assert code == 1
    code, report = run('slopes', '--k', '3', '--M', '96', '--l', '1')
    assert code == 3


def test_slopes_scan_range():
    code, report = run('slopes', '--k', '3', '--scan', '94..96')
    assert code == 1
    assert sorted(report['details']['rows']) == ['94', '95', '96']
    assert '94' in report['details']['failures']
    code, report = run('slopes', '--k', '3', '--scan', '97..96')
    assert code == 3
    assert dispatch(['slopes', '--k', '3', '--scan', 'a..b'],
                    io.StringIO()) == 3
    code, report = run('slopes', '--k', '3')
    assert code == 3
    assert '--M' in report['message']


def test_usage_errors_exit_3():
    stream = io.StringIO()
    assert dispatch([], stream) == 3
    assert 'usage' in stream.getvalue()
    assert dispatch(['frobnicate'], io.StringIO()) == 3
    assert dispatch(['params'], io.StringIO()) == 3
    assert dispatch(['params', '--k', '3', '--prime', '32001'],
                    io.StringIO()) == 3
    assert dispatch(['codim', '--k', '3', '--workers', '0'],
                    io.StringIO()) == 3


def test_input_error_report(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"degrees": [2,', encoding='utf-8')
    code, report = run('classify-point', '--input', str(bad))
    assert code == 3
    assert report['verdict'] == 'input_error'
    assert 'line 1' in report['message']
    code, report = run('quad', '--input', str(tmp_path / 'missing.json'))
    assert code == 3


def test_quad_with_oracle():
    path = fixture_path('forms', 'net_hidden_diagonal')
    code, report = run('quad', '--input', str(path), '--oracle')
    assert code == 0
    assert report['witnesses']['tuple_rank'] == '1'
    assert report['witnesses']['oracle_rank'] == '1'
    code, again = run('quad', 'rank', '--input', str(path))
    assert code == 0
    assert again['witnesses'] == {'tuple_rank': '1'}
    assert again['inputs']['action'] == 'rank'
    assert dispatch(['quad', 'signature', '--input', str(path)],
                    io.StringIO()) == 3


def test_classify_point():
    code, report = run('classify-point', '--input',
                       str(fixture_path('pointed', 'type_2_0')))
    assert code == 0
    assert report['witnesses']['type'] == 'non-singular'
    code, report = run('classify-point', '--input',
                       str(fixture_path('pointed', 'type_2_1')))
    assert code == 1
    assert report['details']['mq1']['reason'] == 'too_few_variables'
    code, report = run('classify-point', '--input',
                       str(fixture_path('pointed', 'type_2_0')),
                       '--level', '2', '8')
    assert code == 3


def test_check_regularity_echoes_the_seed():
    path = str(fixture_path('pointed', 'quintic_regular'))
    code, report = run('check-regularity', '--condition', 'R1', '--input',
                       path, '--samples', '2', '--seed', '3')
    assert code == 0
    assert report['verdict'] == 'no_counterexample'
    assert report['seed'] == '3'
    assert report['primes'][0] == '32003'
    again = run('check-regularity', '--condition', 'R1', '--input', path,
                '--samples', '2', '--seed', '3')[1]
    assert again['details'] == report['details']


def test_check_regularity_violation_and_strict_mode():
    path = str(fixture_path('pointed', 'quintic_repeated_square'))
    code, report = run('check-regularity', '--condition', 'R1', '--input',
                       path, '--samples', '1', '--seed', '3')
    assert code == 1
    assert report['verdict'] == 'violated'
    code, report = run('check-regularity', '--condition', 'R1', '--input',
                       path, '--strict')
    assert code == 3
    assert '--seed' in report['message']
    code, report = run('check-regularity', '--condition', 'R2', '--input',
                       path, '--seed', '1')
    assert code == 3


def test_codim():
    code, report = run('codim', '--k', '3', '--M', '123', '--condition', 'MQ2')
    assert code == 0
    assert report['witnesses']['MQ2_margin'] == '0'
    assert report['witnesses']['target'] == '249'
    code, report = run('codim', '--k', '3')
    assert code == 3
    code, report = run('codim', '--k', '3', '--M', '100')
    assert code == 3
    code, report = run('codim', '--k', '3', '--scan', '3', '--width', '2')
    assert code == 0
    assert report['witnesses']['cells'] == '3'


def test_codim_every_condition_at_rho():
    code, report = run('codim', '--k', '3', '--M', '123')
    assert code == 0
    assert report['witnesses']['MQ2_margin'] == '0'
    assert report['details']['MQ2']['terms'][0]['rank_stratum'] == '-1'


def test_codim_scan_forms():
    code, report = run('codim', '--k', '3', '--M', '123', '--scan',
                       '--width', '2')
    assert code == 0
    assert report['witnesses']['cells'] == '3'
    code, report = run('codim', '--k', '3', '--scan', '3..4', '--width', '1')
    assert code == 0
    assert report['witnesses']['cells'] == '4'
    code, report = run('codim', '--k', '4', '--scan', '3..3')
    assert code == 0
    code, report = run('codim', '--k', '3', '--scan', '4..3')
    assert code == 3


def test_trace():
    code, report = run('trace', '--k', '3')
    assert code == 0
    assert report['witnesses']['contraction'] == '27/64'
    code, report = run('trace', '--k', '3', '--chain', 'transversal',
                       'transversal')
    assert code == 0
    assert report['witnesses']['level'] == '3,12'


def test_trace_prerequisite_failure():
    code, report = run('trace', '--k', '3', '--chain', 'special')
    assert code == 1
    assert report['verdict'] == 'fail'
    assert 'n(D) < nu(D)' in report['details']['failed_prerequisite']


def test_trace_from_a_state_file(tmp_path):
    state = tmp_path / 'state.json'
    state.write_text(json.dumps({'k': 3, 'l_X': 3, 'c_X': 16,
                                 'rank_lower': 125, 'ratio': '5/4'}),
                     encoding='utf-8')
    code, report = run('trace', '--k', '3', '--state', str(state), '--chain',
                       'special', '--ranks', 'none')
    assert code == 0
    assert report['witnesses']['ratio'] == '23/16'
    code, report = run('trace', '--k', '4', '--state', str(state), '--chain',
                       'special')
    assert code == 3


def test_trace_from_a_chain_file(tmp_path):
    chain = tmp_path / 'chain.json'
    chain.write_text(json.dumps(['transversal', 'transversal']),
                     encoding='utf-8')
    code, report = run('trace', '--k', '3', '--chain', str(chain))
    assert code == 0
    assert report['witnesses']['level'] == '3,12'
    chain.write_text(json.dumps({
        'steps': ['special'], 'ranks': [None],
        'state': {'k': 3, 'l_X': 3, 'c_X': 16, 'rank_lower': 125,
                  'ratio': '5/4'}}), encoding='utf-8')
    code, report = run('trace', '--k', '3', '--chain', str(chain))
    assert code == 0
    assert report['witnesses']['ratio'] == '23/16'
    chain.write_text(json.dumps({'steps': 'special'}), encoding='utf-8')
    code, report = run('trace', '--k', '3', '--chain', str(chain))
    assert code == 3
    code, report = run('trace', '--k', '3', '--chain', 'oblique')
    assert code == 3


@pytest.mark.parametrize('name, code, classification', [
    ('rigid', 0, 'rigid_by_theorem_0_3'),
    ('transversal', 1, 'not_rigid_transversal'),
    ('below_rho', 2, 'undetermined'),
])
def test_check_fibration_exit_codes(name, code, classification):
    got, report = run('check-fibration', '--input',
                      str(fixture_path('fibrations', name)))
    assert got == code
    assert report['witnesses']['classification'] == classification


def test_selftest_subset():
    code, report = run('selftest', '--only', '1', '7', '10')
    assert code == 0
    assert report['witnesses'] == {'1': 'pass', '7': 'pass', '10': 'pass'}
    assert report['seed'] == '20240'


def test_console_summary_follows_json():
    stream = io.StringIO()
    assert dispatch(['params', '--k', '4'], stream) == 0
    out = stream.getvalue()
    assert '=== params ===' in out
    assert 'verdict: pass (exit 0)' in out
