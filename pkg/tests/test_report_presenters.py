import io
import json
from fractions import Fraction

import pytest

from src.exact_arith import QQ_FIELD
from src.presenters.presenters import (ConsolePresenter, JsonPresenter,
                                       make_presenters)
from src.report import (EXIT_CODES, FAIL, INCONCLUSIVE, INPUT_ERROR,
                        NO_COUNTEREXAMPLE, PASS, VACUOUS, VIOLATED,
                        ReportPublisher, RunReport, lossless)


def _report(**kwargs):
    defaults = dict(command='slopes', inputs={'k': 3, 'M': 96}, verdict=PASS,
                    primes=[32003], witnesses={'tail': '1331/1000'},
                    details={'rhs': Fraction(1331, 1000), 'ok': True,
                             'big': 10 ** 30, 'rows': [(1, 2)]},
                    timing_seconds=0.25)
    defaults.update(kwargs)
    return RunReport(**defaults)


@pytest.mark.parametrize('verdict, code', [(PASS, 0), (NO_COUNTEREXAMPLE, 0),
                                           (VACUOUS, 0), (FAIL, 1),
                                           (VIOLATED, 1), (INCONCLUSIVE, 2),
                                           (INPUT_ERROR, 3)])
def test_exit_codes(verdict, code):
    assert EXIT_CODES[verdict] == code
    assert _report(verdict=verdict).exit_code == code


def test_lossless_keeps_exact_values():
    data = lossless({'a': Fraction(1, 3), 1: [2, True, None],
                     's': QQ_FIELD.scalar('-7/2')})
    assert data == {'a': '1/3', '1': ['2', True, None], 's': '-7/2'}
    assert lossless(10 ** 40) == '1' + '0' * 40


def test_report_json_is_deterministic():
    a = _report(timing_seconds=1.5).to_json(timing=False)
    b = _report(timing_seconds=9.0).to_json(timing=False)
    assert a == b
    assert a['details']['big'] == str(10 ** 30)
    assert a['details']['rows'] == [['1', '2']]
    assert a['exit_code'] == 0
    assert 'timing_seconds' not in a


def test_json_presenter_sorts_keys():
    stream = io.StringIO()
    JsonPresenter(stream).present(_report())
    text = stream.getvalue()
    data = json.loads(text)
    assert data['witnesses'] == {'tail': '1331/1000'}
    assert data['timing_seconds'] == 0.25
    assert text.index('"command"') < text.index('"details"') \
        < text.index('"verdict"')


def test_console_presenter_summary():
    stream = io.StringIO()
    ConsolePresenter(stream).present(_report(seed=11, message='all good'))
    lines = stream.getvalue().splitlines()
    assert lines[0] == '=== slopes ==='
    assert lines[1] == 'verdict: pass (exit 0)'
    assert 'seed: 11' in lines
    assert 'all good' in lines
    assert 'tail: 1331/1000' in lines
    assert lines[-1] == 'time: 0.25s'


def test_publisher_notifies_every_presenter():
    stream = io.StringIO()
    publisher = ReportPublisher(make_presenters(False, stream))
    assert len(publisher.observers()) == 2
    publisher.publish(_report())
    assert publisher.last_report.command == 'slopes'
    out = stream.getvalue()
    assert out.lstrip().startswith('{')
    assert '=== Witnesses ===' in out
    assert len(make_presenters(True, stream)) == 1


def test_presenter_rejects_other_observables():
    with pytest.raises(ValueError):
        JsonPresenter(io.StringIO()).notify(object())
