from fractions import Fraction

import pytest

from conftest import load_fixture
from src.desk_instances import fibration_cases
from src.errors import InputError, PrerequisiteError
from src.rigidity_tracer import (NOT_RIGID, RIGID, SPECIAL, TANGENT,
                                 TRANSVERSAL, UNDETERMINED, FibrationParams,
                                 LevelState, check_fibration,
                                 contraction_equivalence, prop_1_5_check,
                                 prop_1_6_chain, prop_1_7_start,
                                 prop_1_8_certificate, prop_3_4_identity,
                                 special_section_gain, splitting_check,
                                 theorem_6_1_bound, trace_chain, transition)


def test_start_state():
    state = prop_1_7_start(3)
    assert (state.k, state.l_X, state.c_X, state.rank_lower) == (3, 3, 16, 125)
    assert state.ratio is None


def test_level_state_validation():
    with pytest.raises(InputError):
        LevelState(3, 1, 10, 30)
    with pytest.raises(InputError):
        LevelState(3, 3, 6, 100)
    with pytest.raises(InputError):
        LevelState(3, 3, 16, 20)
    state = LevelState.from_json({'k': 3, 'l_X': 3, 'c_X': 16,
                                  'rank_lower': 125, 'ratio': '5/4'})
    assert state.ratio == Fraction(5, 4)
    with pytest.raises(InputError):
        LevelState.from_json({'k': 3})


def test_transversal_cut():
    state = transition(prop_1_7_start(3), TRANSVERSAL)
    assert (state.l_X, state.c_X, state.rank_lower) == (3, 14, 123)
    assert state.step_log[-1]['rank_source'] == 'worst_case'


def test_special_cut_needs_a_ratio():
    with pytest.raises(PrerequisiteError) as e:
        transition(prop_1_7_start(3), SPECIAL)
    assert 'n(D) < nu(D)' in e.value.source
    start = LevelState(3, 3, 16, 125, ratio=Fraction(5, 4))
    state = transition(start, SPECIAL)
    assert state.ratio == Fraction(23, 16)
    assert state.ratio_strict


def test_tangent_cut_prerequisites():
    with pytest.raises(PrerequisiteError) as e:
        transition(prop_1_7_start(3), TANGENT)
    assert 'l_X <= k - 1' in e.value.source
    state = LevelState(4, 2, 24, 27)
    # the worst-case rank 25 misses 2l_R + c_R - 1 = 27
    with pytest.raises(PrerequisiteError):
        transition(state, TANGENT)
    cut = transition(state, TANGENT, actual_rank=27)
    assert (cut.l_X, cut.c_X, cut.rank_lower) == (3, 22, 27)
    assert cut.step_log[-1]['rank_source'] == 'actual'


def test_unknown_kind():
    with pytest.raises(InputError):
        transition(prop_1_7_start(3), 'oblique')


def test_trace_chain_keeps_every_state():
    states = trace_chain(prop_1_7_start(3), [TRANSVERSAL, TRANSVERSAL])
    assert [s.c_X for s in states] == [16, 14, 12]
    assert len(states[-1].step_log) == 2
    with pytest.raises(InputError):
        trace_chain(prop_1_7_start(3), [TRANSVERSAL], [None, None])
    with pytest.raises(PrerequisiteError):
        # c_X = 8 < k + 6
        trace_chain(prop_1_7_start(3), [TRANSVERSAL] * 5)


@pytest.mark.parametrize('k', [3, 4, 5, 8])
def test_tangent_chains_reach_c_T(k):
    for l in range(2, k + 1):
        assert prop_1_6_chain(k, l)['pass']


def test_special_cut_certificate_is_tight_at_k3():
    cert = prop_1_8_certificate(3)
    assert cert['pass']
    assert cert['contraction'] == '27/64'
    assert (cert['final_c'], cert['final_rank']) == (10, 119)
    assert cert['c_slack'] == 0 and cert['rank_slack'] == 0


def test_special_cut_certificate_runs_through_transition():
    cert = prop_1_8_certificate(3)
    assert [s['kind'] for s in cert['steps']] == [SPECIAL] * 3
    assert [s['ratio'] for s in cert['steps']] == ['5/4', '23/16', '101/64']
    assert cert['steps'][-1]['to'] == [3, 10, 119]
    assert cert['final_ratio'] == '101/64'
    assert cert['failed_prerequisite'] is None


def test_strict_ratio_bound_at_one_admits_a_special_cut():
    with pytest.raises(PrerequisiteError):
        transition(LevelState(3, 3, 16, 125, ratio=Fraction(1)), SPECIAL)
    state = transition(LevelState(3, 3, 16, 125, ratio=Fraction(1),
                                  ratio_strict=True), SPECIAL)
    assert state.ratio == Fraction(5, 4)


def test_contraction_equivalence():
    assert all(contraction_equivalence(k) for k in range(1, 31))
    for k in range(3, 15):
        assert prop_1_8_certificate(k)['pass']


def test_ratio_identities():
    assert special_section_gain(Fraction(3), Fraction(2), 3) == Fraction(13, 4)
    check = prop_3_4_identity(Fraction(3, 2), Fraction(10), Fraction(1))
    assert check['lhs'] == '31/20' and check['pass']
    with pytest.raises(InputError):
        prop_3_4_identity(Fraction(3, 2), Fraction(0), Fraction(1))
    assert theorem_6_1_bound(5, 4, 3, 3) == Fraction(3, 2)
    for k in range(2, 9):
        assert splitting_check(5, 4, 3, k)['pass']
    assert splitting_check(5, 4, 3, 1)['splittings'] == 0


def test_prop_1_5_check():
    result = prop_1_5_check(prop_1_7_start(3))
    assert result['needed'] == 10
    assert result['interval'] == [9, 18]
    assert result['pass']


@pytest.mark.parametrize('name', ['below_rho', 'rigid', 'transversal'])
def test_fibration_fixtures(name):
    data = load_fixture('fibrations', name)
    params = FibrationParams.from_json(data)
    assert params == fibration_cases()[name]
    assert check_fibration(params).classification == data['expected']


def test_fibration_classification_is_scale_stable():
    expected = {'below_rho': UNDETERMINED, 'rigid': RIGID,
                'transversal': NOT_RIGID}
    for name, params in fibration_cases().items():
        for factor in (1, 2, 3):
            verdict = check_fibration(params.scaled(factor))
            assert verdict.classification == expected[name]


def test_fibration_details():
    verdict = check_fibration(fibration_cases()['rigid'])
    assert verdict.details['dim_bound'] == '125'
    assert verdict.details['weighted_sum'] == '41/14'
    below = FibrationParams(1, ((0, 42), (0, 42), (2, 42)))
    verdict = check_fibration(below)
    assert verdict.classification == UNDETERMINED
    assert 'm + 1' in verdict.reason


def test_fibration_input_errors():
    with pytest.raises(InputError):
        FibrationParams.from_json({'m': 1})
    with pytest.raises(InputError):
        FibrationParams.from_json({'m': 1, 'k': 2,
                                   'bidegrees': [[1, 42], [1, 42], [1, 42]]})
    with pytest.raises(InputError):
        FibrationParams(0, ((1, 42),))
    with pytest.raises(InputError):
        FibrationParams(1, ((1, 1),))
