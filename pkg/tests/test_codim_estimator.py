import pytest

from conftest import load_fixture
from src.codim_estimator import (CONDITIONS, PRESENTATION_I, PRESENTATION_II,
                                 binding_window_scan, binomial_walk,
                                 condition_codim, condition_codim_verdict,
                                 grassmannian_dim, lemma_8_1_check,
                                 lemma_8_2_check, lemma_8_3_check,
                                 lemma_8_3_scan, mq2_codim_bound, r1_walk,
                                 r3_1_family_dim, rank_stratum_codim,
                                 sequence_degrees, stratum_codim,
                                 theorem_8_1_bound)
from src.constants import DegreeTuple, gamma, rho
from src.errors import InputError


@pytest.mark.parametrize('M', [96, 123])
def test_golden_walks(M):
    walk = r1_walk(3, M)
    assert walk.summary() == load_fixture('walks', 'k3_M' + str(M))
    assert all(walk.checks.values())
    assert walk.minimum == min(walk.candidates)


def test_walk_at_96():
    walk = r1_walk(3, 96)
    assert (walk.dim_pi, walk.truncation, walk.length) == (90, 9, 87)
    assert walk.i_star == 67
    assert walk.minimum == 4005
    first = walk.steps[0]
    assert (first.degree, first.A, first.B) == (2, 92, 2)
    assert first.presentation == PRESENTATION_I
    assert walk.steps[-1].presentation == PRESENTATION_II


def test_sequence_degrees():
    assert sequence_degrees(DegreeTuple.of([2, 3, 3])) == [2, 2, 2, 3, 3]
    assert len(sequence_degrees(DegreeTuple.of([33, 33, 33]))) == 96


def test_walk_shorter_than_truncation_is_vacuous():
    walk = binomial_walk(DegreeTuple.of([2, 2, 2]), 5, 4)
    assert walk.vacuous
    assert walk.minimum is None


def test_stratum_and_family_dimensions():
    assert stratum_codim(3, 123, 1) == 250
    assert stratum_codim(3, 123, 3) == 0
    assert grassmannian_dim(90, 5) == 455
    assert r3_1_family_dim(3, 123, 2) == 366
    assert rank_stratum_codim(10, 4, 1) == 21
    assert rank_stratum_codim(10, 10, 3) == 0
    with pytest.raises(InputError):
        stratum_codim(3, 123, 4)
    with pytest.raises(InputError):
        rank_stratum_codim(10, 11, 1)


def test_subvariety_bound():
    assert theorem_8_1_bound(121, 6) == 6329
    for n in range(10, 40):
        for e in range(1, 6):
            theorem_8_1_bound(n, e)


def test_mq2_bound_is_tight_at_rho():
    assert mq2_codim_bound(3, 123, 2) == 249 == gamma(123, 3) + 123
    assert mq2_codim_bound(3, 123, 3) == 379
    with pytest.raises(InputError):
        mq2_codim_bound(3, 122, 2)
    with pytest.raises(InputError):
        mq2_codim_bound(3, 123, 1)


def test_condition_verdicts_at_rho():
    verdicts = condition_codim_verdict(3, 123)
    assert sorted(verdicts) == sorted(CONDITIONS)
    assert all(v.passed for v in verdicts.values())
    mq2 = verdicts['MQ2']
    assert mq2.margin == 0
    assert mq2.binding_l == 2
    assert mq2.to_json()['equal']
    r31 = verdicts['R3.1']
    assert r31.minimum == 6213
    assert r31.binding_l == 2
    assert r31.target == 249


def test_single_condition_and_errors():
    r2 = condition_codim('R2', 3, 130)
    assert r2.terms[0]['truncation'] == 4
    with pytest.raises(InputError):
        condition_codim('R4', 3, 123)
    with pytest.raises(InputError):
        condition_codim_verdict(3, 100)


def test_lemma_checks():
    assert lemma_8_1_check(3, 96)['pass']
    check = lemma_8_2_check(10, 3)
    assert check['hypothesis'] and check['pass']
    check = lemma_8_3_check(3, 96)
    assert check['hypothesis'] and check['pass']
    assert lemma_8_3_scan(range(3, 6)) == []


def test_binding_window_small():
    result = binding_window_scan([3], 5)
    assert result['cells'] == 6
    assert result['pass']


@pytest.mark.slow
def test_binding_window_full():
    result = binding_window_scan(range(3, 9), 40, workers=2)
    assert result['cells'] == 6 * 41
    assert result['mismatches'] == []


@pytest.mark.parametrize('k', range(3, 9))
def test_mq2_assembly_at_and_just_above_rho(k):
    for M in range(rho(k), rho(k) + 4):
        mq2 = condition_codim('MQ2', k, M)
        assert mq2.minimum == gamma(M, k) + M
        assert mq2.binding_l == 2
        for row in mq2.terms:
            assert row['bound'] == mq2_codim_bound(k, M, row['l'])


def test_unrounded_rank_stratum():
    # binomial(2, 2) - 2 at M = rho(3), l = 2
    assert rank_stratum_codim(125, 124, 3) == 0
    assert rank_stratum_codim(125, 124, 3, floor=False) == -1
    assert condition_codim('MQ2', 3, 123).terms[0]['rank_stratum'] == -1
