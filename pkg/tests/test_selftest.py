import pytest

from src.selftest import run_all, suite


def test_suite_numbers_every_criterion():
    numbers = [number for number, _, _ in suite()]
    assert numbers == list(range(1, 12))


@pytest.mark.parametrize('criterion', [1, 2, 3, 6, 7, 10, 11])
def test_fast_criteria(criterion, rank_engine, dimension_engine):
    results = run_all([criterion], rank_engine=rank_engine,
                      dimension_engine=dimension_engine)
    assert [r.criterion for r in results] == [criterion]
    assert results[0].passed, results[0].details
    assert 'pass' not in results[0].details


def test_nonsingular_table_witness():
    result = run_all([3])[0]
    assert result.details['k3_tail'] == '1331/1000'
    assert result.details['failures'] == []


@pytest.mark.slow
@pytest.mark.parametrize('criterion', [4, 5, 8, 9])
def test_slow_criteria(criterion, rank_engine, dimension_engine):
    result = run_all([criterion], rank_engine=rank_engine,
                     dimension_engine=dimension_engine)[0]
    assert result.passed, result.details
