import random
from fractions import Fraction

import pytest

from conftest import load_fixture
from src.constants import DegreeTuple
from src.errors import InputError
from src.slope_calculus import (all_degree_tuples, build_slope_sequence,
                                check_prop_7_2, check_prop_7_4, full_product,
                                scan, skipped_slope_bound, tail_product,
                                tail_sequence, worst_case_confirmation)


def test_sequence_groups_levels_then_indices():
    s = build_slope_sequence(DegreeTuple.of([3, 4]))
    assert [(e.level, e.index) for e in s.entries] == [(2, 1), (2, 2), (3, 2)]
    assert s.w_plus == {2: 2, 3: 1}
    assert [e.slope for e in s.entries] == [Fraction(3, 2), Fraction(3, 2),
                                            Fraction(4, 3)]


def test_quadrics_have_no_slopes():
    s = build_slope_sequence(DegreeTuple.of([2, 2, 2]))
    assert len(s) == 0
    assert full_product(s) == 1


def test_full_product_telescopes():
    rng = random.Random(3)
    for _ in range(100):
        degrees = DegreeTuple.of([rng.randint(2, 30)
                                  for _ in range(rng.randint(1, 5))])
        assert full_product(build_slope_sequence(degrees)) == \
            Fraction(degrees.product(), 2 ** degrees.k)


def test_tail_product_bounds():
    s = build_slope_sequence(DegreeTuple.of([3, 4]))
    assert tail_product(s, 0) == 1
    assert tail_product(s, 1) == Fraction(4, 3)
    assert tail_product(s, 3) == full_product(s)
    with pytest.raises(InputError):
        tail_product(s, 4)


def test_nonsingular_tail_at_k3():
    verdict = check_prop_7_2(3, 96)
    assert verdict.passed
    assert verdict.rhs == Fraction(1331, 1000)
    assert verdict.truncation == 9
    assert verdict.degrees.degrees == (33, 33, 33)
    assert verdict.to_json()['rhs'] == '1331/1000'
    s = build_slope_sequence(verdict.degrees)
    assert tail_sequence(s, 3) == [(32, 1), (32, 2), (32, 3)]


def test_nonsingular_table_fixture():
    for k, row in load_fixture('tables', 'nonsingular').items():
        verdict = check_prop_7_2(int(k), row['M'])
        assert verdict.passed
        assert str(verdict.rhs) == row['tail']


def test_multiquadratic_table_fixture():
    for k, row in load_fixture('tables', 'multiquadratic').items():
        for l, expected in row['pass'].items():
            assert check_prop_7_4(int(k), row['M'], int(l)).passed == expected


def test_multiquadratic_tail_at_k3():
    verdict = check_prop_7_4(3, 128, 2)
    assert verdict.truncation == 5
    assert verdict.rhs == Fraction(44 ** 2 * 43, 42 ** 3)
    assert verdict.passed
    assert check_prop_7_4(3, 128, 3).rhs == Fraction(484, 441)
    with pytest.raises(InputError):
        check_prop_7_4(3, 128, 1)


def test_small_dimensions_fail_the_nonsingular_tail():
    assert not check_prop_7_2(3, 30).passed


def test_skipped_slope_bounds():
    assert skipped_slope_bound('nonsingular')['tail_bound'] == Fraction(4, 3)
    assert skipped_slope_bound('multiquadratic')['tail_bound'] == \
        Fraction(9, 8)
    with pytest.raises(InputError):
        skipped_slope_bound('quartic')


def test_all_degree_tuples():
    tuples = sorted(d.degrees for d in all_degree_tuples(6, 2))
    assert tuples == [(2, 6), (3, 5), (4, 4)]
    with pytest.raises(InputError):
        list(all_degree_tuples(61, 3))


def test_almost_equal_is_worst_case():
    result = worst_case_confirmation(2, 6, 2)
    assert result['tuples'] == 3
    assert result['max_tail'] == '16/9'
    assert result['pass']
    assert worst_case_confirmation(3, 30, 5)['pass']


def test_scan_rows():
    rows = scan(3, 96, 98)
    assert sorted(rows) == [96, 97, 98]
    assert rows[96]['prop_7_2']['pass']
    assert sorted(rows[96]['prop_7_4']) == ['2', '3']
