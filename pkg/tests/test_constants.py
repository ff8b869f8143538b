from fractions import Fraction

import pytest

from src.constants import (DegreeTuple, admissible_interval,
                           almost_equal_degrees, closed_form_7_2,
                           closed_form_7_4, epsilon, gamma, mq1_rank,
                           mq2_rank, prop_7_2_threshold, prop_7_4_threshold,
                           remark_audit, rho, singular_locus_codim_target,
                           thresholds)
from src.errors import InputError


@pytest.mark.parametrize('k, expected', [(1, 1), (2, 2), (3, 3), (4, 4),
                                         (5, 4), (8, 6), (10, 8)])
def test_epsilon_known_values(k, expected):
    assert epsilon(k) == expected


def test_epsilon_is_least_exponent():
    for k in range(1, 31):
        a = epsilon(k)
        step = Fraction(k + 1, k)
        assert step ** a >= 2
        assert a == 1 or step ** (a - 1) < 2
    with pytest.raises(InputError):
        epsilon(0)


def test_thresholds_at_three_equations():
    t = thresholds(3)
    assert (t.epsilon_k, t.rho_k, t.c_F, t.c_T, t.m_star, t.mq2_rank) == \
        (3, 123, 18, 16, 9, 125)
    assert rho(3) == 123
    assert mq2_rank(3) == 125
    assert t.mq1_rank(2) == mq1_rank(3, 2) == 21
    assert t.m_star_upper(2) == 5
    assert t.m_star_upper(3) == 4
    assert t.to_json()['mq1_rank'] == {'1': 19, '2': 21, '3': 23}
    with pytest.raises(InputError):
        thresholds(2)


def test_gamma_at_and_below_rho():
    assert gamma(123, 3) == 126
    assert gamma(125, 3) == 125 - 3 + 5 + 6
    with pytest.raises(InputError) as e:
        gamma(122, 3)
    assert 'ρ(k)' in str(e.value)


def test_almost_equal_degrees():
    assert almost_equal_degrees(96, 3).degrees == (33, 33, 33)
    assert almost_equal_degrees(128, 3).degrees == (43, 44, 44)
    assert almost_equal_degrees(7, 3).degrees == (3, 3, 4)
    for M in range(3, 40):
        d = almost_equal_degrees(M, 3)
        assert d.M == M and d.is_almost_equal()
    with pytest.raises(InputError):
        almost_equal_degrees(2, 3)


def test_degree_tuple_sorts_and_validates():
    d = DegreeTuple.of([5, 2, 3])
    assert d.degrees == (2, 3, 5)
    assert (d.k, d.M, d.k_at_least_3, d.product()) == (3, 7, 2, 30)
    assert not d.is_almost_equal()
    with pytest.raises(InputError):
        DegreeTuple.of([1, 3])
    with pytest.raises(InputError):
        DegreeTuple.of([])


def test_admissible_interval_and_codim_target():
    assert admissible_interval(3, 3, 16) == (9, 18)
    lo, hi = admissible_interval(3, 3, 4)
    assert lo > hi
    assert singular_locus_codim_target(3) == 8


def test_table_thresholds_fall_back_to_closed_forms():
    assert prop_7_2_threshold(3) == 96
    assert prop_7_2_threshold(6) == 300
    assert prop_7_4_threshold(7) == 477
    assert prop_7_4_threshold(8) == 584


def test_closed_forms():
    nonsingular = closed_form_7_2(3)
    assert nonsingular['M'] == 78
    assert nonsingular['bound'] == Fraction(2197, 1728)
    assert nonsingular['pass']
    for k in range(3, 21):
        assert closed_form_7_2(k)['pass']
        assert closed_form_7_4(k)['pass']


def test_remark_audit_flags_k10():
    audit = remark_audit(10)
    assert audit['epsilon'] == 8
    assert not audit['nonsingular_claim_holds']
    assert audit['flagged']
    assert not remark_audit(4)['flagged']
