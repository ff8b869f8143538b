import pytest

from conftest import load_fixture
from src.desk_instances import (POINTED_TYPES, biquadratic_point,
                                nonsingular_quadrics, pointed_instances,
                                quadratic_point, triquadratic_point)
from src.errors import InputError
from src.exact_arith import SparsePoly, poly_graded_parts
from src.singularity import (PointedTuple, classify, classify_batch, localize,
                             low_degree_part, marked_ci_level_check)


@pytest.mark.parametrize('name', sorted(POINTED_TYPES))
def test_pointed_fixtures(name, rank_engine):
    pt = PointedTuple.from_json(load_fixture('pointed', name))
    assert pt == pointed_instances()[name]
    report = classify(pt, engine=rank_engine)
    tangent = (None if report.tuple_rank_tangent is None
               else report.tuple_rank_tangent.rank)
    assert (report.l, report.rank, tangent) == POINTED_TYPES[name]
    assert len(report.tangent_basis) == pt.M + report.l


def test_nonsingular_point_is_vacuous(rank_engine):
    report = classify(nonsingular_quadrics(), engine=rank_engine)
    assert report.type_label() == 'non-singular'
    assert not report.singular
    assert report.mq1_pass
    assert report.mq2_pass is None
    assert report.to_json()['tuple_rank_def12'] is None


def test_quadratic_point_reduced_tuple(rank_engine):
    report = classify(quadratic_point(), engine=rank_engine)
    assert report.type_label() == '2^1'
    assert report.permutation == (1, 0)
    assert [c.to_string() for c in report.lambdas[1]] == ['0']
    # rank 2 against 2l + 4k + 2eps(k) - 1 = 2 + 8 + 4 - 1
    assert report.mq1.threshold == 13
    assert not report.mq1_pass
    assert report.mq1.reason == 'too_few_variables'


def test_dependent_linear_parts_are_reduced(rank_engine):
    # linear parts z0 and 2 z0: pivoting keeps the last one
    n = 5
    x = [SparsePoly.variable(n, i) for i in range(n)]
    f1 = x[0] * x[1] + x[2] * x[2]
    f2 = x[0] * x[1] * 2 + x[3] * x[4]
    pt = PointedTuple.of([2, 2], [f1, f2], [1, 0, 0, 0, 0])
    report = classify(pt, engine=rank_engine)
    assert report.l == 1
    assert report.permutation == (0, 1)
    assert [c.to_string() for c in report.lambdas[0]] == ['1/2']
    # f1* = z1^2 - z2 z3 / 2 has rank 3
    assert report.rank == 3


def test_multiquadratic_points(rank_engine):
    biq = classify(biquadratic_point(), engine=rank_engine)
    assert biq.type_label() == '2^2'
    assert biq.mq2 is not None
    assert biq.mq2_pass is False
    tri = classify(triquadratic_point(), k=3, engine=rank_engine)
    assert tri.l == 3
    assert tri.to_json()['type'] == '2^3'


def test_classify_batch(rank_engine):
    reports = classify_batch([quadratic_point(), triquadratic_point()],
                             rank_engine)
    assert [r.l for r in reports] == [1, 3]


def test_localize_moves_the_point_to_origin():
    pt = PointedTuple.of([2], [SparsePoly.from_terms(
        3, {(1, 1, 0): 1, (0, 0, 2): -1})], [2, 0, 0])
    f, = localize(pt)
    assert f.coefficient((0, 0)).is_zero()
    assert f.coefficient((1, 0)).to_string() == '1'


def test_low_degree_part_matches_graded_parts():
    pt = PointedTuple.of([2], [SparsePoly.from_terms(
        3, {(1, 1, 0): 1, (0, 0, 2): -1})], [2, 0, 0])
    f, = localize(pt)
    assert low_degree_part(f, 1) == poly_graded_parts(f)[1]
    assert low_degree_part(f, 2) == poly_graded_parts(f)[2]
    empty = low_degree_part(f, 0)
    assert empty.is_zero()
    assert empty.n_vars == f.n_vars

def test_input_errors():
    x = [SparsePoly.variable(3, i) for i in range(3)]
    conic = x[0] * x[1] - x[2] * x[2]
    with pytest.raises(InputError, match='off the variety'):
        PointedTuple.of([2], [conic], [1, 1, 0])
    with pytest.raises(InputError, match='projective'):
        PointedTuple.of([2], [conic], [0, 0])
    with pytest.raises(InputError, match='zero vector'):
        PointedTuple.of([2], [conic], [0, 0, 0])
    with pytest.raises(InputError, match='homogeneous'):
        PointedTuple.of([2], [conic + x[0]], [1, 0, 0])
    with pytest.raises(InputError, match='variables'):
        PointedTuple.of([3], [conic], [1, 0, 0])
    with pytest.raises(InputError):
        PointedTuple.from_json({'degrees': [2]})
    with pytest.raises(InputError):
        classify(quadratic_point(), k=3)


def test_marked_level_check(rank_engine):
    verdict = marked_ci_level_check(30, 3, 8, 3)
    assert verdict.c_ok and verdict.rank_ok and verdict.passed
    assert verdict.interval == (9, 10)
    verdict = marked_ci_level_check(12, 3, 8, 3)
    assert not verdict.rank_ok
    assert verdict.rank_threshold == 13
    assert not marked_ci_level_check(30, 3, 6, 3).c_ok
    report = classify(triquadratic_point(), engine=rank_engine)
    assert marked_ci_level_check(report, 3, 7, 3).rank == 2
    with pytest.raises(InputError):
        marked_ci_level_check(30, 1, 8, 3)
    with pytest.raises(InputError):
        marked_ci_level_check(classify(nonsingular_quadrics(),
                                       engine=rank_engine), 2, 8, 3)
