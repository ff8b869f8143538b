import pytest

from src.errors import DeskScaleLimitError, InputError
from src.exact_arith import QQ_FIELD, Field, SparsePoly
from src.ideal_dimension import (EXACT_RATIONAL, MULTI_PRIME_AGREE,
                                 SINGLE_PRIME, DimensionEngine,
                                 monomial_dimension)


def _vars(n, field=QQ_FIELD):
    return [SparsePoly.variable(n, i, field) for i in range(n)]


def test_monomial_dimension():
    # x0 x1 and x2 in four variables: {x0 = x2 = 0} is a plane
    assert monomial_dimension([(1, 1, 0, 0), (0, 0, 1, 0)], 4) == 2
    assert monomial_dimension([(0, 0, 0)], 3) == -1
    assert monomial_dimension([], 3) == 3


def test_projective_dimensions(dimension_engine):
    x = _vars(4)
    assert dimension_engine.dimension([x[0], x[1]], 4).dimension == 1
    # a plane conic
    conic = x[0] * x[1] - x[2] * x[2]
    assert dimension_engine.dimension([conic, x[3]], 4).dimension == 1
    assert dimension_engine.dimension([conic, x[3], x[2]], 4).dimension == 0
    assert dimension_engine.dimension(x, 4).dimension == -1
    assert dimension_engine.dimension([], 4).dimension == 3


def test_single_prime_provenance(dimension_engine):
    x = _vars(3)
    result = dimension_engine.dimension([x[0] * x[1]], 3)
    assert result.confidence == SINGLE_PRIME
    assert result.prime_used == 32003
    assert result.monte_carlo
    assert dimension_engine.dimension([x[0]], 3, prime=101).prime_used == 101


def test_confirmation_votes(dimension_engine):
    x = _vars(3)
    result = dimension_engine.confirm([x[0] * x[1] + x[2] * x[2]], 3)
    assert result.confidence == MULTI_PRIME_AGREE
    assert result.dimension == 1
    assert sorted(result.per_prime) == [32003, 32009, 32027]


def test_exact_mode_uses_rationals():
    engine = DimensionEngine(exact=True)
    x = _vars(3)
    result = engine.dimension([x[0] - x[1]], 3)
    assert result.confidence == EXACT_RATIONAL
    assert result.prime_used is None
    assert not result.monte_carlo


def test_prime_dividing_a_denominator_is_skipped():
    engine = DimensionEngine(primes=(3, 5, 7))
    x = _vars(2)
    f = x[0].scale('1/3') + x[1]
    result = engine.dimension([f], 2)
    assert result.prime_used == 5
    assert result.dimension == 0


def test_polys_over_a_prime_field_keep_it(dimension_engine):
    x = _vars(3, Field.prime(7))
    result = dimension_engine.dimension([x[0] * 7 + x[1]], 3)
    assert result.prime_used == 7
    assert result.dimension == 1


def test_engine_limits():
    with pytest.raises(InputError):
        DimensionEngine(primes=())
    engine = DimensionEngine()
    x = SparsePoly.variable(30, 0)
    with pytest.raises(DeskScaleLimitError):
        engine.dimension([x], 30)
