"""Small explicit instances: pointed tuples of every singularity type up to 2^3,
quadratic form tuples with rational minimizers and the three fibration cases.

They back the fixtures directory, the self test and the test suite.
"""
import random
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from src.exact_arith import QQ_FIELD, SparsePoly, SymMatrix
from src.quad_forms import QuadFormTuple
from src.rigidity_tracer import FibrationParams
from src.singularity import PointedTuple

# (coefficient, {variable: exponent})
Monomial = Tuple[int, Dict[int, int]]


def _poly(n_vars: int, monomials: Sequence[Monomial]) -> SparsePoly:
    terms = {}
    for coeff, powers in monomials:
        exps = [0] * n_vars
        for var, e in powers.items():
            exps[var] = e
        terms[tuple(exps)] = coeff
    return SparsePoly.from_terms(n_vars, terms, QQ_FIELD)


def _at_origin(degrees: Sequence[int],
               polys: Sequence[Sequence[Monomial]]) -> PointedTuple:
    n = sum(degrees) + 1
    point = [1] + [0] * (n - 1)
    return PointedTuple.of(degrees, [_poly(n, p) for p in polys], point)


def nonsingular_quadrics() -> PointedTuple:
    """x0x1 + x3^2, x0x2 + x4^2 at e0: type 2^0, squares on the tangent plane."""
    return _at_origin([2, 2], [[(1, {0: 1, 1: 1}), (1, {3: 2})],
                               [(1, {0: 1, 2: 1}), (1, {4: 2})]])


def quadratic_point() -> PointedTuple:
    """x0x1 + x2^2, x0x3^2 + x0x4^2 + x5^3 at e0: type 2^1, reduced rank 2."""
    return _at_origin([2, 3], [[(1, {0: 1, 1: 1}), (1, {2: 2})],
                               [(1, {0: 1, 3: 2}), (1, {0: 1, 4: 2}),
                                (1, {5: 3})]])


def biquadratic_point() -> PointedTuple:
    """Type 2^2: the dependent pair x3x4 + x5x6, x3x5 + x4x6 has rank 2."""
    return _at_origin([2, 2, 2], [[(1, {0: 1, 1: 1}), (1, {2: 2})],
                                  [(1, {3: 1, 4: 1}), (1, {5: 1, 6: 1})],
                                  [(1, {3: 1, 5: 1}), (1, {4: 1, 6: 1})]])


def triquadratic_point() -> PointedTuple:
    """x1x2, x3x4, x5x6 at e0: type 2^3, every combination has even rank."""
    return _at_origin([2, 2, 2], [[(1, {1: 1, 2: 1})],
                                  [(1, {3: 1, 4: 1})],
                                  [(1, {5: 1, 6: 1})]])


def quintic_point(repeat_square: bool = False) -> PointedTuple:
    """Three quintics x0^4 x_i + x0^3 x_{3+i}^2 in 16 variables, type 2^0.

    After dropping k + eps(k) + 3 = 9 members only the three squares are left.
    With <repeat_square> the second equation reuses the first square, which
    breaks regularity on every subspace.
    """
    polys = []
    for i in range(1, 4):
        square = 4 if repeat_square and i == 2 else 3 + i
        polys.append([(1, {0: 4, i: 1}), (1, {0: 3, square: 2})])
    return _at_origin([5, 5, 5], polys)


def pointed_instances() -> Dict[str, PointedTuple]:
    return {'type_2_0': nonsingular_quadrics(),
            'type_2_1': quadratic_point(),
            'type_2_2': biquadratic_point(),
            'type_2_3': triquadratic_point(),
            'quintic_regular': quintic_point(),
            'quintic_repeated_square': quintic_point(repeat_square=True)}


# Expected classification of every pointed instance: (l, rank, tangent rank).
POINTED_TYPES = {'type_2_0': (0, None, None),
                 'type_2_1': (1, 2, None),
                 'type_2_2': (2, 2, 1),
                 'type_2_3': (3, 2, 2),
                 'quintic_regular': (0, None, None),
                 'quintic_repeated_square': (0, None, None)}


def _unimodular(n: int, rng: random.Random) -> List[List[int]]:
    """Upper triangular with unit diagonal: invertible over QQ and every GF(p)."""
    return [[1 if i == j else (rng.randint(-2, 2) if j > i else 0)
             for j in range(n)] for i in range(n)]


def pencil_min_rank(a: Sequence[int], b: Sequence[int]) -> int:
    """Least rank of s diag(a) + t diag(b) for nonzero a_j: n minus the largest
    class of columns sharing the ratio -b_j / a_j."""
    counts: Dict[Fraction, int] = {}
    for x, y in zip(a, b):
        ratio = Fraction(-y, x)
        counts[ratio] = counts.get(ratio, 0) + 1
    return len(a) - max(counts.values())


def net_min_rank(columns: Sequence[Sequence[int]]) -> int:
    """Least rank of sum lambda_i diag(column_i) for three diagonal forms.

    A combination kills the columns orthogonal to lambda, so the minimum is n
    minus the most columns on one plane through the origin.
    """
    n = len(columns)
    nonzero = [c for c in columns if any(c)]
    zeros = n - len(nonzero)
    best = 0
    spanning_pair = False
    for i, u in enumerate(nonzero):
        for v in nonzero[i + 1:]:
            normal = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                      u[0] * v[1] - u[1] * v[0])
            if not any(normal):
                continue
            spanning_pair = True
            on_plane = sum(1 for w in nonzero
                           if sum(a * b for a, b in zip(normal, w)) == 0)
            best = max(best, zeros + on_plane)
    if not spanning_pair:
        # all columns on one line through the origin
        return 0
    return n - best


def constructed_tuples(seed: int = 101, count: int = 12
                       ) -> List[Tuple[str, QuadFormTuple, int]]:
    """Tuples whose least rank is attained at a rational lambda, with that rank.

    Diagonal pencils use a_j in [1, 5], b_j in [-5, 5] and diagonal nets use
    entries in [-2, 2]; at these sizes no two distinct ratios or planes
    collide modulo 101.  Each is hidden by a unimodular change of variables.
    """
    rng = random.Random(seed)
    out = []
    for index in range(count):
        n = rng.randint(2, 5)
        p = _unimodular(n, rng)
        if index % 2 == 0:
            a = [rng.randint(1, 5) for _ in range(n)]
            b = [rng.randint(-5, 5) for _ in range(n)]
            diagonals = [a, b]
            expected = pencil_min_rank(a, b)
        else:
            diagonals = [[rng.randint(-2, 2) for _ in range(n)]
                         for _ in range(3)]
            expected = net_min_rank(list(zip(*diagonals)))
        forms = [SymMatrix.diagonal(d, QQ_FIELD).congruent(p)
                 for d in diagonals]
        out.append(('constructed_' + str(index), QuadFormTuple.of(forms),
                    expected))
    return out


def random_tuples(seed: int, count: int = 50, max_n: int = 4
                  ) -> List[QuadFormTuple]:
    """Symmetric integer forms with entries in [-5, 5]."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        l = rng.choice((2, 3))
        n = rng.randint(2, max_n)
        forms = []
        for _ in range(l):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    rows[i][j] = rows[j][i] = rng.randint(-5, 5)
            forms.append(SymMatrix.from_rows(rows, QQ_FIELD))
        out.append(QuadFormTuple.of(forms))
    return out


def fibration_cases() -> Dict[str, FibrationParams]:
    """The three cases: below rho(3), rigid, and a transversal projection."""
    return {'below_rho': FibrationParams(1, ((1, 41), (1, 41), (1, 41))),
            'rigid': FibrationParams(1, ((1, 42), (1, 42), (1, 42))),
            'transversal': FibrationParams(5, ((1, 42), (1, 42), (1, 42)))}


def fixture_tuples() -> Dict[str, Tuple[QuadFormTuple, int]]:
    """Committed quadratic form tuples with their least rank."""
    hidden = [[1, 1, 0], [0, 1, 2], [0, 0, 1]]
    net = [SymMatrix.diagonal(d, QQ_FIELD).congruent(hidden)
           for d in ([1, 0, 1], [0, 1, 1], [1, 1, 0])]
    return {
        'pencil_distinct_ratios': (QuadFormTuple.of(
            [SymMatrix.diagonal([1, 2, 3]), SymMatrix.diagonal([1, 1, 1])]), 2),
        'pencil_repeated_ratio': (QuadFormTuple.of(
            [SymMatrix.diagonal([1, 2, 1, 1]),
             SymMatrix.diagonal([2, 4, -1, 3])]), 2),
        'net_hidden_diagonal': (QuadFormTuple.of(net), 1),
    }
