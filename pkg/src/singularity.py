"""Classification of a point of an explicit complete intersection.

A point o of F = {f_1 = ... = f_k = 0} is of type 2^l when exactly l of the
linear parts at o are linear combinations of the others.  The quadratic data
is the reduced tuple f*_{i,2} = f_{i,2} - sum_j lambda_{i,j} f_{j,2} over the
dependent indices, together with all quadratic parts restricted to the
tangent space T_oF.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.constants import (DegreeTuple, admissible_interval, mq1_rank,
                           mq2_rank)
from src.errors import InputError, InternalError
from src.exact_arith import (QQ_FIELD, ExactScalar, Field, Number, SparsePoly,
                             linear_form_vector, nullspace_basis, poly_graded_parts,
                             scalars, solve_combination, vector_rank)
from src.log_config import get_file_handler
from src.quad_forms import (QuadFormTuple, RankEngine, RankThresholdVerdict,
                            TupleRankResult, rank_at_least, restrict_tuple)

handler = get_file_handler('singularity.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)


@dataclass(frozen=True)
class PointedTuple:
    """Homogeneous f_1, ..., f_k in M + k + 1 variables and a point on F.

    Polynomials are kept in the order of the sorted degree tuple.

    === Attributes ===

    degrees: the degree tuple; M + k + 1 = number of variables.
    polys: f_i, homogeneous of degree d_i.
    point: projective coordinates, not all zero, with f_i(point) = 0.
    """
    degrees: DegreeTuple
    polys: Tuple[SparsePoly, ...]
    point: Tuple[ExactScalar, ...]

    @classmethod
    def of(cls, degrees: Sequence[int], polys: Sequence[SparsePoly],
           point: Sequence[Number]) -> 'PointedTuple':
        if len(degrees) != len(polys):
            raise InputError("got " + str(len(degrees)) + " degrees for "
                             + str(len(polys)) + " polynomials")
        if not polys:
            raise InputError("a pointed tuple needs k >= 1 polynomials")
        fld = polys[0].field
        n = sum(degrees) + 1
        for i, (d, f) in enumerate(zip(degrees, polys)):
            if f.field != fld:
                raise InputError("polynomials live over different fields")
            if f.n_vars != n:
                raise InputError("f_" + str(i + 1) + " has " + str(f.n_vars)
                                 + " variables, expected M + k + 1 = " + str(n))
            if f.is_zero() or not f.is_homogeneous(d):
                raise InputError("f_" + str(i + 1) + " is not homogeneous of "
                                 "degree " + str(d))
        if len(point) != n:
            raise InputError("point must be given in " + str(n) + " projective "
                             "coordinates; affine input is not accepted")
        coords = tuple(scalars(point, fld))
        if all(c.is_zero() for c in coords):
            raise InputError("the zero vector is not a projective point")
        for i, f in enumerate(polys):
            if not f.evaluate(coords).is_zero():
                raise InputError("point is off the variety: f_" + str(i + 1)
                                 + " does not vanish there")
        order = sorted(range(len(degrees)), key=lambda i: degrees[i])
        return cls(DegreeTuple.of(degrees), tuple(polys[i] for i in order),
                   coords)

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, Any]],
                  field: Field = QQ_FIELD) -> 'PointedTuple':
        if isinstance(data, str):
            data = json.loads(data)
        try:
            degrees = [int(d) for d in data['degrees']]
            polys = [SparsePoly.from_json(p, field) for p in data['polys']]
            point = [str(c) for c in data['point']]
        except (KeyError, TypeError, ValueError):
            raise InputError("pointed tuple needs 'degrees', 'polys' and "
                             "'point'")
        return cls.of(degrees, polys, point)

    def to_json(self) -> Dict[str, Any]:
        return {'degrees': self.degrees.to_json(),
                'polys': [f.to_json() for f in self.polys],
                'point': [c.to_string() for c in self.point]}

    @property
    def k(self) -> int:
        return self.degrees.k

    @property
    def M(self) -> int:
        return self.degrees.M

    @property
    def n_vars(self) -> int:
        return self.M + self.k + 1

    @property
    def field(self) -> Field:
        return self.polys[0].field


@dataclass(frozen=True)
class LocalChart:
    """Affine chart around the point.

    === Attributes ===

    chart_index: homogeneous coordinate set to 1.
    polys: f_i in the M + k affine coordinates z, vanishing at z = 0.
    """
    chart_index: int
    polys: Tuple[SparsePoly, ...]


def local_chart(pt: PointedTuple) -> LocalChart:
    c = next(i for i, v in enumerate(pt.point) if not v.is_zero())
    scale = pt.point[c].inverse()
    n_local = pt.n_vars - 1
    fld = pt.field
    images = []
    z = 0
    for i, v in enumerate(pt.point):
        if i == c:
            images.append(SparsePoly.constant(n_local, 1, fld))
            continue
        image = SparsePoly.variable(n_local, z, fld)
        if not v.is_zero():
            image = image + SparsePoly.constant(n_local, v * scale, fld)
        images.append(image)
        z += 1
    polys = tuple(f.compose(images) for f in pt.polys)
    for f in polys:
        if not f.coefficient((0,) * n_local).is_zero():
            raise InternalError("localized polynomial does not vanish at 0")
    return LocalChart(c, polys)


def localize(pt: PointedTuple) -> List[SparsePoly]:
    """Dehomogenize at the first nonzero coordinate and move the point to 0."""
    return list(local_chart(pt).polys)


def low_degree_part(f: SparsePoly, degree: int) -> SparsePoly:
    """The homogeneous component of f of the given degree."""
    part = poly_graded_parts(f).get(degree)
    return part if part is not None else SparsePoly.zero(f.n_vars, f.field)


@dataclass
class SingularityReport:
    """Classification of a point: type 2^l, both tuple ranks and verdicts.

    === Attributes ===

    k: number of equations.
    l: k minus the dimension of the span of the linear parts.
    permutation: dependent indices first, then the independent ones (0-based).
    lambdas: lambda_{i,j} for each dependent i, over the independent j.
    tuple_rank_def12: rank of the reduced tuple (f*_{i,2}), None when l = 0.
    tuple_rank_tangent: rank of every f_{i,2} restricted to T_oF, l >= 2 only.
    mq1: verdict against 2l + 4k + 2eps(k) - 1; vacuous pass when l = 0.
    mq2: verdict against 10k^2 + 8k + 2eps(k) + 5, None when l < 2.
    tangent_basis: basis of T_oF in the local coordinates.
    chart: the local chart the data was read from.
    """
    k: int
    l: int
    permutation: Tuple[int, ...]
    lambdas: Dict[int, List[ExactScalar]]
    tuple_rank_def12: Optional[TupleRankResult]
    tuple_rank_tangent: Optional[TupleRankResult]
    mq1: Optional[RankThresholdVerdict]
    mq2: Optional[RankThresholdVerdict]
    tangent_basis: List[List[ExactScalar]] = field(repr=False)
    chart: LocalChart = field(repr=False)

    @property
    def singular(self) -> bool:
        return self.l > 0

    @property
    def mq1_pass(self) -> bool:
        return self.l == 0 or self.mq1.passed

    @property
    def mq2_pass(self) -> Optional[bool]:
        if self.mq2 is None:
            return None
        return self.mq2.passed

    @property
    def rank(self) -> Optional[int]:
        if self.tuple_rank_def12 is None:
            return None
        return self.tuple_rank_def12.rank

    def type_label(self) -> str:
        return 'non-singular' if self.l == 0 else '2^' + str(self.l)

    def to_json(self) -> Dict[str, Any]:
        def rank_json(r: Optional[TupleRankResult]) -> Optional[Dict[str, Any]]:
            return None if r is None else r.to_json()

        return {
            'k': self.k,
            'l': self.l,
            'type': self.type_label(),
            'permutation': list(self.permutation),
            'lambdas': {str(i): [c.to_string() for c in row]
                        for i, row in self.lambdas.items()},
            'chart_index': self.chart.chart_index,
            'tuple_rank_def12': rank_json(self.tuple_rank_def12),
            'tuple_rank_tangent': rank_json(self.tuple_rank_tangent),
            'mq1_pass': self.mq1_pass,
            'mq1': None if self.mq1 is None else self.mq1.to_json(),
            'mq2_pass': self.mq2_pass,
            'mq2': None if self.mq2 is None else self.mq2.to_json(),
        }


def _independent_indices(vectors: Sequence[List[ExactScalar]],
                         fld: Field) -> List[int]:
    """Greedy pivoting from the last index down."""
    chosen: List[int] = []
    rows: List[List[ExactScalar]] = []
    for i in reversed(range(len(vectors))):
        if vector_rank(rows + [vectors[i]], fld) > len(rows):
            rows.append(vectors[i])
            chosen.append(i)
    return sorted(chosen)


def classify(pt: PointedTuple, k: Optional[int] = None,
             engine: Optional[RankEngine] = None) -> SingularityReport:
    if k is not None and k != pt.k:
        raise InputError("k = " + str(k) + " does not match the " + str(pt.k)
                         + " polynomials given")
    k = pt.k
    engine = engine or RankEngine()
    chart = local_chart(pt)
    fld = pt.field
    n_local = pt.n_vars - 1
    linear = [linear_form_vector(low_degree_part(f, 1)) for f in chart.polys]
    quadratic = [low_degree_part(f, 2) for f in chart.polys]

    independent = _independent_indices(linear, fld)
    dependent = [i for i in range(k) if i not in independent]
    l = len(dependent)
    if vector_rank(linear, fld) != k - l:
        raise InternalError("greedy pivoting disagrees with the rank of the "
                            "linear parts")
    basis = [linear[j] for j in independent]

    lambdas: Dict[int, List[ExactScalar]] = {}
    reduced: List[SparsePoly] = []
    for i in dependent:
        coeffs = solve_combination(linear[i], basis, fld)
        if coeffs is None:
            raise InternalError("linear part of f_" + str(i + 1)
                                + " is not in the span of the independent ones")
        lambdas[i] = coeffs
        star = quadratic[i]
        for c, j in zip(coeffs, independent):
            if not c.is_zero():
                star = star - quadratic[j].scale(c)
        reduced.append(star)

    tangent_basis = nullspace_basis(basis, n_local, fld) if basis else [
        [fld.one() if a == b else fld.zero() for a in range(n_local)]
        for b in range(n_local)]
    if len(tangent_basis) != pt.M + l:
        raise InternalError("tangent space has dimension "
                            + str(len(tangent_basis)) + ", expected M + l")

    rank_def12 = None
    rank_tangent = None
    mq1 = None
    mq2 = None
    if l >= 1:
        rank_def12 = engine.tuple_rank(QuadFormTuple.from_polys(reduced))
        mq1 = rank_at_least(rank_def12.rank, n_local, mq1_rank(k, l))
    if l >= 2:
        tangent_tuple = restrict_tuple(QuadFormTuple.from_polys(quadratic),
                                       tangent_basis)
        rank_tangent = engine.tuple_rank(tangent_tuple)
        mq2 = rank_at_least(rank_tangent.rank, len(tangent_basis), mq2_rank(k))
    report = SingularityReport(k=k, l=l,
                               permutation=tuple(dependent + independent),
                               lambdas=lambdas,
                               tuple_rank_def12=rank_def12,
                               tuple_rank_tangent=rank_tangent,
                               mq1=mq1, mq2=mq2,
                               tangent_basis=tangent_basis, chart=chart)
    logger.info('classified point: type %s, ranks %s / %s',
                report.type_label(), report.rank,
                None if rank_tangent is None else rank_tangent.rank)
    return report


def classify_batch(points: Sequence[PointedTuple],
                   engine: Optional[RankEngine] = None) -> List[SingularityReport]:
    engine = engine or RankEngine()
    return [classify(pt, engine=engine) for pt in points]


@dataclass(frozen=True)
class LevelVerdict:
    """Numeric conditions on a marked complete intersection of level l_X.

    === Attributes ===

    passed: both conditions hold.
    c_ok: c_X >= l_X + 4.
    rank_ok: rank >= 2l_X + c_X - 1.
    interval: the admissible dimensions [lo, hi]; empty when lo > hi.
    """
    passed: bool
    c_ok: bool
    rank_ok: bool
    rank: int
    rank_threshold: int
    interval: Tuple[int, int]

    @property
    def interval_empty(self) -> bool:
        return self.interval[0] > self.interval[1]

    def to_json(self) -> Dict[str, Any]:
        return {'pass': self.passed, 'c_ok': self.c_ok,
                'rank_ok': self.rank_ok, 'rank': self.rank,
                'rank_threshold': self.rank_threshold,
                'interval': list(self.interval),
                'interval_empty': self.interval_empty}


def marked_ci_level_check(report: Union[SingularityReport, int], l_X: int,
                          c_X: int, k: int) -> LevelVerdict:
    """Check c_X >= l_X + 4 and rk >= 2l_X + c_X - 1 for a point of level l_X.

    <report> is either a classification or the rank itself.
    """
    if not 2 <= l_X <= k:
        raise InputError("l_X must lie in [2, k], got " + str(l_X),
                         source="2 <= l_X <= k")
    if isinstance(report, SingularityReport):
        if report.rank is None:
            raise InputError("a non-singular point has no level rank")
        rank = report.rank
    else:
        rank = int(report)
    threshold = 2 * l_X + c_X - 1
    c_ok = c_X >= l_X + 4
    rank_ok = rank >= threshold
    return LevelVerdict(c_ok and rank_ok, c_ok, rank_ok, rank, threshold,
                        admissible_interval(k, l_X, c_X))
