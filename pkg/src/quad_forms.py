"""Rank of tuples of quadratic forms and quadric complete intersection checks.

The rank of a tuple (q_1, ..., q_l) is the least rank of a nonzero combination
sum lambda_i q_i over the algebraic closure.  It is at most r exactly when all
(r+1)-minors of the generic combination have a common nonzero zero in lambda.
No roots are ever computed: for pencils a nonconstant gcd of the minors is the
certificate, for larger tuples a positive-dimensional minor ideal.
"""
import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyRing

from src.errors import InputError
from src.exact_arith import (QQ_FIELD, Field, Number, SparsePoly, SymMatrix,
                             binomial, matrix_rank, quadratic_form_matrix,
                             scalars, vector_rank)
from src.global_constants import CONFIRMATION_PRIMES, ORACLE_PRIME
from src.ideal_dimension import (EXACT_RATIONAL, MULTI_PRIME_AGREE, SINGLE_PRIME,
                                 DimensionEngine, IdealDimResult)
from src.log_config import get_file_handler

handler = get_file_handler('quad_forms.log')

GCD_OF_MINORS = 'gcd_of_minors'
MINOR_IDEAL = 'minor_ideal'
SINGLE_FORM = 'single_form'
MONTE_CARLO = 'monte-carlo'


@dataclass(frozen=True)
class QuadFormTuple:
    """An ordered tuple of l >= 1 quadratic forms in n variables.

    === Attributes ===

    n: number of variables.
    forms: symmetric matrices, all n x n over one field.
    """
    n: int
    forms: Tuple[SymMatrix, ...]

    def __post_init__(self) -> None:
        if not self.forms:
            raise InputError("a quadratic form tuple needs l >= 1 forms")
        fields = {q.field for q in self.forms}
        if len(fields) != 1:
            raise InputError("forms live over different fields")
        if any(q.n != self.n for q in self.forms):
            raise InputError("all forms must be " + str(self.n) + " x "
                             + str(self.n))

    @classmethod
    def of(cls, forms: Sequence[SymMatrix]) -> 'QuadFormTuple':
        forms = tuple(forms)
        if not forms:
            raise InputError("a quadratic form tuple needs l >= 1 forms")
        return cls(forms[0].n, forms)

    @classmethod
    def from_polys(cls, polys: Sequence[SparsePoly]) -> 'QuadFormTuple':
        return cls.of([quadratic_form_matrix(f) for f in polys])

    @classmethod
    def from_json(cls, data: Any, field: Field = QQ_FIELD) -> 'QuadFormTuple':
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            data = data.get('forms')
        if not isinstance(data, list):
            raise InputError("forms file must hold a list of matrices")
        return cls.of([SymMatrix.from_json(rows, field) for rows in data])

    def to_json(self) -> Dict[str, Any]:
        return {'forms': [q.to_json() for q in self.forms]}

    @property
    def l(self) -> int:
        return len(self.forms)

    @property
    def field(self) -> Field:
        return self.forms[0].field

    def combination(self, lambdas: Sequence[Number]) -> SymMatrix:
        coeffs = scalars(lambdas, self.field)
        total = SymMatrix.zero(self.n, self.field)
        for c, q in zip(coeffs, self.forms):
            if not c.is_zero():
                total = total + q.scale(c)
        return total

    def to_field(self, field: Field) -> 'QuadFormTuple':
        return QuadFormTuple.of([q.to_field(field) for q in self.forms])

    def mix(self, matrix: Sequence[Sequence[Number]]) -> 'QuadFormTuple':
        """Replace the tuple by the combinations given by the rows of <matrix>."""
        return QuadFormTuple.of([self.combination(row) for row in matrix])


def restrict_tuple(t: QuadFormTuple,
                   basis: Sequence[Sequence[Number]]) -> QuadFormTuple:
    """Restrict every form to the span of <basis> (vectors of length n)."""
    rows = [scalars(v, t.field) for v in basis]
    if not rows or any(len(v) != t.n for v in rows):
        raise InputError("basis vectors must have length " + str(t.n))
    if vector_rank(rows, t.field) != len(rows):
        raise InputError("degenerate subspace")
    a = [[rows[j][i] for j in range(len(rows))] for i in range(t.n)]
    return QuadFormTuple.of([q.congruent(a) for q in t.forms])


@dataclass(frozen=True)
class TupleRankResult:
    """A tuple rank with the method and confidence behind it."""
    rank: int
    method: str
    confidence: str
    tags: Tuple[str, ...] = ()
    dimension_checks: Tuple[IdealDimResult, ...] = field(default=(),
                                                          compare=False)

    def to_json(self) -> Dict[str, Any]:
        return {'rank': self.rank, 'method': self.method,
                'confidence': self.confidence, 'tags': list(self.tags)}


class RankEngine:
    """Computes exact tuple ranks.

    === Attributes ===

    dimension_engine: decides emptiness of minor ideals for l >= 3.
    """
    dimension_engine: DimensionEngine

    def __init__(self, dimension_engine: Optional[DimensionEngine] = None) -> None:
        self.logger = logging.getLogger('Tuple Rank Engine')
        self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG)
        if dimension_engine is None:
            dimension_engine = DimensionEngine(CONFIRMATION_PRIMES)
        self.dimension_engine = dimension_engine

    def tuple_rank(self, t: QuadFormTuple) -> TupleRankResult:
        member_ranks = [matrix_rank(q) for q in t.forms]
        upper = min(member_ranks)
        if t.l == 1:
            return TupleRankResult(upper, SINGLE_FORM, _exact_tag(t.field))
        checks: List[IdealDimResult] = []
        for r in range(upper):
            if t.l == 2:
                hit = self._pencil_drops_to(t, r)
            else:
                hit, result = self._tuple_drops_to(t, r)
                if result is not None:
                    checks.append(result)
            if hit:
                upper = r
                break
        if t.l == 2:
            return TupleRankResult(upper, GCD_OF_MINORS, _exact_tag(t.field))
        confidences = {c.confidence for c in checks}
        confidence = _exact_tag(t.field)
        if SINGLE_PRIME in confidences:
            confidence = SINGLE_PRIME
        elif MULTI_PRIME_AGREE in confidences:
            confidence = MULTI_PRIME_AGREE
        tags = (MONTE_CARLO,) if confidence != EXACT_RATIONAL else ()
        return TupleRankResult(upper, MINOR_IDEAL, confidence, tags,
                               tuple(checks))

    def _pencil_drops_to(self, t: QuadFormTuple, r: int) -> bool:
        """Does some (l0:l1) give rank <= r for l0 q0 + l1 q1?"""
        q0, q1 = t.forms
        if matrix_rank(q0) <= r:
            return True
        ring = PolyRing('t', t.field.domain, lex)
        var = ring.gens[0]
        pencil = [[var * t.field.to_domain(q0[i, j]) + t.field.to_domain(q1[i, j])
                   for j in range(t.n)] for i in range(t.n)]
        common = None
        count = 0
        for rows, cols in _symmetric_minor_indices(t.n, r + 1):
            minor = _minor(pencil, rows, cols, ring)
            count += 1
            if not minor:
                continue
            common = minor if common is None else common.gcd(minor)
            if common.degree() <= 0:
                self.logger.debug('pencil rank > %d after %d minors', r, count)
                return False
        self.logger.debug('pencil rank <= %d: minor gcd %s', r, common)
        return True

    def _tuple_drops_to(self, t: QuadFormTuple,
                        r: int) -> Tuple[bool, Optional[IdealDimResult]]:
        """Do the (r+1)-minors in lambda share a nonzero zero?"""
        for q in t.forms:
            if matrix_rank(q) <= r:
                return True, None
        l = t.l
        ring = PolyRing(','.join('x' + str(i) for i in range(l)),
                        t.field.domain, grevlex)
        gens = ring.gens
        pencil = [[sum((gens[k] * t.field.to_domain(t.forms[k][i, j])
                        for k in range(l)), ring.zero)
                   for j in range(t.n)] for i in range(t.n)]
        full = binomial(r + l, l - 1)
        span: Dict[Tuple[int, ...], Any] = {}
        for rows, cols in _symmetric_minor_indices(t.n, r + 1):
            minor = _minor(pencil, rows, cols, ring)
            while minor and minor.LM in span:
                minor = minor - span[minor.LM] * minor.LC
            if minor:
                span[minor.LM] = minor.monic()
                if len(span) == full:
                    self.logger.debug('minors of size %d span every form '
                                      'of degree %d', r + 1, r + 1)
                    return False, None
        if not span:
            return True, None
        polys = [SparsePoly(g, t.field) for g in span.values()]
        result = self.dimension_engine.confirm(polys, l)
        self.logger.debug('minor ideal for rank <= %d: %d generators, '
                          'projective dimension %d (%s)', r, len(polys),
                          result.dimension, result.confidence)
        return result.dimension >= 0, result


def _exact_tag(fld: Field) -> str:
    return EXACT_RATIONAL if fld.is_rational else SINGLE_PRIME


def _symmetric_minor_indices(n: int, size: int):
    """Row/column index pairs (I, J) with I <= J; symmetry covers the rest."""
    subsets = list(itertools.combinations(range(n), size))
    for a, rows in enumerate(subsets):
        for cols in subsets[a:]:
            yield rows, cols


def _minor(matrix: List[List[Any]], rows: Sequence[int], cols: Sequence[int],
           ring: PolyRing) -> Any:
    size = len(rows)
    data = [[matrix[i][j] for j in cols] for i in rows]
    return DomainMatrix(data, (size, size), ring.to_domain()).det()


_default_engine: Optional[RankEngine] = None


def _engine() -> RankEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = RankEngine()
    return _default_engine


def tuple_rank(t: QuadFormTuple, engine: Optional[RankEngine] = None) -> int:
    """Minimum rank of a nonzero combination over the algebraic closure."""
    return (engine or _engine()).tuple_rank(t).rank


def brute_force_tuple_rank(t: QuadFormTuple, p: int = ORACLE_PRIME
                           ) -> Tuple[int, Tuple[int, ...]]:
    """Minimum rank over every projective GF(p) point lambda, with a minimizer."""
    fld = Field.prime(p)
    reduced = t.to_field(fld)
    best: Optional[Tuple[int, Tuple[int, ...]]] = None
    for lead in range(t.l):
        for tail in itertools.product(range(p), repeat=t.l - lead - 1):
            lambdas = (0,) * lead + (1,) + tail
            rank = matrix_rank(reduced.combination(lambdas))
            if best is None or rank < best[0]:
                best = (rank, lambdas)
                if rank == 0:
                    return best
    return best


@dataclass(frozen=True)
class RankThresholdVerdict:
    """Whether a tuple rank reaches a threshold.

    reason is 'rank' for an ordinary comparison and 'too_few_variables' when
    the ambient space alone rules the threshold out.
    """
    passed: bool
    rank: int
    threshold: int
    reason: str

    def to_json(self) -> Dict[str, Any]:
        return {'pass': self.passed, 'rank': self.rank,
                'threshold': self.threshold, 'reason': self.reason}


def rank_at_least(rank: int, n: int, threshold: int) -> RankThresholdVerdict:
    if n < threshold:
        return RankThresholdVerdict(False, rank, threshold, 'too_few_variables')
    return RankThresholdVerdict(rank >= threshold, rank, threshold, 'rank')


@dataclass(frozen=True)
class QuadricCIReport:
    """Sufficient criteria for a complete intersection of l quadrics.

    === Attributes ===

    l: number of quadrics.
    tuple_rank: rank of the tuple.
    irreducible_factorial: tuple_rank >= 2l + 3.
    codim_sing_lower: largest e >= 0 with tuple_rank >= 2l + e - 1.
    terminal_ok: tuple_rank >= 3l + 1.
    """
    l: int
    tuple_rank: int
    irreducible_factorial: bool
    codim_sing_lower: int
    terminal_ok: bool

    @classmethod
    def from_rank(cls, l: int, rank: int) -> 'QuadricCIReport':
        return cls(l=l,
                   tuple_rank=rank,
                   irreducible_factorial=rank >= 2 * l + 3,
                   codim_sing_lower=max(rank - 2 * l + 1, 0),
                   terminal_ok=rank >= 3 * l + 1)

    def to_json(self) -> Dict[str, Any]:
        return {'l': self.l, 'tuple_rank': self.tuple_rank,
                'irreducible_factorial': self.irreducible_factorial,
                'codim_sing_lower': self.codim_sing_lower,
                'terminal_ok': self.terminal_ok}


def quadric_ci_report(t: QuadFormTuple,
                      engine: Optional[RankEngine] = None) -> QuadricCIReport:
    return QuadricCIReport.from_rank(t.l, tuple_rank(t, engine))


def rank_after_hyperplane_bounds(r: int) -> Tuple[int, int]:
    """Possible ranks of a form of rank r restricted to a hyperplane."""
    if r < 0:
        raise InputError("rank must be non-negative")
    return max(r - 2, 0), r


def nearby_point_rank_bound(r: int, l: int, b: int) -> int:
    """Rank lower bound at a nearby point of type 2^b, b <= l, when r >= 2l."""
    if not 0 <= b <= l:
        raise InputError("nearby type must satisfy 0 <= b <= l")
    if r < 2 * l:
        raise InputError("nearby-point bound needs rank >= 2l",
                         source="rk >= 2l")
    return r - 2 * (l - b)


@dataclass(frozen=True)
class SingularityTypeProfile:
    """Lower rank bounds (r_1, ..., r_k) for singularities of type 2^1 .. 2^k.

    A profile is admissible when r_1 >= 5 and r_{i+1} >= r_i + 2.
    """
    ranks: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.ranks:
            raise InputError("empty singularity type profile")

    @property
    def k(self) -> int:
        return len(self.ranks)

    def is_admissible(self) -> bool:
        if self.ranks[0] < 5:
            return False
        return all(b >= a + 2 for a, b in zip(self.ranks, self.ranks[1:]))

    def blowup_stable(self) -> bool:
        """r_k - 2(k - l) >= r_l for every l."""
        top = self.ranks[-1]
        return all(top - 2 * (self.k - l) >= self.ranks[l - 1]
                   for l in range(1, self.k + 1))

    def terminal(self) -> bool:
        return all(r >= 3 * l + 1 for l, r in enumerate(self.ranks, start=1))

    def to_json(self) -> Dict[str, Any]:
        return {'ranks': list(self.ranks), 'admissible': self.is_admissible(),
                'blowup_stable': self.blowup_stable(),
                'terminal': self.terminal()}
