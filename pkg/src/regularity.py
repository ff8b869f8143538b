"""Regular-sequence conditions on the components of f at a point.

The members of the sequence are the components f_{i,j}, j >= 2, restricted to
the tangent space T_oF and ordered by (j, i).  A homogeneous sequence is
regular exactly when every prefix of length t cuts a zero set of projective
codimension t, which is read off a Groebner basis over a prime field.

Conditions quantified over all linear subspaces are checked on sampled
subspaces: a failing subspace is a certificate, passing ones are evidence.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.constants import epsilon
from src.errors import DeskScaleLimitError, InputError, InternalError
from src.exact_arith import (QQ_FIELD, Field, Number, SparsePoly,
                             poly_graded_parts,
                             restrict_to_subspace, scalars, vector_rank)
from src.global_constants import (CONFIRMATION_PRIMES, DEFAULT_PRIME,
                                  DEFAULT_SAMPLES, DESK_MAX_DEGREE_SUM,
                                  DESK_MAX_VARS, SUBSPACE_COEFF_RANGE)
from src.ideal_dimension import (EXACT_RATIONAL, MULTI_PRIME_AGREE,
                                 SINGLE_PRIME, DimensionEngine, IdealDimResult)
from src.log_config import get_file_handler
from src.quad_forms import QuadFormTuple, RankEngine, quadric_ci_report
from src.singularity import PointedTuple, SingularityReport, classify

handler = get_file_handler('regularity.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)

VIOLATED = 'violated'
NO_COUNTEREXAMPLE = 'no_counterexample'
VACUOUS = 'vacuous'
INCONCLUSIVE = 'inconclusive'

__all__ = ['ComponentSequence', 'IdealDimResult', 'RegularityVerdict',
           'SubspaceSampler', 'SampleResult', 'SampledVerdict',
           'build_sequence', 'is_regular_sequence', 'ideal_dimension',
           'confirm_dimension', 'check_R1', 'check_R2', 'check_R3_2',
           'check_R3_1', 'check_condition']


def ideal_dimension(polys: Sequence[SparsePoly], n_vars: int,
                    field: Optional[Field] = None) -> IdealDimResult:
    """Projective dimension of V(polys) over <field> (a prime by default)."""
    engine = DimensionEngine()
    if field is None:
        return engine.dimension(polys, n_vars, DEFAULT_PRIME)
    if field.is_rational:
        return IdealDimResult(engine.projective_dimension(polys, n_vars, field),
                              None, EXACT_RATIONAL)
    d = engine.projective_dimension(polys, n_vars, field)
    return IdealDimResult(d, field.characteristic, SINGLE_PRIME,
                          {field.characteristic: d})


def confirm_dimension(polys: Sequence[SparsePoly], n_vars: int,
                      primes: Sequence[int] = CONFIRMATION_PRIMES
                      ) -> IdealDimResult:
    return DimensionEngine(primes).confirm(polys, n_vars)


@dataclass(frozen=True)
class ComponentSequence:
    """Homogeneous members on one projective space, in (degree, index) order.

    === Attributes ===

    members: the restricted components.
    keys: (j, i) per member: degree j and 1-based polynomial index i.
    n_vars: variables of the ambient space (projective dimension + 1).
    """
    members: Tuple[SparsePoly, ...]
    keys: Tuple[Tuple[int, int], ...]
    n_vars: int

    def __post_init__(self) -> None:
        if len(self.members) != len(self.keys):
            raise InputError("every member needs a (j, i) key")
        if list(self.keys) != sorted(self.keys):
            raise InputError("members are not in (degree, index) order")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def ambient_proj_dim(self) -> int:
        return self.n_vars - 1

    def truncate(self, m: int) -> 'ComponentSequence':
        """The sequence with its last m members removed."""
        if m < 0:
            raise InputError("truncation must be non-negative")
        keep = max(len(self) - m, 0)
        return ComponentSequence(self.members[:keep], self.keys[:keep],
                                 self.n_vars)

    def restrict(self, basis: Sequence[Sequence[Number]]) -> 'ComponentSequence':
        """Restrict every member to the linear span of <basis>."""
        members = tuple(restrict_to_subspace(h, basis) for h in self.members)
        return ComponentSequence(members, self.keys, len(basis))


def _check_desk_scale(pt: PointedTuple) -> None:
    if pt.M > DESK_MAX_DEGREE_SUM:
        raise DeskScaleLimitError("desk-scale limit: sum of (d_i - 1) = "
                                  + str(pt.M) + " > " + str(DESK_MAX_DEGREE_SUM))
    if pt.n_vars > DESK_MAX_VARS:
        raise DeskScaleLimitError("desk-scale limit: " + str(pt.n_vars)
                                  + " variables > " + str(DESK_MAX_VARS))


def build_sequence(pt: PointedTuple,
                   report: Optional[SingularityReport] = None
                   ) -> ComponentSequence:
    """Components f_{i,j}, j >= 2, restricted to T_oF, in (j, i) order."""
    _check_desk_scale(pt)
    if report is None:
        report = classify(pt)
    basis = report.tangent_basis
    entries = []
    for i, f in enumerate(report.chart.polys, start=1):
        parts = poly_graded_parts(f)
        for j in range(2, pt.degrees.degrees[i - 1] + 1):
            part = parts.get(j, SparsePoly.zero(f.n_vars, f.field))
            entries.append(((j, i), restrict_to_subspace(part, basis)))
    entries.sort(key=lambda e: e[0])
    if len(entries) != pt.M:
        raise InputError("sequence has " + str(len(entries))
                         + " members, expected M = " + str(pt.M))
    return ComponentSequence(tuple(h for _, h in entries),
                             tuple(key for key, _ in entries), len(basis))


@dataclass(frozen=True)
class RegularityVerdict:
    """Outcome of a regular-sequence test.

    first_failure is the 1-based index of the first prefix whose zero set is
    too big, None when the sequence is regular.
    """
    regular: bool
    first_failure: Optional[int]
    dimension: Optional[IdealDimResult]
    expected_dimension: int

    def to_json(self) -> Dict[str, Any]:
        return {'regular': self.regular, 'first_failure': self.first_failure,
                'dimension': None if self.dimension is None
                else self.dimension.to_json(),
                'expected_dimension': self.expected_dimension}


def is_regular_sequence(seq: ComponentSequence, ambient_proj_dim: int,
                        engine: Optional[DimensionEngine] = None,
                        prime: Optional[int] = None,
                        confirm: bool = False) -> RegularityVerdict:
    """Regular iff every prefix of length t has projective dimension ambient - t.

    A homogeneous sequence is regular when the whole of it has the expected
    codimension, so the prefixes are only scanned to locate a failure.
    """
    engine = engine or DimensionEngine()
    n_vars = ambient_proj_dim + 1
    if n_vars != seq.n_vars:
        raise InputError("sequence lives in " + str(seq.n_vars)
                         + " variables, ambient has " + str(n_vars))
    for t, h in enumerate(seq.members, start=1):
        if h.is_zero():
            logger.info('member %d %s is zero', t, seq.keys[t - 1])
            return RegularityVerdict(False, t, None, ambient_proj_dim - t)
    if len(seq) == 0:
        return RegularityVerdict(True, None, None, ambient_proj_dim)

    def dim_of(t: int) -> IdealDimResult:
        prefix = seq.members[:t]
        if confirm:
            return engine.confirm(prefix, n_vars)
        return engine.dimension(prefix, n_vars, prime)

    full = len(seq)
    if full <= n_vars:
        result = dim_of(full)
        if result.dimension == ambient_proj_dim - full:
            return RegularityVerdict(True, None, result, ambient_proj_dim - full)
    for t in range(1, full + 1):
        expected = ambient_proj_dim - t
        if expected < -1:
            return RegularityVerdict(False, t, None, expected)
        result = dim_of(t)
        if result.dimension != expected:
            return RegularityVerdict(False, t, result, expected)
    raise InternalError("prefix scan found no failure although the full "
                        "sequence failed; dimension engine is unstable")


class SubspaceSampler:
    """Seeded random linear subspaces with small integer coefficients.

    === Attributes ===

    seed: echoed in every report.
    coeff_range: inclusive bounds of the basis coefficients.
    """
    seed: int
    coeff_range: Tuple[int, int]

    def __init__(self, seed: int = 0,
                 coeff_range: Tuple[int, int] = SUBSPACE_COEFF_RANGE) -> None:
        self.seed = seed
        self.coeff_range = coeff_range
        self._random = random.Random(seed)

    def subspace(self, dim: int, codim: int) -> List[List[int]]:
        """Basis of a random subspace of codimension <codim> in a <dim>-space."""
        target = dim - codim
        if target < 1 or codim < 0:
            raise InputError("cannot take a codimension " + str(codim)
                             + " subspace of a " + str(dim) + "-dimensional space")
        low, high = self.coeff_range
        while True:
            basis = [[self._random.randint(low, high) for _ in range(dim)]
                     for _ in range(target)]
            if vector_rank([scalars(v, QQ_FIELD) for v in basis],
                           QQ_FIELD) == target:
                return basis


@dataclass
class SampleResult:
    """One tested subspace: its basis and what the test found there."""
    index: int
    basis: List[List[str]]
    regular: bool
    first_failure: Optional[int]
    dimension: Optional[int]
    expected_dimension: int
    confidence: Optional[str]
    supplied: bool = False

    def to_json(self) -> Dict[str, Any]:
        return {'index': self.index, 'basis': self.basis,
                'regular': self.regular, 'first_failure': self.first_failure,
                'dimension': self.dimension,
                'expected_dimension': self.expected_dimension,
                'confidence': self.confidence, 'supplied': self.supplied}


@dataclass
class SampledVerdict:
    """Verdict of a condition quantified over subspaces.

    === Attributes ===

    condition: R1, R2, R3.1 or R3.2.
    verdict: violated, no_counterexample, vacuous or inconclusive.
    samples: number of subspaces tested.
    seed: sampler seed.
    prime: prime the dimensions were computed over.
    per_sample: every tested subspace.
    first_failure: index of the first failing subspace, if any.
    parameters: codimension, truncation and expected dimensions used.
    notes: statements on what the verdict does not certify.
    """
    condition: str
    verdict: str
    samples: int
    seed: int
    prime: Optional[int]
    per_sample: List[SampleResult] = field(default_factory=list)
    first_failure: Optional[int] = None
    parameters: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def summary(self) -> str:
        if self.verdict == VACUOUS:
            return 'vacuous, 0 samples'
        if self.verdict == NO_COUNTEREXAMPLE:
            return 'no counterexample in ' + str(self.samples) + ' samples'
        if self.verdict == VIOLATED:
            return 'violated at sample ' + str(self.first_failure)
        return 'inconclusive'

    def to_json(self) -> Dict[str, Any]:
        return {'condition': self.condition, 'verdict': self.verdict,
                'summary': self.summary(), 'samples': self.samples,
                'seed': self.seed, 'prime': self.prime,
                'first_failure': self.first_failure,
                'parameters': self.parameters, 'notes': self.notes,
                'per_sample': [s.to_json() for s in self.per_sample]}


def _fold(condition: str, results: List[SampleResult], uncertain: bool,
          sampler: SubspaceSampler, prime: Optional[int],
          parameters: Dict[str, Any]) -> SampledVerdict:
    failures = [r.index for r in results if not r.regular]
    if failures:
        verdict = INCONCLUSIVE if uncertain else VIOLATED
    elif results:
        verdict = NO_COUNTEREXAMPLE
    else:
        verdict = VACUOUS
    logger.info('%s: %s over %d samples (seed %d)', condition, verdict,
                len(results), sampler.seed)
    return SampledVerdict(condition, verdict, len(results), sampler.seed, prime,
                          results, failures[0] if failures else None,
                          parameters)


def _subspaces(sampler: SubspaceSampler, dim: int, codim: int, samples: int,
               subspaces: Optional[Sequence[Sequence[Sequence[Number]]]]
               ) -> List[Tuple[List[List[Any]], bool]]:
    chosen = []
    for basis in subspaces or []:
        if any(len(v) != dim for v in basis) or len(basis) != dim - codim:
            raise InputError("supplied subspace must have " + str(dim - codim)
                             + " basis vectors of length " + str(dim))
        chosen.append(([list(v) for v in basis], True))
    for _ in range(samples):
        chosen.append((sampler.subspace(dim, codim), False))
    return chosen


def _basis_strings(basis: List[List[Any]]) -> List[List[str]]:
    return [[str(c) for c in v] for v in basis]


def _failure_is_certain(result: RegularityVerdict,
                        engine: DimensionEngine, seq: ComponentSequence) -> bool:
    """A failure over one prime stands once the other primes agree with it."""
    if result.dimension is None:
        return True
    if result.dimension.confidence in (EXACT_RATIONAL, MULTI_PRIME_AGREE):
        return True
    t = result.first_failure
    confirmed = engine.confirm(seq.members[:t], seq.n_vars)
    return (confirmed.confidence in (EXACT_RATIONAL, MULTI_PRIME_AGREE)
            and confirmed.dimension != result.expected_dimension)


def check_condition(condition: str, pt: PointedTuple, codim: int,
                    truncation: int, samples: int = DEFAULT_SAMPLES,
                    subspaces: Optional[Sequence[Sequence[Sequence[Number]]]] = None,
                    sampler: Optional[SubspaceSampler] = None,
                    engine: Optional[DimensionEngine] = None,
                    prime: Optional[int] = None,
                    report: Optional[SingularityReport] = None
                    ) -> SampledVerdict:
    """Truncate the sequence by <truncation> and test it on subspaces of
    codimension <codim> in the projectivized tangent space.

    Supplied subspaces are given by bases in the coordinates of T_oF.
    """
    sampler = sampler or SubspaceSampler()
    engine = engine or DimensionEngine()
    prime = prime or engine.primes[0]
    if report is None:
        report = classify(pt)
    seq = build_sequence(pt, report).truncate(truncation)
    dim = len(report.tangent_basis)
    parameters = {'codim': codim, 'truncation': truncation,
                  'tangent_dim': dim, 'members': len(seq),
                  'member_keys': [list(key) for key in seq.keys]}
    results = []
    uncertain = False
    for index, (basis, supplied) in enumerate(
            _subspaces(sampler, dim, codim, samples, subspaces), start=1):
        restricted = seq.restrict(basis)
        verdict = is_regular_sequence(restricted, len(basis) - 1, engine, prime)
        if not verdict.regular and not _failure_is_certain(verdict, engine,
                                                           restricted):
            uncertain = True
        dimension = verdict.dimension
        results.append(SampleResult(
            index, _basis_strings(basis), verdict.regular,
            verdict.first_failure,
            None if dimension is None else dimension.dimension,
            verdict.expected_dimension,
            None if dimension is None else dimension.confidence, supplied))
        logger.info('%s sample %d: %s', condition, index,
                    'regular' if verdict.regular else
                    'fails at member ' + str(verdict.first_failure))
    return _fold(condition, results, uncertain, sampler, prime, parameters)


def _require_type(report: SingularityReport, condition: str, ok: bool,
                  wanted: str) -> None:
    if not ok:
        raise InputError(condition + " needs " + wanted + " point, got type "
                         + report.type_label(), source=condition)


def check_R1(pt: PointedTuple, samples: int = DEFAULT_SAMPLES,
             subspaces: Optional[Sequence[Sequence[Sequence[Number]]]] = None,
             sampler: Optional[SubspaceSampler] = None,
             engine: Optional[DimensionEngine] = None,
             prime: Optional[int] = None,
             rank_engine: Optional[RankEngine] = None) -> SampledVerdict:
    """Sequence minus its last k + eps(k) + 3 members, on codim k + eps(k) - 1."""
    report = classify(pt, engine=rank_engine)
    _require_type(report, 'R1', report.l == 0,
                  'a non-singular (use R2 or R3 for singular points)')
    eps = epsilon(pt.k)
    return check_condition('R1', pt, pt.k + eps - 1, pt.k + eps + 3, samples,
                           subspaces, sampler, engine, prime, report)


def check_R2(pt: PointedTuple, samples: int = DEFAULT_SAMPLES,
             subspaces: Optional[Sequence[Sequence[Sequence[Number]]]] = None,
             sampler: Optional[SubspaceSampler] = None,
             engine: Optional[DimensionEngine] = None,
             prime: Optional[int] = None,
             rank_engine: Optional[RankEngine] = None) -> SampledVerdict:
    """Sequence minus its last 4 members, on every hyperplane."""
    report = classify(pt, engine=rank_engine)
    _require_type(report, 'R2', report.l == 1, 'a quadratic (type 2^1)')
    return check_condition('R2', pt, 1, 4, samples, subspaces, sampler, engine,
                           prime, report)


def check_R3_2(pt: PointedTuple, samples: int = DEFAULT_SAMPLES,
               subspaces: Optional[Sequence[Sequence[Sequence[Number]]]] = None,
               sampler: Optional[SubspaceSampler] = None,
               engine: Optional[DimensionEngine] = None,
               prime: Optional[int] = None,
               rank_engine: Optional[RankEngine] = None) -> SampledVerdict:
    """Sequence minus its last max(eps(k) + 4 - l, 0) members, on codim eps(k)."""
    report = classify(pt, engine=rank_engine)
    _require_type(report, 'R3.2', report.l >= 2, 'a multi-quadratic (l >= 2)')
    eps = epsilon(pt.k)
    return check_condition('R3.2', pt, eps, max(eps + 4 - report.l, 0), samples,
                           subspaces, sampler, engine, prime, report)


def check_R3_1(pt: PointedTuple, samples: int = DEFAULT_SAMPLES,
               sampler: Optional[SubspaceSampler] = None,
               engine: Optional[DimensionEngine] = None,
               prime: Optional[int] = None,
               rank_engine: Optional[RankEngine] = None) -> SampledVerdict:
    """Codimension of {f_i|_P} + {f_{i,2}|_P : d_i >= 3} on sampled P.

    P runs over codimension eps(k) subspaces of T_oF through the point; its
    closure is the projective space with coordinates (s : t) where s is the
    weight of the point itself.
    """
    rank_engine = rank_engine or RankEngine()
    report = classify(pt, engine=rank_engine)
    _require_type(report, 'R3.1', report.l >= 2, 'a multi-quadratic (l >= 2)')
    _check_desk_scale(pt)
    sampler = sampler or SubspaceSampler()
    engine = engine or DimensionEngine()
    prime = prime or engine.primes[0]
    eps = epsilon(pt.k)
    dim = len(report.tangent_basis)
    expected_codim = pt.k + pt.degrees.k_at_least_3
    proj_dim = dim - eps
    expected = proj_dim - expected_codim
    all_quadrics = pt.degrees.k_at_least_3 == 0
    fld = pt.field
    results = []
    uncertain = False
    irreducible = []
    for index in range(1, samples + 1):
        coords = sampler.subspace(dim, eps)
        combos = [[sum((c * v for c, v in zip(row, column)), fld.zero())
                   for column in zip(*report.tangent_basis)]
                  for row in coords]
        system = [restrict_to_subspace(f, combos).homogenize(d)
                  for f, d in zip(report.chart.polys, pt.degrees.degrees)]
        quadratics = []
        for f, d in zip(report.chart.polys, pt.degrees.degrees):
            q = restrict_to_subspace(poly_graded_parts(f).get(
                2, SparsePoly.zero(f.n_vars, fld)), combos)
            quadratics.append(q)
            if d >= 3:
                system.append(_lift(q))
        result = engine.dimension(system, proj_dim + 1, prime)
        ok = result.dimension == expected
        if not ok and result.confidence == SINGLE_PRIME:
            confirmed = engine.confirm(system, proj_dim + 1)
            if confirmed.dimension == expected or confirmed.confidence == SINGLE_PRIME:
                uncertain = True
        if all_quadrics and ok:
            ci = quadric_ci_report(QuadFormTuple.from_polys(quadratics),
                                   rank_engine)
            irreducible.append(ci.irreducible_factorial)
        results.append(SampleResult(index, _basis_strings(coords), ok,
                                    None if ok else 1, result.dimension,
                                    expected, result.confidence))
        logger.info('R3.1 sample %d: dimension %d, expected %d', index,
                    result.dimension, expected)
    parameters = {'codim': eps, 'expected_codim': expected_codim,
                  'k_at_least_3': pt.degrees.k_at_least_3,
                  'projective_dim': proj_dim}
    verdict = _fold('R3.1', results, uncertain, sampler, prime, parameters)
    if all_quadrics and irreducible and all(irreducible):
        verdict.notes.append('codimension verified; irreducible and reduced by '
                             'the quadric rank criterion')
    else:
        verdict.notes.append('codimension verified; irreducibility not '
                             'certified')
    return verdict


def _lift(q: SparsePoly) -> SparsePoly:
    """Embed a polynomial in t into the ring (s, t) with s first."""
    n = q.n_vars + 1
    terms = {(0,) + exps: c for exps, c in q.terms.items()}
    return SparsePoly.from_terms(n, terms, q.field)
