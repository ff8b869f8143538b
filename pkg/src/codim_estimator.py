"""Codimension of the complement of the good locus, condition by condition.

Each condition contributes a bound on the codimension of the set of tuples
violating it at a fixed point.  Bounds for conditions quantified over linear
subspaces pay the dimension of the subspace family; bounds for singular points
pay (k - i)(M + k - i) for the stratum of points of type 2^(k - i).  Every
assembled bound is compared with gamma + M using exact integers.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.constants import (DegreeTuple, almost_equal_degrees, epsilon, gamma,
                           mq1_rank, mq2_rank, rho)
from src.errors import InputError, InternalError
from src.exact_arith import binomial
from src.log_config import get_file_handler

handler = get_file_handler('codim_estimator.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)

PRESENTATION_I = 'I'
PRESENTATION_II = 'II'

CONDITIONS = ('MQ1', 'MQ2', 'R1', 'R2', 'R3.1', 'R3.2')


def stratum_codim(k: int, M: int, i: int) -> int:
    """Codimension of the tuples with exactly i independent linear parts."""
    if not 0 <= i <= k:
        raise InputError("stratum index must lie in [0, k], got " + str(i))
    return (k - i) * (M + k - i)


def rank_stratum_codim(N: int, r: int, e: int, floor: bool = True) -> int:
    """Codimension of e-tuples of forms in N variables some combination of
    which has rank at most r - 1.

    With <floor> off the raw expression is returned, which may be negative;
    sums of strata are then taken before any rounding.
    """
    if not 1 <= r <= N or e < 1:
        raise InputError("rank stratum needs 1 <= r <= N and e >= 1, got N="
                         + str(N) + ", r=" + str(r) + ", e=" + str(e))
    raw = binomial(N - r + 1, 2) - (e - 1)
    return max(raw, 0) if floor else raw


def mq2_codim_bound(k: int, M: int, l: int) -> int:
    """-k + 1 + l(M + l) + binomial(M + l - rho(k), 2)."""
    if not 2 <= l <= k:
        raise InputError("l must lie in [2, k], got " + str(l))
    if M < rho(k):
        raise InputError("dimension below ρ(k): M=" + str(M) + " < "
                         + str(rho(k)), source="M >= rho(k)")
    return -k + 1 + l * (M + l) + binomial(M + l - rho(k), 2)


def grassmannian_dim(dim_pi: int, codim_pi: int) -> int:
    """Dimension of the family of codim_pi subspaces of dimension dim_pi."""
    return (dim_pi + 1) * codim_pi


def r3_1_family_dim(k: int, M: int, l: int) -> int:
    eps = epsilon(k)
    return eps * (M + l - eps)


def theorem_8_1_bound(N: int, e: int) -> int:
    """(N - e - 1)(N - e - 4) / 2 + 2; the product is always even."""
    product = (N - e - 1) * (N - e - 4)
    if product % 2:
        raise InternalError("odd product in the subvariety codimension bound")
    return product // 2 + 2


def sequence_degrees(degrees: DegreeTuple) -> List[int]:
    """deg h_i in sequence order: j repeated #{i : d_i >= j} times, j >= 2."""
    out = []
    for j in range(2, degrees.degrees[-1] + 1):
        out.extend([j] * sum(1 for d in degrees.degrees if d >= j))
    return out


@dataclass(frozen=True)
class WalkStep:
    """One step: value = binomial(A, B) in the recorded presentation."""
    i: int
    degree: int
    A: int
    B: int
    C: int
    value: int
    presentation: str

    def to_json(self) -> Dict[str, Any]:
        return {'i': self.i, 'deg': self.degree, 'A': self.A, 'B': self.B,
                'C': self.C, 'value': str(self.value),
                'presentation': self.presentation}


@dataclass
class BinomialWalk:
    """Codimensions binomial(dimPi - i + 1 + deg h_i, deg h_i) along a sequence.

    === Attributes ===

    degrees: the degree tuple.
    dim_pi: projective dimension of the subspace.
    truncation: members dropped from the end of the sequence.
    steps: one record per remaining member.
    i_star: last step with C >= 0 in presentation I; None if there is none.
    candidates: the three closed-form minima.
    checks: step-by-step assertions on the walk.
    """
    degrees: DegreeTuple
    dim_pi: int
    truncation: int
    steps: List[WalkStep]
    i_star: Optional[int]
    candidates: Tuple[int, int, int]
    checks: Dict[str, Optional[bool]] = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return not self.steps

    @property
    def minimum(self) -> Optional[int]:
        if not self.steps:
            return None
        return min(s.value for s in self.steps)

    @property
    def length(self) -> int:
        return len(self.steps)

    def summary(self) -> Dict[str, Any]:
        return {'degrees': self.degrees.to_json(), 'dim_pi': self.dim_pi,
                'truncation': self.truncation, 'length': self.length,
                'i_star': self.i_star,
                'minimum': None if self.minimum is None else str(self.minimum),
                'candidates': [str(c) for c in self.candidates],
                'candidate_minimum': str(min(self.candidates)),
                'checks': dict(self.checks)}

    def to_json(self) -> Dict[str, Any]:
        data = self.summary()
        data['steps'] = [s.to_json() for s in self.steps]
        return data


def binomial_walk(degrees: DegreeTuple, dim_pi: int,
                  truncation: int) -> BinomialWalk:
    if not degrees.is_almost_equal():
        logger.warning('walk over non-almost-equal degrees %s',
                       degrees.to_json())
    k = degrees.k
    seq = sequence_degrees(degrees)
    length = max(len(seq) - truncation, 0)
    steps = []
    i_star = None
    for i in range(1, length + 1):
        deg = seq[i - 1]
        a = dim_pi - i + 1 + deg
        b_first = deg
        b_second = dim_pi - i + 1
        c_first = a - 2 * b_first
        if binomial(a, b_first) != binomial(a, b_second):
            raise InternalError("presentations disagree at step " + str(i))
        if c_first >= 0:
            i_star = i
            steps.append(WalkStep(i, deg, a, b_first, c_first,
                                  binomial(a, b_first), PRESENTATION_I))
        else:
            steps.append(WalkStep(i, deg, a, b_second, a - 2 * b_second,
                                  binomial(a, b_second), PRESENTATION_II))
    last_degree = seq[length - 1] if length else seq[-1]
    candidates = (binomial(dim_pi + 3 - k, 2), binomial(dim_pi + 4 - 2 * k, 3),
                  binomial(last_degree + 4, 4))
    walk = BinomialWalk(degrees, dim_pi, truncation, steps, i_star, candidates)
    walk.checks = _walk_checks(walk, len(seq))
    logger.debug('walk dim_pi=%d truncation=%d: length %d, i_star %s, min %s',
                 dim_pi, truncation, length, i_star, walk.minimum)
    return walk


def _walk_checks(walk: BinomialWalk, full_length: int) -> Dict[str, Optional[bool]]:
    steps = walk.steps
    consistent = True
    for prev, cur in zip(steps, steps[1:]):
        c_prev = prev.A - 2 * prev.degree
        c_cur = cur.A - 2 * cur.degree
        if cur.degree == prev.degree:
            ok = cur.A == prev.A - 1 and c_cur == c_prev - 1
        else:
            ok = (cur.degree == prev.degree + 1 and cur.A == prev.A
                  and c_cur == c_prev - 2)
        consistent = consistent and ok
    after = [s.value for s in steps if walk.i_star is None or s.i > walk.i_star]
    decreasing = all(b < a for a, b in zip(after, after[1:]))
    hypothesis = (walk.i_star is not None
                  and walk.i_star < full_length - walk.truncation)
    matches = None
    if hypothesis and steps:
        matches = walk.minimum == min(walk.candidates)
    return {'steps_consistent': consistent,
            'decreasing_after_i_star': decreasing,
            'i_star_before_end': hypothesis,
            'minimum_matches_candidates': matches}


def r1_walk(k: int, M: int) -> BinomialWalk:
    """Walk at a non-singular point: dimPi = M - k - eps(k), truncation m*."""
    eps = epsilon(k)
    return binomial_walk(almost_equal_degrees(M, k), M - k - eps, k + eps + 3)


def lemma_8_1_check(k: int, M: int) -> Dict[str, Any]:
    """i_star < M - m* on the almost-equal walk, expected once M >= 3k^2."""
    walk = r1_walk(k, M)
    m = k + epsilon(k) + 3
    holds = walk.i_star is not None and walk.i_star < M - m
    return {'k': k, 'M': M, 'hypothesis': M >= 3 * k * k,
            'i_star': walk.i_star, 'bound': M - m, 'pass': holds}


def lemma_8_2_check(dim_pi: int, k: int) -> Dict[str, Any]:
    """binomial(dimPi + 4 - 2k, 3) > binomial(dimPi + 3 - k, 2) for dimPi >= 3k + 1."""
    cubic = binomial(dim_pi + 4 - 2 * k, 3)
    quadratic = binomial(dim_pi + 3 - k, 2)
    return {'k': k, 'dim_pi': dim_pi, 'hypothesis': dim_pi >= 3 * k + 1,
            'cubic': str(cubic), 'quadratic': str(quadratic),
            'pass': cubic > quadratic}


def lemma_8_3_check(k: int, M: int) -> Dict[str, Any]:
    """M(M^2 - k^2) > 12k^4(M - 2k), with the hypothesis as M^2 >= 12k^4."""
    lhs = M * (M * M - k * k)
    rhs = 12 * k ** 4 * (M - 2 * k)
    return {'k': k, 'M': M, 'hypothesis': M * M >= 12 * k ** 4,
            'lhs': str(lhs), 'rhs': str(rhs), 'pass': lhs > rhs}


def lemma_8_3_scan(k_range: Sequence[int], extra: int = 100) -> List[Dict[str, Any]]:
    """Failures of the cubic inequality for M from ceil(2 sqrt(3) k^2) to 3k^2 + extra."""
    failures = []
    for k in k_range:
        start = math.isqrt(12 * k ** 4)
        if start * start < 12 * k ** 4:
            start += 1
        for M in range(start, 3 * k * k + extra + 1):
            result = lemma_8_3_check(k, M)
            if not result['pass']:
                failures.append(result)
    return failures


@dataclass
class ConditionCodim:
    """Assembled codimension bound of one condition against gamma + M.

    === Attributes ===

    condition: MQ1, MQ2, R1, R2, R3.1 or R3.2.
    terms: per l, every term of the bound.
    minimum: smallest bound over the l range.
    binding_l: an l attaining the minimum.
    target: gamma + M.
    """
    condition: str
    terms: List[Dict[str, Any]]
    minimum: int
    binding_l: int
    target: int

    @property
    def passed(self) -> bool:
        return self.minimum >= self.target

    @property
    def margin(self) -> int:
        return self.minimum - self.target

    def to_json(self) -> Dict[str, Any]:
        return {'condition': self.condition, 'pass': self.passed,
                'minimum': str(self.minimum), 'target': str(self.target),
                'margin': str(self.margin), 'binding_l': self.binding_l,
                'equal': self.minimum == self.target,
                'terms': [{key: (str(v) if isinstance(v, int)
                                 and not isinstance(v, bool) else v)
                           for key, v in t.items()} for t in self.terms]}


def _assemble(condition: str, rows: List[Dict[str, Any]],
              target: int) -> ConditionCodim:
    best = min(rows, key=lambda row: row['bound'])
    return ConditionCodim(condition, rows, best['bound'], best['l'], target)


def _walk_row(k: int, M: int, l: int, dim_pi: int, codim_pi: int,
              truncation: int) -> Dict[str, Any]:
    walk = binomial_walk(almost_equal_degrees(M, k), dim_pi, truncation)
    if walk.vacuous:
        raise InputError("sequence is shorter than the truncation "
                         + str(truncation) + " at M=" + str(M))
    family = grassmannian_dim(dim_pi, codim_pi)
    stratum = stratum_codim(k, M, k - l)
    return {'l': l, 'dim_pi': dim_pi, 'codim_pi': codim_pi,
            'truncation': truncation, 'walk_minimum': walk.minimum,
            'i_star': walk.i_star, 'family_dim': family, 'stratum': stratum,
            'bound': walk.minimum - family + stratum}


def condition_codim(condition: str, k: int, M: int) -> ConditionCodim:
    target = gamma(M, k) + M
    eps = epsilon(k)
    if condition == 'MQ1':
        rows = []
        for l in range(1, k + 1):
            rank_part = rank_stratum_codim(M + k, mq1_rank(k, l) - 1, l)
            stratum = stratum_codim(k, M, k - l)
            rows.append({'l': l, 'rank_stratum': rank_part, 'stratum': stratum,
                         'bound': rank_part + stratum})
    elif condition == 'MQ2':
        rows = []
        for l in range(2, k + 1):
            rank_part = rank_stratum_codim(M + l, mq2_rank(k) - 1, k,
                                           floor=False)
            stratum = stratum_codim(k, M, k - l)
            bound = rank_part + stratum
            if bound != mq2_codim_bound(k, M, l):
                raise InternalError("MQ2 assembly disagrees with its closed form")
            rows.append({'l': l, 'rank_stratum': rank_part, 'stratum': stratum,
                         'bound': bound})
    elif condition == 'R1':
        rows = [_walk_row(k, M, 0, M - k - eps, k + eps - 1, k + eps + 3)]
    elif condition == 'R2':
        rows = [_walk_row(k, M, 1, M - 1, 1, 4)]
    elif condition == 'R3.2':
        rows = [_walk_row(k, M, l, M + l - 1 - eps, eps, max(eps + 4 - l, 0))
                for l in range(2, k + 1)]
    elif condition == 'R3.1':
        e = k + almost_equal_degrees(M, k).k_at_least_3
        rows = []
        for l in range(2, k + 1):
            n = M + l - eps - 1
            subvariety = theorem_8_1_bound(n, e)
            family = r3_1_family_dim(k, M, l)
            stratum = stratum_codim(k, M, k - l)
            rows.append({'l': l, 'N': n, 'e': e, 'subvariety_bound': subvariety,
                         'family_dim': family, 'stratum': stratum,
                         'bound': subvariety - family + stratum})
    else:
        raise InputError("unknown condition " + repr(condition)
                         + "; expected one of " + ', '.join(CONDITIONS))
    return _assemble(condition, rows, target)


def condition_codim_verdict(k: int, M: int,
                            conditions: Sequence[str] = CONDITIONS
                            ) -> Dict[str, ConditionCodim]:
    """Every condition's bound against gamma + M; requires M >= rho(k)."""
    if M < rho(k):
        raise InputError("dimension below ρ(k): M=" + str(M) + " < "
                         + str(rho(k)), source="M >= rho(k)")
    verdicts = {c: condition_codim(c, k, M) for c in conditions}
    for c, v in verdicts.items():
        logger.info('%s at k=%d M=%d: bound %d vs target %d (%s)', c, k, M,
                    v.minimum, v.target, 'pass' if v.passed else 'fail')
    return verdicts


def _binding_cell(cell: Tuple[int, int]) -> Tuple[Tuple[int, int], Dict[str, Any]]:
    k, M = cell
    values = {l: mq2_codim_bound(k, M, l) for l in range(2, k + 1)}
    best = min(values.values())
    target = gamma(M, k) + M
    return cell, {'k': k, 'M': M, 'minimum': best, 'target': target,
                  'argmin': min(l for l, v in values.items() if v == best),
                  'pass': best == target}


def binding_window_scan(k_range: Sequence[int], width: int = 40,
                        workers: int = 1) -> Dict[str, Any]:
    """min over l of the MQ2 bound against gamma + M for M in [rho, rho + width]."""
    cells = [(k, M) for k in k_range for M in range(rho(k), rho(k) + width + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(_binding_cell, cells))
    else:
        results = dict(_binding_cell(cell) for cell in cells)
    mismatches = [results[cell] for cell in sorted(results)
                  if not results[cell]['pass']]
    for cell in mismatches:
        logger.warning('binding constant mismatch at k=%d M=%d: %d != %d',
                       cell['k'], cell['M'], cell['minimum'], cell['target'])
    return {'cells': len(results), 'mismatches': mismatches,
            'pass': not mismatches}
