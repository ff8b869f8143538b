"""Bookkeeping of levels, ranks and multiplicity ratios under hyperplane cuts.

A state records certified bounds only: the level (l_X, c_X) of a marked
complete intersection, a lower bound for the rank at the marked point and,
once known, a lower bound for the ratio nu(D)/n(D).  Each transition checks
the hypotheses under which the cut keeps a working triple, and fails loudly
with the inequality that broke.
"""
import json
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.constants import (DegreeTuple, admissible_interval, epsilon,
                           mq1_rank, mq2_rank, rho, thresholds)
from src.errors import InputError, PrerequisiteError
from src.exact_arith import binomial
from src.global_constants import HYPERPLANE_CODIM_DROP, HYPERPLANE_RANK_DROP
from src.log_config import get_file_handler

handler = get_file_handler('rigidity_tracer.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)

TRANSVERSAL = 'transversal'
TANGENT = 'tangent'
SPECIAL = 'special'
KINDS = (TRANSVERSAL, TANGENT, SPECIAL)

RIGID = 'rigid_by_theorem_0_3'
NOT_RIGID = 'not_rigid_transversal'
UNDETERMINED = 'undetermined'


@dataclass(frozen=True)
class LevelState:
    """Certified data of a working triple at a marked point.

    === Attributes ===

    k: number of equations of the ambient complete intersection.
    l_X: type of the marked singularity (certified exactly).
    c_X: certified lower bound for the codimension of the singular locus.
    rank_lower: certified lower bound for the rank at the marked point.
    ratio: certified lower bound for nu(D)/n(D); None while unknown.
    ratio_strict: the ratio bound is strict.
    step_log: transitions applied so far.
    """
    k: int
    l_X: int
    c_X: int
    rank_lower: int
    ratio: Optional[Fraction] = None
    ratio_strict: bool = False
    step_log: Tuple[Dict[str, Any], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not 2 <= self.l_X <= self.k:
            raise InputError("level type must satisfy 2 <= l_X <= k, got l_X="
                             + str(self.l_X), source="marked complete "
                             "intersection: 2 <= l_X <= k")
        if self.c_X < self.l_X + 4:
            raise InputError("c_X = " + str(self.c_X) + " < l_X + 4",
                             source="marked complete intersection: "
                             "c_X >= l_X + 4")
        if self.rank_lower < 2 * self.l_X + self.c_X - 1:
            raise InputError("rank " + str(self.rank_lower) + " < 2l_X + c_X - 1 = "
                             + str(2 * self.l_X + self.c_X - 1),
                             source="MC2: rk >= 2l_X + c_X - 1")

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, Any]]) -> 'LevelState':
        if isinstance(data, str):
            data = json.loads(data)
        try:
            ratio = data.get('ratio')
            return cls(k=int(data['k']), l_X=int(data['l_X']),
                       c_X=int(data['c_X']),
                       rank_lower=int(data['rank_lower']),
                       ratio=None if ratio is None else Fraction(str(ratio)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError):
            raise InputError("level state needs k, l_X, c_X and rank_lower")

    def to_json(self) -> Dict[str, Any]:
        return {'k': self.k, 'l_X': self.l_X, 'c_X': self.c_X,
                'rank_lower': self.rank_lower,
                'ratio': None if self.ratio is None else str(self.ratio),
                'ratio_strict': self.ratio_strict,
                'step_log': list(self.step_log)}


def _require(ok: bool, message: str, source: str) -> None:
    if not ok:
        raise PrerequisiteError(message, source=source)


def _above_one(state: LevelState) -> bool:
    """nu(D) > n(D) follows from the ratio bound."""
    return state.ratio > 1 or (state.ratio == 1 and state.ratio_strict)


def transition(state: LevelState, kind: str,
               actual_rank: Optional[int] = None) -> LevelState:
    """Cut by a hyperplane section of the given kind.

    The rank drops by 2 unless the caller knows the rank at the new point.
    """
    k, l, c = state.k, state.l_X, state.c_X
    new_rank = (state.rank_lower - HYPERPLANE_RANK_DROP if actual_rank is None
                else actual_rank)
    new_c = c - HYPERPLANE_CODIM_DROP
    ratio, strict = state.ratio, state.ratio_strict
    if kind == TRANSVERSAL:
        _require(l == k, "transversal cut needs l_X = k, got " + str(l),
                 "Theorem 3.1: l_X = k")
        _require(c >= k + 6, "c_X = " + str(c) + " < k + 6 = " + str(k + 6),
                 "Theorem 3.1: c_X >= k + 6")
        new_l = k
    elif kind == TANGENT:
        _require(2 <= l <= k - 1, "tangent cut needs 2 <= l_X <= k - 1, got "
                 + str(l), "Theorem 3.2: 2 <= l_X <= k - 1")
        _require(c >= l + 7, "c_X = " + str(c) + " < l_X + 7 = " + str(l + 7),
                 "Theorem 3.2: c_X >= l_X + 7")
        needed = 2 * (l + 1) + new_c - 1
        _require(new_rank >= needed, "rank at the tangent section "
                 + str(new_rank) + " < 2l_R + c_R - 1 = " + str(needed),
                 "Theorem 3.2: rk(o in R) >= 2l_R + c_R - 1")
        new_l = l + 1
    elif kind == SPECIAL:
        _require(l == k, "special cut needs l_X = k, got " + str(l),
                 "Theorem 3.3: l_X = k")
        _require(c >= 2 * k + 4, "c_X = " + str(c) + " < 2k + 4 = "
                 + str(2 * k + 4), "Theorem 3.3: c_X >= 2k + 4")
        _require(state.rank_lower >= 10 * k * k + 8 * k + 5,
                 "rank " + str(state.rank_lower) + " < 10k^2 + 8k + 5 = "
                 + str(10 * k * k + 8 * k + 5),
                 "Theorem 3.3: rk(o in X) >= 10k^2 + 8k + 5")
        _require(state.ratio is not None and _above_one(state)
                 and state.ratio <= Fraction(3, 2),
                 "ratio " + str(state.ratio) + " outside (1, 3/2]",
                 "Theorem 3.3: n(D) < nu(D) <= (3/2) n(D)")
        ratio = 2 - Fraction(k, k + 1) * (2 - state.ratio)
        strict = True
        new_l = k
    else:
        raise InputError("unknown transition " + repr(kind) + "; expected one of "
                         + ', '.join(KINDS))
    entry = {'kind': kind, 'from': [l, c, state.rank_lower],
             'to': [new_l, new_c, new_rank],
             'rank_source': 'worst_case' if actual_rank is None else 'actual'}
    if kind == SPECIAL:
        entry['ratio'] = str(ratio)
    logger.debug('%s cut: (%d, %d) -> (%d, %d), rank %d', kind, l, c, new_l,
                 new_c, new_rank)
    return replace(state, l_X=new_l, c_X=new_c, rank_lower=new_rank,
                   ratio=ratio, ratio_strict=strict,
                   step_log=state.step_log + (entry,))


def trace_chain(state: LevelState, kinds: Sequence[str],
                actual_ranks: Optional[Sequence[Optional[int]]] = None
                ) -> List[LevelState]:
    """All states along the chain, the starting one included."""
    if actual_ranks is not None and len(actual_ranks) != len(kinds):
        raise InputError("need one actual rank (or null) per transition")
    states = [state]
    for index, kind in enumerate(kinds):
        rank = None if actual_ranks is None else actual_ranks[index]
        states.append(transition(states[-1], kind, rank))
    return states


def prop_1_5_check(state: LevelState) -> Dict[str, Any]:
    """c_X >= 2l_X + 4 gives nu(D) > n(D) after the smallest admissible cut."""
    needed = 2 * state.l_X + 4
    lo, hi = admissible_interval(state.k, state.l_X, state.c_X)
    return {'c_X': state.c_X, 'needed': needed,
            'interval': [lo, hi], 'interval_empty': lo > hi,
            'pass': state.c_X >= needed}


def prop_1_6_chain(k: int, l: int) -> Dict[str, Any]:
    """Tangent cuts from level (l, c_F) up to type 2^k, ending at c >= c_T.

    Ranks are kept at the level threshold 2l + c - 1, which every tangent
    cut preserves.
    """
    t = thresholds(k)
    if not 2 <= l <= k:
        raise InputError("l must lie in [2, k], got " + str(l))
    start = LevelState(k, l, t.c_F, mq1_rank(k, l))
    kinds = [TANGENT] * (k - l)
    states = trace_chain(start, kinds,
                         [2 * s + (t.c_F - 2 * (s - l)) - 1
                          for s in range(l + 1, k + 1)])
    end = states[-1]
    return {'k': k, 'l': l, 'start': [l, t.c_F], 'end': [end.l_X, end.c_X],
            'c_T': t.c_T, 'pass': end.c_X >= t.c_T}


def prop_1_8_certificate(k: int) -> Dict[str, Any]:
    """eps(k) special cuts force nu/n > 3/2 without leaving the level budget.

    The chain starts from the weakest admissible ratio, nu(D) > n(D), and runs
    through transition(); the first cut whose hypotheses fail is reported.
    """
    t = thresholds(k)
    eps = t.epsilon_k
    contraction = Fraction(k, k + 1) ** eps
    state = LevelState(k, k, t.c_T, t.mq2_rank, ratio=Fraction(1),
                       ratio_strict=True)
    failed = None
    for _ in range(eps):
        try:
            state = transition(state, SPECIAL)
        except PrerequisiteError as e:
            failed = e.source
            break
    end_ok = (failed is None and state.c_X >= 2 * k + 4
              and state.rank_lower >= 10 * k * k + 8 * k + 5)
    ratio_ok = (failed is None and state.ratio_strict
                and state.ratio >= Fraction(3, 2))
    return {'k': k, 'epsilon': eps, 'contraction': str(contraction),
            'contraction_ok': contraction <= Fraction(1, 2),
            'final_c': state.c_X, 'final_rank': state.rank_lower,
            'final_ratio': str(state.ratio),
            'c_slack': state.c_X - (2 * k + 4),
            'rank_slack': state.rank_lower - (10 * k * k + 8 * k + 5),
            'steps': list(state.step_log),
            'failed_prerequisite': failed,
            'budget_ok': end_ok,
            'pass': contraction <= Fraction(1, 2) and end_ok and ratio_ok}


def special_section_gain(nu: Fraction, n: Fraction, k: int) -> Fraction:
    """Strict lower bound nu + (2n - nu)/(k + 1) for nu(D_R)."""
    nu, n = Fraction(nu), Fraction(n)
    return nu + (2 * n - nu) / (k + 1)


def prop_3_4_identity(alpha: Fraction, n_star: Fraction,
                      b: Fraction) -> Dict[str, Any]:
    """(alpha n* + (alpha - 1) b)/n* > alpha for b >= 1, alpha > 1, n* > 0."""
    alpha, n_star, b = Fraction(alpha), Fraction(n_star), Fraction(b)
    if n_star <= 0:
        raise InputError("n* must be positive")
    lhs = (alpha * n_star + (alpha - 1) * b) / n_star
    return {'lhs': str(lhs), 'alpha': str(alpha),
            'hypothesis': alpha > 1 and b >= 1, 'pass': lhs > alpha}


def theorem_6_1_bound(mu_p: Fraction, mu_q: Fraction, nu: Fraction,
                      k: int) -> Fraction:
    """(mu_p + mu_q - nu)/(k + 1)."""
    if k < 1:
        raise InputError("k >= 1 required")
    return (Fraction(mu_p) + Fraction(mu_q) - Fraction(nu)) / (k + 1)


def splitting_check(mu_p: Fraction, mu_q: Fraction, nu: Fraction,
                    k: int) -> Dict[str, Any]:
    """Minimize 2(mu_p + mu_q - nu)/(k + alpha - beta + 4) over alpha + beta = k,
    alpha >= beta >= 1."""
    total = Fraction(mu_p) + Fraction(mu_q) - Fraction(nu)
    values = {}
    for beta in range(1, k // 2 + 1):
        alpha = k - beta
        values[(alpha, beta)] = 2 * total / (k + alpha - beta + 4)
    if not values:
        return {'k': k, 'splittings': 0, 'argmin': None, 'pass': None}
    best = min(values.values())
    argmin = max(s for s, v in values.items() if v == best)
    bound = theorem_6_1_bound(mu_p, mu_q, nu, k)
    return {'k': k, 'splittings': len(values), 'argmin': list(argmin),
            'minimum': str(best), 'bound': str(bound),
            'pass': best == bound}


@dataclass(frozen=True)
class FibrationParams:
    """Complete intersection of divisors of bi-degree (m_i, d_i) in P^m x P^(M+k).

    === Attributes ===

    m: dimension of the base.
    bidegrees: (m_i, d_i) per divisor.
    """
    m: int
    bidegrees: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InputError("base dimension m must be positive")
        if not self.bidegrees:
            raise InputError("at least one divisor is needed")
        for m_i, d_i in self.bidegrees:
            if d_i < 2 or m_i < 0:
                raise InputError("bi-degree (" + str(m_i) + ", " + str(d_i)
                                 + ") needs m_i >= 0 and d_i >= 2")

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, Any]]) -> 'FibrationParams':
        if isinstance(data, str):
            data = json.loads(data)
        try:
            params = cls(int(data['m']), tuple((int(a), int(b))
                                               for a, b in data['bidegrees']))
        except (KeyError, TypeError, ValueError):
            raise InputError("fibration needs 'm' and 'bidegrees' [[m_i, d_i]]")
        for key, value in (('k', params.k), ('M', params.M)):
            if key in data and int(data[key]) != value:
                raise InputError("declared " + key + "=" + str(data[key])
                                 + " but the bi-degrees give " + str(value))
        return params

    def to_json(self) -> Dict[str, Any]:
        return {'m': self.m, 'k': self.k, 'M': self.M,
                'bidegrees': [list(b) for b in self.bidegrees]}

    @property
    def degrees(self) -> DegreeTuple:
        return DegreeTuple.of([d for _, d in self.bidegrees])

    @property
    def k(self) -> int:
        return len(self.bidegrees)

    @property
    def M(self) -> int:
        return self.degrees.M

    def scaled(self, factor: int) -> 'FibrationParams':
        return FibrationParams(self.m * factor,
                               tuple((m_i * factor, d_i)
                                     for m_i, d_i in self.bidegrees))


@dataclass(frozen=True)
class FibrationVerdict:
    classification: str
    reason: str
    details: Dict[str, Any]

    def to_json(self) -> Dict[str, Any]:
        data = {'classification': self.classification, 'reason': self.reason}
        data.update(self.details)
        return data


def check_fibration(p: FibrationParams) -> FibrationVerdict:
    k, M = p.k, p.M
    weighted = sum((Fraction(d_i - 1, d_i) * m_i for m_i, d_i in p.bidegrees),
                   Fraction(0))
    total = sum(m_i for m_i, _ in p.bidegrees)
    details: Dict[str, Any] = {'k': k, 'M': M, 'm': p.m, 'rho': rho(k),
                               'weighted_sum': str(weighted),
                               'sum_m_i': total}
    if total <= p.m:
        return FibrationVerdict(NOT_RIGID, 'm_1 + ... + m_k <= m: the '
                                'projection to the fibre space is transversal',
                                details)
    if M < rho(k):
        return FibrationVerdict(UNDETERMINED, 'dimension below ρ(k): M=' + str(M)
                                + ' < ' + str(rho(k)), details)
    dim_bound = M - k + 4 + binomial(M - rho(k) + 2, 2)
    details['dim_bound'] = str(dim_bound)
    nef_ok = weighted >= p.m + 1
    dim_ok = p.m <= dim_bound
    details['nef_inequality'] = nef_ok
    details['dim_inequality'] = dim_ok
    if nef_ok and dim_ok:
        return FibrationVerdict(RIGID, 'both inequalities hold', details)
    failed = []
    if not nef_ok:
        failed.append('sum (1 - 1/d_i) m_i >= m + 1')
    if not dim_ok:
        failed.append('m <= M - k + 4 + binomial(M - rho(k) + 2, 2)')
    return FibrationVerdict(UNDETERMINED, 'fails ' + ' and '.join(failed),
                            details)


def contraction_equivalence(k: int) -> bool:
    """(k/(k+1))^eps(k) <= 1/2 and the exponent eps(k) - 1 does not suffice."""
    eps = epsilon(k)
    step = Fraction(k, k + 1)
    return step ** eps <= Fraction(1, 2) and (
        eps == 1 or step ** (eps - 1) > Fraction(1, 2))


def prop_1_7_start(k: int) -> LevelState:
    """Level (k, c_T) with the rank demanded of all quadratic parts."""
    t = thresholds(k)
    return LevelState(k, k, t.c_T, mq2_rank(k))
