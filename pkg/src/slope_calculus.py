"""Slope combinatorics of hypertangent divisors.

The component f_{i,j} with j >= 3 contributes a divisor of level j - 1 and
slope j / (j - 1).  Level j therefore occurs w_plus[j] = #{i : j <= d_i - 1}
times, and the full product telescopes to (d_1 ... d_k) / 2^k.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Tuple

from src.constants import (DegreeTuple, almost_equal_degrees, thresholds)
from src.errors import InputError
from src.global_constants import (ALL_TUPLES_MAX_M, MULTIQUADRATIC_SKIPPED_SLOPE,
                                  MULTIQUADRATIC_TAIL_BOUND,
                                  NONSINGULAR_SKIPPED_SLOPE,
                                  NONSINGULAR_TAIL_BOUND)
from src.log_config import get_file_handler

handler = get_file_handler('slope_calculus.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)


@dataclass(frozen=True)
class SlopeEntry:
    """One hypertangent divisor: slope (level+1)/level from degree index i."""
    level: int
    index: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.level + 1, self.level)


@dataclass(frozen=True)
class SlopeSequence:
    """Slopes in sequence order: grouped by non-decreasing level, then index.

    === Attributes ===

    degrees: the degree tuple the sequence was built from.
    entries: one entry per divisor, in sequence order.
    w_plus: multiplicity of every level j in [2, d_k - 1].
    """
    degrees: DegreeTuple
    entries: Tuple[SlopeEntry, ...]
    w_plus: Dict[int, int] = field(hash=False, compare=False)

    def __len__(self) -> int:
        return len(self.entries)


def build_slope_sequence(degrees: DegreeTuple) -> SlopeSequence:
    entries = []
    w_plus = {}
    top = degrees.degrees[-1]
    for level in range(2, top):
        count = 0
        for i, d in enumerate(degrees.degrees):
            if level <= d - 1:
                entries.append(SlopeEntry(level, i + 1))
                count += 1
        w_plus[level] = count
    return SlopeSequence(degrees, tuple(entries), w_plus)


def full_product(s: SlopeSequence) -> Fraction:
    product = Fraction(1)
    for entry in s.entries:
        product *= entry.slope
    return product


def tail_product(s: SlopeSequence, m: int) -> Fraction:
    """Product of the last m slopes; m = 0 gives 1."""
    if m < 0 or m > len(s):
        raise InputError("tail length " + str(m) + " outside [0, "
                         + str(len(s)) + "]")
    product = Fraction(1)
    for entry in s.entries[len(s) - m:]:
        product *= entry.slope
    return product


@dataclass
class SlopeVerdict:
    """Outcome of a truncated-product certification.

    === Attributes ===

    inequality: human-readable form of the certified inequality.
    lhs: the bound the tail must not exceed.
    rhs: the exact tail product.
    passed: lhs >= rhs.
    degrees: the worst-case degree tuple used.
    truncation: number of slopes in the tail.
    """
    inequality: str
    lhs: Fraction
    rhs: Fraction
    passed: bool
    degrees: DegreeTuple
    truncation: int
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        data = {'inequality': self.inequality,
                'lhs': str(self.lhs),
                'rhs': str(self.rhs),
                'pass': self.passed,
                'degrees': self.degrees.to_json(),
                'truncation': self.truncation}
        data.update(self.extra)
        return data


def check_prop_7_2(k: int, M: int) -> SlopeVerdict:
    """4/3 >= product of the last m_* slopes of the almost-equal sequence."""
    t = thresholds(k)
    degrees = almost_equal_degrees(M, k)
    s = build_slope_sequence(degrees)
    m = min(t.m_star, len(s))
    tail = tail_product(s, m)
    passed = NONSINGULAR_TAIL_BOUND >= tail
    logger.info('non-singular tail k=%d M=%d m=%d: %s (%s)', k, M, m, tail,
                'pass' if passed else 'fail')
    return SlopeVerdict('4/3 >= prod of last m_* slopes',
                        NONSINGULAR_TAIL_BOUND, tail, passed, degrees, m,
                        {'k': k, 'M': M})


def check_prop_7_4(k: int, M: int, l: int) -> SlopeVerdict:
    """9/8 >= product of the last m^*(l) slopes of the almost-equal sequence."""
    if not 2 <= l <= k:
        raise InputError("l must lie in [2, k], got " + str(l))
    t = thresholds(k)
    degrees = almost_equal_degrees(M, k)
    s = build_slope_sequence(degrees)
    m = min(t.m_star_upper(l), len(s))
    tail = tail_product(s, m)
    passed = MULTIQUADRATIC_TAIL_BOUND >= tail
    logger.info('multi-quadratic tail k=%d M=%d l=%d m=%d: %s (%s)', k, M, l, m,
                tail, 'pass' if passed else 'fail')
    return SlopeVerdict('9/8 >= prod of last m^*(l) slopes',
                        MULTIQUADRATIC_TAIL_BOUND, tail, passed, degrees, m,
                        {'k': k, 'M': M, 'l': l})


def skipped_slope_bound(case: str) -> Dict[str, Fraction]:
    """Skipped-divisor slope and the tail bound it leaves, per case.

    The descent starts with a ratio 2 (one extra tangent cut) in the
    non-singular case and 3/2 in the multi-quadratic case; dividing by the
    slope of the skipped divisor gives the bound on the remaining tail.
    """
    if case == 'nonsingular':
        start, skipped = Fraction(2), NONSINGULAR_SKIPPED_SLOPE
    elif case == 'multiquadratic':
        start, skipped = Fraction(3, 2), MULTIQUADRATIC_SKIPPED_SLOPE
    else:
        raise InputError("unknown case " + repr(case))
    return {'skipped_slope': skipped, 'tail_bound': start / skipped}


def all_degree_tuples(M: int, k: int) -> Iterator[DegreeTuple]:
    """Every non-decreasing tuple of k degrees >= 2 summing to M + k."""
    if M > ALL_TUPLES_MAX_M:
        raise InputError("exhaustive tuple enumeration is limited to M <= "
                         + str(ALL_TUPLES_MAX_M))
    total = M + k

    def extend(prefix: List[int], remaining: int, slots: int) -> Iterator[List[int]]:
        low = prefix[-1] if prefix else 2
        if slots == 1:
            if remaining >= low:
                yield prefix + [remaining]
            return
        for d in range(low, remaining // slots + 1):
            yield from extend(prefix + [d], remaining - d, slots - 1)

    for degrees in extend([], total, k):
        yield DegreeTuple(tuple(degrees))


def worst_case_confirmation(k: int, M: int, m: int) -> Dict[str, Any]:
    """Check that no admissible tuple has a larger m-tail than the almost-equal one."""
    reference = tail_product(build_slope_sequence(almost_equal_degrees(M, k)), m)
    worst = reference
    worst_degrees = almost_equal_degrees(M, k)
    count = 0
    for degrees in all_degree_tuples(M, k):
        s = build_slope_sequence(degrees)
        if len(s) < m:
            continue
        count += 1
        tail = tail_product(s, m)
        if tail > worst:
            worst, worst_degrees = tail, degrees
    return {'k': k, 'M': M, 'm': m, 'tuples': count,
            'almost_equal_tail': str(reference), 'max_tail': str(worst),
            'max_degrees': worst_degrees.to_json(),
            'pass': worst == reference}


def _scan_cell(cell: Tuple[int, int]) -> Tuple[int, Dict[str, Any]]:
    k, M = cell
    row: Dict[str, Any] = {
        'prop_7_2': check_prop_7_2(k, M).to_json(),
        'prop_7_4': {str(l): check_prop_7_4(k, M, l).to_json()
                     for l in range(2, k + 1)}}
    return M, row


def scan(k: int, M1: int, M2: int, workers: int = 1) -> Dict[int, Dict[str, Any]]:
    """Verdicts of both tail inequalities for every M in [M1, M2]."""
    cells = [(k, M) for M in range(M1, M2 + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_cell, cells))
    else:
        results = [_scan_cell(cell) for cell in cells]
    return dict(sorted(results))


def tail_sequence(s: SlopeSequence, m: int) -> List[Tuple[int, int]]:
    """(level, index) pairs of the last m entries, for witnesses."""
    return [(e.level, e.index) for e in itertools.islice(
        s.entries, len(s) - m, len(s))]
