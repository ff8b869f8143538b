"""Closed-form invariants and thresholds of Fano complete intersections.

epsilon(k) is the least a >= 1 with (1 + 1/k)^a >= 2; everything else is
polynomial in k, epsilon(k) and M.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Optional, Sequence, Tuple

from src.errors import InputError
from src.exact_arith import binomial
from src.global_constants import (MULTIQUADRATIC_M_TABLE,
                                  MULTIQUADRATIC_TAIL_BOUND,
                                  NONSINGULAR_M_TABLE, NONSINGULAR_TAIL_BOUND)
from src.log_config import get_file_handler

handler = get_file_handler('constants.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)


@dataclass(frozen=True)
class DegreeTuple:
    """Non-decreasing degrees d_1 <= ... <= d_k, each at least 2.

    === Attributes ===

    degrees: the sorted degrees.
    """
    degrees: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.degrees:
            raise InputError("a degree tuple needs k >= 1 entries")
        if any(not isinstance(d, int) or d < 2 for d in self.degrees):
            raise InputError("every degree must be an integer >= 2: "
                             + str(self.degrees))
        if list(self.degrees) != sorted(self.degrees):
            object.__setattr__(self, 'degrees', tuple(sorted(self.degrees)))

    @classmethod
    def of(cls, degrees: Sequence[int]) -> 'DegreeTuple':
        return cls(tuple(int(d) for d in degrees))

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def M(self) -> int:
        return sum(self.degrees) - self.k

    @property
    def k_at_least_3(self) -> int:
        """Number of degrees that are at least 3."""
        return sum(1 for d in self.degrees if d >= 3)

    def is_almost_equal(self) -> bool:
        return self.degrees[-1] - self.degrees[0] <= 1

    def product(self) -> int:
        result = 1
        for d in self.degrees:
            result *= d
        return result

    def to_json(self) -> list:
        return list(self.degrees)


@lru_cache(maxsize=None)
def epsilon(k: int) -> int:
    """Least a >= 1 with (1 + 1/k)^a >= 2, by exact rational iteration."""
    if k < 1:
        raise InputError("epsilon needs k >= 1, got " + str(k))
    step = Fraction(k + 1, k)
    power = step
    a = 1
    while power < 2:
        power *= step
        a += 1
    return a


def rho(k: int) -> int:
    return 10 * k * k + 8 * k + 2 * epsilon(k) + 3


def mq1_rank(k: int, l: int) -> int:
    return 2 * l + 4 * k + 2 * epsilon(k) - 1


def mq2_rank(k: int) -> int:
    return 10 * k * k + 8 * k + 2 * epsilon(k) + 5


def gamma(M: int, k: int) -> int:
    """Codimension bound M - k + 5 + binomial(M - rho(k) + 2, 2)."""
    if M < rho(k):
        raise InputError("dimension below ρ(k): M=" + str(M) + " < "
                         + str(rho(k)), source="M >= 10k^2+8k+2eps(k)+3")
    return M - k + 5 + binomial(M - rho(k) + 2, 2)


def almost_equal_degrees(M: int, k: int) -> DegreeTuple:
    """The worst-case tuple: degrees differ by at most one and sum to M + k."""
    if k < 1 or M < k:
        raise InputError("almost equal degrees need M >= k >= 1, got M="
                         + str(M) + ", k=" + str(k))
    e = M % k
    base = (M - e) // k
    degrees = DegreeTuple(tuple([base + 1] * (k - e) + [base + 2] * e))
    assert degrees.M == M
    return degrees


@dataclass(frozen=True)
class ThresholdSet:
    """All thresholds depending on k only.

    === Attributes ===

    k: number of equations.
    epsilon_k: epsilon(k).
    rho_k: least admissible dimension M.
    c_F: codimension of the singular locus at a tangent section chain start.
    c_T: level constant of the full tangent section.
    m_star: truncation of the sequence at non-singular points.
    mq2_rank: rank demanded of all quadratic parts on the tangent space.
    """
    k: int
    epsilon_k: int
    rho_k: int
    c_F: int
    c_T: int
    m_star: int
    mq2_rank: int

    def mq1_rank(self, l: int) -> int:
        return mq1_rank(self.k, l)

    def m_star_upper(self, l: int) -> int:
        """Truncation at a multi-quadratic point of type 2^l."""
        return max(self.epsilon_k + 4 - l, 0)

    def gamma(self, M: int) -> int:
        return gamma(M, self.k)

    def to_json(self, l_values: Optional[Sequence[int]] = None) -> Dict[str, Any]:
        if l_values is None:
            l_values = range(1, self.k + 1)
        return {
            'k': self.k,
            'epsilon': self.epsilon_k,
            'rho': self.rho_k,
            'c_F': self.c_F,
            'c_T': self.c_T,
            'm_star': self.m_star,
            'mq2_rank': self.mq2_rank,
            'mq1_rank': {str(l): self.mq1_rank(l) for l in l_values},
            'm_star_upper': {str(l): self.m_star_upper(l) for l in l_values},
        }


@lru_cache(maxsize=None)
def thresholds(k: int) -> ThresholdSet:
    if k < 3:
        raise InputError("thresholds are defined for k >= 3, got " + str(k))
    eps = epsilon(k)
    return ThresholdSet(k=k,
                        epsilon_k=eps,
                        rho_k=rho(k),
                        c_F=4 * k + 2 * eps,
                        c_T=2 * k + 2 * eps + 4,
                        m_star=k + eps + 3,
                        mq2_rank=mq2_rank(k))


def admissible_interval(k: int, l_X: int, c_X: int) -> Tuple[int, int]:
    """Admissible section dimensions [k + l_X + 3, k + c_X - 1]; may be empty."""
    return k + l_X + 3, k + c_X - 1


def singular_locus_codim_target(k: int) -> int:
    return 2 * k + 2


def prop_7_2_threshold(k: int) -> int:
    """Least M for which the non-singular slope tail is certified."""
    if k < 3:
        raise InputError("k >= 3 required")
    if k in NONSINGULAR_M_TABLE:
        return NONSINGULAR_M_TABLE[k]
    return 8 * k * k + 2 * k


def prop_7_4_threshold(k: int) -> int:
    """Least M for which the multi-quadratic slope tail is certified."""
    if k < 3:
        raise InputError("k >= 3 required")
    if k in MULTIQUADRATIC_M_TABLE:
        return MULTIQUADRATIC_M_TABLE[k]
    return 9 * k * k + k


def closed_form_7_2(k: int) -> Dict[str, Any]:
    """Exact check of (M/(M-2k))^k <= 4/3 at M = 8k^2 + 2k."""
    M = 8 * k * k + 2 * k
    bound = Fraction(M, M - 2 * k) ** k
    return {'k': k, 'M': M, 'bound': bound,
            'pass': bound <= NONSINGULAR_TAIL_BOUND}


def closed_form_7_4(k: int) -> Dict[str, Any]:
    """Exact check of (M/(M-k))^k <= 9/8 at M = 9k^2 + k."""
    M = 9 * k * k + k
    bound = Fraction(M, M - k) ** k
    return {'k': k, 'M': M, 'bound': bound,
            'pass': bound <= MULTIQUADRATIC_TAIL_BOUND}


def remark_audit(k: int) -> Dict[str, Any]:
    """Compare epsilon(k) against the large-k shortcuts of the table proofs.

    The non-singular shortcut claims epsilon(k) <= k - 3 from k = 10 on, the
    multi-quadratic one claims epsilon(k) <= k - 2 from k = 8 on.  Failures are
    reported, never assumed away (k = 10 gives epsilon = 8 > 7).
    """
    eps = epsilon(k)
    audit = {'k': k, 'epsilon': eps,
             'nonsingular_claim_applies': k >= 10,
             'nonsingular_claim_holds': eps <= k - 3,
             'multiquadratic_claim_applies': k >= 8,
             'multiquadratic_claim_holds': eps <= k - 2}
    flagged = ((audit['nonsingular_claim_applies']
                and not audit['nonsingular_claim_holds'])
               or (audit['multiquadratic_claim_applies']
                   and not audit['multiquadratic_claim_holds']))
    audit['flagged'] = flagged
    if flagged:
        logger.warning('epsilon(%d) = %d breaks a large-k shortcut', k, eps)
    return audit
