"""Dimension of homogeneous ideals via reduced Groebner bases.

The dimension of R/I equals the dimension of R/LT(I); for a monomial ideal it is
n minus the size of a smallest variable set meeting the support of every
generator.  Projective dimension is one less; an empty zero set is -1.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from sympy import nextprime
from sympy.polys.groebnertools import groebner

from src.errors import DeskScaleLimitError, InputError
from src.exact_arith import QQ_FIELD, Field, SparsePoly
from src.global_constants import (CONFIRMATION_PRIMES, DESK_MAX_VARS,
                                  EXACT_RATIONAL_MAX_VARS)
from src.log_config import get_file_handler

handler = get_file_handler('ideal_dimension.log')

EXACT_RATIONAL = 'exact_rational'
SINGLE_PRIME = 'single_prime'
MULTI_PRIME_AGREE = 'multi_prime_agree'


@dataclass(frozen=True)
class IdealDimResult:
    """Projective dimension of a zero set, with its provenance.

    === Attributes ===

    dimension: projective dimension, -1 for the empty set.
    prime_used: the prime behind the reported value, None when exact.
    confidence: one of exact_rational, single_prime, multi_prime_agree.
    per_prime: dimension found over each prime tried.
    """
    dimension: int
    prime_used: Optional[int]
    confidence: str
    per_prime: Dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def monte_carlo(self) -> bool:
        return self.confidence != EXACT_RATIONAL

    def to_json(self) -> dict:
        return {'dimension': self.dimension,
                'prime_used': self.prime_used,
                'confidence': self.confidence,
                'monte_carlo': self.monte_carlo,
                'per_prime': {str(p): d for p, d in self.per_prime.items()}}


def _minimal_supports(leading: Sequence[tuple]) -> List[int]:
    masks = set()
    for exps in leading:
        mask = 0
        for i, e in enumerate(exps):
            if e:
                mask |= 1 << i
        masks.add(mask)
    ordered = sorted(masks, key=lambda m: bin(m).count('1'))
    minimal: List[int] = []
    for mask in ordered:
        if not any(m & mask == m for m in minimal):
            minimal.append(mask)
    return minimal


def _min_hitting_set(supports: List[int], n: int) -> int:
    best = [n]

    def search(chosen: int, size: int) -> None:
        if size >= best[0]:
            return
        for support in supports:
            if support & chosen == 0:
                for b in range(n):
                    if support >> b & 1:
                        search(chosen | (1 << b), size + 1)
                return
        best[0] = size

    search(0, 0)
    return best[0]


def monomial_dimension(leading: Sequence[tuple], n: int) -> int:
    """Affine dimension of the zero set of a monomial ideal; -1 if it is (1)."""
    supports = _minimal_supports(leading)
    if 0 in supports:
        return -1
    return n - _min_hitting_set(supports, n)


class DimensionEngine:
    """Decides dimensions of zero sets over prime fields or the rationals.

    === Attributes ===

    primes: primes used for confirmation votes.
    exact: escalate to rational Groebner bases whenever the size allows.
    """
    primes: Sequence[int]
    exact: bool

    def __init__(self, primes: Sequence[int] = CONFIRMATION_PRIMES,
                 exact: bool = False) -> None:
        self.logger = logging.getLogger('Ideal Dimension Engine')
        self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG)
        if not primes:
            raise InputError("at least one prime is needed")
        self.primes = tuple(primes)
        self.exact = exact

    def affine_dimension(self, polys: Sequence[SparsePoly], n_vars: int,
                         over: Field) -> int:
        if n_vars > DESK_MAX_VARS:
            raise DeskScaleLimitError("desk-scale limit: " + str(n_vars)
                                      + " variables > " + str(DESK_MAX_VARS))
        gens = [f.to_field(over).element for f in polys if not f.is_zero()]
        if not gens:
            return n_vars
        ring = gens[0].ring
        basis = groebner(gens, ring)
        self.logger.debug('groebner over %s: %d generators -> %d', over,
                          len(gens), len(basis))
        return monomial_dimension([g.LM for g in basis], n_vars)

    def projective_dimension(self, polys: Sequence[SparsePoly], n_vars: int,
                             over: Field) -> int:
        return max(self.affine_dimension(polys, n_vars, over) - 1, -1)

    def _usable_prime(self, polys: Sequence[SparsePoly], p: int,
                      taken: set) -> Field:
        while True:
            if p not in taken:
                try:
                    fld = Field.prime(p)
                    for f in polys:
                        f.to_field(fld)
                    return fld
                except InputError:
                    self.logger.warning('prime %d divides a coefficient '
                                        'denominator; moving on', p)
            p = nextprime(p)

    def dimension(self, polys: Sequence[SparsePoly], n_vars: int,
                  prime: Optional[int] = None) -> IdealDimResult:
        """Projective dimension over a single prime (or the polys' own field)."""
        if polys and not polys[0].field.is_rational:
            p = polys[0].field.characteristic
            d = self.projective_dimension(polys, n_vars, polys[0].field)
            return IdealDimResult(d, p, SINGLE_PRIME, {p: d})
        if self.exact and n_vars <= EXACT_RATIONAL_MAX_VARS:
            d = self.projective_dimension(polys, n_vars, QQ_FIELD)
            return IdealDimResult(d, None, EXACT_RATIONAL)
        fld = self._usable_prime(polys, prime or self.primes[0], set())
        d = self.projective_dimension(polys, n_vars, fld)
        return IdealDimResult(d, fld.characteristic, SINGLE_PRIME,
                              {fld.characteristic: d})

    def confirm(self, polys: Sequence[SparsePoly], n_vars: int) -> IdealDimResult:
        """Dimension voted over all primes; disagreement escalates to QQ."""
        if polys and not polys[0].field.is_rational:
            return self.dimension(polys, n_vars)
        if self.exact and n_vars <= EXACT_RATIONAL_MAX_VARS:
            return self.dimension(polys, n_vars)
        per_prime: Dict[int, int] = {}
        for p in self.primes:
            fld = self._usable_prime(polys, p, set(per_prime))
            per_prime[fld.characteristic] = self.projective_dimension(
                polys, n_vars, fld)
        votes = Counter(per_prime.values())
        if len(votes) == 1:
            d = next(iter(votes))
            return IdealDimResult(d, next(iter(per_prime)), MULTI_PRIME_AGREE,
                                  per_prime)
        self.logger.warning('primes disagree on dimension: %s', per_prime)
        if n_vars <= EXACT_RATIONAL_MAX_VARS:
            d = self.projective_dimension(polys, n_vars, QQ_FIELD)
            return IdealDimResult(d, None, EXACT_RATIONAL, per_prime)
        d, _ = votes.most_common(1)[0]
        chosen = next(p for p, v in per_prime.items() if v == d)
        return IdealDimResult(d, chosen, SINGLE_PRIME, per_prime)
