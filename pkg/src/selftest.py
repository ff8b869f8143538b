"""Library-level acceptance checks, runnable without pytest.

Every check returns a CheckResult; the suite passes when all of them do.
"""
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.codim_estimator import binding_window_scan, r1_walk
from src.constants import (DegreeTuple, epsilon, prop_7_2_threshold,
                           prop_7_4_threshold, thresholds)
from src.desk_instances import (POINTED_TYPES, constructed_tuples,
                                fibration_cases, pointed_instances,
                                random_tuples)
from src.exact_arith import SparsePoly, matrix_rank
from src.global_constants import ORACLE_PRIME, SELFTEST_SEED
from src.ideal_dimension import DimensionEngine
from src.log_config import get_file_handler
from src.quad_forms import RankEngine, brute_force_tuple_rank
from src.regularity import ComponentSequence, build_sequence, is_regular_sequence
from src.rigidity_tracer import (NOT_RIGID, RIGID, UNDETERMINED,
                                 check_fibration, prop_1_8_certificate)
from src.singularity import classify
from src.slope_calculus import (build_slope_sequence, check_prop_7_2,
                                check_prop_7_4, full_product)

handler = get_file_handler('selftest.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return {'criterion': self.criterion, 'name': self.name,
                'pass': self.passed, 'details': self.details,
                'seconds': round(self.seconds, 3)}


def _epsilon_oracle(k: int) -> int:
    a = 1
    while (k + 1) ** a < 2 * k ** a:
        a += 1
    return a


def check_epsilon_table() -> Dict[str, Any]:
    mismatches = [k for k in range(1, 31) if epsilon(k) != _epsilon_oracle(k)]
    known = {3: 3, 4: 4, 5: 4, 8: 6}
    wrong = {k: epsilon(k) for k, v in known.items() if epsilon(k) != v}
    return {'pass': not mismatches and not wrong, 'mismatches': mismatches,
            'known_values_wrong': wrong}


def check_slope_identity(seed: int = SELFTEST_SEED,
                         count: int = 500) -> Dict[str, Any]:
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        k = rng.randint(1, 6)
        degrees = DegreeTuple.of([rng.randint(2, 50) for _ in range(k)])
        expected = Fraction(degrees.product(), 2 ** k)
        if full_product(build_slope_sequence(degrees)) != expected:
            failures.append(degrees.to_json())
    return {'pass': not failures, 'tuples': count, 'failures': failures}


def check_nonsingular_table() -> Dict[str, Any]:
    cells = [(k, prop_7_2_threshold(k)) for k in range(3, 6)]
    cells += [(k, 8 * k * k + 2 * k) for k in range(6, 21)]
    failures = [cell for cell in cells if not check_prop_7_2(*cell).passed]
    witness = check_prop_7_2(3, 96).rhs
    return {'pass': not failures and witness == Fraction(1331, 1000),
            'cells': len(cells), 'failures': failures,
            'k3_tail': str(witness)}


def check_multiquadratic_table() -> Dict[str, Any]:
    cells = [(k, prop_7_4_threshold(k)) for k in range(3, 8)]
    cells += [(k, 9 * k * k + k) for k in range(8, 21)]
    failures = [(k, M, l) for k, M in cells for l in range(2, k + 1)
                if not check_prop_7_4(k, M, l).passed]
    return {'pass': not failures, 'cells': len(cells), 'failures': failures}


def check_binding_constant(workers: int = 1) -> Dict[str, Any]:
    return binding_window_scan(range(3, 9), 40, workers)


def check_equilibrium_walk() -> Dict[str, Any]:
    walks = {}
    ok = True
    for M in (96, 123):
        walk = r1_walk(3, M)
        checks = walk.checks
        passed = (all(checks.values()) and walk.minimum == min(walk.candidates))
        ok = ok and passed
        walks[str(M)] = walk.summary()
    return {'pass': ok, 'walks': walks}


def check_contraction() -> Dict[str, Any]:
    failures = [k for k in range(3, 31)
                if Fraction(k, k + 1) ** epsilon(k) > Fraction(1, 2)]
    t = thresholds(3)
    eps = t.epsilon_k
    c_tight = t.c_T - 2 * eps == 2 * 3 + 4 == 10
    rank_tight = t.mq2_rank - 2 * eps == 10 * 9 + 8 * 3 + 5 == 119
    certificate = prop_1_8_certificate(3)
    return {'pass': (not failures and c_tight and rank_tight
                     and certificate['pass']),
            'failures': failures, 'c_tight': c_tight,
            'rank_tight': rank_tight, 'certificate': certificate}


def check_oracle_equivalence(seed: int = SELFTEST_SEED,
                             engine: Optional[RankEngine] = None
                             ) -> Dict[str, Any]:
    """Random tuples: the ideal-theoretic rank never exceeds a rank realized at
    a rational lambda.  Constructed tuples: exact agreement with the oracle."""
    engine = engine or RankEngine()
    certified = agreements = 0
    random_failures = []
    for index, t in enumerate(random_tuples(seed)):
        oracle_rank, lambdas = brute_force_tuple_rank(t, ORACLE_PRIME)
        rank = engine.tuple_rank(t).rank
        lifted = matrix_rank(t.combination(lambdas))
        if lifted != oracle_rank:
            continue
        certified += 1
        if rank > oracle_rank:
            random_failures.append(index)
        elif rank == oracle_rank:
            agreements += 1
    constructed_failures = []
    for name, t, expected in constructed_tuples():
        oracle_rank, _ = brute_force_tuple_rank(t, ORACLE_PRIME)
        rank = engine.tuple_rank(t).rank
        if not rank == oracle_rank == expected:
            constructed_failures.append({'name': name, 'rank': rank,
                                         'oracle': oracle_rank,
                                         'expected': expected})
    return {'pass': not random_failures and not constructed_failures,
            'certified': certified, 'agreements': agreements,
            'random_failures': random_failures,
            'constructed_failures': constructed_failures}


def _monomial_sequence(n_vars: int, monomials: Sequence[Sequence[int]]
                       ) -> ComponentSequence:
    members = []
    for exps in monomials:
        members.append(SparsePoly.from_terms(n_vars, {tuple(exps): 1}))
    keys = tuple((sum(exps), i) for i, exps in enumerate(monomials, start=1))
    return ComponentSequence(tuple(members), keys, n_vars)


def check_regularity_sanity(engine: Optional[DimensionEngine] = None
                            ) -> Dict[str, Any]:
    engine = engine or DimensionEngine()
    coords = _monomial_sequence(4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)])
    regular = is_regular_sequence(coords, 3, engine).regular
    nested = _monomial_sequence(3, [(1, 0, 0), (1, 1, 0)])
    failing = is_regular_sequence(nested, 2, engine)
    disagreements = []
    lengths_ok = True
    for name, pt in pointed_instances().items():
        seq = build_sequence(pt)
        lengths_ok = lengths_ok and len(seq) == pt.M
        members = [h for h in seq.members if not h.is_zero()]
        dims = {p: engine.dimension(members, seq.n_vars, p).dimension
                for p in engine.primes[:2]}
        if len(set(dims.values())) != 1:
            disagreements.append(name)
    return {'pass': (regular and not failing.regular
                     and failing.first_failure == 2 and lengths_ok
                     and not disagreements),
            'coordinates_regular': regular,
            'nested_first_failure': failing.first_failure,
            'lengths_ok': lengths_ok, 'prime_disagreements': disagreements}


def check_fibrations() -> Dict[str, Any]:
    expected = {'below_rho': UNDETERMINED, 'rigid': RIGID,
                'transversal': NOT_RIGID}
    found = {}
    stable = True
    for name, params in fibration_cases().items():
        found[name] = check_fibration(params).classification
        for factor in (2, 3):
            scaled = check_fibration(params.scaled(factor)).classification
            stable = stable and scaled == found[name]
    return {'pass': found == expected and stable, 'classifications': found,
            'scaling_stable': stable}


def check_pointed_types(engine: Optional[RankEngine] = None) -> Dict[str, Any]:
    """Classification of every desk instance matches its recorded type."""
    engine = engine or RankEngine()
    wrong = {}
    for name, pt in pointed_instances().items():
        report = classify(pt, engine=engine)
        tangent = (None if report.tuple_rank_tangent is None
                   else report.tuple_rank_tangent.rank)
        got = (report.l, report.rank, tangent)
        if got != POINTED_TYPES[name]:
            wrong[name] = list(got)
    return {'pass': not wrong, 'wrong': wrong}


def suite(workers: int = 1, seed: int = SELFTEST_SEED,
          rank_engine: Optional[RankEngine] = None,
          dimension_engine: Optional[DimensionEngine] = None
          ) -> List[Tuple[int, str, Callable[[], Dict[str, Any]]]]:
    return [
        (1, 'epsilon table', check_epsilon_table),
        (2, 'slope identity', lambda: check_slope_identity(seed)),
        (3, 'non-singular threshold table', check_nonsingular_table),
        (4, 'multi-quadratic threshold table', check_multiquadratic_table),
        (5, 'binding constant', lambda: check_binding_constant(workers)),
        (6, 'equilibrium walk', check_equilibrium_walk),
        (7, 'contraction certificate', check_contraction),
        (8, 'tuple rank oracle', lambda: check_oracle_equivalence(
            seed, rank_engine)),
        (9, 'regularity sanity', lambda: check_regularity_sanity(
            dimension_engine)),
        (10, 'fibration classifier', check_fibrations),
        (11, 'desk instance types', lambda: check_pointed_types(rank_engine)),
    ]


def run_all(only: Optional[Sequence[int]] = None, workers: int = 1,
            seed: int = SELFTEST_SEED,
            rank_engine: Optional[RankEngine] = None,
            dimension_engine: Optional[DimensionEngine] = None
            ) -> List[CheckResult]:
    results = []
    for number, name, check in suite(workers, seed, rank_engine,
                                     dimension_engine):
        if only and number not in only:
            continue
        start = time.perf_counter()
        details = check()
        elapsed = time.perf_counter() - start
        passed = bool(details.pop('pass'))
        logger.info('criterion %d (%s): %s in %.2fs', number, name,
                    'pass' if passed else 'FAIL', elapsed)
        results.append(CheckResult(number, name, passed, details, elapsed))
    return results
