"""Command line entry point: every subcommand builds a RunReport and publishes
it through the builder's presenters.  dispatch returns the exit code."""
import argparse
import json
import logging
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src import selftest
from src.codim_estimator import (CONDITIONS, binding_window_scan,
                                 condition_codim_verdict, lemma_8_1_check,
                                 lemma_8_3_check, r1_walk)
from src.constants import (almost_equal_degrees, gamma, remark_audit,
                           thresholds)
from src.engine_builder import Builder
from src.errors import (DeskScaleLimitError, InputError, InternalError,
                        PrerequisiteError)
from src.global_constants import *
from src.log_config import get_file_handler
from src.quad_forms import (QuadFormTuple, brute_force_tuple_rank,
                            quadric_ci_report)
from src.regularity import check_R1, check_R2, check_R3_1, check_R3_2
from src.report import (FAIL, INCONCLUSIVE, INPUT_ERROR, PASS, RunReport)
from src.rigidity_tracer import (NOT_RIGID, RIGID, LevelState,
                                 FibrationParams, check_fibration,
                                 contraction_equivalence, prop_1_6_chain,
                                 prop_1_7_start, prop_1_8_certificate,
                                 trace_chain)
from src.singularity import PointedTuple, classify, marked_ci_level_check
from src.slope_calculus import (check_prop_7_2, check_prop_7_4, scan,
                                tail_sequence, build_slope_sequence,
                                worst_case_confirmation)

handler = get_file_handler('cli.log')
logger = logging.getLogger(__name__)
logger.addHandler(handler)

REGULARITY_CHECKS = {'R1': check_R1, 'R2': check_R2, 'R3.1': check_R3_1,
                     'R3.2': check_R3_2}


class CertificationParser(argparse.ArgumentParser):
    """Usage errors raise InputError instead of exiting."""

    def error(self, message: str) -> None:
        raise InputError(message + '\n' + self.format_usage().rstrip())


def load_json(path: str) -> Any:
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError("malformed JSON in " + path + " at line "
                         + str(e.lineno) + " column " + str(e.colno) + ": "
                         + e.msg)
    except OSError as e:
        raise InputError("cannot read " + path + ": " + str(e))


def _verdict(passed: bool) -> str:
    return PASS if passed else FAIL


# === Subcommands ===

def run_params(args: argparse.Namespace, builder: Builder) -> RunReport:
    t = thresholds(args.k)
    details: Dict[str, Any] = t.to_json()
    details['remark_audit'] = remark_audit(args.k)
    witnesses = {'epsilon': str(t.epsilon_k), 'rho': str(t.rho_k)}
    if args.M is not None:
        details['M'] = args.M
        details['gamma'] = gamma(args.M, args.k)
        details['almost_equal_degrees'] = almost_equal_degrees(
            args.M, args.k).to_json()
        witnesses['gamma'] = str(details['gamma'])
    return RunReport('params', {}, PASS, witnesses=witnesses, details=details)


def run_slopes(args: argparse.Namespace, builder: Builder) -> RunReport:
    k, M = args.k, args.M
    if args.scan is not None:
        first, last = args.scan
        first = M if first is None else first
        if first is None:
            raise InputError("--scan needs M1..M2, or --M as the start")
        if last < first:
            raise InputError("--scan end " + str(last) + " is below its start "
                             + str(first))
        rows = scan(k, first, last, builder.workers)
        failures = sorted(m for m, row in rows.items()
                          if not (row['prop_7_2']['pass'] and all(
                              v['pass'] for v in row['prop_7_4'].values())))
        return RunReport('slopes', {}, _verdict(not failures),
                         witnesses={'failing_M': ','.join(map(str, failures))},
                         details={'rows': rows, 'failures': failures})
    if M is None:
        raise InputError("slopes needs --M unless --scan M1..M2 is given")
    if args.l is not None:
        verdicts = [check_prop_7_4(k, M, args.l)]
    elif args.multiquadratic:
        verdicts = [check_prop_7_4(k, M, l) for l in range(2, k + 1)]
    else:
        verdicts = [check_prop_7_2(k, M)]
    details: Dict[str, Any] = {'verdicts': [v.to_json() for v in verdicts]}
    seq = build_slope_sequence(verdicts[0].degrees)
    details['tail'] = tail_sequence(seq, verdicts[0].truncation)
    passed = all(v.passed for v in verdicts)
    if args.all_tuples:
        confirmations = [worst_case_confirmation(k, M, v.truncation)
                         for v in verdicts]
        details['all_tuples'] = confirmations
        passed = passed and all(c['pass'] for c in confirmations)
    witnesses = {('tail' if len(verdicts) == 1 else 'tail_l' + str(
        v.extra.get('l'))): str(v.rhs) for v in verdicts}
    return RunReport('slopes', {}, _verdict(passed), witnesses=witnesses,
                     details=details)


def run_quad(args: argparse.Namespace, builder: Builder) -> RunReport:
    t = QuadFormTuple.from_json(load_json(args.input))
    result = builder.rank_engine.tuple_rank(t)
    ci = quadric_ci_report(t, builder.rank_engine)
    details = {'l': t.l, 'n': t.n, 'tuple_rank': result.to_json(),
               'quadric_ci': ci.to_json()}
    witnesses = {'tuple_rank': str(result.rank)}
    verdict = PASS
    message = ''
    if args.oracle:
        oracle_rank, lambdas = brute_force_tuple_rank(t, ORACLE_PRIME)
        details['oracle'] = {'prime': ORACLE_PRIME, 'rank': oracle_rank,
                             'lambda': list(lambdas)}
        witnesses['oracle_rank'] = str(oracle_rank)
        if oracle_rank != result.rank:
            verdict = INCONCLUSIVE
            message = ('oracle over GF(' + str(ORACLE_PRIME) + ') found rank '
                       + str(oracle_rank) + '; the minimizer may be irrational '
                       'or reduction mod p may drop the rank')
    return RunReport('quad', {}, verdict, witnesses=witnesses, details=details,
                     message=message)


def run_classify(args: argparse.Namespace, builder: Builder) -> RunReport:
    pt = PointedTuple.from_json(load_json(args.input))
    report = classify(pt, engine=builder.rank_engine)
    details: Dict[str, Any] = report.to_json()
    passed = report.mq1_pass and report.mq2_pass is not False
    witnesses = {'type': report.type_label()}
    if report.rank is not None:
        witnesses['rank'] = str(report.rank)
    if report.tuple_rank_tangent is not None:
        witnesses['tangent_rank'] = str(report.tuple_rank_tangent.rank)
    if args.level is not None:
        l_X, c_X = args.level
        level = marked_ci_level_check(report, l_X, c_X, pt.k)
        details['level'] = level.to_json()
        passed = passed and level.passed
    return RunReport('classify-point', {}, _verdict(passed),
                     witnesses=witnesses, details=details)


def run_check_regularity(args: argparse.Namespace,
                         builder: Builder) -> RunReport:
    builder.require_seed('check-regularity')
    pt = PointedTuple.from_json(load_json(args.input))
    check = REGULARITY_CHECKS[args.condition]
    kwargs: Dict[str, Any] = {'samples': args.samples,
                              'sampler': builder.sampler,
                              'engine': builder.dimension_engine,
                              'prime': builder.prime,
                              'rank_engine': builder.rank_engine}
    if args.subspaces is not None:
        if args.condition == 'R3.1':
            raise InputError("R3.1 samples its own subspaces; --subspaces is "
                             "not accepted")
        kwargs['subspaces'] = load_json(args.subspaces)
    verdict = check(pt, **kwargs)
    witnesses = {'samples': str(verdict.samples)}
    if verdict.first_failure is not None:
        witnesses['first_failure'] = str(verdict.first_failure)
    return RunReport('check-regularity', {}, verdict.verdict,
                     witnesses=witnesses, details=verdict.to_json(),
                     message=verdict.summary())


def run_codim(args: argparse.Namespace, builder: Builder) -> RunReport:
    if args.scan is not None:
        first, last = args.scan
        first = args.k if first is None else first
        last = first if last is None else last
        if last < first:
            raise InputError("--scan end " + str(last) + " is below its start "
                             + str(first))
        result = binding_window_scan(range(first, last + 1), args.width,
                                     builder.workers)
        return RunReport('codim', {}, _verdict(result['pass']),
                         witnesses={'cells': str(result['cells']),
                                    'mismatches': str(len(result['mismatches']))},
                         details=result)
    if args.M is None:
        raise InputError("codim needs --M unless --scan is given")
    conditions = [args.condition] if args.condition else list(CONDITIONS)
    verdicts = condition_codim_verdict(args.k, args.M, conditions)
    details: Dict[str, Any] = {c: v.to_json() for c, v in verdicts.items()}
    witnesses = {c + '_margin': str(v.margin) for c, v in verdicts.items()}
    witnesses['target'] = str(gamma(args.M, args.k) + args.M)
    if args.walk:
        details['r1_walk'] = r1_walk(args.k, args.M).to_json()
        details['lemma_8_1'] = lemma_8_1_check(args.k, args.M)
        details['lemma_8_3'] = lemma_8_3_check(args.k, args.M)
    passed = all(v.passed for v in verdicts.values())
    return RunReport('codim', {}, _verdict(passed), witnesses=witnesses,
                     details=details)


def run_trace(args: argparse.Namespace, builder: Builder) -> RunReport:
    k = args.k
    if args.chain is None:
        chains = {str(l): prop_1_6_chain(k, l) for l in range(2, k + 1)}
        certificate = prop_1_8_certificate(k)
        contraction = contraction_equivalence(k)
        passed = (all(c['pass'] for c in chains.values())
                  and certificate['pass'] and contraction)
        return RunReport('trace', {}, _verdict(passed),
                         witnesses={'contraction': certificate['contraction'],
                                    'c_slack': str(certificate['c_slack']),
                                    'rank_slack': str(certificate['rank_slack'])},
                         details={'tangent_chains': chains,
                                  'special_certificate': certificate,
                                  'epsilon_is_least': contraction})
    kinds, ranks, state_json = args.chain, args.ranks, None
    if len(kinds) == 1 and kinds[0].endswith('.json'):
        kinds, file_ranks, state_json = _chain_file(load_json(kinds[0]))
        ranks = file_ranks if ranks is None else ranks
    if args.state is not None:
        if state_json is not None:
            raise InputError("the chain file already holds a start state; "
                             "drop --state")
        state_json = load_json(args.state)
    if state_json is not None:
        start = LevelState.from_json(state_json)
        if start.k != k:
            raise InputError("state has k=" + str(start.k) + ", --k is "
                             + str(k))
    else:
        start = prop_1_7_start(k)
    states = trace_chain(start, kinds, ranks)
    end = states[-1]
    return RunReport('trace', {}, PASS,
                     witnesses={'level': str(end.l_X) + ',' + str(end.c_X),
                                'rank_lower': str(end.rank_lower),
                                'ratio': str(end.ratio)},
                     details={'states': [s.to_json() for s in states]})


def _chain_file(data: Any) -> Tuple[List[str], Optional[List[Optional[int]]],
                                     Optional[Dict[str, Any]]]:
    """A list of kinds, or {"steps": [...], "ranks": [...], "state": {...}}."""
    if isinstance(data, list):
        data = {'steps': data}
    if not isinstance(data, dict) or not isinstance(data.get('steps'), list):
        raise InputError("chain file needs a list of steps")
    ranks = data.get('ranks')
    if ranks is not None and not isinstance(ranks, list):
        raise InputError("chain file ranks must be a list of integers or null")
    return data['steps'], ranks, data.get('state')


def run_check_fibration(args: argparse.Namespace,
                        builder: Builder) -> RunReport:
    params = FibrationParams.from_json(load_json(args.input))
    verdict = check_fibration(params)
    details = verdict.to_json()
    details['params'] = params.to_json()
    outcome = {RIGID: PASS, NOT_RIGID: FAIL}.get(verdict.classification,
                                                 INCONCLUSIVE)
    return RunReport('check-fibration', {}, outcome,
                     witnesses={'classification': verdict.classification},
                     details=details, message=verdict.reason)


def run_selftest(args: argparse.Namespace, builder: Builder) -> RunReport:
    seed = builder.seed if builder.seed_given else SELFTEST_SEED
    results = selftest.run_all(args.only, builder.workers, seed,
                               builder.rank_engine, builder.dimension_engine)
    failed = [r.criterion for r in results if not r.passed]
    return RunReport('selftest', {}, _verdict(not failed), seed=seed,
                     witnesses={str(r.criterion): PASS if r.passed else FAIL
                                for r in results},
                     details={'criteria': [r.to_json() for r in results],
                              'failed': failed})


HANDLERS: Dict[str, Callable[[argparse.Namespace, Builder], RunReport]] = {
    'params': run_params,
    'slopes': run_slopes,
    'quad': run_quad,
    'classify-point': run_classify,
    'check-regularity': run_check_regularity,
    'codim': run_codim,
    'trace': run_trace,
    'check-fibration': run_check_fibration,
    'selftest': run_selftest,
}

RANDOMIZED = ('check-regularity',)


# === Parser ===

def _global_flags() -> argparse.ArgumentParser:
    common = CertificationParser(add_help=False)
    common.add_argument('--prime', type=int, default=None,
                        help='prime for modular computations')
    common.add_argument('--seed', type=int, default=None,
                        help='seed of the subspace sampler')
    common.add_argument('--json', action='store_true',
                        help='emit the JSON report only')
    common.add_argument('--strict', action='store_true',
                        help='CI mode: randomized commands need --seed')
    common.add_argument('--exact', action='store_true',
                        help='rational Groebner bases whenever small enough')
    common.add_argument('--workers', type=int, default=1,
                        help='worker processes for scans')
    common.add_argument('--verbose', action='store_true',
                        help='log to stderr at INFO')
    return common


def build_parser() -> CertificationParser:
    common = _global_flags()
    parser = CertificationParser(
        prog='fano-certify',
        description='Exact certification of the numeric constants behind '
                    'birational rigidity of Fano complete intersections.')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')

    p = sub.add_parser('params', parents=[common],
                       help='epsilon, rho, gamma and every threshold')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--M', type=int)

    p = sub.add_parser('slopes', parents=[common],
                       help='truncated slope products')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--M', type=int)
    p.add_argument('--l', type=int,
                   help='multi-quadratic tail at type 2^l only')
    p.add_argument('--multiquadratic', action='store_true',
                   help='multi-quadratic tails for every l in [2, k]')
    p.add_argument('--scan', type=_int_range, metavar='M1..M2',
                   help='check both inequalities for every M in the range')
    p.add_argument('--all-tuples', action='store_true',
                   help='confirm the almost-equal tuple is the worst case')

    p = sub.add_parser('quad', parents=[common],
                       help='rank of a tuple of quadratic forms')
    p.add_argument('action', nargs='?', choices=('rank',), default='rank')
    p.add_argument('--input', required=True)
    p.add_argument('--oracle', action='store_true',
                   help='compare with brute force over GF(101)')

    p = sub.add_parser('classify-point', parents=[common],
                       help='singularity type and ranks at a point')
    p.add_argument('--input', required=True)
    p.add_argument('--level', type=int, nargs=2, metavar=('L_X', 'C_X'))

    p = sub.add_parser('check-regularity', parents=[common],
                       help='sampled regularity conditions')
    p.add_argument('--condition', choices=sorted(REGULARITY_CHECKS),
                   required=True)
    p.add_argument('--input', required=True)
    p.add_argument('--samples', type=int, default=DEFAULT_SAMPLES)
    p.add_argument('--subspaces', help='JSON list of bases to test first')

    p = sub.add_parser('codim', parents=[common],
                       help='codimension bounds against gamma + M')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--M', type=int)
    p.add_argument('--condition', choices=CONDITIONS)
    p.add_argument('--walk', action='store_true',
                   help='include the binomial walk at a non-singular point')
    p.add_argument('--scan', type=_int_range, nargs='?', const=(None, None),
                   metavar='K1..K2',
                   help='binding-constant window for --k, or for a range of k')
    p.add_argument('--width', type=int, default=40)

    p = sub.add_parser('trace', parents=[common],
                       help='level bookkeeping under hyperplane sections')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--chain', nargs='+', metavar='STEP',
                   help='transversal, tangent or special steps, or a JSON '
                        'chain file')
    p.add_argument('--state', help='JSON level state to start from')
    p.add_argument('--ranks', type=_rank_or_none, nargs='+',
                   help='actual rank per step, or "none" for the worst case')

    p = sub.add_parser('check-fibration', parents=[common],
                       help='classify a fibration over P^m')
    p.add_argument('--input', required=True)

    p = sub.add_parser('selftest', parents=[common],
                       help='run the acceptance checks')
    p.add_argument('--only', type=int, nargs='+', metavar='N')
    return parser


def _int_range(text: str) -> Tuple[Optional[int], int]:
    """'A..B', or a bare end 'B' whose start comes from elsewhere."""
    first, sep, last = text.partition('..')
    try:
        if not sep:
            return None, int(first)
        return int(first), int(last)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or a range "
                                         "A..B, got " + repr(text))


def _rank_or_none(text: str) -> Optional[int]:
    if text.lower() == 'none':
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'none'")


def _inputs(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in sorted(vars(args).items())
            if value is not None and value is not False}


def dispatch(argv: Sequence[str], stream: Any = None) -> int:
    parser = build_parser()
    if not argv:
        print(parser.format_usage().rstrip(), file=stream)
        return EXIT_INPUT_ERROR
    try:
        args = parser.parse_args(list(argv))
    except InputError as e:
        print('error: ' + str(e), file=stream)
        return EXIT_INPUT_ERROR
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_PASS
    if args.command is None:
        print(parser.format_usage().rstrip(), file=stream)
        return EXIT_INPUT_ERROR

    try:
        builder = Builder(prime=args.prime, seed=args.seed, strict=args.strict,
                          exact=args.exact, json_only=args.json,
                          stream=stream, workers=args.workers)
    except InputError as e:
        print('error: ' + str(e), file=stream)
        return EXIT_INPUT_ERROR

    start = time.perf_counter()
    try:
        report = HANDLERS[args.command](args, builder)
    except InputError as e:
        report = RunReport(args.command, {}, INPUT_ERROR, message=str(e))
    except DeskScaleLimitError as e:
        report = RunReport(args.command, {}, INCONCLUSIVE, message=str(e))
    except PrerequisiteError as e:
        report = RunReport(args.command, {}, FAIL, message=str(e),
                           details={'failed_prerequisite': e.source})
    except InternalError as e:
        logger.error('internal error in %s: %s', args.command, e)
        report = RunReport(args.command, {}, INCONCLUSIVE, message=str(e))
    report.inputs = _inputs(args)
    if args.command in RANDOMIZED:
        report.seed = builder.seed
    report.primes = list(builder.primes)
    report.timing_seconds = time.perf_counter() - start
    logger.info('%s finished: %s', args.command, report.verdict)
    builder.publish(report)
    return report.exit_code
