import argparse
import json
import os

import src.log_config as log_config
from src.codim_estimator import r1_walk
from src.constants import prop_7_2_threshold, prop_7_4_threshold
from src.desk_instances import (fibration_cases, fixture_tuples,
                                pointed_instances)
from src.rigidity_tracer import check_fibration
from src.slope_calculus import check_prop_7_2, check_prop_7_4


def write(path: str, data) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, sort_keys=True, indent=2)
        f.write('\n')
    print(f'wrote {path}')


def main():
    parser = argparse.ArgumentParser(
        prog='regenerate_fixtures',
        description='rewrite the fixture corpus from the library.')

    parser.add_argument('--root', default='fixtures',
                        help='fixtures directory to write into')
    parser.add_argument('--skip-tables', action='store_true',
                        help='leave the threshold tables alone')

    args = parser.parse_args()

    log_config.config_loggers()

    for name, pt in pointed_instances().items():
        write(os.path.join(args.root, 'pointed', name + '.json'), pt.to_json())

    for M in (96, 123):
        write(os.path.join(args.root, 'walks', f'k3_M{M}.json'),
              r1_walk(3, M).summary())

    for name, (t, expected) in fixture_tuples().items():
        data = t.to_json()
        data['expected_rank'] = expected
        write(os.path.join(args.root, 'forms', name + '.json'), data)

    for name, params in fibration_cases().items():
        data = params.to_json()
        data['expected'] = check_fibration(params).classification
        write(os.path.join(args.root, 'fibrations', name + '.json'), data)

    if args.skip_tables:
        return
    nonsingular = {str(k): {'M': prop_7_2_threshold(k),
                            'tail': str(check_prop_7_2(
                                k, prop_7_2_threshold(k)).rhs)}
                   for k in range(3, 6)}
    multiquadratic = {str(k): {'M': prop_7_4_threshold(k),
                               'pass': {str(l): check_prop_7_4(
                                   k, prop_7_4_threshold(k), l).passed
                                   for l in range(2, k + 1)}}
                      for k in range(3, 8)}
    write(os.path.join(args.root, 'tables', 'nonsingular.json'), nonsingular)
    write(os.path.join(args.root, 'tables', 'multiquadratic.json'),
          multiquadratic)


if __name__ == '__main__':
    main()
