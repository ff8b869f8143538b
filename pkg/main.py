import sys

import src.handle_signals
import src.log_config as log_config
from src.cli import dispatch


def main() -> int:
    argv = sys.argv[1:]
    log_config.config_loggers(verbose='--verbose' in argv)
    src.handle_signals.config_signals()
    return dispatch(argv)


if __name__ == '__main__':
    sys.exit(main())
