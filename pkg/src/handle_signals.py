import logging
import signal
import sys

from src.global_constants import EXIT_INCONCLUSIVE

logger = logging.getLogger(__name__)


def abort_run(signum, frame):
    """An interrupted certification proves nothing: exit as inconclusive."""
    signame = signal.Signals(signum).name
    logger.warning('run interrupted by %s (%d)', signame, signum)
    print(f'Signal handler called with signal {signame} ({signum})',
          file=sys.stderr)
    sys.exit(EXIT_INCONCLUSIVE)


def config_signals() -> None:
    signal.signal(signal.SIGINT, abort_run)
    signal.signal(signal.SIGTERM, abort_run)
