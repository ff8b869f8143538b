import logging
import time
from typing import Any, Optional, Sequence

from src.errors import InputError
from src.exact_arith import Field
from src.global_constants import *
from src.ideal_dimension import DimensionEngine
from src.log_config import get_file_handler
from src.presenters.presenters import make_presenters
from src.quad_forms import RankEngine
from src.regularity import SubspaceSampler
from src.report import ReportPublisher, RunReport

handler = get_file_handler('engine_builder.log')


class Builder:
    """Builds the engines, the sampler and the presenters from global flags.

    === Attributes ===

    primes: primes for modular computations, the --prime choice first.
    seed: sampler seed; a time seed when none was given.
    seed_given: the seed came from the command line.
    strict: randomized commands refuse to run without a given seed.
    workers: worker processes for scans.
    dimension_engine: Groebner dimension counts.
    rank_engine: tuple ranks, sharing the dimension engine.
    sampler: seeded subspaces.
    publisher: hands finished reports to the presenters.
    """
    primes: Sequence[int]
    seed: int
    seed_given: bool
    strict: bool
    workers: int
    dimension_engine: DimensionEngine
    rank_engine: RankEngine
    sampler: SubspaceSampler
    publisher: ReportPublisher

    def __init__(self, prime: Optional[int] = None, seed: Optional[int] = None,
                 strict: bool = False, exact: bool = False,
                 json_only: bool = False, presenters: bool = True,
                 stream: Any = None, workers: int = 1) -> None:
        self.logger = logging.getLogger('Engine Builder')
        self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG)

        if prime is None:
            self.primes = CONFIRMATION_PRIMES
        else:
            Field.prime(prime)
            self.primes = (prime,) + tuple(p for p in CONFIRMATION_PRIMES
                                           if p != prime)
        self.seed_given = seed is not None
        self.strict = strict
        self.seed = seed if seed is not None else int(time.time())
        if workers < 1:
            raise InputError("--workers must be at least 1")
        self.workers = workers

        self.dimension_engine = DimensionEngine(self.primes, exact)
        self.rank_engine = RankEngine(self.dimension_engine)
        self.sampler = SubspaceSampler(self.seed)

        lst = make_presenters(json_only, stream) if presenters else []
        self.publisher = ReportPublisher(lst)
        self.logger.info('primes %s, seed %d (%s), exact=%s', self.primes,
                         self.seed, 'given' if self.seed_given else 'time',
                         exact)

    @property
    def prime(self) -> int:
        return self.primes[0]

    def require_seed(self, command: str) -> None:
        """Randomized commands in --strict mode need an explicit --seed."""
        if self.strict and not self.seed_given:
            raise InputError(command + " is randomized: --strict requires "
                             "--seed")

    def publish(self, report: RunReport) -> None:
        self.publisher.publish(report)
