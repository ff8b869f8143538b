"""Run reports and the publisher presenters listen to."""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from src.exact_arith import ExactScalar
from src.global_constants import (EXIT_INCONCLUSIVE, EXIT_INPUT_ERROR,
                                  EXIT_PASS, EXIT_VIOLATION)

PASS = 'pass'
FAIL = 'fail'
VIOLATED = 'violated'
NO_COUNTEREXAMPLE = 'no_counterexample'
VACUOUS = 'vacuous'
INCONCLUSIVE = 'inconclusive'
INPUT_ERROR = 'input_error'

EXIT_CODES = {
    PASS: EXIT_PASS,
    NO_COUNTEREXAMPLE: EXIT_PASS,
    VACUOUS: EXIT_PASS,
    FAIL: EXIT_VIOLATION,
    VIOLATED: EXIT_VIOLATION,
    INCONCLUSIVE: EXIT_INCONCLUSIVE,
    INPUT_ERROR: EXIT_INPUT_ERROR,
}


def lossless(value: Any) -> Any:
    """Integers and rationals as strings, recursively; booleans stay booleans."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, ExactScalar):
        return value.to_string()
    if isinstance(value, dict):
        return {str(k): lossless(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [lossless(v) for v in value]
    return value


@dataclass
class RunReport:
    """Outcome of one subcommand.

    === Attributes ===

    command: the subcommand name.
    inputs: echoed arguments and input files.
    seed: sampler seed, None for deterministic commands.
    primes: primes used for modular computations.
    verdict: pass, fail, violated, no_counterexample, vacuous, inconclusive
        or input_error.
    witnesses: exact numbers backing the verdict, as strings.
    details: full machine-readable result.
    timing_seconds: wall clock time; not part of determinism comparisons.
    """
    command: str
    inputs: Dict[str, Any]
    verdict: str
    seed: Optional[int] = None
    primes: List[int] = field(default_factory=list)
    witnesses: Dict[str, str] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    message: str = ''
    timing_seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_CODES.get(self.verdict, EXIT_INCONCLUSIVE)

    def to_json(self, timing: bool = True) -> Dict[str, Any]:
        data = {'command': self.command,
                'inputs': lossless(self.inputs),
                'seed': lossless(self.seed),
                'primes': lossless(self.primes),
                'verdict': self.verdict,
                'exit_code': self.exit_code,
                'witnesses': {k: str(v) for k, v in self.witnesses.items()},
                'details': lossless(self.details),
                'message': self.message}
        if timing:
            data['timing_seconds'] = round(self.timing_seconds, 3)
        return data


class ReportObserver(ABC):
    """Anything that wants each finished report."""

    @abstractmethod
    def notify(self, publisher: Any) -> None:
        pass


class ReportPublisher:
    """Holds the latest report and hands it to every observer."""
    last_report: Optional[RunReport]
    _observers: List[ReportObserver]

    def __init__(self, observers: Optional[List[ReportObserver]] = None
                 ) -> None:
        self._observers = list(observers) if observers else []
        self.last_report = None

    def add_observer(self, observer: ReportObserver) -> None:
        self._observers.append(observer)

    def observers(self) -> List[ReportObserver]:
        return list(self._observers)

    def publish(self, report: RunReport) -> None:
        self.last_report = report
        for observer in self._observers:
            observer.notify(self)
