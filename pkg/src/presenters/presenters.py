import json
import logging
import sys
from abc import ABC, abstractmethod
from typing import Any, List, TextIO

from src import log_config
from src.report import ReportObserver, ReportPublisher, RunReport

handler = log_config.get_file_handler('presenters.log')


class Presenter(ReportObserver, ABC):
    """Renders run reports somewhere."""

    @abstractmethod
    def present(self, report: RunReport) -> None:
        pass

    def notify(self, publisher: Any) -> None:
        if not isinstance(publisher, ReportPublisher):
            raise ValueError('Expected ReportPublisher, not ' + str(publisher))
        if publisher.last_report is not None:
            self.present(publisher.last_report)


class JsonPresenter(Presenter):
    """Writes the report as deterministic JSON: sorted keys, indent 2.

    === Private Attributes ===

    stream: where the JSON goes.
    timing: include timing_seconds.
    """
    logger: logging.Logger

    _stream: TextIO
    _timing: bool

    def __init__(self, stream: TextIO = None, timing: bool = True) -> None:
        self.logger = logging.getLogger('JSON Presenter')
        self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG)
        self._stream = stream or sys.stdout
        self._timing = timing

    def render(self, report: RunReport) -> str:
        return json.dumps(report.to_json(timing=self._timing), sort_keys=True,
                          indent=2, ensure_ascii=False)

    def present(self, report: RunReport) -> None:
        self.logger.debug('presenting %s report', report.command)
        print(self.render(report), file=self._stream)


class ConsolePresenter(Presenter):
    """Prints a short human-readable summary.

    Format

        === <command> ===
        verdict: <verdict> (exit <code>)
        <message>

        === Witnesses ===
        <name>: <value>
    """
    logger: logging.Logger

    _stream: TextIO

    def __init__(self, stream: TextIO = None) -> None:
        self.logger = logging.getLogger('Console Presenter')
        self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG)
        self._stream = stream or sys.stdout

    def render(self, report: RunReport) -> str:
        lines: List[str] = [
            '=== ' + report.command + ' ===',
            'verdict: ' + report.verdict + ' (exit ' + str(report.exit_code)
            + ')',
        ]
        if report.seed is not None:
            lines.append('seed: ' + str(report.seed))
        if report.primes:
            lines.append('primes: ' + ', '.join(str(p) for p in report.primes))
        if report.message:
            lines.append(report.message)
        if report.witnesses:
            lines.append('')
            lines.append('=== Witnesses ===')
            for name in sorted(report.witnesses):
                lines.append(name + ': ' + report.witnesses[name])
        lines.append('time: {:.2f}s'.format(report.timing_seconds))
        return '\n'.join(lines)

    def present(self, report: RunReport) -> None:
        text = self.render(report)
        self.logger.info(text)
        print(text, file=self._stream)


def make_presenters(json_only: bool, stream: Any = None) -> List[Presenter]:
    """--json selects JSON alone; otherwise the summary follows the JSON."""
    if json_only:
        return [JsonPresenter(stream)]
    return [JsonPresenter(stream), ConsolePresenter(stream)]
