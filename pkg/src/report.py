"""
Report - verification results in text and JSON
Deterministic output so reports can be diffed and stored as goldens
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from config import TOOL_VERSION

VERDICTS = ('pass', 'fail', 'error')
FORMATS = ('text', 'json')


def _plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-native values"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return value
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


@dataclass
class CaseResult:
    """One verified property"""

    name: str
    verdict: str
    residual: Union[str, float, None] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")
        self.residual = _plain(self.residual)
        self.details = _plain(self.details)

    @property
    def passed(self) -> bool:
        return self.verdict == 'pass'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'verdict': self.verdict,
            'residual': self.residual,
            'details': self.details,
        }


@dataclass
class VerificationReport:
    """Outcome of a symbolic or numeric verification run"""

    suite: str
    cases: List[CaseResult] = field(default_factory=list)
    summary: Dict[str, int] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION
    seed: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.summary = self.tally()
        self.details = _plain(self.details)

    @classmethod
    def from_cases(cls, suite: str, cases: List[CaseResult], seed: Optional[int] = None) -> 'VerificationReport':
        return cls(suite=suite, cases=list(cases), seed=seed)

    def tally(self) -> Dict[str, int]:
        return {
            'passed': sum(1 for c in self.cases if c.verdict == 'pass'),
            'failed': sum(1 for c in self.cases if c.verdict == 'fail'),
            'errored': sum(1 for c in self.cases if c.verdict == 'error'),
        }

    def add(self, case: CaseResult):
        self.cases.append(case)
        self.summary = self.tally()

    def extend(self, other: 'VerificationReport'):
        for case in other.cases:
            self.add(case)
        if other.details:
            self.details[other.suite] = other.details

    @property
    def all_passed(self) -> bool:
        return self.summary['failed'] == 0 and self.summary['errored'] == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'cases': [c.to_dict() for c in self.cases],
            'summary': dict(self.summary),
            'tool_version': self.tool_version,
            'seed': self.seed,
            'details': _plain(self.details),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'VerificationReport':
        cases = [
            CaseResult(
                name=c['name'],
                verdict=c['verdict'],
                residual=c.get('residual'),
                details=c.get('details', {}),
            )
            for c in data.get('cases', [])
        ]
        report = cls(
            suite=data['suite'],
            cases=cases,
            tool_version=data.get('tool_version', TOOL_VERSION),
            seed=data.get('seed'),
            details=data.get('details', {}),
        )
        if data.get('summary') and data['summary'] != report.summary:
            raise ValueError("Report summary does not match its cases")
        return report


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.3e}"
    return str(value)


def _text_report(report: VerificationReport) -> str:
    lines = [
        '=' * 70,
        f"FW VERIFICATION: {report.suite}",
        '=' * 70,
        '',
    ]
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
        lines.append('')

    for case in report.cases:
        mark = {'pass': '✓', 'fail': '✗', 'error': '!'}[case.verdict]
        lines.append(f"{mark} {case.name} [{case.verdict}]")
        if case.residual is not None:
            lines.append(f"   residual: {_format_value(case.residual)}")
        for key in sorted(case.details):
            lines.append(f"   {key}: {_format_value(case.details[key])}")
        lines.append('')

    for key in sorted(report.details):
        value = report.details[key]
        if isinstance(value, dict):
            lines.append(f"{key}:")
            for inner in sorted(value):
                lines.append(f"   {inner}: {_format_value(value[inner])}")
        else:
            lines.append(f"{key}: {_format_value(value)}")
    if report.details:
        lines.append('')

    s = report.summary
    lines.append('=' * 70)
    lines.append(f"SUMMARY: {s['passed']} passed, {s['failed']} failed, {s['errored']} errored")
    lines.append(f"tool_version: {report.tool_version}")
    lines.append('=' * 70)
    return '\n'.join(lines) + '\n'


def emit_report(report: VerificationReport, format: str = 'text') -> bytes:
    """
    Serialize a report

    Args:
        report: The report to serialize
        format: 'text' or 'json'

    Returns:
        UTF-8 bytes, identical for identical reports
    """
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    if format == 'json':
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'
    else:
        text = _text_report(report)
    return text.encode('utf-8')


def load_report(data: Union[bytes, str]) -> VerificationReport:
    """Parse JSON produced by emit_report"""
    if isinstance(data, bytes):
        data = data.decode('utf-8')
    return VerificationReport.from_dict(json.loads(data))
