"""
Verification reports
Per-item records, summaries, exit codes and the json / csv / pretty renderers
"""
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import aiofiles
import pandas as pd

from ..algebra.exactalg import RationalFunctionQ

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"
OUTPUT_FORMATS = ("json", "csv", "pretty")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2


def format_value(value: Any, var: str = "q") -> str:
    """Exact string: rational functions rendered, fractions as 'a/b'"""
    if isinstance(value, RationalFunctionQ):
        return value.render(var)
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def decimal_value(value: Any) -> Optional[str]:
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return f"{float(value):.6g}"
    return None


@dataclass
class VerificationRecord:
    """One compared pair: lhs against rhs for a family at given parameters"""

    family: str
    parameters: Dict[str, Any]
    lhs: str
    rhs: str
    equal: bool
    conjectural: bool = False
    terms: Optional[int] = None
    elapsed_ms: Optional[float] = None
    lhs_decimal: Optional[str] = None
    rhs_decimal: Optional[str] = None
    error: Optional[str] = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "equal" if self.equal else "mismatch"

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["status"] = self.status
        return data


def make_record(family: str, parameters: Dict[str, Any], lhs: Any, rhs: Any,
                conjectural: bool = False, terms: Optional[int] = None,
                started: Optional[float] = None, var: str = "q") -> VerificationRecord:
    """
    Compare lhs and rhs exactly and build a record

    Args:
        family: verification family name
        parameters: e.g. {"m": 3}
        lhs: RationalFunctionQ, Fraction, int or bool
        rhs: same kind as lhs
        conjectural: the expectation rests on an unproved formula
        terms: number of enumerated terms, when meaningful
        started: time.perf_counter() at start; when given, elapsed_ms is filled in
        var: variable name used when rendering

    Returns:
        VerificationRecord
    """
    equal = lhs == rhs
    elapsed = None if started is None else round((time.perf_counter() - started) * 1000.0, 3)
    record = VerificationRecord(
        family=family,
        parameters=dict(parameters),
        lhs=format_value(lhs, var),
        rhs=format_value(rhs, var),
        equal=bool(equal),
        conjectural=conjectural,
        terms=terms,
        elapsed_ms=elapsed,
        lhs_decimal=decimal_value(lhs),
        rhs_decimal=decimal_value(rhs),
    )
    if not record.equal:
        logger.warning(f"[MISMATCH] {family} {parameters}: {record.lhs} != {record.rhs}")
    else:
        tag = "[CONJECTURAL]" if conjectural else "[SUCCESS]"
        logger.info(f"{tag} {family} {parameters}")
    return record


def error_record(family: str, parameters: Dict[str, Any], error: BaseException) -> VerificationRecord:
    logger.error(f"{family} {parameters} failed: {error}")
    return VerificationRecord(family=family, parameters=dict(parameters), lhs="", rhs="",
                              equal=False, error=f"{type(error).__name__}: {error}")


@dataclass
class VerificationReport:
    """Records in request order plus the configuration they were produced under"""

    records: List[VerificationRecord] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION

    def add(self, record: VerificationRecord) -> None:
        self.records.append(record)

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)

    @property
    def summary(self) -> Dict[str, int]:
        errors = sum(1 for r in self.records if r.error is not None)
        passed = sum(1 for r in self.records if r.error is None and r.equal)
        return {
            "checked": len(self.records),
            "passed": passed,
            "failed": len(self.records) - passed - errors,
            "errors": errors,
        }

    @property
    def all_equal(self) -> bool:
        return all(r.equal and r.error is None for r in self.records)

    def exit_code(self) -> int:
        summary = self.summary
        if summary["errors"]:
            return EXIT_ERROR
        if summary["failed"]:
            return EXIT_MISMATCH
        return EXIT_OK

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool_version": self.tool_version,
            "config": self.config,
            "records": [r.to_dict() for r in self.records],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.records:
            row = {"family": r.family}
            row.update({f"{k}": v for k, v in sorted(r.parameters.items())})
            row.update({
                "lhs": r.lhs,
                "rhs": r.rhs,
                "status": r.status,
                "conjectural": r.conjectural,
                "terms": r.terms,
                "elapsed_ms": r.elapsed_ms,
            })
            rows.append(row)
        return pd.DataFrame(rows)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False)

    def to_pretty(self) -> str:
        summary = self.summary
        lines = [
            "=" * 70,
            f"VERIFICATION REPORT (version {self.tool_version})",
            "=" * 70,
        ]
        if self.records:
            lines.append(self.to_frame().drop(columns=["elapsed_ms"]).to_string(index=False))
        lines.extend([
            "",
            f"Checked: {summary['checked']}  Passed: {summary['passed']}  "
            f"Failed: {summary['failed']}  Errors: {summary['errors']}",
            "=" * 70,
        ])
        return "\n".join(lines)

    def render(self, output_format: str = "json") -> str:
        if output_format == "json":
            return self.to_json()
        if output_format == "csv":
            return self.to_csv()
        if output_format == "pretty":
            return self.to_pretty()
        raise ValueError(f"unknown output format: {output_format!r}")

    async def save(self, path: Path, output_format: str = "json") -> Path:
        """Write the rendered report; the parent directory is created if missing"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(path, "w", encoding="utf-8") as handle:
            await handle.write(self.render(output_format))
            await handle.write("\n")
        logger.info(f"Saved {output_format} report to: {path}")
        return path
