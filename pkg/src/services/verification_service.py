"""
Verification Service
Turns a RunConfig into verification jobs, runs them (optionally across worker
processes) and saves the resulting report
"""
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from ..algebra.exactalg import render_fraction
from ..combinatorics.partitions import (
    ALL_EVEN_MULTIPLICITY, EVEN_PARTS_EVEN_MULTIPLICITY, ODD_PARTS_EVEN_MULTIPLICITY,
    Partition, PartitionConstraint, bijection_counts, enumerate_partitions, has_fixed_point, is_cute,
)
from ..identities import formulas
from ..identities.cyclesums import IDENTITY_FAMILIES, verify_identity
from ..identities.series import series_records, verify_chain
from ..oracle.fields import parse_prime_power
from ..oracle.grouporacle import compare_with_formula
from ..utils.run_config import BIJECTION_FAMILY, CHAIN_FAMILIES, SERIES_FAMILIES, RunConfig
from .report import VerificationReport, error_record, make_record

logger = logging.getLogger(__name__)

CONSTRAINT_ALIASES = {
    "odd-even-mult": ODD_PARTS_EVEN_MULTIPLICITY,
    "even-even-mult": EVEN_PARTS_EVEN_MULTIPLICITY,
    "all-even-mult": ALL_EVEN_MULTIPLICITY,
}

REPORT_EXTENSIONS = {"json": "json", "csv": "csv", "pretty": "txt"}

# (label, parameters, callable) where the callable returns a VerificationReport
Job = Tuple[str, Dict[str, Any], Callable[[], VerificationReport]]


def bijection_report(a: int, relation_max_a: int) -> VerificationReport:
    """
    Cardinality checks for one a and every 0 <= b <= a

    |A| = |B| always; |F| - |E| = |A| and |F| = |G| while a <= relation_max_a.
    """
    report = VerificationReport()
    for b in range(a + 1):
        size_a = bijection_counts(a, b, "A")
        params = {"a": a, "b": b}
        report.add(make_record(BIJECTION_FAMILY, dict(params, relation="A=B"),
                               size_a, bijection_counts(a, b, "B")))
        if a <= relation_max_a:
            size_e = bijection_counts(a, b, "E")
            size_f = bijection_counts(a, b, "F")
            size_g = bijection_counts(a, b, "G")
            report.add(make_record(BIJECTION_FAMILY, dict(params, relation="F-E=A"), size_f - size_e, size_a))
            report.add(make_record(BIJECTION_FAMILY, dict(params, relation="F=G"), size_f, size_g))
    return report


def partition_constraint(constraint: Optional[str], parts: Optional[int]) -> PartitionConstraint:
    result = PartitionConstraint.none()
    if constraint:
        if constraint not in CONSTRAINT_ALIASES:
            raise ValueError(f"unknown constraint {constraint!r}; expected one of {sorted(CONSTRAINT_ALIASES)}")
        result = result & PartitionConstraint.rule(CONSTRAINT_ALIASES[constraint])
    if parts is not None:
        result = result & PartitionConstraint.exactly_m_parts(parts)
    return result


def list_partitions(n: int, constraint: Optional[str] = None, parts: Optional[int] = None,
                    cute: bool = False, fixed_point: bool = False) -> Iterator[Partition]:
    """Stream partitions of n, optionally keeping only cute ones or ones with a fixed point"""
    for lam in enumerate_partitions(n, partition_constraint(constraint, parts)):
        if cute and not is_cute(lam):
            continue
        if fixed_point and not has_fixed_point(lam):
            continue
        yield lam


def delta_values(config: RunConfig) -> List[Dict[str, Any]]:
    """Closed-form δ or δ_p of the affine family at each requested q"""
    kind = formulas.linear_kind(config.family)
    family = formulas.GroupFamily(kind, config.m)
    if config.p_power:
        closed = formulas.expected_delta_p(kind, config.m)
        conjectural = formulas.delta_p_conjectural(kind)
    else:
        closed = formulas.expected_delta(kind, config.m)
        conjectural = family.conjectural
    rows = []
    for q in config.q:
        p, _ = parse_prime_power(q)
        if p == 2 and kind not in (formulas.GL, formulas.U):
            raise ValueError(f"{family.affine_name} requires odd q, got {q}")
        value: Fraction = closed.eval_at_q(q)
        rows.append({
            "family": family.affine_name,
            "dimension": family.dimension,
            "m": config.m,
            "q": q,
            "p_power": config.p_power,
            "value": value,
            "text": render_fraction(value) + (" conjectural" if conjectural else ""),
            "conjectural": conjectural,
        })
    return rows


class VerificationService:
    """
    Orchestrates verification runs for one RunConfig

    Workflow:
    1. Split the request into independent jobs (one per m, per a, per q, ...)
    2. Run them inline, or across worker processes when workers > 1
    3. Merge the partial reports in request order and save
    """

    def __init__(self, config: RunConfig):
        self.config = config

    def verify_jobs(self) -> List[Job]:
        c = self.config
        family = c.family
        if family == "cute-genfun":
            return [(family, {"m": m}, partial(verify_identity, family, [m], 1, c.max_n, c.timings))
                    for m in range(1, c.max_parts + 1)]
        if family in IDENTITY_FAMILIES:
            # g-genfun counts fixed-point partitions over the same window as cute-genfun
            bound = c.max_n if family == "g-genfun" else c.degree_bound
            return [(family, {"m": m}, partial(verify_identity, family, [m], 1, bound, c.timings))
                    for m in range(1, c.max_m + 1)]
        if family in CHAIN_FAMILIES:
            return [(family, {"order": c.series_order},
                     partial(verify_chain, CHAIN_FAMILIES[family], c.series_order, c.timings))]
        if family in SERIES_FAMILIES:
            bound = {"euler": c.euler_order, "jacobi": c.jacobi_degree,
                     "jacobi-cute": c.jacobi_cute_degree}[family]
            return [(family, {"bound": bound}, partial(series_records, family, bound, c.timings))]
        if family == BIJECTION_FAMILY:
            return [(family, {"a": a}, partial(bijection_report, a, c.relation_max_a))
                    for a in range(c.max_a + 1)]
        raise ValueError(f"unknown verify family {family!r}")

    def oracle_jobs(self) -> List[Job]:
        c = self.config
        label = f"oracle-{'delta-p' if c.p_power else 'delta'}"
        return [
            (label, {"family": c.family, "m": c.m, "q": q},
             partial(compare_with_formula, c.family, c.m, q, c.p_power, c.budget,
                     c.literal_bound, c.witt, c.timings))
            for q in c.q
        ]

    async def run_jobs(self, jobs: List[Job]) -> VerificationReport:
        """
        Run jobs and merge their reports in request order

        A job that raises becomes an error record; it never aborts the batch.
        """
        logger.info(f"Starting batch of {len(jobs)} jobs with {self.config.workers} worker(s)")
        if self.config.workers > 1:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=self.config.workers) as executor:
                tasks = [loop.run_in_executor(executor, fn) for _, _, fn in jobs]
                completed = await asyncio.gather(*tasks, return_exceptions=True)
        else:
            completed = []
            for _, _, fn in jobs:
                try:
                    completed.append(fn())
                except Exception as e:
                    completed.append(e)

        report = VerificationReport(config=self.config.report_config())
        for (label, params, _), result in zip(jobs, completed):
            if isinstance(result, Exception):
                logger.error(f"Job {label} {params} failed", exc_info=result)
                report.add(error_record(label, params, result))
            else:
                report.extend(result)
        logger.info(f"Batch completed: {report.summary}")
        return report

    async def run_verify(self) -> VerificationReport:
        logger.info("=" * 60)
        logger.info(f"VERIFY {self.config.family}")
        logger.info("=" * 60)
        return await self.run_jobs(self.verify_jobs())

    async def run_oracle(self) -> VerificationReport:
        logger.info("=" * 60)
        logger.info(f"ORACLE {self.config.family} m={self.config.m} q={self.config.q}")
        logger.info("=" * 60)
        return await self.run_jobs(self.oracle_jobs())

    def report_path(self) -> Path:
        c = self.config
        if c.output:
            return Path(c.output)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        name = f"{c.command}_{c.family or 'report'}_{timestamp}.{REPORT_EXTENSIONS[c.output_format]}"
        return Path(c.output_dir) / name

    async def save_report(self, report: VerificationReport) -> Dict[str, Any]:
        """
        Write the report

        Returns:
            Dict with "success", "path" and, on failure, "error"
        """
        path = self.report_path()
        try:
            await report.save(path, self.config.output_format)
            return {"success": True, "path": str(path), "error": None}
        except OSError as e:
            logger.error(f"Failed to save report to {path}: {e}", exc_info=True)
            return {"success": False, "path": str(path), "error": str(e)}
