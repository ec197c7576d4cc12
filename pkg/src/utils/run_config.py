"""
Run configuration
Merges config/settings.yaml, environment overrides and command-line flags
into one validated RunConfig
"""
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import yaml

from ..identities.cyclesums import IDENTITY_FAMILIES
from ..identities.formulas import linear_kind
from ..oracle.fields import parse_prime_power
from ..services.report import OUTPUT_FORMATS

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "delta", "oracle", "partitions")

CHAIN_FAMILIES = {
    "chain-u": "U",
    "chain-sp": "Sp",
    "chain-o-sum": "O-sum",
    "chain-o-diff": "O-diff",
}
SERIES_FAMILIES = ("euler", "jacobi", "jacobi-cute")
BIJECTION_FAMILY = "bijection"
VERIFY_FAMILIES = IDENTITY_FAMILIES + tuple(CHAIN_FAMILIES) + SERIES_FAMILIES + (BIJECTION_FAMILY,)

MAX_PARTITION_SIZE = 200

# environment variable -> RunConfig field
ENV_OVERRIDES = {
    "DERANGE_WORKERS": "workers",
    "DERANGE_OUTPUT_DIR": "output_dir",
    "DERANGE_LOG_FORMAT": "log_format",
    "DERANGE_BUDGET": "budget",
}
INT_FIELDS = {"workers", "budget"}


def default_settings_path() -> Path:
    return Path(__file__).resolve().parent.parent.parent / "config" / "settings.yaml"


def load_settings(path: Optional[Path] = None) -> Dict[str, Any]:
    """Read the YAML defaults; a missing file yields an empty mapping"""
    path = Path(path) if path is not None else default_settings_path()
    if not path.exists():
        logger.warning(f"Settings file not found: {path}")
        return {}
    with open(path, "r") as f:
        return yaml.safe_load(f) or {}


@dataclass
class RunConfig:
    """Everything one command invocation needs"""

    command: str
    family: Optional[str] = None
    m: Optional[int] = None
    q: List[int] = field(default_factory=list)
    p_power: bool = False
    witt: Optional[str] = None

    max_m: int = 25
    max_n: int = 40
    max_parts: int = 12
    max_a: int = 22
    relation_max_a: int = 18
    series_order: int = 16
    euler_order: int = 12
    jacobi_degree: int = 20
    jacobi_cute_degree: int = 16
    degree_bound: int = 20

    n: Optional[int] = None
    constraint: Optional[str] = None
    parts: Optional[int] = None
    cute: bool = False
    fixed_point: bool = False

    budget: int = 30_000_000
    literal_bound: int = 100_000
    workers: int = 1

    output: Optional[str] = None
    output_dir: str = "verification_results"
    output_format: str = "json"
    log_format: str = "console"
    timings: bool = False

    def validate(self) -> Dict:
        """
        Check the merged configuration

        Returns:
            Dict with validation results including:
            - is_valid: Boolean indicating if config is valid
            - errors: List of error messages
            - warnings: List of warning messages
            - summary: Summary of the effective settings
        """
        result = {
            "is_valid": True,
            "errors": [],
            "warnings": [],
            "summary": {},
        }
        errors, warnings = result["errors"], result["warnings"]

        if self.command not in COMMANDS:
            errors.append(f"Unknown command {self.command!r}; expected one of {COMMANDS}")
        for name in ("max_m", "max_n", "max_parts", "workers", "series_order", "euler_order",
                     "jacobi_degree", "jacobi_cute_degree", "degree_bound", "budget", "literal_bound"):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.max_a < 0:
            errors.append(f"max_a must be non-negative, got {self.max_a}")
        if self.series_order < 3:
            errors.append(f"series_order must be at least 3, got {self.series_order}")
        if self.output_format not in OUTPUT_FORMATS:
            errors.append(f"Unknown output format {self.output_format!r}; expected one of {OUTPUT_FORMATS}")
        if self.log_format not in ("console", "json"):
            errors.append(f"Unknown log format {self.log_format!r}")

        if self.command == "verify":
            if self.family not in VERIFY_FAMILIES:
                errors.append(f"Unknown verify family {self.family!r}")
            if self.max_m > 25:
                warnings.append(f"max_m = {self.max_m} goes beyond the desk-scale bound of 25")
        elif self.command in ("delta", "oracle"):
            self._validate_group_args(errors)
        elif self.command == "partitions":
            if self.n is None or not 0 <= self.n <= MAX_PARTITION_SIZE:
                errors.append(f"n must lie in 0..{MAX_PARTITION_SIZE}, got {self.n}")

        if self.workers > (os.cpu_count() or 1):
            warnings.append(f"workers = {self.workers} exceeds the {os.cpu_count()} available CPUs")

        result["is_valid"] = not errors
        result["summary"] = {k: v for k, v in asdict(self).items() if v not in (None, [], False)}
        if errors:
            logger.error(f"Configuration invalid: {errors}")
        for warning in warnings:
            logger.warning(warning)
        return result

    def _validate_group_args(self, errors: List[str]) -> None:
        try:
            kind = linear_kind(self.family or "")
        except ValueError as e:
            errors.append(str(e))
            return
        if self.m is None or self.m < 1:
            errors.append(f"m must be at least 1, got {self.m}")
        if not self.q:
            errors.append("at least one q is required")
        for q in self.q:
            try:
                p, _ = parse_prime_power(q)
            except ValueError as e:
                errors.append(str(e))
                continue
            if p == 2 and kind not in ("GL", "U"):
                errors.append(f"{self.family} requires odd q, got {q}")

    @classmethod
    def from_sources(cls, command: str, settings: Optional[Mapping[str, Any]] = None,
                     env: Optional[Mapping[str, str]] = None,
                     overrides: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """
        YAML defaults, then environment, then flags (None flags are ignored)

        With settings=None the shipped config/settings.yaml is read; pass {} to
        start from the dataclass defaults alone.

        Raises:
            ValueError: if the merged configuration is invalid
        """
        if settings is None:
            settings = load_settings()
        values: Dict[str, Any] = {}
        known = set(cls.__dataclass_fields__)
        for section in settings.values():
            if isinstance(section, Mapping):
                values.update({k: v for k, v in section.items() if k in known})
        env = os.environ if env is None else env
        for var, name in ENV_OVERRIDES.items():
            if env.get(var):
                raw = env[var]
                try:
                    values[name] = int(raw) if name in INT_FIELDS else raw
                except ValueError:
                    raise ValueError(f"{var} must be an integer, got {raw!r}")
        values.update({k: v for k, v in (overrides or {}).items() if v is not None and k in known})
        values["command"] = command
        config = cls(**values)

        report = config.validate()
        if not report["is_valid"]:
            raise ValueError("; ".join(report["errors"]))
        return config

    def report_config(self) -> Dict[str, Any]:
        """The subset echoed into reports; output paths and timings stay out"""
        data = asdict(self)
        for key in ("output", "output_dir", "log_format", "timings"):
            data.pop(key)
        return data
