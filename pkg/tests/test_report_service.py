"""
Tests for reports, run configuration and the verification service
Run with: pytest tests/test_report_service.py -v
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

import pandas as pd
import pytest

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.algebra.exactalg import Q
from src.combinatorics.partitions import has_fixed_point, is_cute
from src.services.report import (
    EXIT_ERROR,
    EXIT_MISMATCH,
    EXIT_OK,
    VerificationReport,
    error_record,
    make_record,
)
from src.services.verification_service import (
    VerificationService,
    bijection_report,
    delta_values,
    list_partitions,
)
from src.utils.run_config import RunConfig, load_settings


class TestConfiguration:
    """Configuration files and merging"""

    def test_config_files_exist(self):
        base_path = Path(__file__).parent.parent
        assert (base_path / "config" / "settings.yaml").exists()
        assert (base_path / "config" / ".env.example").exists()
        assert (base_path / "requirements.txt").exists()

    def test_shipped_settings_validate(self):
        config = RunConfig.from_sources("verify", load_settings(), env={}, overrides={"family": "unitary-p"})
        assert config.max_m == 25
        assert config.q == [3]
        assert config.output_format == "json"

    def test_shipped_settings_by_default(self):
        config = RunConfig.from_sources("verify", env={}, overrides={"family": "unitary-p"})
        assert config.max_m == 25
        assert config.q == [3]

    def test_missing_settings_file(self, tmp_path):
        assert load_settings(tmp_path / "absent.yaml") == {}

    def test_precedence(self, tmp_path):
        settings_file = tmp_path / "settings.yaml"
        settings_file.write_text("verify:\n  max_m: 5\nrun:\n  workers: 1\n")
        config = RunConfig.from_sources(
            "verify",
            load_settings(settings_file),
            env={"DERANGE_WORKERS": "2", "DERANGE_OUTPUT_DIR": "elsewhere"},
            overrides={"family": "sympl", "max_m": 3, "workers": None},
        )
        assert config.max_m == 3
        assert config.workers == 2
        assert config.output_dir == "elsewhere"

    def test_bad_env_integer(self):
        with pytest.raises(ValueError):
            RunConfig.from_sources("verify", {}, env={"DERANGE_BUDGET": "lots"}, overrides={"family": "sympl"})

    def test_invalid_family(self):
        with pytest.raises(ValueError):
            RunConfig.from_sources("verify", {}, env={}, overrides={"family": "not-a-family"})

    def test_validate_collects_errors(self):
        result = RunConfig(command="delta", family="ASp", m=0, q=[2, 6]).validate()
        assert not result["is_valid"]
        assert len(result["errors"]) == 3

    def test_validate_warns_on_large_m(self):
        result = RunConfig(command="verify", family="unitary-p", max_m=30).validate()
        assert result["is_valid"]
        assert result["warnings"]

    def test_partitions_bound(self):
        assert not RunConfig(command="partitions", n=500).validate()["is_valid"]
        assert RunConfig(command="partitions", n=0).validate()["is_valid"]

    def test_report_config_excludes_output_settings(self):
        data = RunConfig(command="verify", family="sympl", output="x.json").report_config()
        assert "output" not in data
        assert "timings" not in data
        assert data["family"] == "sympl"


class TestReport:
    """Records, summaries and renderers"""

    def _report(self):
        report = VerificationReport(config={"command": "verify"})
        report.add(make_record("unitary", {"m": 1}, Q + 1, Q + 1))
        report.add(make_record("sympl", {"m": 1}, Fraction(1, 2), Fraction(1, 2), conjectural=True))
        return report

    def test_all_equal(self):
        report = self._report()
        assert report.all_equal
        assert report.summary == {"checked": 2, "passed": 2, "failed": 0, "errors": 0}
        assert report.exit_code() == EXIT_OK

    def test_mismatch_exit_code(self):
        report = self._report()
        report.add(make_record("unitary", {"m": 2}, Fraction(1, 3), Fraction(1, 2)))
        assert report.records[-1].status == "mismatch"
        assert report.exit_code() == EXIT_MISMATCH

    def test_error_outranks_mismatch(self):
        report = self._report()
        report.add(make_record("unitary", {"m": 2}, 1, 2))
        report.add(error_record("unitary", {"m": 3}, ArithmeticError("boom")))
        assert report.records[-1].error == "ArithmeticError: boom"
        assert report.exit_code() == EXIT_ERROR

    def test_exact_rendering(self):
        record = make_record("agl", {"m": 1, "q": 2}, Fraction(1, 2), Fraction(1, 2))
        assert record.lhs == "1/2"
        assert record.lhs_decimal == "0.5"
        assert record.elapsed_ms is None

    def test_json(self):
        data = json.loads(self._report().to_json())
        assert data["summary"]["passed"] == 2
        assert data["records"][1]["conjectural"] is True
        assert data["records"][0]["status"] == "equal"
        assert data["config"] == {"command": "verify"}

    def test_frame_and_csv(self):
        frame = self._report().to_frame()
        assert isinstance(frame, pd.DataFrame)
        assert list(frame["family"]) == ["unitary", "sympl"]
        assert self._report().to_csv().splitlines()[0].startswith("family,")

    def test_pretty(self):
        text = self._report().to_pretty()
        assert "VERIFICATION REPORT" in text
        assert "Checked: 2  Passed: 2" in text

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            self._report().render("xml")

    @pytest.mark.asyncio
    async def test_save_creates_directory(self, tmp_path):
        path = await self._report().save(tmp_path / "nested" / "report.json")
        assert json.loads(path.read_text())["summary"]["checked"] == 2


class TestHelpers:
    """Bijection reports, δ values and partition listing"""

    def test_bijection_report(self):
        report = bijection_report(4, relation_max_a=4)
        # b = 0..4, three relations each
        assert len(report.records) == 15
        assert report.all_equal

    def test_bijection_relations_capped(self):
        assert len(bijection_report(4, relation_max_a=3).records) == 5

    def test_delta_values(self):
        rows = delta_values(RunConfig(command="delta", family="AU", m=2, q=[2]))
        assert rows[0]["value"] == Fraction(11, 32)
        assert rows[0]["text"] == "11/32 (0.34375)"
        assert rows[0]["dimension"] == 2

    def test_conjectural_delta_values(self):
        rows = delta_values(RunConfig(command="delta", family="ASp", m=1, q=[3, 5]))
        assert rows[0]["value"] == Fraction(7, 27)
        assert rows[0]["text"].endswith("conjectural")
        assert [row["q"] for row in rows] == [3, 5]

    def test_delta_values_even_q(self):
        with pytest.raises(ValueError):
            delta_values(RunConfig(command="delta", family="AO-plus", m=1, q=[4]))

    def test_list_partitions(self):
        assert [lam.parts for lam in list_partitions(4, parts=2)] == [(3, 1), (2, 2)]
        assert [lam.parts for lam in list_partitions(4, constraint="odd-even-mult")] == [
            (4,), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        cute = list(list_partitions(6, cute=True))
        assert cute
        assert all(is_cute(lam) for lam in cute)
        assert all(has_fixed_point(lam) for lam in list_partitions(6, fixed_point=True))

    def test_unknown_constraint(self):
        with pytest.raises(ValueError):
            list(list_partitions(4, constraint="primes-only"))


class TestVerificationService:
    """Job splitting, execution and saving"""

    def test_identity_jobs_per_m(self):
        service = VerificationService(RunConfig(command="verify", family="unitary-p", max_m=4))
        jobs = service.verify_jobs()
        assert [params for _, params, _ in jobs] == [{"m": m} for m in range(1, 5)]

    def test_g_genfun_uses_coefficient_bound(self):
        service = VerificationService(RunConfig(command="verify", family="g-genfun", max_m=2, max_n=12))
        report = service.verify_jobs()[1][2]()
        series = [r for r in report.records if r.parameters["form"] == "series"]
        assert len(series) == 1
        assert series[0].parameters == {"m": 2, "form": "series", "degree_bound": 12}
        assert report.all_equal

    def test_chain_is_one_job(self):
        service = VerificationService(RunConfig(command="verify", family="chain-u", series_order=6))
        assert len(service.verify_jobs()) == 1

    def test_unknown_verify_family(self):
        with pytest.raises(ValueError):
            VerificationService(RunConfig(command="verify", family="nope")).verify_jobs()

    @pytest.mark.asyncio
    async def test_run_verify(self):
        service = VerificationService(RunConfig(command="verify", family="unitary-p", max_m=3))
        report = await service.run_verify()
        assert report.summary["checked"] == 3
        assert report.exit_code() == EXIT_OK
        assert report.config["family"] == "unitary-p"

    @pytest.mark.asyncio
    async def test_parallel_matches_inline(self):
        inline = await VerificationService(
            RunConfig(command="verify", family="bijection", max_a=5, relation_max_a=5)).run_verify()
        parallel = await VerificationService(
            RunConfig(command="verify", family="bijection", max_a=5, relation_max_a=5, workers=2)).run_verify()
        assert [r.to_dict() for r in inline.records] == [r.to_dict() for r in parallel.records]

    @pytest.mark.asyncio
    async def test_run_oracle(self):
        service = VerificationService(RunConfig(command="oracle", family="AU", m=1, q=[2]))
        report = await service.run_oracle()
        assert report.all_equal

    @pytest.mark.asyncio
    async def test_failing_job_becomes_error_record(self):
        service = VerificationService(RunConfig(command="oracle", family="AGL", m=3, q=[3], budget=10))
        report = await service.run_oracle()
        assert report.summary["errors"] == 1
        assert "EnumerationBudgetError" in report.records[0].error
        assert report.exit_code() == EXIT_ERROR

    def test_report_path(self, tmp_path):
        explicit = VerificationService(RunConfig(command="verify", family="sympl", output=str(tmp_path / "r.json")))
        assert explicit.report_path() == tmp_path / "r.json"
        stamped = VerificationService(RunConfig(command="verify", family="sympl", output_dir=str(tmp_path),
                                                output_format="pretty"))
        path = stamped.report_path()
        assert path.parent == tmp_path
        assert path.name.startswith("verify_sympl_")
        assert path.suffix == ".txt"

    @pytest.mark.asyncio
    async def test_save_report(self, tmp_path):
        config = RunConfig(command="verify", family="sympl", output=str(tmp_path / "out.csv"), output_format="csv")
        result = await VerificationService(config).save_report(VerificationReport())
        assert result["success"]
        assert Path(result["path"]).exists()
