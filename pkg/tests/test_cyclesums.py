"""
Tests for centralizer weights and partition-sum identities
Run with: pytest tests/test_cyclesums.py -v
"""
import sys
from pathlib import Path

import pytest

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.algebra.exactalg import ONE, Q
from src.combinatorics.partitions import ORTHOGONAL, SYMPLECTIC, Partition, SignedPartition
from src.identities import cyclesums, formulas
from src.identities.cyclesums import (
    DIFF,
    IDENTITY_FAMILIES,
    REDUCED,
    SIGNED,
    SUM,
    SYMPL_SHAPE,
)


class TestCentralizers:
    """Centralizer orders of unipotent classes"""

    def test_gl_rank_one(self):
        assert cyclesums.c_gl(Partition((1,))).eval_at_q(5) == 4

    def test_gl_identity_class(self):
        assert cyclesums.c_gl(Partition((1, 1))) == formulas.group_order("GL", 2)

    def test_sp2_regular_class(self):
        for sign in (1, -1):
            sp = SignedPartition(Partition((2,)), SYMPLECTIC, ((2, sign),))
            assert cyclesums.c_sp(sp) == 2 * Q

    def test_sp2_identity_class(self):
        sp = SignedPartition(Partition((1, 1)), SYMPLECTIC)
        assert cyclesums.c_sp(sp) == formulas.group_order("Sp", 1)

    def test_flavor_mismatch(self):
        orthogonal = SignedPartition(Partition((1,)), ORTHOGONAL, ((1, 1),))
        with pytest.raises(ValueError):
            cyclesums.c_sp(orthogonal)
        symplectic = SignedPartition(Partition((2,)), SYMPLECTIC, ((2, 1),))
        with pytest.raises(ValueError):
            cyclesums.c_o(symplectic)

    def test_centralizer_factors_cover_signed_classes(self):
        factors = list(cyclesums.centralizer_factors(2, SYMPLECTIC))
        assert len(factors) == 3


class TestTau:
    """The sign / i weight on orthogonal classes"""

    def test_q_one_mod_four_is_real(self):
        sp = SignedPartition(Partition((1,)), ORTHOGONAL, ((1, -1),))
        weight = cyclesums.tau(sp, 1)
        assert weight.is_real
        assert weight.sign == -1

    def test_q_three_mod_four_picks_up_i(self):
        sp = SignedPartition(Partition((1,)), ORTHOGONAL, ((1, -1),))
        assert not cyclesums.tau(sp, 3).is_real

    def test_even_multiplicity_stays_real(self):
        sp = SignedPartition(Partition((1, 1)), ORTHOGONAL, ((1, 1),))
        assert cyclesums.tau(sp, 3).is_real

    def test_rejects_even_q(self):
        sp = SignedPartition(Partition((1,)), ORTHOGONAL, ((1, 1),))
        with pytest.raises(ValueError):
            cyclesums.tau(sp, 2)


class TestPartitionSums:
    """Left-hand sides against the closed forms"""

    @pytest.mark.parametrize("m", range(1, 5))
    def test_unitary(self, m):
        assert cyclesums.u_unitary_lhs(m) == formulas.delta_p_au(m)

    @pytest.mark.parametrize("m", range(1, 5))
    def test_general_linear(self, m):
        assert cyclesums.u_gl_lhs(m) == formulas.delta_p_agl(m)

    @pytest.mark.parametrize("m", range(1, 4))
    def test_symplectic_reduced_equals_signed(self, m):
        assert cyclesums.sum_sympl_lhs(m, SIGNED) == cyclesums.sum_sympl_lhs(m, REDUCED)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_orthogonal_sum_reduced_equals_signed(self, n):
        assert cyclesums.sum_orth_lhs(n, SUM, SIGNED) == cyclesums.sum_orth_lhs(n, SUM, REDUCED)

    @pytest.mark.parametrize("q_mod4", [1, 3])
    def test_orthogonal_diff_reduced_equals_signed(self, q_mod4):
        for n in (2, 4):
            assert cyclesums.sum_orth_lhs(n, DIFF, SIGNED, q_mod4) == cyclesums.sum_orth_lhs(n, DIFF, REDUCED)

    def test_diff_needs_even_dimension(self):
        with pytest.raises(ValueError):
            cyclesums.sum_orth_lhs(3, DIFF)

    def test_g_and_h_generating_functions(self):
        for m in range(1, 5):
            assert cyclesums.g_lhs(m) == formulas.g_rhs(m)
            assert cyclesums.h_lhs(m) == formulas.h_rhs(m)

    def test_parallel_sum_matches_sequential(self):
        sequential = cyclesums.reduced_sum(SYMPL_SHAPE, 8, 1, -1, workers=1)
        parallel = cyclesums.reduced_sum(SYMPL_SHAPE, 8, 1, -1, workers=2)
        assert sequential == parallel

    def test_negative_size_rejected(self):
        with pytest.raises(ValueError):
            cyclesums.reduced_sum(SYMPL_SHAPE, -2, 1, -1)


class TestUnipotentMass:
    """Σ 1/c over unipotent classes against the Steinberg proportions"""

    @pytest.mark.parametrize("family,n", [("GL", 3), ("U", 3), ("Sp", 2), ("Sp", 4), ("O", 3), ("O", 4)])
    def test_mass(self, family, n):
        assert cyclesums.unipotent_mass(family, n) == cyclesums.steinberg_target(family, n)

    def test_sp2_by_hand(self):
        assert cyclesums.unipotent_mass("Sp", 2) == Q / (Q ** 2 - 1)

    @pytest.mark.parametrize("q_mod4", [1, 3])
    def test_orthogonal_difference(self, q_mod4):
        assert cyclesums.unipotent_mass("O-bar", 4, q_mod4) == cyclesums.steinberg_target("O-bar", 4)

    def test_empty_dimension(self):
        assert cyclesums.steinberg_target("GL", 0) == ONE


class TestVerifyIdentity:
    """The record-producing entry point"""

    @pytest.mark.parametrize("family", IDENTITY_FAMILIES)
    def test_all_families_hold_for_small_m(self, family):
        report = cyclesums.verify_identity(family, [1, 2], degree_bound=12)
        assert report.summary["errors"] == 0
        assert report.all_equal

    def test_conjectural_records_flagged(self):
        report = cyclesums.verify_identity("sympl", [1, 2, 3])
        assert len(report.records) == 3
        assert all(r.conjectural for r in report.records)

    def test_proved_records_not_flagged(self):
        report = cyclesums.verify_identity("unitary-p", [1, 2])
        assert not any(r.conjectural for r in report.records)

    def test_cute_counts_match_series(self):
        counts = cyclesums.cute_counts(2, 10)
        assert counts == [int(c) for c in formulas.genfun_cute_rhs(2).series_coefficients(10)]

    def test_fixed_point_counts_by_hand(self):
        assert cyclesums.fixed_point_counts(1, 4) == [0, 1, 0, 0, 0]
        # two parts: (1,1), (2,2), (3,2), (4,2), ...
        assert cyclesums.fixed_point_counts(2, 6) == [0, 0, 1, 0, 1, 1, 1]

    @pytest.mark.parametrize("m", range(1, 7))
    def test_fixed_point_counts_match_g_series(self, m):
        coefficients = formulas.g_rhs(m).series_coefficients(30)
        assert cyclesums.fixed_point_counts(m, 30) == [int(c) for c in coefficients]

    def test_g_genfun_compares_series(self):
        report = cyclesums.verify_identity("g-genfun", [1, 2, 3], degree_bound=25)
        series = [r for r in report.records if r.parameters["form"] == "series"]
        assert len(series) == 3
        assert all(r.parameters["degree_bound"] == 25 for r in series)
        assert report.all_equal

    @pytest.mark.slow
    @pytest.mark.parametrize("m", range(1, 13))
    def test_fixed_point_counts_to_degree_forty(self, m):
        coefficients = formulas.g_rhs(m).series_coefficients(40)
        assert cyclesums.fixed_point_counts(m, 40) == [int(c) for c in coefficients]

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            cyclesums.verify_identity("no-such-family", [1])

    def test_empty_range(self):
        with pytest.raises(ValueError):
            cyclesums.verify_identity("sympl", [])
