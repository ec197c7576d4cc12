"""
Tests for truncated series, factorization chains and the classical identities
Run with: pytest tests/test_series.py -v
"""
import sys
from pathlib import Path

import pytest

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.algebra.exactalg import ONE, Q, ZERO
from src.identities import series
from src.identities.series import CHAIN_FAMILIES, TruncatedSeries


class TestTruncatedSeries:
    """Arithmetic modulo y^order"""

    def test_geometric_inverse(self):
        one_minus_y = TruncatedSeries([ONE, -ONE], 6)
        assert one_minus_y.invert() == TruncatedSeries.geometric(6)
        assert one_minus_y * TruncatedSeries.geometric(6) == TruncatedSeries.one(6)

    def test_geometric_step(self):
        assert TruncatedSeries.geometric(5, 2).coefficients == [ONE, ZERO, ONE, ZERO, ONE]

    def test_truncation(self):
        s = TruncatedSeries([1, 2, 3, 4], 2)
        assert s.coefficients == [ONE, 2 * ONE]

    def test_shift_matches_monomial_product(self):
        s = TruncatedSeries([ONE, Q, Q ** 2], 5)
        assert s.shift(2, Q) == s * TruncatedSeries.monomial(2, 5, Q)

    def test_division(self):
        a = TruncatedSeries([ONE, Q], 4)
        b = TruncatedSeries([ONE, ONE], 4)
        assert (a / b) * b == a

    def test_scalar_multiplication(self):
        assert TruncatedSeries([1, 1], 3) * 2 == TruncatedSeries([2, 2], 3)

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            TruncatedSeries.one(3) + TruncatedSeries.one(4)

    def test_coefficient_outside_window(self):
        with pytest.raises(IndexError):
            TruncatedSeries.one(3).coefficient(3)

    def test_non_invertible(self):
        with pytest.raises(ZeroDivisionError):
            TruncatedSeries([ZERO, ONE], 3).invert()

    def test_non_positive_order(self):
        with pytest.raises(ValueError):
            TruncatedSeries([], 0)


class TestUnipotentSeries:
    """The T series"""

    def test_unitary_first_coefficient(self):
        assert series.build_T("U", 4).coefficient(1) == ONE / (Q + 1)

    def test_symplectic_has_only_even_terms(self):
        t = series.build_T("Sp", 6)
        assert t.coefficient(1) == ZERO
        assert t.coefficient(2) == Q / (Q ** 2 - 1)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            series.build_T("E8", 4)


class TestChains:
    """Factorization chains re-derive the closed forms"""

    @pytest.mark.parametrize("family", CHAIN_FAMILIES)
    def test_chain_holds(self, family):
        report = series.verify_chain(family, 8)
        assert report.records
        assert report.all_equal
        assert report.config["order"] == 8

    def test_symplectic_chain_flags_conjectural_steps(self):
        report = series.verify_chain("Sp", 6)
        flagged = {r.parameters["check"] for r in report.records if r.conjectural}
        assert flagged == {"u-prime", "delta"}

    def test_unknown_chain(self):
        with pytest.raises(ValueError):
            series.verify_chain("GL", 8)

    def test_order_too_small(self):
        with pytest.raises(ValueError):
            series.verify_chain("U", 2)


class TestClassicalIdentities:
    """Euler and Jacobi triple product inside a window"""

    def test_euler(self):
        assert series.euler_check(6)

    def test_jacobi(self):
        assert series.jacobi_check(8)

    def test_jacobi_cute_specialization(self):
        assert series.jacobi_cute_check(8)

    @pytest.mark.parametrize("kind", ["euler", "jacobi", "jacobi-cute"])
    def test_records(self, kind):
        report = series.series_records(kind, 6)
        assert report.records
        assert report.exit_code() == 0

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            series.series_records("ramanujan", 6)
