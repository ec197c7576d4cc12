"""
Tests for exact Laurent / rational-function arithmetic
Run with: pytest tests/test_exactalg.py -v
"""
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.algebra.exactalg import (
    ONE,
    ONE_LAURENT,
    Q,
    X,
    ZERO,
    GaussianRationalFunction,
    HalfPowerLaurent,
    NonSquareEvaluationError,
    RationalFunctionQ,
    fsum,
    gaussian_binomial,
    laurent_pochhammer,
    normalize,
    pochhammer,
    rational_sqrt,
    render_fraction,
)

_rng = random.Random(0)


def _random_laurent(nonzero: bool = False) -> HalfPowerLaurent:
    while True:
        p = HalfPowerLaurent({_rng.randint(-6, 6): _rng.randint(-4, 4) for _ in range(_rng.randint(0, 4))})
        if not (nonzero and p.is_zero()):
            return p


LAURENT_TRIPLES = [tuple(_random_laurent() for _ in range(3)) for _ in range(40)]
RATIONAL_PAIRS = [
    tuple(RationalFunctionQ(_random_laurent(), _random_laurent(nonzero=True)) for _ in range(2))
    for _ in range(30)
]


class TestHalfPowerLaurent:
    """Laurent polynomials in s with s^2 = q"""

    def test_q_power_is_even_s_power(self):
        assert HalfPowerLaurent.q_power(3) == HalfPowerLaurent.s_power(6)

    def test_zero_coefficients_dropped(self):
        p = HalfPowerLaurent({0: 1, 2: 0})
        assert len(p) == 1
        assert p == ONE_LAURENT

    def test_negative_power_of_monomial(self):
        assert HalfPowerLaurent.q_power(2, 3) ** -1 == HalfPowerLaurent.q_power(-2, Fraction(1, 3))

    def test_negative_power_of_binomial_rejected(self):
        with pytest.raises(ValueError):
            (ONE_LAURENT + HalfPowerLaurent.q_power(1)) ** -1

    def test_half_integral_evaluation(self):
        s = HalfPowerLaurent.s_power(1)
        assert s.evaluate_at_q(Fraction(9, 4)) == Fraction(3, 2)
        with pytest.raises(NonSquareEvaluationError):
            s.evaluate_at_q(2)

    def test_substitute_inverse_variable(self):
        p = ONE_LAURENT - HalfPowerLaurent.q_power(1)
        assert p.substitute(1, -1) == ONE_LAURENT - HalfPowerLaurent.q_power(-1)
        assert p.substitute(-1, -1) == ONE_LAURENT + HalfPowerLaurent.q_power(-1)

    def test_pochhammer_matches_sympy(self):
        q = sympy.Symbol("q")
        expected = sympy.Poly(sympy.expand(sympy.prod([1 - q ** i for i in range(1, 5)])), q).as_dict()
        ours = laurent_pochhammer(HalfPowerLaurent.q_power(1), 4)
        assert {e // 2: int(c) for e, c in ours.items()} == {k[0]: int(v) for k, v in expected.items()}

    @pytest.mark.parametrize("a,b,c", LAURENT_TRIPLES)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == HalfPowerLaurent()


class TestRationalFunctionQ:
    """Canonical forms, evaluation and series expansion"""

    def test_cancellation(self):
        assert (Q ** 2 - 1) / (Q - 1) == Q + 1

    def test_equality_with_scalars(self):
        assert (Q - Q) == 0
        assert (Q / Q) == 1
        assert RationalFunctionQ.from_scalar(Fraction(1, 2)) == Fraction(1, 2)

    def test_eval_at_q(self):
        assert ((Q + 1) / Q).eval_at_q(2) == Fraction(3, 2)

    def test_eval_at_pole(self):
        with pytest.raises(ZeroDivisionError):
            (ONE / (Q - 1)).eval_at_q(1)

    def test_eval_at_zero(self):
        with pytest.raises(ValueError):
            Q.eval_at_q(0)

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            ZERO.inv()

    def test_half_integral_eval_at_square(self):
        f = RationalFunctionQ.s_power(1) / (Q + 1)
        assert f.eval_at_q(4) == Fraction(2, 5)
        with pytest.raises(NonSquareEvaluationError):
            f.eval_at_q(3)

    def test_series_of_geometric(self):
        assert (ONE / (ONE - X)).series_coefficients(5) == [1] * 6

    def test_series_of_partition_generator(self):
        # 1/((1-x)(1-x^2)(1-x^3)) counts partitions into parts <= 3
        coeffs = (ONE / pochhammer(X, 3)).series_coefficients(8)
        assert coeffs == [1, 1, 2, 3, 4, 5, 7, 8, 10]

    def test_substitute(self):
        assert (ONE - X).substitute(1, -1).eval_at_q(2) == Fraction(1, 2)

    def test_fsum_matches_plain_sum(self):
        terms = [ONE / (Q - 1), Q / (Q - 1), ONE / Q]
        assert fsum(terms) == terms[0] + terms[1] + terms[2]

    def test_gaussian_binomial(self):
        assert gaussian_binomial(4, 2).eval_at_q(2) == 35
        assert gaussian_binomial(3, 0) == ONE
        with pytest.raises(ValueError):
            gaussian_binomial(2, 3)

    def test_pochhammer_rejects_negative_index(self):
        with pytest.raises(ValueError):
            pochhammer(X, -1)

    def test_render(self):
        f = RationalFunctionQ(HalfPowerLaurent({4: 1, 2: -1, 0: 1}), HalfPowerLaurent.q_power(3))
        assert f.render() == "(q^2 - q + 1)/q^3"
        assert (X + 1).render("x") == "x + 1"

    def test_render_fraction(self):
        assert render_fraction(Fraction(11, 32)) == "11/32 (0.34375)"

    def test_rational_sqrt(self):
        assert rational_sqrt(Fraction(25, 4)) == Fraction(5, 2)
        with pytest.raises(NonSquareEvaluationError):
            rational_sqrt(-4)

    @pytest.mark.parametrize("f,_", RATIONAL_PAIRS)
    def test_canonical_form_is_idempotent(self, f, _):
        assert normalize(f) == f
        assert normalize(f).numerator == f.numerator

    @pytest.mark.parametrize("f,g", RATIONAL_PAIRS)
    def test_field_axioms(self, f, g):
        assert f + g == g + f
        assert (f + g) - g == f
        if not f.is_zero():
            assert f * f.inv() == ONE


class TestGaussianRationalFunction:
    """Values a + i*b for tau-weighted sums"""

    def test_units(self):
        i = GaussianRationalFunction.unit(1)
        assert i * i == GaussianRationalFunction.unit(2)
        assert GaussianRationalFunction.unit(2, 3) == GaussianRationalFunction(-3)
        assert GaussianRationalFunction.unit(4, Q) == GaussianRationalFunction(Q)

    def test_imaginary_parts_cancel(self):
        total = GaussianRationalFunction.unit(1, Q) + GaussianRationalFunction.unit(3, Q)
        assert total.is_real()
        assert total.render() == "0"


@pytest.mark.slow
class TestRandomizedAxioms:
    """Ten thousand seeded cases per property"""

    CASES = 10_000

    def _laurent(self, rng: random.Random, nonzero: bool = False) -> HalfPowerLaurent:
        while True:
            p = HalfPowerLaurent({rng.randint(-6, 6): rng.randint(-4, 4) for _ in range(rng.randint(0, 4))})
            if not (nonzero and p.is_zero()):
                return p

    def _rational(self, rng: random.Random) -> RationalFunctionQ:
        return RationalFunctionQ(self._laurent(rng), self._laurent(rng, nonzero=True))

    def test_laurent_ring_axioms(self):
        rng = random.Random(1)
        for _ in range(self.CASES):
            a, b, c = (self._laurent(rng) for _ in range(3))
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    def test_canonical_form_is_idempotent(self):
        rng = random.Random(2)
        for _ in range(self.CASES):
            f = self._rational(rng)
            assert normalize(f) == f
            assert normalize(f).denominator == f.denominator

    def test_rational_field_axioms(self):
        rng = random.Random(3)
        for _ in range(self.CASES):
            f, g = self._rational(rng), self._rational(rng)
            assert f * g == g * f
            assert (f + g) - g == f
            if not f.is_zero():
                assert f * f.inv() == ONE
