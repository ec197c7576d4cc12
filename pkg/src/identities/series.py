"""
Truncated power series
Series in y over exact rational functions; re-runs the generating-function
factorizations behind the derangement formulas and checks the Euler and
Jacobi triple product identities inside a truncation window
"""
import logging
import time
from typing import Callable, Iterable, List, Tuple

from ..algebra.exactalg import (
    ONE,
    RationalFunctionQ,
    X,
    ZERO,
    as_rational_function,
    fsum,
    pochhammer,
)
from ..services.report import VerificationReport, make_record
from . import formulas

logger = logging.getLogger(__name__)

CHAIN_FAMILIES = ("U", "Sp", "O-sum", "O-diff")
T_FAMILIES = ("U", "Sp", "O", "O-bar")


class TruncatedSeries:
    """
    Σ_{n < order} c_n y^n with RationalFunctionQ coefficients

    Results are exact modulo y^order; operands must share the order.
    """

    __slots__ = ("order", "coefficients")

    def __init__(self, coefficients: Iterable, order: int):
        if order < 1:
            raise ValueError(f"truncation order must be positive, got {order}")
        coeffs = [as_rational_function(c) for c in list(coefficients)[:order]]
        coeffs.extend([ZERO] * (order - len(coeffs)))
        self.order = order
        self.coefficients: List[RationalFunctionQ] = coeffs

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([ONE], order)

    @classmethod
    def monomial(cls, degree: int, order: int, coefficient=1) -> "TruncatedSeries":
        coeffs = [ZERO] * order
        if 0 <= degree < order:
            coeffs[degree] = as_rational_function(coefficient)
        return cls(coeffs, order)

    @classmethod
    def from_function(cls, fn: Callable[[int], object], order: int) -> "TruncatedSeries":
        return cls((fn(n) for n in range(order)), order)

    @classmethod
    def geometric(cls, order: int, step: int = 1) -> "TruncatedSeries":
        """(1 - y^step)^{-1}"""
        return cls((ONE if n % step == 0 else ZERO for n in range(order)), order)

    def shift(self, degree: int, coefficient=1) -> "TruncatedSeries":
        """Multiply by coefficient * y^degree"""
        factor = as_rational_function(coefficient)
        coeffs = [ZERO] * self.order
        for n in range(self.order - degree):
            if not self.coefficients[n].is_zero():
                coeffs[n + degree] = self.coefficients[n] * factor
        return TruncatedSeries(coeffs, self.order)

    def coefficient(self, n: int) -> RationalFunctionQ:
        if not 0 <= n < self.order:
            raise IndexError(f"degree {n} outside the truncation window [0, {self.order})")
        return self.coefficients[n]

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected TruncatedSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries((a + b for a, b in zip(self.coefficients, other.coefficients)), self.order)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries((-a for a in self.coefficients), self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            factor = as_rational_function(other)
            return TruncatedSeries((a * factor for a in self.coefficients), self.order)
        self._check(other)
        left = [(i, a) for i, a in enumerate(self.coefficients) if not a.is_zero()]
        right = other.coefficients
        product = []
        for n in range(self.order):
            product.append(fsum(a * right[n - i] for i, a in left
                                if i <= n and not right[n - i].is_zero()))
        return TruncatedSeries(product, self.order)

    __rmul__ = __mul__

    def invert(self) -> "TruncatedSeries":
        head = self.coefficients[0]
        if head.is_zero():
            raise ZeroDivisionError("series with zero constant term is not invertible")
        head_inv = head.inv()
        result = [head_inv]
        for n in range(1, self.order):
            acc = fsum(self.coefficients[i] * result[n - i] for i in range(1, n + 1)
                       if not self.coefficients[i].is_zero())
            result.append(-acc * head_inv)
        return TruncatedSeries(result, self.order)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self * other.invert()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.order, tuple(self.coefficients)))

    def __repr__(self) -> str:
        terms = [f"({c})*y^{n}" for n, c in enumerate(self.coefficients) if not c.is_zero()]
        return f"TruncatedSeries({' + '.join(terms) or '0'}, order={self.order})"


def _t_coefficient(family: str, n: int) -> RationalFunctionQ:
    if n == 0:
        return ONE
    if family == "U":
        return formulas.steinberg_proportion("U", n)
    if family == "Sp":
        return ZERO if n % 2 else formulas.steinberg_proportion("Sp", n // 2)
    if family == "O":
        return formulas.orth_sum_unipotent_proportion(n)
    if family == "O-bar":
        return ZERO if n % 2 else formulas.orth_diff_unipotent_proportion(n // 2)
    raise ValueError(f"unknown T family {family!r}; expected one of {T_FAMILIES}")


def build_T(family: str, order: int) -> TruncatedSeries:
    """
    Unipotent-proportion series

    U: Σ y^m / (q^m (-1/q)_m); Sp: Σ y^{2m} / (q^m (1/q^2)_m);
    O: Σ y^m / (q^{floor(m/2)} (1/q^2)_{floor(m/2)}); O-bar: Σ y^{2m} / (q^{2m} (1/q^2)_m)
    """
    if family not in T_FAMILIES:
        raise ValueError(f"unknown T family {family!r}; expected one of {T_FAMILIES}")
    return TruncatedSeries.from_function(lambda n: _t_coefficient(family, n), order)


def _even_series(fn: Callable[[int], RationalFunctionQ], order: int) -> TruncatedSeries:
    """Σ fn(m) y^{2m}"""
    return TruncatedSeries.from_function(lambda n: ZERO if n % 2 else fn(n // 2), order)


class _ChainRecorder:
    def __init__(self, family: str, timings: bool):
        self.family = family
        self.timings = timings
        self.report = VerificationReport(config={"family": f"chain-{family}"})

    def compare(self, check: str, n: int, lhs, rhs, conjectural: bool = False) -> None:
        started = time.perf_counter() if self.timings else None
        self.report.add(make_record(f"chain-{self.family}", {"check": check, "n": n}, lhs, rhs,
                                    conjectural=conjectural, started=started))

    def compare_series(self, check: str, lhs: TruncatedSeries, rhs: TruncatedSeries,
                       conjectural: bool = False) -> None:
        for n in range(lhs.order):
            self.compare(check, n, lhs.coefficient(n), rhs.coefficient(n), conjectural)


def _chain_unitary(order: int, rec: _ChainRecorder) -> None:
    t = build_T("U", order)
    u_prime = TruncatedSeries.from_function(formulas.u_prime_au, order)
    for m in range(1, order):
        rec.compare("u-prime", m, u_prime.coefficient(m), t.coefficient(m) - formulas.delta_p_au(m))
    d_bar = TruncatedSeries(formulas.d_bar_au_terms(order), order)
    rec.compare_series("U'=DbarT", u_prime, d_bar * t)
    geometric = TruncatedSeries.geometric(order)
    d_prime = t.invert() * geometric * u_prime
    rec.compare_series("all-ones", d_prime * u_prime.invert() * t, geometric)
    for m in range(order):
        rec.compare("d-prime", m, d_prime.coefficient(m), formulas.d_prime_au(m))
    for m in range(1, order):
        rec.compare("delta", m, ONE - d_prime.coefficient(m), formulas.delta_au(m))


def _chain_symplectic(order: int, rec: _ChainRecorder) -> None:
    t = build_T("Sp", order)
    u_prime = _even_series(formulas.u_prime_sp, order)
    for m in range(1, (order + 1) // 2):
        rec.compare("u-prime", 2 * m, u_prime.coefficient(2 * m),
                    t.coefficient(2 * m) - formulas.conj_identity_rhs("i", m), conjectural=True)
    d_bar_terms = formulas.d_bar_sp_terms((order + 1) // 2)
    d_bar = _even_series(lambda i: d_bar_terms[i], order)
    rec.compare_series("U'=DbarT", u_prime, d_bar * t)
    d_prime = t.invert() * TruncatedSeries.geometric(order, 2) * u_prime
    for m in range((order + 1) // 2):
        rec.compare("d-prime", 2 * m, d_prime.coefficient(2 * m), formulas.d_prime_sp(m))
    for m in range(1, (order + 1) // 2):
        rec.compare("delta", 2 * m, ONE - d_prime.coefficient(2 * m), formulas.conj_delta("Sp", m), conjectural=True)


def _orth_u(m: int) -> RationalFunctionQ:
    """u_m for O^+_m plus O^-_m from the identity right-hand sides"""
    d, odd = divmod(m, 2)
    if odd:
        if d == 0:
            return ONE - RationalFunctionQ.q_power(-1)
        return formulas.conj_identity_rhs("ii", d)
    return formulas.conj_identity_rhs("iii", d)


def _chain_orth_sum(order: int, rec: _ChainRecorder) -> None:
    t_sp = build_T("Sp", order)
    t_o = build_T("O", order)
    one_plus_y = TruncatedSeries([ONE, ONE], order)
    rec.compare_series("T_O=(1+y)T_Sp", t_o, one_plus_y * t_sp)
    u_prime = TruncatedSeries.from_function(formulas.u_prime_orth, order)
    for m in range(1, order):
        rec.compare("u-prime", m, u_prime.coefficient(m), t_o.coefficient(m) - _orth_u(m), conjectural=m > 1)
    d_tilde = TruncatedSeries(formulas.d_tilde_orth_terms(order), order)
    rec.compare_series("U'=DtildeT", u_prime, d_tilde * t_sp)
    geometric = TruncatedSeries.geometric(order)
    d_prime = t_sp.invert() * geometric * u_prime
    rec.compare_series("D'=T_O^-1(1+y)/(1-y)U'", d_prime, t_o.invert() * one_plus_y * geometric * u_prime)
    for m in range(order):
        rec.compare("d-prime", m, d_prime.coefficient(m), formulas.d_prime_orth(m))
    for m in range(1, order):
        d_m = 2 - d_prime.coefficient(m)
        k, odd = divmod(m, 2)
        if odd and k >= 1:
            rec.compare("delta", m, d_m / 2, formulas.conj_delta("O-odd", k), conjectural=True)
        elif not odd:
            rec.compare("delta", m, d_m, formulas.conj_delta("O-plus", k) + formulas.conj_delta("O-minus", k),
                        conjectural=True)


def _chain_orth_diff(order: int, rec: _ChainRecorder) -> None:
    t_bar = build_T("O-bar", order)
    u_bar_prime = _even_series(formulas.u_bar_prime_orth, order)
    for m in range(1, (order + 1) // 2):
        rec.compare("u-prime", 2 * m, u_bar_prime.coefficient(2 * m),
                    t_bar.coefficient(2 * m) - formulas.u_bar_orth(m))
    d_bar_prime = t_bar.invert() * u_bar_prime
    expected = _even_series(lambda m: RationalFunctionQ.q_power(-m * (m + 1), (-1) ** m), order)
    rec.compare_series("D'bar", d_bar_prime, expected)
    for m in range(1, (order + 1) // 2):
        d_bar = -d_bar_prime.coefficient(2 * m)
        rec.compare("d-bar", 2 * m, d_bar, formulas.d_bar_orth(m))
        rec.compare("delta", 2 * m, d_bar,
                    formulas.conj_delta("O-plus", m) - formulas.conj_delta("O-minus", m), conjectural=True)


_CHAINS = {
    "U": _chain_unitary,
    "Sp": _chain_symplectic,
    "O-sum": _chain_orth_sum,
    "O-diff": _chain_orth_diff,
}


def verify_chain(family: str, order: int, timings: bool = False) -> VerificationReport:
    """
    Re-run a factorization chain coefficient by coefficient

    Builds U' from the closed u'_m, factors it, extracts d'_m and d_m and
    compares each against the closed forms. Degrees run below `order`.
    """
    if family not in _CHAINS:
        raise ValueError(f"unknown chain {family!r}; expected one of {CHAIN_FAMILIES}")
    if order < 3:
        raise ValueError(f"chain order must be at least 3, got {order}")
    logger.info(f"Running {family} chain to order {order}")
    rec = _ChainRecorder(family, timings)
    _CHAINS[family](order, rec)
    rec.report.config["order"] = order
    return rec.report


# Classical identities in a truncation window

def euler_coefficients(order: int, degree: int) -> List[Tuple[int, list, list]]:
    """
    Σ_m y^m t^m / (t)_m against ∏_{i=1..degree} (1 - y t^i)^{-1}

    Returns, for each m < order, the t-expansions of both y^m coefficients to
    t^degree. Factors with i > degree are 1 modulo t^{degree+1}.
    """
    if order < 2 or degree < 1:
        raise ValueError("euler check needs order >= 2 and degree >= 1")
    product = TruncatedSeries.one(order)
    for i in range(1, degree + 1):
        factor = TruncatedSeries.from_function(lambda k: RationalFunctionQ.q_power(i * k), order)
        product = product * factor
    rows = []
    for m in range(order):
        lhs = X ** m / pochhammer(X, m)
        rows.append((m, lhs.series_coefficients(degree), product.coefficient(m).series_coefficients(degree)))
    return rows


def euler_check(order: int, degree: int = None) -> bool:
    degree = 2 * order if degree is None else degree
    return all(lhs == rhs for _, lhs, rhs in euler_coefficients(order, degree))


def _laurent(exponent: int, coefficient=1) -> RationalFunctionQ:
    return RationalFunctionQ.q_power(exponent, coefficient)


def _triple_product(bound: int) -> TruncatedSeries:
    """∏_{n>=1} (1 - q^{2n})(1 + z q^{2n-1})(1 + z^{-1} q^{2n-1}) mod q^{bound+1}"""
    order = bound + 1
    product = TruncatedSeries.one(order)
    n = 1
    while 2 * n - 1 <= bound:
        product = product - product.shift(2 * n)
        product = product + product.shift(2 * n - 1, _laurent(1))
        product = product + product.shift(2 * n - 1, _laurent(-1))
        n += 1
    return product


def jacobi_coefficients(degree_bound: int) -> Tuple[TruncatedSeries, TruncatedSeries]:
    """Σ_j z^j q^{j^2} and the triple product, both mod q^{degree_bound+1}"""
    if degree_bound < 2:
        raise ValueError(f"degree bound must be at least 2, got {degree_bound}")
    order = degree_bound + 1
    coeffs = [ZERO] * order
    j = 0
    while j * j <= degree_bound:
        coeffs[j * j] = coeffs[j * j] + (_laurent(0) if j == 0 else _laurent(j) + _laurent(-j))
        j += 1
    return TruncatedSeries(coeffs, order), _triple_product(degree_bound)


def jacobi_check(degree_bound: int) -> bool:
    lhs, rhs = jacobi_coefficients(degree_bound)
    return lhs == rhs


def jacobi_cute_coefficients(degree_bound: int) -> Tuple[TruncatedSeries, TruncatedSeries]:
    """
    x (F1 - F2) against -(x + y^{-1}) ∏_{b>=1} (1 - y x^b)(1 - y^{-1} x^{b-1})(1 - x^b)

    F1 = Σ_b x^{b(b+3)/2} (-y)^b and F2 = Σ_b x^{b(b+1)/2} (-y)^b over all integers b.
    Series in x with Laurent-in-y coefficients, mod x^{degree_bound+1}.
    """
    if degree_bound < 2:
        raise ValueError(f"degree bound must be at least 2, got {degree_bound}")
    order = degree_bound + 1
    coeffs = [ZERO] * order
    reach = degree_bound + 3
    for b in range(-reach, reach + 1):
        sign = -1 if b % 2 else 1
        for exponent, weight in ((b * (b + 3) // 2 + 1, 1), (b * (b + 1) // 2 + 1, -1)):
            if 0 <= exponent <= degree_bound:
                coeffs[exponent] = coeffs[exponent] + _laurent(b, sign * weight)
    lhs = TruncatedSeries(coeffs, order)

    product = TruncatedSeries([-_laurent(-1), -ONE], order)
    for b in range(1, degree_bound + 2):
        if b <= degree_bound:
            product = product - product.shift(b, _laurent(1))
            product = product - product.shift(b)
        product = product - product.shift(b - 1, _laurent(-1))
    return lhs, product


def jacobi_cute_check(degree_bound: int) -> bool:
    lhs, rhs = jacobi_cute_coefficients(degree_bound)
    return lhs == rhs


def series_records(kind: str, bound: int, timings: bool = False) -> VerificationReport:
    """Per-coefficient records for the euler, jacobi and jacobi-cute checks"""
    report = VerificationReport(config={"family": kind, "bound": bound})
    started = time.perf_counter() if timings else None
    if kind == "euler":
        for m, lhs, rhs in euler_coefficients(bound, 2 * bound):
            report.add(make_record(kind, {"m": m}, lhs, rhs, started=started))
        return report
    if kind == "jacobi":
        lhs, rhs = jacobi_coefficients(bound)
    elif kind == "jacobi-cute":
        lhs, rhs = jacobi_cute_coefficients(bound)
    else:
        raise ValueError(f"unknown series check {kind!r}")
    var = "z" if kind == "jacobi" else "y"
    for n in range(lhs.order):
        report.add(make_record(kind, {"n": n}, lhs.coefficient(n), rhs.coefficient(n), started=started, var=var))
    return report
