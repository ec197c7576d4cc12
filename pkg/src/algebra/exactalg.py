"""
Exact coefficient arithmetic
Laurent polynomials in s = q^(1/2), reduced rational functions in q,
q-Pochhammer symbols and Gaussian binomials over arbitrary-precision rationals
"""
import logging
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from sympy import Poly, Rational, Symbol

logger = logging.getLogger(__name__)

BigRational = Fraction
Scalar = Union[int, Fraction]

_S = Symbol("s")


class NonSquareEvaluationError(ArithmeticError):
    """Half-integral q-degree evaluated at a q that is not a rational square"""


class HalfPowerLaurent:
    """
    Laurent polynomial in s, where s^2 = q

    Terms are kept as an exponent -> Fraction map with no zero coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Scalar]] = None):
        cleaned: Dict[int, Fraction] = {}
        if terms:
            for exp, coef in terms.items():
                value = coef if isinstance(coef, Fraction) else Fraction(coef)
                if value:
                    cleaned[int(exp)] = value
        self._terms = cleaned

    @classmethod
    def _trusted(cls, terms: Dict[int, Fraction]) -> "HalfPowerLaurent":
        obj = cls.__new__(cls)
        obj._terms = {e: c for e, c in terms.items() if c}
        return obj

    @classmethod
    def constant(cls, value: Scalar) -> "HalfPowerLaurent":
        return cls({0: value})

    @classmethod
    def s_power(cls, exponent: int, coefficient: Scalar = 1) -> "HalfPowerLaurent":
        return cls({exponent: coefficient})

    @classmethod
    def q_power(cls, exponent: int, coefficient: Scalar = 1) -> "HalfPowerLaurent":
        return cls({2 * exponent: coefficient})

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self._terms)

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self._terms)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.max_exp]

    def has_integral_q_degree(self) -> bool:
        return all(e % 2 == 0 for e in self._terms)

    def shift(self, k: int) -> "HalfPowerLaurent":
        """Multiply by s^k"""
        return HalfPowerLaurent._trusted({e + k: c for e, c in self._terms.items()})

    def scale(self, factor: Scalar) -> "HalfPowerLaurent":
        factor = Fraction(factor)
        return HalfPowerLaurent._trusted({e: c * factor for e, c in self._terms.items()})

    def __add__(self, other: "HalfPowerLaurent") -> "HalfPowerLaurent":
        other = _as_laurent(other)
        result = dict(self._terms)
        for e, c in other._terms.items():
            result[e] = result.get(e, 0) + c
        return HalfPowerLaurent._trusted(result)

    __radd__ = __add__

    def __neg__(self) -> "HalfPowerLaurent":
        return HalfPowerLaurent._trusted({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "HalfPowerLaurent") -> "HalfPowerLaurent":
        return self + (-_as_laurent(other))

    def __rsub__(self, other: "HalfPowerLaurent") -> "HalfPowerLaurent":
        return _as_laurent(other) - self

    def __mul__(self, other: "HalfPowerLaurent") -> "HalfPowerLaurent":
        other = _as_laurent(other)
        if len(other._terms) == 1:
            (k, c), = other._terms.items()
            return HalfPowerLaurent._trusted({e + k: v * c for e, v in self._terms.items()})
        result: Dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = e1 + e2
                result[key] = result.get(key, 0) + c1 * c2
        return HalfPowerLaurent._trusted(result)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HalfPowerLaurent":
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return HalfPowerLaurent._trusted({e * n: Fraction(1) / c ** (-n)})
        result = ONE_LAURENT
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute(self, scale: Scalar, power: int) -> "HalfPowerLaurent":
        """
        Replace the variable v by scale * q^power, where s^2 = v

        A term s^e becomes scale^(e/2) * s^(power*e); odd exponents require scale = 1.
        """
        scale = Fraction(scale)
        result: Dict[int, Fraction] = {}
        for e, c in self._terms.items():
            if e % 2 and scale != 1:
                raise ValueError("half-integral degree cannot be rescaled by a non-unit")
            factor = scale ** (e // 2) if e % 2 == 0 else Fraction(1)
            result[power * e] = result.get(power * e, 0) + c * factor
        return HalfPowerLaurent._trusted(result)

    def evaluate_at_s(self, s: Fraction) -> Fraction:
        return sum((c * s ** e for e, c in self._terms.items()), Fraction(0))

    def evaluate_at_q(self, q: Fraction) -> Fraction:
        if not self.has_integral_q_degree():
            return self.evaluate_at_s(rational_sqrt(q))
        return sum((c * q ** (e // 2) for e, c in self._terms.items()), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HalfPowerLaurent.constant(other)
        if not isinstance(other, HalfPowerLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    def __repr__(self) -> str:
        return f"HalfPowerLaurent({dict(self.items())})"


ZERO_LAURENT = HalfPowerLaurent()
ONE_LAURENT = HalfPowerLaurent({0: 1})


def _as_laurent(value) -> HalfPowerLaurent:
    if isinstance(value, HalfPowerLaurent):
        return value
    if isinstance(value, (int, Fraction)):
        return HalfPowerLaurent.constant(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to HalfPowerLaurent")


def rational_sqrt(q: Scalar) -> Fraction:
    """Exact square root of a non-negative rational, or NonSquareEvaluationError"""
    q = Fraction(q)
    if q < 0:
        raise NonSquareEvaluationError(f"q = {q} is negative; q^(1/2) is not rational")
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise NonSquareEvaluationError(f"q = {q} is not the square of a rational")
    return Fraction(num, den)


# Univariate gcd through sympy; exponents are compressed by their common step
# so that even-only polynomials are reduced as polynomials in q.

def _exponent_step(*polys: HalfPowerLaurent) -> int:
    step = 0
    for p in polys:
        for e in p._terms:
            step = _gcd(step, e)
    return step or 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _to_poly(p: HalfPowerLaurent, step: int) -> Poly:
    degree = p.max_exp // step
    dense: List = [0] * (degree + 1)
    for e, c in p._terms.items():
        dense[degree - e // step] = Rational(c.numerator, c.denominator)
    return Poly(dense, _S, domain="QQ")


def _from_poly(poly: Poly, step: int) -> HalfPowerLaurent:
    coeffs = poly.all_coeffs()
    degree = len(coeffs) - 1
    terms = {}
    for i, c in enumerate(coeffs):
        if c != 0:
            terms[(degree - i) * step] = Fraction(int(c.p), int(c.q))
    return HalfPowerLaurent._trusted(terms)


def _canonical(num: HalfPowerLaurent, den: HalfPowerLaurent) -> Tuple[HalfPowerLaurent, HalfPowerLaurent]:
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return ZERO_LAURENT, ONE_LAURENT

    if den.is_monomial():
        (b, c), = den._terms.items()
        return num.shift(-b).scale(1 / c), ONE_LAURENT

    a, b = num.min_exp, den.min_exp
    n_poly, d_poly = num.shift(-a), den.shift(-b)

    if not n_poly.is_monomial():
        step = _exponent_step(n_poly, d_poly)
        _, n_red, d_red = _to_poly(n_poly, step).cofactors(_to_poly(d_poly, step))
        n_poly, d_poly = _from_poly(n_red, step), _from_poly(d_red, step)
        # cofactors may leave a shared power of s when the gcd had none
        b2 = d_poly.min_exp
        if b2:
            d_poly = d_poly.shift(-b2)
            n_poly = n_poly.shift(-b2)

    lead = d_poly.leading_coefficient()
    if lead != 1:
        n_poly, d_poly = n_poly.scale(1 / lead), d_poly.scale(1 / lead)
    return n_poly.shift(a - b), d_poly


class RationalFunctionQ:
    """
    Quotient of two HalfPowerLaurent values in canonical form

    Canonical form: gcd-reduced, denominator with minimal s-exponent 0 and
    leading (highest-degree) coefficient 1. Equality is equality of canonical
    forms. The same class carries the formal variable x of the partition
    generating functions; only the rendering name differs.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator=0, denominator=None):
        num = _as_laurent(numerator)
        den = ONE_LAURENT if denominator is None else _as_laurent(denominator)
        self.numerator, self.denominator = _canonical(num, den)

    @classmethod
    def _reduced(cls, num: HalfPowerLaurent, den: HalfPowerLaurent) -> "RationalFunctionQ":
        obj = cls.__new__(cls)
        obj.numerator = num
        obj.denominator = den
        return obj

    @classmethod
    def from_scalar(cls, value: Scalar) -> "RationalFunctionQ":
        value = Fraction(value)
        if not value:
            return cls._reduced(ZERO_LAURENT, ONE_LAURENT)
        return cls._reduced(HalfPowerLaurent.constant(value), ONE_LAURENT)

    @classmethod
    def q_power(cls, exponent: int, coefficient: Scalar = 1) -> "RationalFunctionQ":
        return cls._reduced(HalfPowerLaurent.q_power(exponent, coefficient), ONE_LAURENT)

    @classmethod
    def s_power(cls, exponent: int, coefficient: Scalar = 1) -> "RationalFunctionQ":
        return cls._reduced(HalfPowerLaurent.s_power(exponent, coefficient), ONE_LAURENT)

    @classmethod
    def laurent(cls, poly: HalfPowerLaurent) -> "RationalFunctionQ":
        return cls._reduced(poly, ONE_LAURENT)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_laurent(self) -> bool:
        return self.denominator == ONE_LAURENT

    def has_integral_q_degree(self) -> bool:
        return self.numerator.has_integral_q_degree() and self.denominator.has_integral_q_degree()

    def __add__(self, other) -> "RationalFunctionQ":
        other = as_rational_function(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.denominator == other.denominator:
            return RationalFunctionQ(self.numerator + other.numerator, self.denominator)
        return RationalFunctionQ(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunctionQ":
        return RationalFunctionQ._reduced(-self.numerator, self.denominator)

    def __sub__(self, other) -> "RationalFunctionQ":
        return self + (-as_rational_function(other))

    def __rsub__(self, other) -> "RationalFunctionQ":
        return as_rational_function(other) - self

    def __mul__(self, other) -> "RationalFunctionQ":
        other = as_rational_function(other)
        if self.is_laurent() and other.is_laurent():
            return RationalFunctionQ._reduced(self.numerator * other.numerator, ONE_LAURENT)
        return RationalFunctionQ(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def inv(self) -> "RationalFunctionQ":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunctionQ(self.denominator, self.numerator)

    def __truediv__(self, other) -> "RationalFunctionQ":
        return self * as_rational_function(other).inv()

    def __rtruediv__(self, other) -> "RationalFunctionQ":
        return as_rational_function(other) * self.inv()

    def __pow__(self, n: int) -> "RationalFunctionQ":
        if n < 0:
            return self.inv() ** (-n)
        if self.is_laurent():
            return RationalFunctionQ._reduced(self.numerator ** n, ONE_LAURENT)
        # powers of a reduced fraction stay reduced
        num, den = self.numerator ** n, self.denominator ** n
        lead = den.leading_coefficient()
        return RationalFunctionQ._reduced(num.scale(1 / lead), den.scale(1 / lead))

    def substitute(self, scale: Scalar, power: int) -> "RationalFunctionQ":
        """Replace the variable by scale * q^power (x = 1/q^2 is scale=1, power=-2)"""
        return RationalFunctionQ(self.numerator.substitute(scale, power),
                                 self.denominator.substitute(scale, power))

    def eval_at_q(self, q: Scalar) -> Fraction:
        q = Fraction(q)
        if q == 0:
            raise ValueError("evaluation at q = 0 is not supported")
        if self.has_integral_q_degree():
            den = self.denominator.evaluate_at_q(q)
            if den == 0:
                raise ZeroDivisionError(f"denominator vanishes at q = {q}")
            return self.numerator.evaluate_at_q(q) / den
        s = rational_sqrt(q)
        den = self.denominator.evaluate_at_s(s)
        if den == 0:
            raise ZeroDivisionError(f"denominator vanishes at q = {q}")
        return self.numerator.evaluate_at_s(s) / den

    def series_coefficients(self, bound: int) -> List[Fraction]:
        """Taylor coefficients in the variable at 0, degrees 0..bound"""
        if not self.has_integral_q_degree():
            raise ValueError("series expansion needs integral degree")
        if not self.is_zero() and self.numerator.min_exp < 0:
            raise ValueError("function has a pole at 0")
        num = [Fraction(0)] * (bound + 1)
        for e, c in self.numerator.items():
            if e // 2 <= bound:
                num[e // 2] = c
        den = [Fraction(0)] * (bound + 1)
        for e, c in self.denominator.items():
            if e // 2 <= bound:
                den[e // 2] = c
        d0 = den[0]
        out: List[Fraction] = []
        for n in range(bound + 1):
            acc = num[n] - sum((den[k] * out[n - k] for k in range(1, n + 1) if den[k]), Fraction(0))
            out.append(acc / d0)
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunctionQ.from_scalar(other)
        if not isinstance(other, RationalFunctionQ):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def render(self, var: str = "q") -> str:
        return render(self, var)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"RationalFunctionQ({render(self)})"


def as_rational_function(value) -> RationalFunctionQ:
    if isinstance(value, RationalFunctionQ):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalFunctionQ.from_scalar(value)
    if isinstance(value, HalfPowerLaurent):
        return RationalFunctionQ.laurent(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to RationalFunctionQ")


def normalize(f: RationalFunctionQ) -> RationalFunctionQ:
    return RationalFunctionQ(f.numerator, f.denominator)


ZERO = RationalFunctionQ.from_scalar(0)
ONE = RationalFunctionQ.from_scalar(1)
Q = RationalFunctionQ.q_power(1)
X = Q


def fsum(terms: Iterable[RationalFunctionQ]) -> RationalFunctionQ:
    """Sum grouping equal denominators before any cross-multiplication"""
    groups: Dict[HalfPowerLaurent, HalfPowerLaurent] = {}
    for term in terms:
        groups[term.denominator] = groups.get(term.denominator, ZERO_LAURENT) + term.numerator
    total = ZERO
    for den, num in groups.items():
        total = total + RationalFunctionQ(num, den)
    return total


def laurent_pochhammer(x: HalfPowerLaurent, j: int, start: int = 0) -> HalfPowerLaurent:
    """prod_{i=start+1..j} (1 - x^i) computed in the Laurent ring"""
    result = ONE_LAURENT
    power = x ** (start + 1)
    for _ in range(start + 1, j + 1):
        result = result * (ONE_LAURENT - power)
        power = power * x
    return result


def pochhammer(x: RationalFunctionQ, j: int) -> RationalFunctionQ:
    """(x)_j = (1 - x)(1 - x^2)...(1 - x^j), with (x)_0 = 1"""
    if j < 0:
        raise ValueError(f"pochhammer index must be non-negative, got {j}")
    x = as_rational_function(x)
    if x.is_laurent():
        return RationalFunctionQ.laurent(laurent_pochhammer(x.numerator, j))
    result = ONE
    for i in range(1, j + 1):
        result = result * (ONE - x ** i)
    return result


def gaussian_binomial(n: int, k: int) -> RationalFunctionQ:
    """(q)_n / ((q)_k (q)_{n-k}); a polynomial in q"""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"gaussian_binomial requires 0 <= k <= n, got n={n}, k={k}")
    return pochhammer(Q, n) / (pochhammer(Q, k) * pochhammer(Q, n - k))


class GaussianRationalFunction:
    """real + i*imag with RationalFunctionQ parts, for tau-weighted sums"""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = as_rational_function(real)
        self.imag = as_rational_function(imag)

    @classmethod
    def unit(cls, k: int, value=1) -> "GaussianRationalFunction":
        """i^k * value"""
        value = as_rational_function(value)
        k %= 4
        if k == 0:
            return cls(value, ZERO)
        if k == 1:
            return cls(ZERO, value)
        if k == 2:
            return cls(-value, ZERO)
        return cls(ZERO, -value)

    def is_real(self) -> bool:
        return self.imag.is_zero()

    def __add__(self, other: "GaussianRationalFunction") -> "GaussianRationalFunction":
        return GaussianRationalFunction(self.real + other.real, self.imag + other.imag)

    def __neg__(self) -> "GaussianRationalFunction":
        return GaussianRationalFunction(-self.real, -self.imag)

    def __mul__(self, other) -> "GaussianRationalFunction":
        if not isinstance(other, GaussianRationalFunction):
            other = GaussianRationalFunction(other)
        return GaussianRationalFunction(
            self.real * other.real - self.imag * other.imag,
            self.real * other.imag + self.imag * other.real,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianRationalFunction):
            return NotImplemented
        return self.real == other.real and self.imag == other.imag

    def __hash__(self) -> int:
        return hash((self.real, self.imag))

    def render(self, var: str = "q") -> str:
        if self.is_real():
            return render(self.real, var)
        return f"{render(self.real, var)} + i*({render(self.imag, var)})"


# Rendering: "(q^2 - q + 1)/q^3"; odd s-exponents appear as "q^(k/2)".

def _render_monomial(exp: int, var: str) -> str:
    if exp == 0:
        return ""
    if exp % 2:
        return f"{var}^({exp}/2)"
    k = exp // 2
    return var if k == 1 else f"{var}^{k}"


def _render_laurent(p: HalfPowerLaurent, var: str) -> str:
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    for exp, coef in sorted(p.items(), key=lambda t: -t[0]):
        mono = _render_monomial(exp, var)
        magnitude = abs(coef)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{magnitude}*{mono}"
        if not pieces:
            pieces.append(body if coef > 0 else f"-{body}")
        else:
            pieces.append(f" + {body}" if coef > 0 else f" - {body}")
    return "".join(pieces)


def render(f: RationalFunctionQ, var: str = "q") -> str:
    num, den = f.numerator, f.denominator
    if not num.is_zero():
        low = num.min_exp
        if low < 0:
            num, den = num.shift(-low), den.shift(-low)
    num_str = _render_laurent(num, var)
    if den == ONE_LAURENT:
        return num_str
    den_str = _render_laurent(den, var)
    if len(num) > 1:
        num_str = f"({num_str})"
    if len(den) > 1:
        den_str = f"({den_str})"
    return f"{num_str}/{den_str}"


def render_fraction(value: Fraction) -> str:
    """Exact fraction plus 6 significant digits, e.g. '11/32 (0.34375)'"""
    return f"{value} ({float(value):.6g})"
