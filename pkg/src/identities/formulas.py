"""
Closed-form right-hand sides
Derangement proportions of the affine classical groups, the partition
generating functions G, K, H, the symplectic/orthogonal identity right-hand
sides, group orders and unipotent (Steinberg) proportions
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from ..algebra.exactalg import (
    HalfPowerLaurent,
    ONE,
    ONE_LAURENT,
    RationalFunctionQ,
    ZERO_LAURENT,
    laurent_pochhammer,
    pochhammer,
    fsum,
)

logger = logging.getLogger(__name__)

# Linear parts
GL = "GL"
U = "U"
SP = "Sp"
O_ODD = "O-odd"
O_PLUS = "O-plus"
O_MINUS = "O-minus"
LINEAR_KINDS = (GL, U, SP, O_ODD, O_PLUS, O_MINUS)

# Affine groups and their linear parts
AFFINE_KINDS = {
    "AGL": GL,
    "AU": U,
    "ASp": SP,
    "AO-odd": O_ODD,
    "AO-plus": O_PLUS,
    "AO-minus": O_MINUS,
}

CONJECTURAL_DELTA = (SP, O_ODD, O_PLUS, O_MINUS)

# Formal variables as Laurent monomials: x, 1/q, -1/q, 1/q^2
X_VAR = HalfPowerLaurent.q_power(1)
INV_Q = HalfPowerLaurent.q_power(-1)
NEG_INV_Q = HalfPowerLaurent.q_power(-1, -1)
INV_Q2 = HalfPowerLaurent.q_power(-2)


def linear_kind(name: str) -> str:
    """Resolve 'au', 'AU', 'U', 'ao-plus', ... to a linear kind"""
    key = name.strip().lower()
    for affine, linear in AFFINE_KINDS.items():
        if key in (affine.lower(), linear.lower()):
            return linear
    raise ValueError(f"unknown group family: {name!r}")


@dataclass(frozen=True)
class GroupFamily:
    """X_m(q) or AX_m(q); m is the rank parameter, not always the dimension"""

    kind: str
    m: int

    def __post_init__(self):
        object.__setattr__(self, "kind", linear_kind(self.kind))
        if self.m < 1:
            raise ValueError(f"m must be at least 1, got {self.m}")

    @property
    def e(self) -> int:
        return 2 if self.kind == U else 1

    @property
    def dimension(self) -> int:
        if self.kind in (GL, U):
            return self.m
        if self.kind == O_ODD:
            return 2 * self.m + 1
        return 2 * self.m

    @property
    def affine_name(self) -> str:
        return next(a for a, l in AFFINE_KINDS.items() if l == self.kind)

    @property
    def conjectural(self) -> bool:
        return self.kind in CONJECTURAL_DELTA

    def __str__(self) -> str:
        return f"{self.affine_name}_{self.dimension}"


def _require_m(m: int) -> None:
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")


def _neg_q_power(k: int) -> HalfPowerLaurent:
    """(-q)^k for any integer k"""
    return HalfPowerLaurent.q_power(k, -1 if k % 2 else 1)


def _sum_over_pochhammer(x: HalfPowerLaurent, m: int,
                         terms: Iterable[Tuple[HalfPowerLaurent, int]]) -> RationalFunctionQ:
    """
    Σ c_i / (x)_{j_i} with every j_i <= m, as one fraction over (x)_m

    (x)_m / (x)_j is the Laurent product of (1 - x^i) for i = j+1..m.
    """
    numerator = ZERO_LAURENT
    for coefficient, j in terms:
        numerator = numerator + coefficient * laurent_pochhammer(x, m, start=j)
    return RationalFunctionQ(numerator, laurent_pochhammer(x, m))


# Affine general linear group

def delta_agl(m: int) -> RationalFunctionQ:
    """Σ_{i=1..m} (-1)^{i-1} / q^{i(i+1)/2}"""
    _require_m(m)
    total = ZERO_LAURENT
    for i in range(1, m + 1):
        total = total + HalfPowerLaurent.q_power(-(i * (i + 1) // 2), (-1) ** (i - 1))
    return RationalFunctionQ.laurent(total)


def delta_p_agl(m: int) -> RationalFunctionQ:
    """G(1/q): q^{-m} Σ_{i=1..m} (-1)^{i-1} q^{-i(i-1)/2} / (1/q)_{m-i}"""
    _require_m(m)
    return g_rhs(m).substitute(1, -1)


# Affine unitary group

def delta_au(m: int) -> RationalFunctionQ:
    """(1/(q+1)) (1 - 1/(-q)^{m(m+3)/2})"""
    _require_m(m)
    return RationalFunctionQ(ONE_LAURENT - _neg_q_power(-(m * (m + 3) // 2)),
                             HalfPowerLaurent({2: 1, 0: 1}))


def delta_p_au(m: int) -> RationalFunctionQ:
    """(1/(q^m (q+1))) Σ_{i=1..m} (-1)^i ((-q)^{i+1} - 1) / ((-q)^{i(i+1)/2} (-1/q)_{m-i})"""
    _require_m(m)
    terms = []
    for i in range(1, m + 1):
        coefficient = (_neg_q_power(i + 1) - ONE_LAURENT) * _neg_q_power(-(i * (i + 1) // 2))
        terms.append((coefficient.scale((-1) ** i), m - i))
    inner = _sum_over_pochhammer(NEG_INV_Q, m, terms)
    return inner / RationalFunctionQ(HalfPowerLaurent({2 * m + 2: 1, 2 * m: 1}))


def d_prime_au(m: int) -> RationalFunctionQ:
    """(1/(q+1)) Σ_{i=0..m} (1 - (-q)^{i+1}) / (-q)^{i(i+3)/2}"""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    return fsum(d_bar_au_terms(m + 1))


def d_bar_au_terms(order: int) -> List[RationalFunctionQ]:
    """Coefficients of D̄_U: (1 - (-q)^{i+1}) / ((q+1) (-q)^{i(i+3)/2}), i < order"""
    q_plus_one = HalfPowerLaurent({2: 1, 0: 1})
    return [RationalFunctionQ((ONE_LAURENT - _neg_q_power(i + 1)) * _neg_q_power(-(i * (i + 3) // 2)), q_plus_one)
            for i in range(order)]


def u_prime_au(m: int) -> RationalFunctionQ:
    """u'_m = (1/(q^m (q+1))) Σ_{i=0..m} (-1)^i (1 - (-q)^{i+1}) / ((-q)^{i(i+1)/2} (-1/q)_{m-i})"""
    if m == 0:
        return ONE
    terms = []
    for i in range(0, m + 1):
        coefficient = (ONE_LAURENT - _neg_q_power(i + 1)) * _neg_q_power(-(i * (i + 1) // 2))
        terms.append((coefficient.scale((-1) ** i), m - i))
    inner = _sum_over_pochhammer(NEG_INV_Q, m, terms)
    return inner / RationalFunctionQ(HalfPowerLaurent({2 * m + 2: 1, 2 * m: 1}))


# Partition generating functions in the formal variable x

def genfun_cute_rhs(m: int) -> RationalFunctionQ:
    """(x^m/(1-x)) Σ_{i=1..m} (-1)^i x^{i(i-1)/2} (x^i - 1) / (x)_{m-i}"""
    _require_m(m)
    terms = []
    for i in range(1, m + 1):
        coefficient = HalfPowerLaurent.q_power(i * (i - 1) // 2, (-1) ** i) * (X_VAR ** i - ONE_LAURENT)
        terms.append((coefficient, m - i))
    inner = _sum_over_pochhammer(X_VAR, m, terms)
    return inner * RationalFunctionQ(HalfPowerLaurent.q_power(m), ONE_LAURENT - X_VAR)


def g_rhs(m: int) -> RationalFunctionQ:
    """x^m Σ_{i=1..m} (-1)^{i-1} x^{i(i-1)/2} / (x)_{m-i}"""
    _require_m(m)
    terms = [(HalfPowerLaurent.q_power(i * (i - 1) // 2, (-1) ** (i - 1)), m - i) for i in range(1, m + 1)]
    return _sum_over_pochhammer(X_VAR, m, terms) * RationalFunctionQ.q_power(m)


def _durfee_sum(m: int, extra: int) -> RationalFunctionQ:
    x = RationalFunctionQ.laurent(X_VAR)
    top = pochhammer(x, m - 1)
    terms = []
    for j in range(0, m):
        numerator = RationalFunctionQ.q_power((m - j) ** 2 + extra(j)) * top
        terms.append(numerator / (pochhammer(x, m - j - 1) ** 2 * pochhammer(x, j)))
    return fsum(terms)


def g_durfee(m: int) -> RationalFunctionQ:
    """Σ_{j=0..m-1} x^{(m-j)^2+j} (x)_{m-1} / ((x)_{m-j-1}^2 (x)_j)"""
    _require_m(m)
    return _durfee_sum(m, lambda j: j)


def k_rhs(m: int) -> RationalFunctionQ:
    """Σ_{j=0..m-1} x^{(m-j)^2+m-1} (x)_{m-1} / ((x)_{m-j-1}^2 (x)_j)"""
    _require_m(m)
    return _durfee_sum(m, lambda j: m - 1)


def h_rhs(m: int) -> RationalFunctionQ:
    """(x^{m+1}/(1-x)) Σ_{i=1..m} (-1)^i x^{i(i+1)/2} (1 - x^{-(i+1)}) / (x)_{m-i}"""
    _require_m(m)
    terms = []
    for i in range(1, m + 1):
        coefficient = HalfPowerLaurent.q_power(i * (i + 1) // 2, (-1) ** i) * (ONE_LAURENT - X_VAR ** (-(i + 1)))
        terms.append((coefficient, m - i))
    inner = _sum_over_pochhammer(X_VAR, m, terms)
    return inner * RationalFunctionQ(HalfPowerLaurent.q_power(m + 1), ONE_LAURENT - X_VAR)


# Symplectic and orthogonal groups

def conj_delta(family: str, m: int) -> RationalFunctionQ:
    """Conjectured δ for ASp_{2m}, AO_{2m+1} and AO^±_{2m}"""
    _require_m(m)
    kind = linear_kind(family)
    half = RationalFunctionQ.from_scalar(1) / 2
    if kind == SP:
        return RationalFunctionQ(ONE_LAURENT - _neg_q_power(-(m * (m + 2))), HalfPowerLaurent({2: 1, 0: 1}))
    if kind == O_ODD:
        return half + RationalFunctionQ.q_power(-((m + 1) ** 2), (-1) ** (m - 1)) / 2
    if kind in (O_PLUS, O_MINUS):
        sign = 1 if kind == O_PLUS else -1
        return half + RationalFunctionQ.q_power(-(m * (m + 1)), sign * (-1) ** (m - 1)) / 2
    raise ValueError(f"no conjectured delta for family {family!r}")


def conj_identity_rhs(which: str, m: int) -> RationalFunctionQ:
    """
    Right-hand sides of the three symplectic/orthogonal partition identities

    i:   (1/(q^m (q+1))) Σ_{i=1..m} (-1)^{i-1} (q^{2i+1}+1) / (q^{i(i+1)} (1/q^2)_{m-i})
    ii:  1/(q^m (1/q^2)_m) + (1/q^{m+1}) Σ_{i=0..m} (-1)^{i-1} / (q^{i(i+1)} (1/q^2)_{m-i})
    iii: (1/q^m) Σ_{i=1..m} (-1)^{i-1} / (q^{i(i-1)} (1/q^2)_{m-i})
    """
    _require_m(m)
    if which == "i":
        terms = [((HalfPowerLaurent.q_power(2 * i + 1) + ONE_LAURENT) * HalfPowerLaurent.q_power(-i * (i + 1), (-1) ** (i - 1)),
                  m - i) for i in range(1, m + 1)]
        inner = _sum_over_pochhammer(INV_Q2, m, terms)
        return inner / RationalFunctionQ(HalfPowerLaurent({2 * m + 2: 1, 2 * m: 1}))
    if which == "ii":
        terms = [(HalfPowerLaurent.q_power(-i * (i + 1) - m - 1, (-1) ** (i - 1)), m - i) for i in range(0, m + 1)]
        terms.append((HalfPowerLaurent.q_power(-m), m))
        return _sum_over_pochhammer(INV_Q2, m, terms)
    if which == "iii":
        terms = [(HalfPowerLaurent.q_power(-i * (i - 1) - m, (-1) ** (i - 1)), m - i) for i in range(1, m + 1)]
        return _sum_over_pochhammer(INV_Q2, m, terms)
    raise ValueError(f"unknown identity {which!r}; expected 'i', 'ii' or 'iii'")


def u_bar_orth(m: int) -> RationalFunctionQ:
    """ū_{2m} = (1/q^{2m}) Σ_{i=1..m} (-1)^{i-1} / (q^{i(i-1)} (1/q^2)_{m-i}), i.e. G(1/q^2)"""
    _require_m(m)
    terms = [(HalfPowerLaurent.q_power(-i * (i - 1) - 2 * m, (-1) ** (i - 1)), m - i) for i in range(1, m + 1)]
    return _sum_over_pochhammer(INV_Q2, m, terms)


def u_prime_sp(m: int) -> RationalFunctionQ:
    """(1/(q^m (q+1))) Σ_{i=0..m} (-1)^i (q^{2i+1}+1) / (q^{i(i+1)} (1/q^2)_{m-i})"""
    if m == 0:
        return ONE
    terms = [((HalfPowerLaurent.q_power(2 * i + 1) + ONE_LAURENT) * HalfPowerLaurent.q_power(-i * (i + 1), (-1) ** i),
              m - i) for i in range(0, m + 1)]
    inner = _sum_over_pochhammer(INV_Q2, m, terms)
    return inner / RationalFunctionQ(HalfPowerLaurent({2 * m + 2: 1, 2 * m: 1}))


def d_bar_sp_terms(count: int) -> List[RationalFunctionQ]:
    """Coefficients of y^{2i} in D̄_Sp: (-1)^i (q^{2i+1}+1) / ((q+1) q^{i(i+2)})"""
    q_plus_one = HalfPowerLaurent({2: 1, 0: 1})
    return [RationalFunctionQ((HalfPowerLaurent.q_power(2 * i + 1) + ONE_LAURENT)
                              * HalfPowerLaurent.q_power(-i * (i + 2), (-1) ** i), q_plus_one)
            for i in range(count)]


def d_prime_sp(m: int) -> RationalFunctionQ:
    """(1/(q+1)) Σ_{i=0..m} (-1)^i (q^{2i+1}+1) / q^{i(i+2)}"""
    return fsum(d_bar_sp_terms(m + 1))


def u_prime_orth(m: int) -> RationalFunctionQ:
    """
    u'_m for the orthogonal sum O^+_m plus O^-_m

    m = 2d:   (1/q^d) Σ_{i=0..d} (-1)^i / (q^{i(i-1)} (1/q^2)_{d-i})
    m = 2d+1: (1/q^{d+1}) Σ_{i=0..d} (-1)^i / (q^{i(i+1)} (1/q^2)_{d-i})
    """
    if m == 0:
        return ONE
    d, odd = divmod(m, 2)
    if odd:
        terms = [(HalfPowerLaurent.q_power(-i * (i + 1) - d - 1, (-1) ** i), d - i) for i in range(0, d + 1)]
    else:
        terms = [(HalfPowerLaurent.q_power(-i * (i - 1) - d, (-1) ** i), d - i) for i in range(0, d + 1)]
    return _sum_over_pochhammer(INV_Q2, d, terms)


def u_bar_prime_orth(m: int) -> RationalFunctionQ:
    """ū'_{2m} = (1/q^{2m}) Σ_{i=0..m} (-1)^i / (q^{i(i-1)} (1/q^2)_{m-i})"""
    if m == 0:
        return ONE
    terms = [(HalfPowerLaurent.q_power(-i * (i - 1) - 2 * m, (-1) ** i), m - i) for i in range(0, m + 1)]
    return _sum_over_pochhammer(INV_Q2, m, terms)


def d_tilde_orth_terms(count: int) -> List[RationalFunctionQ]:
    """Coefficients of D̃_O: (-1)^{floor(d/2)} / q^{ceil(d/2)^2}"""
    return [RationalFunctionQ.q_power(-(((d + 1) // 2) ** 2), (-1) ** (d // 2)) for d in range(count)]


def d_prime_orth(m: int) -> RationalFunctionQ:
    """1 for even m = 2d; 1 + (-1)^d / q^{(d+1)^2} for odd m = 2d+1"""
    d, odd = divmod(m, 2)
    if not odd:
        return ONE
    return ONE + RationalFunctionQ.q_power(-((d + 1) ** 2), (-1) ** d)


def d_bar_orth(m: int) -> RationalFunctionQ:
    """d̄_{2m} = (-1)^{m-1} / q^{m(m+1)}"""
    _require_m(m)
    return RationalFunctionQ.q_power(-m * (m + 1), (-1) ** (m - 1))


# Orders, Sylow p-subgroups and unipotent proportions

def group_order(family: str, m: int) -> RationalFunctionQ:
    """|X(q)| as a polynomial in q"""
    _require_m(m)
    kind = linear_kind(family)
    q = RationalFunctionQ.q_power(1)
    if kind == GL:
        product = ONE
        for i in range(1, m + 1):
            product = product * (q ** i - 1)
        return RationalFunctionQ.q_power(m * (m - 1) // 2) * product
    if kind == U:
        product = ONE
        for i in range(1, m + 1):
            product = product * (q ** i - (-1) ** i)
        return RationalFunctionQ.q_power(m * (m - 1) // 2) * product
    return orthogonal_or_symplectic_order(kind, m)


def orthogonal_or_symplectic_order(kind: str, m: int) -> RationalFunctionQ:
    q = RationalFunctionQ.q_power(1)
    product = ONE
    for i in range(1, m + 1):
        product = product * (q ** (2 * i) - 1)
    if kind == SP:
        return RationalFunctionQ.q_power(m * m) * product
    if kind == O_ODD:
        return RationalFunctionQ.q_power(m * m, 2) * product
    if kind in (O_PLUS, O_MINUS):
        epsilon = 1 if kind == O_PLUS else -1
        partial = product / (q ** (2 * m) - 1)
        return RationalFunctionQ.q_power(m * m - m, 2) * (q ** m - epsilon) * partial
    raise ValueError(f"not a symplectic or orthogonal family: {kind!r}")


def sylow_p_order(family: str, m: int) -> RationalFunctionQ:
    _require_m(m)
    kind = linear_kind(family)
    if kind in (GL, U):
        return RationalFunctionQ.q_power(m * (m - 1) // 2)
    if kind in (SP, O_ODD):
        return RationalFunctionQ.q_power(m * m)
    return RationalFunctionQ.q_power(m * m - m)


def steinberg_proportion(family: str, m: int) -> RationalFunctionQ:
    """Proportion of unipotent elements"""
    _require_m(m)
    kind = linear_kind(family)
    if kind == GL:
        return RationalFunctionQ(ONE_LAURENT, HalfPowerLaurent.q_power(m) * laurent_pochhammer(INV_Q, m))
    if kind == U:
        return RationalFunctionQ(ONE_LAURENT, HalfPowerLaurent.q_power(m) * laurent_pochhammer(NEG_INV_Q, m))
    if kind == SP:
        return RationalFunctionQ(ONE_LAURENT, HalfPowerLaurent.q_power(m) * laurent_pochhammer(INV_Q2, m))
    if kind == O_ODD:
        return RationalFunctionQ(ONE_LAURENT, HalfPowerLaurent.q_power(m, 2) * laurent_pochhammer(INV_Q2, m))
    epsilon = 1 if kind == O_PLUS else -1
    q = RationalFunctionQ.q_power(1)
    denominator = 2 * (q ** m - epsilon)
    for i in range(1, m):
        denominator = denominator * (q ** (2 * i) - 1)
    return RationalFunctionQ.q_power(m * m - m) / denominator


def orth_sum_unipotent_proportion(n: int) -> RationalFunctionQ:
    """Unipotent proportion of O^+_n plus that of O^-_n: 1/(q^{floor(n/2)} (1/q^2)_{floor(n/2)})"""
    d = n // 2
    return RationalFunctionQ(ONE_LAURENT, HalfPowerLaurent.q_power(d) * laurent_pochhammer(INV_Q2, d))


def orth_diff_unipotent_proportion(m: int) -> RationalFunctionQ:
    """Unipotent proportion of O^+_{2m} minus that of O^-_{2m}: 1/(q^{2m} (1/q^2)_m)"""
    return RationalFunctionQ(ONE_LAURENT, HalfPowerLaurent.q_power(2 * m) * laurent_pochhammer(INV_Q2, m))


# Expected δ and δ_p for each affine family

def expected_delta(family: str, m: int) -> RationalFunctionQ:
    kind = linear_kind(family)
    if kind == GL:
        return delta_agl(m)
    if kind == U:
        return delta_au(m)
    return conj_delta(kind, m)


def expected_delta_p(family: str, m: int) -> RationalFunctionQ:
    """
    δ_p from the closed forms

    AGL: G(1/q). AU: the proved unitary formula. ASp: identity i. AO_{2m+1}:
    half of identity ii (O^+ and O^- coincide). AO^±_{2m}: (iii ± ū_{2m}) / 2.
    """
    kind = linear_kind(family)
    if kind == GL:
        return delta_p_agl(m)
    if kind == U:
        return delta_p_au(m)
    if kind == SP:
        return conj_identity_rhs("i", m)
    if kind == O_ODD:
        return conj_identity_rhs("ii", m) / 2
    total, difference = conj_identity_rhs("iii", m), u_bar_orth(m)
    if kind == O_PLUS:
        return (total + difference) / 2
    return (total - difference) / 2


def delta_p_conjectural(family: str) -> bool:
    return linear_kind(family) in CONJECTURAL_DELTA
