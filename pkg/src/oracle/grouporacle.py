"""
Brute-force group oracle
Enumerates GL_n(q), U_n(q), Sp_2m(q) and O_n(q) as explicit matrix groups
over small fields and measures derangement proportions of their affine
extensions directly
"""
import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from ..identities import formulas
from ..identities.formulas import GL, O_MINUS, O_ODD, O_PLUS, SP, U, GroupFamily
from ..services.report import VerificationReport, make_record
from .fields import (
    WITT_DELTA, WITT_OMEGA, WITT_ONE, WITT_ZERO, FormSpec, Matrix, SmallField,
    alternating_form, hermitian_form, parse_prime_power, quadratic_form,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 30_000_000
DEFAULT_LITERAL_BOUND = 100_000
CLOSURE_SAMPLES = 20

Vector = Tuple[int, ...]


class EnumerationBudgetError(RuntimeError):
    """|GL_n| over the working field exceeds the enumeration budget"""


class GroupOrderMismatchError(RuntimeError):
    """The enumerated group does not have the order its formula predicts"""


@dataclass
class GroupInstance:
    """An explicitly enumerated linear group with per-element data"""

    family: GroupFamily
    q: int
    field: SmallField
    form: Optional[FormSpec]
    elements: List[Matrix] = field(default_factory=list)
    kernel_dims: List[int] = field(default_factory=list)
    unipotent: List[bool] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dimension(self) -> int:
        return self.family.dimension

    @property
    def field_order(self) -> int:
        return self.field.order

    @property
    def witt(self) -> Optional[str]:
        return self.form.witt if self.form is not None else None


# Matrix arithmetic over a SmallField

def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(f: SmallField, a: Matrix, b: Matrix) -> Matrix:
    columns = list(zip(*b))
    return tuple(tuple(f.dot(row, col) for col in columns) for row in a)


def mat_sub_identity(f: SmallField, a: Matrix) -> Matrix:
    return tuple(
        tuple(f.sub(x, 1) if i == j else x for j, x in enumerate(row))
        for i, row in enumerate(a)
    )


def vec_mat(f: SmallField, v: Sequence[int], a: Matrix) -> Vector:
    return tuple(f.dot(v, col) for col in zip(*a))


def rank(f: SmallField, a: Matrix) -> int:
    rows = [list(r) for r in a]
    n_cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def is_unipotent(f: SmallField, a: Matrix) -> bool:
    """(a - 1)^n == 0"""
    nilpotent = mat_sub_identity(f, a)
    n = len(a)
    power = nilpotent
    for _ in range(n - 1):
        if not any(any(row) for row in power):
            return True
        power = mat_mul(f, power, nilpotent)
    return not any(any(row) for row in power)


# Enumeration

def _form_for(family: GroupFamily, f: SmallField, witt: Optional[str]) -> Optional[FormSpec]:
    n = family.dimension
    if family.kind == GL:
        return None
    if family.kind == U:
        return hermitian_form(f, n)
    if family.kind == SP:
        return alternating_form(f, n)
    if family.kind == O_PLUS:
        return quadratic_form(f, n, WITT_ZERO)
    if family.kind == O_MINUS:
        return quadratic_form(f, n, WITT_OMEGA)
    return quadratic_form(f, n, witt or WITT_ONE)


def _span_with(f: SmallField, span: FrozenSet[Vector], v: Vector) -> FrozenSet[Vector]:
    return frozenset(
        tuple(f.add(s_i, f.mul(c, v_i)) for s_i, v_i in zip(s, v))
        for s in span for c in f.elements
    )


def _enumerate_gl(f: SmallField, n: int) -> Iterator[Matrix]:
    vectors = [v for v in itertools.product(f.elements, repeat=n) if any(v)]

    def extend(rows: List[Vector], span: FrozenSet[Vector]) -> Iterator[Matrix]:
        if len(rows) == n:
            yield tuple(rows)
            return
        for v in vectors:
            if v not in span:
                yield from extend(rows + [v], _span_with(f, span, v))

    yield from extend([], frozenset({(0,) * n}))


def _enumerate_isometries(f: SmallField, form: FormSpec) -> Iterator[Matrix]:
    """
    Rows r_i with B(r_i, r_j) = J_ij, built one row at a time

    B(u, v) = u J c(v)^T with c the field involution for hermitian forms.
    Checking j <= i is enough since B and J share their symmetry; the
    non-degeneracy of J makes every solution invertible.
    """
    n = form.dimension
    gram = form.gram
    conj = f.conjugate if form.kind == "hermitian" else (lambda x: x)
    vectors = [v for v in itertools.product(f.elements, repeat=n) if any(v)]
    # J c(v) as a column, so B(u, v) = dot(u, jv[v])
    jv = {v: tuple(f.dot(row, [conj(x) for x in v]) for row in gram) for v in vectors}
    by_norm: Dict[int, List[Vector]] = {}
    for v in vectors:
        by_norm.setdefault(f.dot(v, jv[v]), []).append(v)

    def extend(rows: List[Vector]) -> Iterator[Matrix]:
        i = len(rows)
        if i == n:
            yield tuple(rows)
            return
        for v in by_norm.get(gram[i][i], []):
            if all(f.dot(v, jv[r]) == gram[i][j] for j, r in enumerate(rows)):
                yield from extend(rows + [v])

    yield from extend([])


def _spot_check_closure(g: GroupInstance, samples: int = CLOSURE_SAMPLES) -> None:
    members = set(g.elements)
    rng = random.Random(0)
    for _ in range(min(samples, g.order * g.order)):
        a, b = rng.choice(g.elements), rng.choice(g.elements)
        if mat_mul(g.field, a, b) not in members:
            raise GroupOrderMismatchError(f"{g.family} over F_{g.q}: product left the enumerated set")


def build_group(family: str, m: int, q: int, budget: int = DEFAULT_BUDGET,
                witt: Optional[str] = None) -> GroupInstance:
    """
    Enumerate X_m(q) as matrices over F_{q^e}

    Args:
        family: GL, U, Sp, O-odd, O-plus or O-minus (affine names accepted)
        m: rank parameter
        q: prime power; odd for Sp and the orthogonal families
        budget: upper bound on |GL_n(q^e)| before enumeration is refused
        witt: Witt type 1 or delta for odd-dimensional orthogonal groups

    Returns:
        GroupInstance with kernel dimensions of g - 1 and unipotent flags
    """
    fam = GroupFamily(family, m)
    p, k = parse_prime_power(q)
    if fam.kind in (SP, O_ODD, O_PLUS, O_MINUS) and p == 2:
        raise ValueError(f"{fam.kind} requires odd q, got {q}")
    if witt is not None and fam.kind != O_ODD:
        raise ValueError("a Witt type only applies to odd-dimensional orthogonal groups")
    if witt is not None and witt not in (WITT_ONE, WITT_DELTA):
        raise ValueError(f"Witt type must be {WITT_ONE!r} or {WITT_DELTA!r}, got {witt!r}")

    n = fam.dimension
    working_order = q ** fam.e
    gl_size = formulas.group_order(GL, n).eval_at_q(working_order)
    if gl_size > budget:
        raise EnumerationBudgetError(
            f"[BUDGET] |GL_{n}({working_order})| = {gl_size} exceeds budget {budget}"
        )

    started = time.perf_counter()
    f = SmallField(p, k * fam.e)
    form = _form_for(fam, f, witt)
    source = _enumerate_gl(f, n) if form is None else _enumerate_isometries(f, form)
    elements = list(source)

    expected = formulas.group_order(fam.kind, m).eval_at_q(q)
    if len(elements) != expected:
        raise GroupOrderMismatchError(
            f"{fam} over F_{q}: enumerated {len(elements)} elements, expected {expected}"
        )

    g = GroupInstance(family=fam, q=q, field=f, form=form, elements=elements)
    _spot_check_closure(g)
    for a in elements:
        g.kernel_dims.append(n - rank(f, mat_sub_identity(f, a)))
        g.unipotent.append(is_unipotent(f, a))
    logger.info(
        f"Enumerated {fam} over F_{q}: {g.order} elements in "
        f"{(time.perf_counter() - started) * 1000.0:.0f} ms"
    )
    return g


# Derangement proportions

def delta_oracle(g: GroupInstance, p_power_only: bool = False) -> Fraction:
    """
    Proportion of fixed-point-free elements of the affine group V ⋊ X

    x -> xa + v fixes nothing iff v lies outside the image of a - 1, so a
    contributes 1 - Q^{-dim ker(a-1)}. With p_power_only, only unipotent a
    (the elements of p-power order) are counted.
    """
    Q = g.field_order
    total = Fraction(0)
    for d, unip in zip(g.kernel_dims, g.unipotent):
        if p_power_only and not unip:
            continue
        total += 1 - Fraction(1, Q ** d)
    return total / g.order


def derangement_count(g: GroupInstance, p_power_only: bool = False) -> int:
    """Fixed-point-free affine maps counted from kernel dimensions"""
    Q, n = g.field_order, g.dimension
    return sum(
        Q ** n - Q ** (n - d)
        for d, unip in zip(g.kernel_dims, g.unipotent)
        if unip or not p_power_only
    )


def literal_derangement_count(g: GroupInstance, p_power_only: bool = False) -> int:
    """Fixed-point-free affine maps counted by listing the translations that admit a fixed point"""
    f, n = g.field, g.dimension
    vectors = list(itertools.product(f.elements, repeat=n))
    count = 0
    for a, unip in zip(g.elements, g.unipotent):
        if p_power_only and not unip:
            continue
        fixing = {tuple(f.sub(x, y) for x, y in zip(u, vec_mat(f, u, a))) for u in vectors}
        count += len(vectors) - len(fixing)
    return count


def affine_order(g: GroupInstance) -> int:
    return g.field_order ** g.dimension * g.order


def unipotent_count(g: GroupInstance) -> int:
    return sum(g.unipotent)


def compare_with_formula(family: str, m: int, q: int, p_power: bool = False,
                         budget: int = DEFAULT_BUDGET,
                         literal_bound: int = DEFAULT_LITERAL_BOUND,
                         witt: Optional[str] = None,
                         timings: bool = False) -> VerificationReport:
    """
    Oracle values against the closed forms at a concrete q

    Records: the proportion itself, the unipotent count against the square
    of the Sylow p-order, a literal recount when the affine group is small
    enough, and for orthogonal groups the cross-checks between Witt types.
    """
    fam = GroupFamily(family, m)
    params = {"m": m, "q": q}
    if witt is not None:
        params["witt"] = witt
    label = "delta-p" if p_power else "delta"
    started = time.perf_counter() if timings else None

    logger.info("=" * 60)
    logger.info(f"ORACLE {fam.affine_name}_{fam.dimension}({q}) {label}")
    logger.info("=" * 60)

    g = build_group(family, m, q, budget=budget, witt=witt)
    report = VerificationReport()

    observed = delta_oracle(g, p_power_only=p_power)
    if p_power:
        expected = formulas.expected_delta_p(fam.kind, m).eval_at_q(q)
        conjectural = formulas.delta_p_conjectural(fam.kind)
    else:
        expected = formulas.expected_delta(fam.kind, m).eval_at_q(q)
        conjectural = fam.conjectural
    report.add(make_record(f"oracle-{label}", {"family": fam.affine_name, **params}, observed, expected,
                          conjectural=conjectural, terms=g.order, started=started))

    sylow = formulas.sylow_p_order(fam.kind, m).eval_at_q(q)
    report.add(make_record("oracle-steinberg", {"family": fam.affine_name, **params},
                           unipotent_count(g), sylow * sylow, terms=g.order))

    if affine_order(g) <= literal_bound:
        report.add(make_record("oracle-literal", {"family": fam.affine_name, **params},
                               literal_derangement_count(g, p_power),
                               derangement_count(g, p_power), terms=affine_order(g)))
    else:
        logger.info(f"Skipping literal recount: |A{fam}| = {affine_order(g)} > {literal_bound}")

    if fam.kind == O_ODD:
        other_witt = WITT_DELTA if (witt or WITT_ONE) == WITT_ONE else WITT_ONE
        other = build_group(family, m, q, budget=budget, witt=other_witt)
        report.add(make_record("oracle-witt", {"family": fam.affine_name, **params, "other": other_witt},
                               observed, delta_oracle(other, p_power_only=p_power), terms=other.order))
    elif fam.kind in (O_PLUS, O_MINUS) and p_power:
        partner = build_group(O_MINUS if fam.kind == O_PLUS else O_PLUS, m, q, budget=budget)
        partner_value = delta_oracle(partner, p_power_only=True)
        plus, minus = (observed, partner_value) if fam.kind == O_PLUS else (partner_value, observed)
        report.add(make_record("oracle-orth-sum", {"m": m, "q": q}, plus + minus,
                               formulas.conj_identity_rhs("iii", m).eval_at_q(q), conjectural=True))
        report.add(make_record("oracle-orth-diff", {"m": m, "q": q}, plus - minus,
                               formulas.u_bar_orth(m).eval_at_q(q), conjectural=True))

    logger.info(f"{fam} over F_{q}: {label} = {observed}")
    return report
