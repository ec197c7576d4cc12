"""
Integer partitions
Constrained enumeration, partition statistics, Durfee decomposition, the
cute / fixed-point predicates and the pair sets compared by the bijection checks
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Tuple

logger = logging.getLogger(__name__)

SYMPLECTIC = "symplectic"
ORTHOGONAL = "orthogonal"

ODD_PARTS_EVEN_MULTIPLICITY = "odd-parts-even-multiplicity"
EVEN_PARTS_EVEN_MULTIPLICITY = "even-parts-even-multiplicity"
ALL_EVEN_MULTIPLICITY = "all-even-multiplicity"
MULTIPLICITY_RULES = (ODD_PARTS_EVEN_MULTIPLICITY, EVEN_PARTS_EVEN_MULTIPLICITY, ALL_EVEN_MULTIPLICITY)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive parts"""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be non-increasing: {parts}")

    @classmethod
    def from_multiplicities(cls, pairs) -> "Partition":
        """Build from (part, multiplicity) pairs in decreasing part order"""
        return cls(tuple(itertools.chain.from_iterable(itertools.repeat(v, k) for v, k in pairs)))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, index: int) -> int:
        return self.parts[index]

    def __bool__(self) -> bool:
        return bool(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        """max(λ), with max of the empty partition taken as 0"""
        return self.parts[0] if self.parts else 0

    def part(self, i: int) -> int:
        """λ_i (1-based), 0 beyond the length"""
        return self.parts[i - 1] if i <= len(self.parts) else 0

    @cached_property
    def dual(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(tuple(sum(1 for p in self.parts if p >= i) for i in range(1, self.parts[0] + 1)))

    @cached_property
    def multiplicities(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return counts

    @cached_property
    def odd_parts(self) -> int:
        return sum(1 for p in self.parts if p % 2)

    @cached_property
    def sum_dual_squares(self) -> int:
        return sum(d * d for d in self.dual.parts)

    def __str__(self) -> str:
        return render_partition(self)


class PartitionStats(NamedTuple):
    dual: Partition
    multiplicities: Dict[int, int]
    odd_parts: int
    sum_dual_squares: int
    length: int
    size: int


class DurfeeDecomposition(NamedTuple):
    durfee: int
    pi1: Partition
    pi2: Partition


@dataclass(frozen=True)
class PartitionConstraint:
    """
    Conjunction of multiplicity rules, an exact part count and a cap on part sizes

    Combine with `&`; the empty constraint admits every partition.
    """

    rules: FrozenSet[str] = frozenset()
    exact_parts: Optional[int] = None
    size_cap: Optional[int] = None

    def __post_init__(self):
        unknown = set(self.rules) - set(MULTIPLICITY_RULES)
        if unknown:
            raise ValueError(f"unknown multiplicity rule(s): {sorted(unknown)}")

    @classmethod
    def none(cls) -> "PartitionConstraint":
        return cls()

    @classmethod
    def rule(cls, name: str) -> "PartitionConstraint":
        return cls(rules=frozenset([name]))

    @classmethod
    def exactly_m_parts(cls, m: int) -> "PartitionConstraint":
        return cls(exact_parts=m)

    @classmethod
    def cap(cls, c: int) -> "PartitionConstraint":
        return cls(size_cap=c)

    def __and__(self, other: "PartitionConstraint") -> "PartitionConstraint":
        if self.exact_parts is not None and other.exact_parts is not None and self.exact_parts != other.exact_parts:
            exact = -1  # contradictory part counts admit nothing
        else:
            exact = self.exact_parts if self.exact_parts is not None else other.exact_parts
        caps = [c for c in (self.size_cap, other.size_cap) if c is not None]
        return PartitionConstraint(self.rules | other.rules, exact, min(caps) if caps else None)

    def needs_even_multiplicity(self, part: int) -> bool:
        if ALL_EVEN_MULTIPLICITY in self.rules:
            return True
        if part % 2 and ODD_PARTS_EVEN_MULTIPLICITY in self.rules:
            return True
        return part % 2 == 0 and EVEN_PARTS_EVEN_MULTIPLICITY in self.rules

    def admits(self, lam: Partition) -> bool:
        if self.exact_parts is not None and len(lam) != self.exact_parts:
            return False
        if self.size_cap is not None and lam.largest > self.size_cap:
            return False
        return all(k % 2 == 0 for v, k in lam.multiplicities.items() if self.needs_even_multiplicity(v))


def _walk(rem: int, max_part: int, need: Optional[int], constraint: PartitionConstraint):
    if rem == 0:
        if need is None or need == 0:
            yield []
        return
    if need == 0:
        return
    for v in range(min(rem, max_part), 0, -1):
        even_only = constraint.needs_even_multiplicity(v)
        for k in range(rem // v, 0, -1):
            if even_only and k % 2:
                continue
            rest = rem - k * v
            rest_need = None
            if need is not None:
                if k > need:
                    continue
                rest_need = need - k
                if rest_need > rest or rest > rest_need * (v - 1):
                    continue
            for tail in _walk(rest, v - 1, rest_need, constraint):
                yield [(v, k)] + tail


def enumerate_multiplicities(n: int, constraint: PartitionConstraint = PartitionConstraint(),
                             largest: Optional[int] = None) -> Iterator[List[Tuple[int, int]]]:
    """
    Stream partitions of n as (part, multiplicity) lists, reverse-lexicographic

    With `largest`, only partitions whose largest part equals it are produced;
    these slices are the chunks used for parallel sums.
    """
    if n < 0:
        raise ValueError(f"cannot partition a negative integer: {n}")
    if constraint.exact_parts is not None and constraint.exact_parts < 0:
        return
    cap = n if constraint.size_cap is None else min(n, constraint.size_cap)
    need = constraint.exact_parts
    if largest is None:
        yield from _walk(n, cap, need, constraint)
        return
    if largest > cap or largest <= 0:
        return
    even_only = constraint.needs_even_multiplicity(largest)
    for k in range(n // largest, 0, -1):
        if even_only and k % 2:
            continue
        rest = n - k * largest
        rest_need = None
        if need is not None:
            if k > need:
                continue
            rest_need = need - k
            if rest_need > rest or rest > rest_need * (largest - 1):
                continue
        for tail in _walk(rest, largest - 1, rest_need, constraint):
            yield [(largest, k)] + tail


def enumerate_partitions(n: int, constraint: PartitionConstraint = PartitionConstraint(),
                         largest: Optional[int] = None) -> Iterator[Partition]:
    """Stream each partition of n admitted by the constraint exactly once, reverse-lexicographic"""
    for pairs in enumerate_multiplicities(n, constraint, largest):
        yield Partition.from_multiplicities(pairs)


@lru_cache(maxsize=None)
def partitions_of(n: int) -> Tuple[Partition, ...]:
    return tuple(enumerate_partitions(n))


def count_partitions(n: int) -> int:
    """p(n) via Euler's pentagonal-number recurrence"""
    if n < 0:
        return 0
    table = [1] + [0] * n
    for i in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > i:
                break
            sign = 1 if k % 2 else -1
            total += sign * table[i - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= i:
                total += sign * table[i - g2]
            k += 1
        table[i] = total
    return table[n]


def stats(lam: Partition) -> PartitionStats:
    return PartitionStats(
        dual=lam.dual,
        multiplicities=dict(lam.multiplicities),
        odd_parts=lam.odd_parts,
        sum_dual_squares=lam.sum_dual_squares,
        length=len(lam),
        size=lam.size,
    )


def durfee_decompose(lam: Partition) -> DurfeeDecomposition:
    if not lam:
        raise ValueError("the empty partition has no Durfee square")
    s = max(i for i in range(1, len(lam) + 1) if lam.part(i) >= i)
    pi1 = Partition(tuple(p - s for p in lam.parts[:s] if p > s))
    pi2 = Partition(lam.parts[s:])
    return DurfeeDecomposition(s, pi1, pi2)


def is_cute(lam: Partition) -> bool:
    """λ_1 = 1, or λ_{k-1} > λ_k = k for some k >= 2"""
    if not lam:
        return False
    if lam.part(1) == 1:
        return True
    return any(lam.part(k - 1) > lam.part(k) == k for k in range(2, len(lam) + 1))


def is_cute_by_durfee(lam: Partition) -> bool:
    """Durfee square k with exactly k - 1 parts to its right"""
    if not lam:
        return False
    decomposition = durfee_decompose(lam)
    return len(decomposition.pi1) == decomposition.durfee - 1


def has_fixed_point(lam: Partition) -> bool:
    return any(lam.part(k) == k for k in range(1, len(lam) + 1))


@dataclass(frozen=True)
class SignedPartition:
    """A partition with a sign on each present even size (symplectic) or odd size (orthogonal)"""

    base: Partition
    flavor: str
    signs: Tuple[Tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.flavor not in (SYMPLECTIC, ORTHOGONAL):
            raise ValueError(f"unknown flavor: {self.flavor}")
        _check_flavor(self.base, self.flavor)
        signs = tuple(sorted(((int(s), int(v)) for s, v in self.signs), reverse=True))
        object.__setattr__(self, "signs", signs)
        if tuple(s for s, _ in signs) != signed_sizes(self.base, self.flavor):
            raise ValueError(f"signs {signs} do not match the sizes required for {self.base}")
        if any(v not in (1, -1) for _, v in signs):
            raise ValueError(f"signs must be +1 or -1: {signs}")

    def sign(self, size: int) -> int:
        return dict(self.signs)[size]

    def __str__(self) -> str:
        if not self.signs:
            return render_partition(self.base)
        marks = ", ".join(f"{s}:{'+' if v > 0 else '-'}" for s, v in self.signs)
        return f"{render_partition(self.base)} {marks}"


def signed_sizes(lam: Partition, flavor: str) -> Tuple[int, ...]:
    parity = 0 if flavor == SYMPLECTIC else 1
    return tuple(sorted((v for v in lam.multiplicities if v % 2 == parity), reverse=True))


def _check_flavor(lam: Partition, flavor: str) -> None:
    # symplectic: odd sizes need even multiplicity; orthogonal: even sizes do
    parity = 1 if flavor == SYMPLECTIC else 0
    bad = [v for v, k in lam.multiplicities.items() if v % 2 == parity and k % 2]
    if bad:
        raise ValueError(f"{lam} is not a {flavor} partition: sizes {sorted(bad)} have odd multiplicity")


def flavor_constraint(flavor: str) -> PartitionConstraint:
    return PartitionConstraint.rule(ODD_PARTS_EVEN_MULTIPLICITY if flavor == SYMPLECTIC
                                    else EVEN_PARTS_EVEN_MULTIPLICITY)


def signed_expansions(lam: Partition, flavor: str) -> Iterator[SignedPartition]:
    """All 2^ē (symplectic) or 2^ō (orthogonal) sign assignments"""
    _check_flavor(lam, flavor)
    sizes = signed_sizes(lam, flavor)
    for choice in itertools.product((1, -1), repeat=len(sizes)):
        yield SignedPartition(lam, flavor, tuple(zip(sizes, choice)))


# Pair sets (λ, μ) with pt(λ) = b. A and B have equal size; E ⊆ G, G \ E = A,
# and F ↔ G by removing one box from μ_1.

BIJECTION_SETS = ("A", "B", "E", "F", "G")


def _second(mu: Partition) -> int:
    return mu.part(2)


def _pair_predicate(which: str):
    if which == "A":
        return lambda lam, mu: bool(lam) and lam.part(1) == mu.largest + 1
    if which == "B":
        return lambda lam, mu: is_cute(lam) and (not mu or mu.part(1) == _second(mu))
    if which == "E":
        return lambda lam, mu: lam.largest <= mu.largest
    if which == "F":
        return lambda lam, mu: lam.largest <= mu.largest and _second(mu) < mu.part(1)
    if which == "G":
        return lambda lam, mu: lam.largest <= mu.largest + 1
    raise ValueError(f"unknown bijection set {which!r}; expected one of {BIJECTION_SETS}")


@lru_cache(maxsize=None)
def _partitions_with_parts(n: int, b: int) -> Tuple[Partition, ...]:
    return tuple(enumerate_partitions(n, PartitionConstraint.exactly_m_parts(b)))


def _iter_pairs(a: int, b: int, which: str):
    if a < 0 or b < 0:
        raise ValueError(f"a and b must be non-negative, got a={a}, b={b}")
    predicate = _pair_predicate(which)
    total = a + 1 if which == "F" else a
    for k in range(0, total + 1):
        for lam in _partitions_with_parts(k, b):
            for mu in partitions_of(total - k):
                if predicate(lam, mu):
                    yield lam, mu


def bijection_sets(a: int, b: int, which: str) -> List[Tuple[Partition, Partition]]:
    return list(_iter_pairs(a, b, which))


def bijection_counts(a: int, b: int, which: str) -> int:
    return sum(1 for _ in _iter_pairs(a, b, which))


def render_partition(lam: Partition) -> str:
    return "[" + ",".join(str(p) for p in lam.parts) + "]"


def parse_partition(text: str) -> Partition:
    body = text.strip().strip("[]()").strip()
    if not body:
        return Partition()
    return Partition(tuple(sorted((int(p) for p in body.split(",")), reverse=True)))
