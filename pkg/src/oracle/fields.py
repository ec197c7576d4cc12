"""
Small finite fields and form Gram matrices
Elements of F_{p^k} are the integers 0..p^k-1 read as base-p coefficient
vectors of polynomials modulo a fixed irreducible polynomial
"""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy import factorint

logger = logging.getLogger(__name__)

HERMITIAN = "hermitian"
ALTERNATING = "alternating"
QUADRATIC = "quadratic"
NO_FORM = "none"

# Witt types of quadratic forms in odd characteristic
WITT_ZERO = "0"
WITT_ONE = "1"
WITT_DELTA = "delta"
WITT_OMEGA = "omega"

Matrix = Tuple[Tuple[int, ...], ...]


def parse_prime_power(q: int) -> Tuple[int, int]:
    """(p, k) with q = p^k, or ValueError"""
    if q < 2:
        raise ValueError(f"q must be a prime power, got {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise ValueError(f"q must be a prime power, got {q} = {factors}")
    (p, k), = factors.items()
    return int(p), int(k)


def _poly_mulmod(a: List[int], b: List[int], modulus: List[int], p: int) -> List[int]:
    k = len(modulus) - 1
    product = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                product[i + j] = (product[i + j] + x * y) % p
    # modulus is monic of degree k
    for top in range(len(product) - 1, k - 1, -1):
        c = product[top]
        if c:
            for j in range(k + 1):
                product[top - k + j] = (product[top - k + j] - c * modulus[j]) % p
    return (product + [0] * k)[:k]


def _has_root(poly: Sequence[int], p: int) -> bool:
    return any(sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p == 0 for x in range(p))


def _is_irreducible(poly: List[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2"""
    degree = len(poly) - 1
    if degree <= 3:
        return not _has_root(poly, p)
    for d in range(1, degree // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            remainder = list(poly)
            for top in range(degree, d - 1, -1):
                c = remainder[top]
                if c:
                    for j in range(d + 1):
                        remainder[top - d + j] = (remainder[top - d + j] - c * divisor[j]) % p
            if not any(remainder[:d]):
                return False
    return True


def find_irreducible(p: int, k: int) -> List[int]:
    """Least monic irreducible polynomial of degree k over F_p, low coefficient first"""
    for tail in itertools.product(range(p), repeat=k):
        poly = list(reversed(tail)) + [1]
        if poly[0] and _is_irreducible(poly, p):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class SmallField:
    """
    F_{p^k} with full addition and multiplication tables

    Element 0 is zero and element 1 is one.
    """

    def __init__(self, p: int, k: int = 1):
        if parse_prime_power(p) != (p, 1):
            raise ValueError(f"characteristic must be prime, got {p}")
        if k < 1:
            raise ValueError(f"extension degree must be positive, got {k}")
        self.characteristic = p
        self.degree = k
        self.order = p ** k
        self.modulus = find_irreducible(p, k) if k > 1 else [0, 1]
        digits = [self._digits(a) for a in range(self.order)]
        self._add = [[self._number([(x + y) % p for x, y in zip(da, db)]) for db in digits] for da in digits]
        if k == 1:
            self._mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            self._mul = [[self._number(_poly_mulmod(da, db, self.modulus, p)) for db in digits] for da in digits]
        self._neg = [row.index(0) for row in self._add]
        self._inv = [0] + [self._mul[a].index(1) for a in range(1, self.order)]
        logger.debug(f"Built F_{self.order} with modulus {self.modulus}")

    @classmethod
    def of_order(cls, q: int) -> "SmallField":
        p, k = parse_prime_power(q)
        return cls(p, k)

    def _digits(self, a: int) -> List[int]:
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, self.characteristic)
            out.append(r)
        return out

    def _number(self, digits: Sequence[int]) -> int:
        value = 0
        for d in reversed(digits):
            value = value * self.characteristic + d
        return value

    @property
    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return self._inv[a]

    def power(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul[result][base]
            base = self._mul[base][base]
            e >>= 1
        return result

    def frobenius(self, a: int, times: int = 1) -> int:
        """a^(p^times)"""
        return self.power(a, self.characteristic ** times)

    def conjugate(self, a: int) -> int:
        """a^q on F_{q^2}, the involution fixing F_q"""
        if self.degree % 2:
            raise ValueError(f"F_{self.order} is not a quadratic extension")
        return self.frobenius(a, self.degree // 2)

    def is_square(self, a: int) -> bool:
        return any(self._mul[x][x] == a for x in self.elements)

    def least_nonsquare(self) -> int:
        for a in range(1, self.order):
            if not self.is_square(a):
                return a
        raise ValueError(f"F_{self.order} has no non-squares (characteristic 2)")

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        total = 0
        for x, y in zip(u, v):
            if x and y:
                total = self._add[total][self._mul[x][y]]
        return total

    def __repr__(self) -> str:
        return f"SmallField(p={self.characteristic}, k={self.degree})"


@dataclass(frozen=True)
class FormSpec:
    """A non-degenerate form given by its Gram matrix"""

    kind: str
    gram: Optional[Matrix]
    witt: Optional[str] = None

    @property
    def dimension(self) -> int:
        return len(self.gram) if self.gram is not None else 0


def _zero_matrix(n: int) -> List[List[int]]:
    return [[0] * n for _ in range(n)]


def _freeze(rows: List[List[int]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def _hyperbolic(field: SmallField, n: int, size: int) -> List[List[int]]:
    """Antidiagonal ones on the leading size x size block"""
    gram = _zero_matrix(n)
    for i in range(size):
        gram[i][size - 1 - i] = 1
    return gram


def hermitian_form(field: SmallField, n: int) -> FormSpec:
    gram = _zero_matrix(n)
    for i in range(n):
        gram[i][i] = 1
    return FormSpec(HERMITIAN, _freeze(gram))


def alternating_form(field: SmallField, n: int) -> FormSpec:
    if n % 2:
        raise ValueError(f"alternating forms need even dimension, got {n}")
    half = n // 2
    gram = _zero_matrix(n)
    for i in range(half):
        gram[i][half + i] = 1
        gram[half + i][i] = field.neg(1)
    return FormSpec(ALTERNATING, _freeze(gram))


def quadratic_form(field: SmallField, n: int, witt: str) -> FormSpec:
    """
    Symmetric Gram matrices for odd characteristic

    0: hyperbolic; omega: hyperbolic plus diag(1, -delta); 1 and delta:
    hyperbolic plus (1) or (delta), delta the least non-square.
    """
    if field.characteristic == 2:
        raise ValueError("quadratic forms are only supported in odd characteristic")
    delta = field.least_nonsquare()
    if witt == WITT_ZERO:
        if n % 2:
            raise ValueError(f"Witt type 0 needs even dimension, got {n}")
        gram = _hyperbolic(field, n, n)
    elif witt == WITT_OMEGA:
        if n % 2 or n < 2:
            raise ValueError(f"Witt type omega needs even dimension >= 2, got {n}")
        gram = _hyperbolic(field, n, n - 2)
        gram[n - 2][n - 2] = 1
        gram[n - 1][n - 1] = field.neg(delta)
    elif witt in (WITT_ONE, WITT_DELTA):
        if n % 2 == 0:
            raise ValueError(f"Witt type {witt} needs odd dimension, got {n}")
        gram = _hyperbolic(field, n, n - 1)
        gram[n - 1][n - 1] = 1 if witt == WITT_ONE else delta
    else:
        raise ValueError(f"unknown Witt type {witt!r}")
    return FormSpec(QUADRATIC, _freeze(gram), witt)
