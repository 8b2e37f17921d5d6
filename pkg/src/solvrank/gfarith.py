"""Arithmetic in GF(p^k).

Elements are stored in the polynomial basis 1, x, ..., x^(k-1) modulo a fixed
monic irreducible polynomial.  The modulus is the lexicographically smallest
monic irreducible of degree k (coefficients compared constant term first), so
every construction of the same field is identical.

Internally an element also has an integer code ``sum(c_i * p**i)``; the
vectorised matrix code in :mod:`solvrank.matlin` works on codes through the
lookup tables exposed by :class:`Field`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Field",
    "FieldElem",
    "FieldError",
    "make_field",
    "is_prime",
    "primitive_element",
    "prime_factors",
    "solve_sum_of_squares",
    "frobenius",
    "arith",
]

MAX_FIELD_ORDER = 3**10
_TABLE_LIMIT = 4096


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- dense polynomial helpers over GF(p); lists are low degree first ---------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    """Remainder of a modulo the monic polynomial b."""
    a = _trim(a)
    db = len(b) - 1
    while len(a) - 1 >= db:
        c = a[-1]
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _trim(a)
    return a


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def _is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


def _smallest_irreducible(p, k):
    # itertools.product is lexicographic with the first slot most
    # significant; the first slot is the constant term.
    for coeffs in itertools.product(range(p), repeat=k):
        if _is_irreducible(list(coeffs) + [1], p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


class Field:
    """The finite field GF(p^k) with a deterministic modulus.

    ``modulus`` holds the k non-leading coefficients of the monic modulus,
    constant term first.  Prime fields have ``modulus == ()`` and use plain
    residue arithmetic.
    """

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be at least 1")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = () if k == 1 else _smallest_irreducible(p, k)
        self._tables = None

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (isinstance(other, Field) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    # -- element construction -------------------------------------------
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            # integers embed through the prime field
            return FieldElem(self, (int(value) % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise FieldError("too many coefficients")
        return FieldElem(self, coeffs + (0,) * (self.k - len(coeffs)))

    def from_code(self, code: int) -> "FieldElem":
        coeffs = []
        for _ in range(self.k):
            code, r = divmod(int(code), self.p)
            coeffs.append(r)
        return FieldElem(self, tuple(coeffs))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def gen(self):
        """The class of x (equal to 1 in a prime field)."""
        return self((0, 1)) if self.k > 1 else self.one

    def elements(self):
        """All elements in increasing lexicographic order (constant first)."""
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElem(self, coeffs)

    # -- raw polynomial arithmetic on coefficient tuples -----------------
    def _mul_coeffs(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        r = _poly_mod(prod, list(self.modulus) + [1], p)
        return tuple(r) + (0,) * (k - len(r))

    # -- lookup tables for vectorised code arithmetic --------------------
    @property
    def tables(self):
        """(add, sub, mul, neg, inv) tables indexed by element code."""
        if self._tables is None:
            if self.order > _TABLE_LIMIT:
                raise FieldError(f"{self} too large for lookup tables")
            self._tables = self._build_tables()
        return self._tables

    def _build_tables(self):
        q, p, k = self.order, self.p, self.k
        digits = np.array([[(c // p**i) % p for i in range(k)] for c in range(q)],
                          dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        sub = ((digits[:, None, :] - digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        elems = [tuple(int(x) for x in row) for row in digits]
        for a in range(q):
            for b in range(a, q):
                c = self._mul_coeffs(elems[a], elems[b])
                mul[a, b] = mul[b, a] = sum(ci * p**i for i, ci in enumerate(c))
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return add.astype(np.int64), sub.astype(np.int64), mul, neg.astype(np.int64), inv

    def serialize(self, e: "FieldElem") -> str:
        if self.k == 1:
            return str(e.coeffs[0])
        return ":".join(str(c) for c in e.coeffs)

    def parse(self, text: str) -> "FieldElem":
        parts = text.split(":")
        if len(parts) != self.k:
            raise FieldError(f"expected {self.k} coefficient(s), got {text!r}")
        try:
            coeffs = [int(x) for x in parts]
        except ValueError:
            raise FieldError(f"bad field element {text!r}") from None
        if any(c < 0 or c >= self.p for c in coeffs):
            raise FieldError(f"coefficient out of range in {text!r}")
        return FieldElem(self, tuple(coeffs))


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1, bound: int = MAX_FIELD_ORDER) -> Field:
    """Return GF(p^k); constructions are cached and deterministic."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be at least 1")
    if p**k > bound:
        raise FieldError(f"GF({p}^{k}) exceeds the configured bound {bound}")
    return Field(p, k)


@dataclass(frozen=True)
class FieldElem:
    field: Field
    coeffs: tuple

    def _check(self, other):
        if not isinstance(other, FieldElem):
            return self.field(other)
        if other.field != self.field:
            raise FieldError("mixed fields")
        return other

    @property
    def code(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def __add__(self, other):
        other = self._check(other)
        p = self.field.p
        return FieldElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field._mul_coeffs(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self):
        return self ** self.field.p

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.field.order - 1
        order = n
        for f in prime_factors(n):
            while order % f == 0 and (self ** (order // f)).coeffs == self.field.one.coeffs:
                order //= f
        return order

    def __str__(self):
        return self.field.serialize(self)

    def __repr__(self):
        return f"FieldElem({self.field!r}, {self.coeffs})"


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n in increasing order."""
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    """Dispatch one of add, sub, mul, inv, pow (``b`` is an int for pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown operation {op!r}")


def frobenius(a: FieldElem) -> FieldElem:
    return a.frobenius()


@functools.lru_cache(maxsize=None)
def primitive_element(F: Field) -> FieldElem:
    """Smallest generator of the multiplicative group (lexicographic order)."""
    target = F.order - 1
    for e in F.elements():
        if not e.is_zero() and e.multiplicative_order() == target:
            return e
    raise FieldError("no primitive element")  # pragma: no cover


def solve_sum_of_squares(p: int) -> tuple[int, int]:
    """Lexicographically smallest (a, b), 0 <= a <= b < p, with a^2 + b^2 = -1 mod p."""
    if p == 2 or not is_prime(p):
        raise FieldError("p must be an odd prime")
    for a in range(p):
        for b in range(a, p):
            if (a * a + b * b + 1) % p == 0:
                return a, b
    raise FieldError(f"no solution mod {p}")  # pragma: no cover
