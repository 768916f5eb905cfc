"""Exact arithmetic over F_p and its extensions of degree 2 and 3.

Residues are always canonical integers in ``[0, p)``. Polynomials over F_p are
lists of coefficients in ascending degree order, trimmed of trailing zeros
(the zero polynomial is ``[]``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import InternalInconsistencyError, ValidationError

# Deterministic Miller-Rabin witnesses, correct for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < 3.3e24``."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes ``q`` with ``lo <= q <= hi``."""
    return [q for q in range(max(lo, 2), hi + 1) if is_prime(q)]


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p for an odd prime ``3 <= p < 2**31``."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or isinstance(p, bool):
            raise ValidationError(f"field characteristic must be an int, got {p!r}")
        if p == 2:
            raise ValidationError("characteristic 2 is not supported")
        if not 3 <= p < MAX_PRIME:
            raise ValidationError(f"p={p} outside supported range [3, 2^31)")
        if not is_prime(p):
            raise ValidationError(f"p={p} is not prime")

    def __call__(self, a: int) -> int:
        return a % self.p


def _modulus(p) -> int:
    return p.p if isinstance(p, PrimeField) else p


def quad_char(a: int, p) -> int:
    """Legendre symbol of ``a`` modulo the odd prime ``p`` via Euler's criterion."""
    p = _modulus(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# -- polynomials over F_p ---------------------------------------------------


def poly_trim(f: Sequence[int], p: int) -> list[int]:
    out = [c % p for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_eval(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def poly_derivative(f: Sequence[int], p: int) -> list[int]:
    return poly_trim([i * c for i, c in enumerate(f)][1:], p)


def poly_mul(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return poly_trim(out, p)


def poly_divmod(f: Sequence[int], g: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    g = poly_trim(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = poly_trim(f, p)
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        shift = len(r) - len(g)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = poly_trim(r, p)
    return poly_trim(q, p), r


def poly_gcd(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    """Monic gcd over F_p."""
    a, b = poly_trim(f, p), poly_trim(g, p)
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def is_squarefree_mod_p(f: Sequence[int], p: int) -> bool:
    """True iff ``f`` (nonzero mod p) has no repeated factor over the algebraic closure."""
    f = poly_trim(f, p)
    if not f:
        return False
    df = poly_derivative(f, p)
    if not df:
        # f is a p-th power (or constant) in characteristic p
        return len(f) == 1
    return len(poly_gcd(f, df, p)) == 1


def has_root(f: Sequence[int], p: int) -> bool:
    return any(poly_eval(f, x, p) == 0 for x in range(p))


# -- extension fields ---------------------------------------------------------


@dataclass(frozen=True)
class ExtensionField:
    """F_{p^d} = F_p[t]/(modulus) for ``d`` in {1, 2, 3}.

    ``modulus`` is monic, ascending order, length ``d + 1``.
    """

    p: int
    degree: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        PrimeField(self.p)
        if self.degree not in (1, 2, 3):
            raise ValidationError(f"extension degree must be 1, 2 or 3, got {self.degree}")
        m = self.modulus
        if len(m) != self.degree + 1 or m[-1] != 1:
            raise ValidationError("defining polynomial must be monic of the field degree")
        # a polynomial of degree <= 3 is irreducible iff it has no root
        if self.degree > 1 and has_root(m, self.p):
            raise ValidationError(f"{m} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p**self.degree

    def __call__(self, coords) -> "ExtFieldElement":
        if isinstance(coords, int):
            coords = (coords,)
        coords = tuple(c % self.p for c in coords)
        if len(coords) > self.degree:
            raise ValidationError("too many coordinates for this extension")
        return ExtFieldElement(self, coords + (0,) * (self.degree - len(coords)))

    def zero(self) -> "ExtFieldElement":
        return self(0)

    def one(self) -> "ExtFieldElement":
        return self(1)

    def gen(self) -> "ExtFieldElement":
        """Class of ``t`` in F_p[t]/(modulus)."""
        if self.degree == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    def elements(self) -> Iterator["ExtFieldElement"]:
        for coords in product(range(self.p), repeat=self.degree):
            yield ExtFieldElement(self, coords)

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, d, m = self.p, self.degree, self.modulus
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # reduce with t^d = -(m_0 + ... + m_{d-1} t^{d-1})
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(d):
                    prod[k - d + i] -= c * m[i]
        return tuple(c % p for c in prod[:d])

    def multiplicative_generator(self) -> "ExtFieldElement":
        """Smallest element (lexicographic in coordinates) generating F_{p^d}^*."""
        n = self.order - 1
        factors = _prime_factors(n)
        for z in self.elements():
            if z.is_zero():
                continue
            if all(z ** (n // q) != self.one() for q in factors):
                return z
        raise InternalInconsistencyError("no generator found")  # pragma: no cover


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class ExtFieldElement:
    field: ExtensionField
    coords: tuple[int, ...]

    def _coerce(self, other) -> tuple[int, ...]:
        if isinstance(other, ExtFieldElement):
            if other.field != self.field:
                raise ValidationError("elements of different fields")
            return other.coords
        if isinstance(other, int):
            return self.field(other).coords
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        p = self.field.p
        return ExtFieldElement(self.field, tuple((x + y) % p for x, y in zip(self.coords, b)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return ExtFieldElement(self.field, tuple(-x % p for x in self.coords))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        p = self.field.p
        return ExtFieldElement(self.field, tuple((x - y) % p for x, y in zip(self.coords, b)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return ExtFieldElement(self.field, self.field._mul(self.coords, b))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one().coords, self.coords
        while e:
            if e & 1:
                result = self.field._mul(result, base)
            base = self.field._mul(base, base)
            e >>= 1
        return ExtFieldElement(self.field, result)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coords)

    def frobenius(self):
        return self ** self.field.p

    def in_prime_field(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        return f"F{self.field.p}^{self.field.degree}{self.coords}"


@lru_cache(maxsize=None)
def build_extension(p, degree: int) -> ExtensionField:
    """Canonical F_{p^degree}.

    Degree 2 tries ``x^2 + a`` for a = 1, 2, ... and then ``x^2 + bx + c``;
    degree 3 tries ``x^3 + bx + c`` and then ``x^3 + ax^2 + bx + c``, both in
    lexicographic coefficient order. The first irreducible candidate wins.
    """
    p = _modulus(p)
    PrimeField(p)
    if degree == 1:
        return ExtensionField(p, 1, (0, 1))
    if degree == 2:
        candidates = ((a, 0, 1) for a in range(1, p))
        fallback = ((c, b, 1) for b in range(1, p) for c in range(p))
    elif degree == 3:
        candidates = ((c, b, 0, 1) for b in range(p) for c in range(p))
        fallback = ((c, b, a, 1) for a in range(1, p) for b in range(p) for c in range(p))
    else:
        raise ValidationError(f"extension degree must be 1, 2 or 3, got {degree}")
    for m in candidates:
        if not has_root(m, p):
            return ExtensionField(p, degree, m)
    for m in fallback:  # pragma: no cover - some binomial/trinomial always works
        if not has_root(m, p):
            return ExtensionField(p, degree, m)
    raise InternalInconsistencyError(f"no irreducible polynomial of degree {degree} mod {p}")


def ext_norm_count(field: ExtensionField, v: ExtFieldElement) -> int:
    """Number of ``y`` in the field with ``y^2 = v`` (0, 1 or 2), via Euler's criterion."""
    if v.is_zero():
        return 1
    return 2 if v ** ((field.order - 1) // 2) == field.one() else 0
