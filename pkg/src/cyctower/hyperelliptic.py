"""Genus-2 hyperelliptic curves over Q reduced modulo odd primes.

A model ``y^2 + h(x) y = f(x)`` is handled through its completed square
``Y^2 = F(x)`` with ``F = h^2 + 4 f`` and ``Y = 2y + h``, which is an isomorphism
over any field of odd characteristic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from . import kernels
from .errors import (
    BadReductionError,
    InternalInconsistencyError,
    UnsupportedGenusError,
    ValidationError,
)
from .finite_field import (
    build_extension,
    ext_norm_count,
    is_prime,
    is_squarefree_mod_p,
    poly_trim,
    quad_char,
)

log = logging.getLogger(__name__)


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _degree(coeffs: Sequence) -> int:
    return len(_trim(coeffs)) - 1


def _zmul(f: Sequence[int], g: Sequence[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def completed_square(f: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """Coefficients of ``h^2 + 4f`` (ascending)."""
    hh = _zmul(h, h)
    n = max(len(hh), len(f))
    return _trim([(hh[i] if i < len(hh) else 0) + 4 * (f[i] if i < len(f) else 0) for i in range(n)])


def _qpoly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def is_squarefree_over_q(F: Sequence[int]) -> bool:
    a = [Fraction(c) for c in _trim(F)]
    if not a:
        return False
    b = [Fraction(i * c) for i, c in enumerate(a)][1:]
    while b and b[-1] == 0:
        b.pop()
    if not b:
        return len(a) == 1
    while b:
        a, b = b, _qpoly_rem(a, b)
    return len(a) == 1


@dataclass(frozen=True)
class CurveModel:
    """``y^2 + h(x) y = f(x)`` over Q with integer coefficients (ascending order)."""

    genus: int
    f_coeffs: tuple[int, ...]
    h_coeffs: tuple[int, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "f_coeffs", _trim(self.f_coeffs))
        object.__setattr__(self, "h_coeffs", _trim(self.h_coeffs))
        g = self.genus
        if not isinstance(g, int) or g < 2:
            raise ValidationError(f"genus must be an integer >= 2, got {g!r}")
        if _degree(self.f_coeffs) > 2 * g + 2:
            raise ValidationError(f"deg f exceeds 2g+2 = {2 * g + 2}")
        if _degree(self.h_coeffs) > g + 1:
            raise ValidationError(f"deg h exceeds g+1 = {g + 1}")
        F = self.F
        if _degree(F) not in (2 * g + 1, 2 * g + 2):
            raise ValidationError(
                f"h^2 + 4f has degree {_degree(F)}, expected {2 * g + 1} or {2 * g + 2} for genus {g}"
            )
        if not is_squarefree_over_q(F):
            raise ValidationError("h^2 + 4f is not squarefree over Q; the model is singular")

    @property
    def F(self) -> tuple[int, ...]:
        return completed_square(self.f_coeffs, self.h_coeffs)


@dataclass(frozen=True)
class ReducedModel:
    """``Y^2 = F(x)`` over F_p. ``good`` is the model-wise good-reduction verdict."""

    p: int
    genus: int
    F: tuple[int, ...]
    good: bool
    reason: str = ""

    @property
    def degree(self) -> int:
        return len(self.F) - 1


def reduce_mod_p(curve: CurveModel, p: int) -> ReducedModel:
    if p == 2:
        raise ValidationError("p = 2 is not supported: completing the square needs odd p")
    if p < 3 or not is_prime(p):
        raise ValidationError(f"p = {p} is not an odd prime")
    g = curve.genus
    F = tuple(poly_trim(curve.F, p))
    d = len(F) - 1
    if d not in (2 * g + 1, 2 * g + 2):
        return ReducedModel(p, g, F, False, f"degree drops to {d} mod {p}")
    if not is_squarefree_mod_p(F, p):
        return ReducedModel(p, g, F, False, f"h^2 + 4f not squarefree mod {p}")
    return ReducedModel(p, g, F, True)


def points_at_infinity(model: ReducedModel, r: int = 1) -> int:
    if model.degree % 2:
        return 1
    # leading coefficient lies in F_p, hence is a square in F_{p^r} for even r
    if r % 2 == 0:
        return 2
    return 2 if quad_char(model.F[-1], model.p) == 1 else 0


def count_points(model: ReducedModel, r: int = 1) -> int:
    """Projective points of the smooth model over F_{p^r}, r in {1, 2, 3}.

    r = 1, 2 use the compiled character-sum kernels; r = 3 goes through generic
    extension-field arithmetic with Euler's criterion and is meant for small p.
    """
    if not model.good:
        raise BadReductionError(f"bad model reduction at p={model.p}: {model.reason}")
    p, F = model.p, list(model.F)
    if r == 1:
        affine = kernels.affine_count_fp(F, p)
    elif r == 2:
        ext = build_extension(p, 2)
        a, b, _ = ext.modulus
        if b:  # pragma: no cover - build_extension always finds x^2 + a
            raise InternalInconsistencyError("expected a binomial defining polynomial")
        affine = kernels.affine_count_fp2(F, p, -a % p)
    elif r == 3:
        affine = _affine_count_generic(F, p, 3)
    else:
        raise ValidationError(f"extension degree must be 1, 2 or 3, got {r}")
    return affine + points_at_infinity(model, r)


def _affine_count_generic(F: Sequence[int], p: int, r: int) -> int:
    ext = build_extension(p, r)
    total = 0
    for x in ext.elements():
        v = ext.zero()
        for c in reversed(F):
            v = v * x + c
        total += ext_norm_count(ext, v)
    return total


def count_points_naive(curve: CurveModel, p: int) -> int:
    """F_p-points by brute force on the original equation ``y^2 + h y = f``.

    Points at infinity are the roots of ``Y^2 + h_{g+1} Y - f_{2g+2}`` in F_p.
    Independent of the completed-square route; O(p^2), for testing.
    """
    if not reduce_mod_p(curve, p).good:
        raise BadReductionError(f"bad model reduction at p={p}")
    g = curve.genus
    f = [c % p for c in curve.f_coeffs]
    h = [c % p for c in curve.h_coeffs]

    def ev(poly, x):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        return acc

    affine = 0
    for x in range(p):
        fx, hx = ev(f, x), ev(h, x)
        affine += sum(1 for y in range(p) if (y * y + hx * y - fx) % p == 0)
    hg = h[g + 1] if len(h) > g + 1 else 0
    fg = f[2 * g + 2] if len(f) > 2 * g + 2 else 0
    infinity = sum(1 for y in range(p) if (y * y + hg * y - fg) % p == 0)
    return affine + infinity


# -- zeta function bookkeeping (genus 2) ---------------------------------------


def weil_c1_ok(c1: int, p: int) -> bool:
    """|c1| <= 4 sqrt(p), exactly."""
    return c1 * c1 <= 16 * p


def weil_order_ok(order: int, p: int) -> bool:
    """(sqrt(p)-1)^4 <= order <= (sqrt(p)+1)^4, exactly.

    (sqrt(p) +- 1)^4 = p^2 + 6p + 1 +- 4(p+1) sqrt(p), so the condition is
    (order - p^2 - 6p - 1)^2 <= 16 (p+1)^2 p.
    """
    d = order - (p * p + 6 * p + 1)
    return d * d <= 16 * (p + 1) ** 2 * p


def l_polynomial(N1: int, N2: int, p: int) -> tuple[int, int]:
    """(c1, c2) with P(T) = 1 + c1 T + c2 T^2 + c1 p T^3 + p^2 T^4."""
    c1 = N1 - p - 1
    twice_c2 = N2 - p * p - 1 + c1 * c1
    if twice_c2 % 2:
        raise InternalInconsistencyError(f"non-integral c2 at p={p} (N1={N1}, N2={N2})")
    if not weil_c1_ok(c1, p):
        raise InternalInconsistencyError(f"Weil bound violated at p={p}: c1={c1}")
    return c1, twice_c2 // 2


def power_sums(c1: int, c2: int, p: int, r: int) -> list[int]:
    """[s_1, ..., s_r], s_k = sum of k-th powers of the inverse roots of P(T)."""
    # P(T) = prod(1 - a_i T): elementary symmetric e_k = (-1)^k [T^k] P
    e = [1, -c1, c2, -c1 * p, p * p]
    s = [0] * (r + 1)
    for k in range(1, r + 1):
        acc = sum((-1) ** (i - 1) * e[i] * s[k - i] for i in range(1, min(k, 4) + 1) if i < k)
        if k <= 4:
            acc += (-1) ** (k - 1) * k * e[k]
        s[k] = acc
    return s[1:]


def predicted_count(c1: int, c2: int, p: int, r: int) -> int:
    """N_r = p^r + 1 - s_r from the L-polynomial."""
    return p**r + 1 - power_sums(c1, c2, p, r)[-1]


def jacobian_order(c1: int, c2: int, p: int) -> int:
    """#J(F_p) = P(1)."""
    order = 1 + c1 + c2 + c1 * p + p * p
    if order <= 0 or not weil_order_ok(order, p):
        raise InternalInconsistencyError(f"#J(F_{p}) = {order} outside the Weil interval")
    return order


def is_ordinary(c2: int, p: int) -> bool:
    return c2 % p != 0


def is_anomalous(order: int, p: int) -> bool:
    return order % p == 0


def hasse_witt_matrix(F: Sequence[int], p: int, genus: int) -> list[list[int]]:
    """M[i-1][j-1] = coefficient of x^(i p - j) in F^((p-1)/2), 1 <= i, j <= g."""
    power = [1]
    base = [c % p for c in F]
    e = (p - 1) // 2
    # only coefficients up to g*p - 1 are needed
    cap = genus * p
    while e:
        if e & 1:
            power = _mul_trunc(power, base, p, cap)
        base = _mul_trunc(base, base, p, cap)
        e >>= 1

    def coeff(k):
        return power[k] if 0 <= k < len(power) else 0

    return [[coeff(i * p - j) for j in range(1, genus + 1)] for i in range(1, genus + 1)]


def _mul_trunc(a, b, p, cap):
    out = [0] * min(len(a) + len(b) - 1, cap)
    for i, x in enumerate(a):
        if x and i < cap:
            for j in range(min(len(b), cap - i)):
                out[i + j] += x * b[j]
    return [c % p for c in out]


def hasse_witt(model: ReducedModel) -> list[list[int]]:
    return hasse_witt_matrix(model.F, model.p, model.genus)


def det_mod_p(M: list[list[int]], p: int) -> int:
    """Determinant over F_p by Gaussian elimination."""
    A = [[x % p for x in row] for row in M]
    n, det = len(A), 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        det = det * A[col][col] % p
        inv = pow(A[col][col], -1, p)
        for r in range(col + 1, n):
            factor = A[r][col] * inv % p
            if factor:
                A[r] = [(x - factor * y) % p for x, y in zip(A[r], A[col])]
    return det % p


@dataclass(frozen=True)
class LocalData:
    p: int
    good_reduction: bool
    N1: int | None = None
    N2: int | None = None
    c1: int | None = None
    c2: int | None = None
    jacobian_order: int | None = None
    ordinary: bool | None = None
    anomalous: bool | None = None
    reason: str = ""


def local_data(curve: CurveModel, p: int) -> LocalData:
    """Point counts, L-polynomial, #J(F_p) and flags at one odd prime."""
    if curve.genus != 2:
        raise UnsupportedGenusError(f"L-polynomial only implemented for genus 2, got {curve.genus}")
    model = reduce_mod_p(curve, p)
    if not model.good:
        return LocalData(p, False, reason=model.reason)
    N1 = count_points(model, 1)
    N2 = count_points(model, 2)
    c1, c2 = l_polynomial(N1, N2, p)
    order = jacobian_order(c1, c2, p)
    return LocalData(
        p, True, N1, N2, c1, c2, order,
        ordinary=is_ordinary(c2, p),
        anomalous=is_anomalous(order, p),
    )


def good_odd_primes(curve: CurveModel, count: int, start: int = 3) -> list[int]:
    """The first ``count`` odd primes >= start of good model reduction."""
    out, q = [], max(start, 3)
    while len(out) < count:
        if is_prime(q) and reduce_mod_p(curve, q).good:
            out.append(q)
        q += 1
    return out


def torsion_multiple(curve: CurveModel, aux_primes: Sequence[int]) -> int:
    """gcd of #J(F_l) over the auxiliary primes; #J(Q)_tors divides it."""
    if not aux_primes:
        raise ValidationError("need at least one auxiliary prime")
    result = 0
    for q in aux_primes:
        loc = local_data(curve, q)
        if not loc.good_reduction:
            log.warning("skipping auxiliary prime %d: %s", q, loc.reason)
            continue
        result = gcd(result, loc.jacobian_order)
    if result == 0:
        raise ValidationError("no auxiliary prime of good reduction")
    return result


def find_rational_point(curve: CurveModel, height: int = 30) -> str | None:
    """A witness that X(Q) is nonempty, or None if the small search finds nothing.

    Checks the points at infinity first, then x = a/b with |a|, b <= height.
    """
    F = curve.F
    d = len(F) - 1
    g = curve.genus
    if d == 2 * g + 1:
        return "infinity"
    if isqrt(F[-1]) ** 2 == F[-1]:
        return "infinity"
    # homogenised F(a, b) = sum F_i a^i b^(2g+2-i) must be a square
    for b in range(1, height + 1):
        for a in range(-height, height + 1):
            if gcd(a, b) != 1:
                continue
            val = sum(c * a**i * b ** (2 * g + 2 - i) for i, c in enumerate(F))
            if val >= 0 and isqrt(val) ** 2 == val:
                return f"x={a}/{b}" if b != 1 else f"x={a}"
    return None
