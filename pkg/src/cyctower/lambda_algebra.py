"""Truncated power series over Z_p, Weierstrass preparation, mu/lambda invariants.

A :class:`PadicSeries` is known modulo ``(p^prec_p, x^prec_x)``. When an
algorithm needs coefficients beyond ``x^prec_x`` they are taken to be zero,
i.e. the series is replaced by the polynomial formed by its known terms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    IndeterminateError,
    InternalInconsistencyError,
    PrecisionExhaustedError,
    ValidationError,
)
from .finite_field import is_prime

DEFAULT_PREC_P = 20
DEFAULT_PREC_X = 64


@dataclass(frozen=True)
class PadicSeries:
    p: int
    coeffs: tuple[int, ...]
    prec_p: int = DEFAULT_PREC_P
    prec_x: int = DEFAULT_PREC_X

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"p={self.p} is not prime")
        if self.prec_p < 1 or self.prec_x < 1:
            raise ValidationError("prec_p and prec_x must be >= 1")
        m = self.p**self.prec_p
        cs = [int(c) % m for c in list(self.coeffs)[: self.prec_x]]
        cs += [0] * (self.prec_x - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def modulus(self) -> int:
        return self.p**self.prec_p

    def valuation(self, i: int) -> int:
        """v_p of the i-th coefficient, capped at prec_p."""
        return _val(self.coeffs[i], self.p, self.prec_p)

    def degree(self) -> int:
        """Index of the last nonzero coefficient, -1 for the zero series."""
        for i in range(self.prec_x - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def _check(self, other: "PadicSeries"):
        if other.p != self.p:
            raise ValidationError("series over different primes")

    def _like(self, coeffs, other=None) -> "PadicSeries":
        prec_p, prec_x = self.prec_p, self.prec_x
        if other is not None:
            prec_p, prec_x = min(prec_p, other.prec_p), min(prec_x, other.prec_x)
        return PadicSeries(self.p, tuple(coeffs), prec_p, prec_x)

    def __add__(self, other):
        if isinstance(other, int):
            other = self._like([other])
        self._check(other)
        return self._like([a + b for a, b in zip(self.coeffs, other.coeffs)], other)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, PadicSeries) else -other)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like([a * other for a in self.coeffs])
        self._check(other)
        n = min(self.prec_x, other.prec_x)
        m = min(self.modulus, other.modulus)
        return self._like(_mul(self.coeffs, other.coeffs, n, m), other)

    __rmul__ = __mul__

    def shift_p(self, k: int) -> "PadicSeries":
        """Multiply by p^k; a series known mod p^N becomes known mod p^(N+k)."""
        return PadicSeries(self.p, tuple(c * self.p**k for c in self.coeffs), self.prec_p + k, self.prec_x)

    def truncate(self, prec_p: int | None = None, prec_x: int | None = None) -> "PadicSeries":
        prec_p = self.prec_p if prec_p is None else min(prec_p, self.prec_p)
        prec_x = self.prec_x if prec_x is None else min(prec_x, self.prec_x)
        return PadicSeries(self.p, self.coeffs, prec_p, prec_x)

    def to_json(self) -> dict:
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return {"p": self.p, "prec_p": self.prec_p, "prec_x": self.prec_x, "coeffs": cs}

    @classmethod
    def from_json(cls, data) -> "PadicSeries":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise ValidationError("series literal must be a JSON object")
        unknown = set(data) - {"p", "prec_p", "prec_x", "coeffs"}
        if unknown:
            raise ValidationError(f"unknown series fields: {sorted(unknown)}")
        if "p" not in data or "coeffs" not in data:
            raise ValidationError("series literal needs 'p' and 'coeffs'")
        coeffs = data["coeffs"]
        if not isinstance(coeffs, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in coeffs):
            raise ValidationError("coeffs must be an array of integers")
        return cls(
            data["p"],
            tuple(coeffs),
            data.get("prec_p", DEFAULT_PREC_P),
            data.get("prec_x", DEFAULT_PREC_X),
        )


def _val(c: int, p: int, cap: int) -> int:
    if c == 0:
        return cap
    v = 0
    while c % p == 0 and v < cap:
        c //= p
        v += 1
    return v


def _mul(a: Sequence[int], b: Sequence[int], n: int, m: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                out[i + j] += x * b[j]
    return [c % m for c in out]


def _inverse(u: Sequence[int], n: int, m: int) -> list[int]:
    """Inverse of a unit power series mod (m, x^n)."""
    inv0 = pow(u[0], -1, m)
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        s = sum(u[i] * out[k - i] for i in range(1, min(k, len(u) - 1) + 1))
        out[k] = -s * inv0 % m
    return out


def mu_invariant(f: PadicSeries) -> int:
    mu = min(f.valuation(i) for i in range(f.prec_x))
    if mu >= f.prec_p:
        raise IndeterminateError("series vanishes at the working precision")
    return mu


def lambda_invariant(f: PadicSeries) -> int:
    mu = mu_invariant(f)
    for i in range(f.prec_x):
        if f.valuation(i) == mu:
            return i
    raise PrecisionExhaustedError("minimal valuation not reached below prec_x")  # pragma: no cover


def evaluate_at_zero(f: PadicSeries) -> tuple[int, int]:
    """(f(0) mod p^prec_p, v_p(f(0)) capped at prec_p)."""
    return f.coeffs[0], f.valuation(0)


def is_distinguished(coeffs: Sequence[int], p: int) -> bool:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return bool(cs) and cs[-1] == 1 and all(c % p == 0 for c in cs[:-1])


@dataclass(frozen=True)
class WeierstrassFactorization:
    """f = p^mu * distinguished * unit, the factors known mod p^(prec_p - mu)."""

    mu: int
    distinguished: PadicSeries
    unit: PadicSeries

    @property
    def lambda_(self) -> int:
        return self.distinguished.degree()

    def reconstruct(self) -> PadicSeries:
        return (self.distinguished * self.unit).shift_p(self.mu)


def weierstrass_prepare(f: PadicSeries) -> WeierstrassFactorization:
    """Factor f = p^mu P u by Weierstrass division of x^lambda by f / p^mu.

    With g = B + x^lam U (deg B < lam), the quotient q of x^lam = q g + r
    satisfies q = U^-1 (1 - tau(q B)), tau dropping the first lam terms. B is
    divisible by p, so the iteration gains a p-adic digit per step. Then
    P = q g (a polynomial) and u = q^-1. Output precision is prec_p - mu
    digits and prec_x terms.
    """
    p, N, D = f.p, f.prec_p, f.prec_x
    mu = mu_invariant(f)
    lam = lambda_invariant(f)
    M = N - mu
    m = p**M
    scale = p**mu
    g = [c // scale % m for c in f.coeffs]
    if lam == 0:
        one = PadicSeries(p, (1,), M, D)
        return WeierstrassFactorization(mu, one, PadicSeries(p, tuple(g), M, D))

    # truncation errors move down at most lam places per step and pick up a p each time
    D_int = D + lam * (M + 2)
    g += [0] * (D_int - D)
    B, U = g[:lam], g[lam:]
    L = len(U)
    U_inv = _inverse(U, L, m)
    q = list(U_inv)
    for _ in range(M + 1):
        qB = _mul(q, B, L + lam, m)
        rhs = [-c % m for c in qB[lam:lam + L]]
        rhs[0] = (rhs[0] + 1) % m
        q_next = _mul(U_inv, rhs, L, m)
        if q_next == q:
            break
        q = q_next
    else:
        raise InternalInconsistencyError("Weierstrass division did not converge")

    qg = _mul(q, g, D, m)
    if qg[lam] != 1 % m or any(qg[lam + 1:D]):
        raise InternalInconsistencyError("Weierstrass division remainder has degree >= lambda")
    P = qg[: lam + 1]
    if not is_distinguished(P, p):
        raise InternalInconsistencyError("Weierstrass polynomial is not distinguished")
    u = _inverse(q, D, m)
    return WeierstrassFactorization(mu, PadicSeries(p, tuple(P), M, D), PadicSeries(p, tuple(u), M, D))


def char_element(
    entries: Iterable,
    p: int,
    prec_p: int = DEFAULT_PREC_P,
    prec_x: int = DEFAULT_PREC_X,
) -> PadicSeries:
    """p^(sum mu_i) * prod f_j from elementary divisors.

    Each entry is ``("mu", k)`` for a summand Lambda/(p^k) or ``("poly", coeffs)``
    for Lambda/(f_j) with f_j distinguished (ascending coefficients).
    """
    total_mu = 0
    acc = [1]
    m = p**prec_p
    for entry in entries:
        kind, value = entry
        if kind == "mu":
            if not isinstance(value, int) or value < 0:
                raise ValidationError(f"p-power exponent must be a nonnegative int, got {value!r}")
            total_mu += value
        elif kind == "poly":
            if not is_distinguished(value, p):
                raise ValidationError(f"{list(value)} is not a distinguished polynomial for p={p}")
            acc = _mul(acc, list(value), max(len(acc) + len(value) - 1, 1), m)
        else:
            raise ValidationError(f"unknown elementary divisor kind {kind!r}")
    return PadicSeries(p, tuple(c * p**total_mu for c in acc), prec_p, prec_x)
