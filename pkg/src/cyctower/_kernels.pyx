# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled character-sum kernels for point counting on y^2 = F(x)."""

from libc.stdlib cimport malloc, free

ctypedef long long i64

# Above this size the Legendre table is replaced by Euler's criterion.
DEF TABLE_LIMIT = 1 << 26


cdef i64 _powmod(i64 a, i64 e, i64 m) nogil:
    cdef i64 r = 1
    a %= m
    while e:
        if e & 1:
            r = r * a % m
        a = a * a % m
        e >>= 1
    return r


cdef signed char* _table(i64 p):
    cdef signed char* t
    cdef i64 x
    if p > TABLE_LIMIT:
        return NULL
    t = <signed char*> malloc(p)
    if t == NULL:
        raise MemoryError()
    for x in range(p):
        t[x] = -1
    t[0] = 0
    for x in range(1, (p + 1) // 2):
        t[x * x % p] = 1
    return t


cdef inline int _chi(i64 a, i64 p, signed char* t) nogil:
    if t != NULL:
        return t[a]
    if a == 0:
        return 0
    return 1 if _powmod(a, (p - 1) // 2, p) == 1 else -1


cdef i64* _coeff_array(F, i64 p, Py_ssize_t* n):
    # highest degree first, for Horner evaluation
    n[0] = len(F)
    cdef i64* c = <i64*> malloc((n[0] + 1) * sizeof(i64))
    if c == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n[0]):
        c[i] = F[n[0] - 1 - i] % p
    return c


def affine_count_fp(F, long long p):
    """Sum over x in F_p of ``1 + chi(F(x))``; ``F`` ascending, reduced mod p."""
    cdef Py_ssize_t n, k
    cdef i64* c = _coeff_array(F, p, &n)
    cdef signed char* t = _table(p)
    cdef i64 x, acc, total = 0
    try:
        with nogil:
            for x in range(p):
                acc = 0
                for k in range(n):
                    acc = (acc * x + c[k]) % p
                total += 1 + _chi(acc, p, t)
    finally:
        free(c)
        free(t)
    return total


def affine_count_fp2(F, long long p, long long nonresidue):
    """Sum over z in F_p[t]/(t^2 - nonresidue) of ``1 + chi(Norm(F(z)))``."""
    cdef Py_ssize_t n, k
    cdef i64* c = _coeff_array(F, p, &n)
    cdef signed char* t = _table(p)
    cdef i64 nr = nonresidue % p
    cdef i64 u, v, a, b, a2, norm, total = 0
    try:
        with nogil:
            for u in range(p):
                for v in range(p):
                    a = 0
                    b = 0
                    for k in range(n):
                        a2 = (a * u + (b * v % p) * nr + c[k]) % p
                        b = (a * v + b * u) % p
                        a = a2
                    norm = (a * a - nr * (b * b % p)) % p
                    if norm < 0:
                        norm += p
                    total += 1 + _chi(norm, p, t)
    finally:
        free(c)
        free(t)
    return total
