"""Pure-Python character-sum kernels; same contract as the compiled ``_kernels``."""


def legendre_table(p):
    """``table[a]`` is the quadratic character of ``a`` modulo ``p`` (0, 1 or -1)."""
    table = [-1] * p
    table[0] = 0
    for x in range(1, (p + 1) // 2):
        table[x * x % p] = 1
    return table


def affine_count_fp(F, p):
    """Sum over x in F_p of ``1 + chi(F(x))``; ``F`` ascending, reduced mod p."""
    chi = legendre_table(p)
    coeffs = list(reversed(F))
    total = 0
    for x in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * x + c) % p
        total += 1 + chi[acc]
    return total


def affine_count_fp2(F, p, nonresidue):
    """Sum over z in F_p[t]/(t^2 - nonresidue) of ``1 + chi(Norm(F(z)))``."""
    chi = legendre_table(p)
    coeffs = list(reversed(F))
    nr = nonresidue % p
    total = 0
    for u in range(p):
        for v in range(p):
            a = b = 0
            for c in coeffs:
                # (a + b t)(u + v t) + c
                a, b = (a * u + b * v % p * nr + c) % p, (a * v + b * u) % p
            total += 1 + chi[(a * a - nr * (b * b % p)) % p]
    return total
