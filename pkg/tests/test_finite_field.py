import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyctower.errors import ValidationError
from cyctower.finite_field import (
    ExtensionField,
    PrimeField,
    build_extension,
    ext_norm_count,
    is_prime,
    is_squarefree_mod_p,
    poly_gcd,
    primes_in_range,
    quad_char,
)

SMALL_PRIMES = [q for q in range(3, 200) if all(q % d for d in range(2, q))]


def test_is_prime_matches_trial_division():
    for n in range(-3, 5000):
        expected = n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))
        assert is_prime(n) == expected, n
    assert is_prime(2**31 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@pytest.mark.parametrize("p", [2, 1, 9, 2**31 + 11])
def test_prime_field_rejects(p):
    with pytest.raises(ValidationError):
        PrimeField(p)


def test_quad_char_examples():
    assert quad_char(0, 7) == 0
    assert quad_char(1, 7) == 1
    assert quad_char(3, 7) == -1
    assert quad_char(3, PrimeField(7)) == -1


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_quad_char_counts_and_euler(p):
    squares = {x * x % p for x in range(1, p)}
    chars = [quad_char(a, p) for a in range(p)]
    assert chars.count(1) == (p - 1) // 2
    for a in range(1, p):
        assert chars[a] == (1 if a in squares else -1)
        assert pow(a, (p - 1) // 2, p) == chars[a] % p


@given(st.sampled_from(SMALL_PRIMES), st.integers(), st.integers())
def test_quad_char_multiplicative(p, a, b):
    assert quad_char(a * b, p) == quad_char(a, p) * quad_char(b, p)


def test_build_extension_examples():
    assert build_extension(3, 2).modulus == (1, 0, 1)  # x^2 + 1
    assert build_extension(5, 2).modulus == (2, 0, 1)  # x^2 + 2
    cubic = build_extension(7, 3)
    assert cubic.degree == 3
    assert all(sum(c * x**i for i, c in enumerate(cubic.modulus)) % 7 for x in range(7))


@pytest.mark.parametrize("p", SMALL_PRIMES[:20])
@pytest.mark.parametrize("degree", [2, 3])
def test_build_extension_deterministic_and_irreducible(p, degree):
    a = build_extension(p, degree)
    build_extension.cache_clear()
    assert build_extension(p, degree) == a
    assert not any(sum(c * x**i for i, c in enumerate(a.modulus)) % p == 0 for x in range(p))


def test_reducible_modulus_rejected():
    with pytest.raises(ValidationError):
        ExtensionField(5, 2, (1, 0, 1))  # x^2 + 1 = (x - 2)(x + 2) mod 5


def test_ext_norm_count_examples():
    F9 = build_extension(3, 2)
    assert ext_norm_count(F9, F9.zero()) == 1
    assert ext_norm_count(F9, F9.one()) == 2
    assert ext_norm_count(F9, F9.multiplicative_generator()) == 0


@pytest.mark.parametrize("p,degree", [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3)])
def test_ext_norm_count_matches_enumeration(p, degree):
    K = build_extension(p, degree)
    roots = {}
    for y in K.elements():
        roots[y * y] = roots.get(y * y, 0) + 1
    for v in K.elements():
        assert ext_norm_count(K, v) == roots.get(v, 0)


@pytest.mark.parametrize("p,degree", [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3)])
def test_frobenius_is_automorphism_fixing_prime_field(p, degree):
    K = build_extension(p, degree)
    els = list(K.elements())
    images = [x.frobenius() for x in els]
    assert len(set(images)) == len(els)
    fixed = [x for x, y in zip(els, images) if x == y]
    assert len(fixed) == p and all(x.in_prime_field() for x in fixed)
    rng = random.Random(p * degree)
    for _ in range(50):
        x, y = rng.choice(els), rng.choice(els)
        assert (x * y).frobenius() == x.frobenius() * y.frobenius()
        assert (x + y).frobenius() == x.frobenius() + y.frobenius()


@pytest.mark.parametrize("p,degree", [(5, 2), (7, 3), (13, 2), (11, 3)])
def test_field_axioms_random(p, degree):
    K = build_extension(p, degree)
    rng = random.Random(0)

    def rand():
        return K(tuple(rng.randrange(p) for _ in range(degree)))

    for _ in range(200):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == K.zero()
        if not a.is_zero():
            assert a * a.inverse() == K.one()
            assert a ** (K.order - 1) == K.one()


def test_poly_gcd_and_squarefree():
    # x^5 + 1 is squarefree mod 11 but (x + 1)^5 mod 5
    assert is_squarefree_mod_p([1, 0, 0, 0, 0, 1], 11)
    assert not is_squarefree_mod_p([1, 0, 0, 0, 0, 1], 5)
    assert poly_gcd([1, 0, 0, 0, 0, 1], [0, 0, 0, 0, 5], 11) == [1]
    assert poly_gcd([2, 3, 1], [1, 1], 7) == [1, 1]  # (x+1)(x+2), x+1


def test_primes_in_range():
    assert primes_in_range(5, 30) == [5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_in_range(100, 5) == []
