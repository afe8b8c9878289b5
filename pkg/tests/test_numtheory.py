import pytest

from prism.numtheory import (
    factorize,
    is_prime,
    mod_pow,
    next_prime,
    smallest_primitive_root,
)


def sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return flags


@pytest.mark.parametrize("n,expected", [
    (0, False), (1, False), (2, True), (3, True), (4, False),
    (131, True), (7234, False), (7237, True), (2**61 - 1, True),
])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_is_prime_matches_sieve():
    flags = sieve(10000)
    for n in range(10001):
        assert is_prime(n) == bool(flags[n])


@pytest.mark.parametrize("n,expected", [(128, 131), (1, 2), (7234, 7237)])
def test_next_prime_examples(n, expected):
    assert next_prime(n) == expected


def test_next_prime_is_least_prime_above():
    flags = sieve(10100)
    for n in range(1, 10001):
        m = next_prime(n)
        assert m > n and is_prime(m)
        assert not any(flags[k] for k in range(n + 1, m))


@pytest.mark.parametrize("base,exp,m,expected", [
    (3, 6, 7, 1),
    (2, 10, 131, 107),
    (5, 0, 13, 1),
])
def test_mod_pow_examples(base, exp, m, expected):
    assert mod_pow(base, exp, m) == expected


def test_mod_pow_matches_naive_products():
    for m in range(2, 101):
        for base in range(m):
            acc = 1 % m
            for exp in range(51):
                assert mod_pow(base, exp, m) == acc
                acc = acc * base % m


@pytest.mark.parametrize("n,expected", [
    (130, [2, 5, 13]), (8, [2, 2, 2]), (13, [13]), (360, [2, 2, 2, 3, 3, 5]),
])
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


def test_factorize_product_identity():
    for n in range(2, 2000):
        fs = factorize(n)
        prod = 1
        for f in fs:
            assert is_prime(f)
            prod *= f
        assert prod == n


@pytest.mark.parametrize("p,expected", [(7, 3), (11, 2), (131, 2)])
def test_smallest_primitive_root_examples(p, expected):
    assert smallest_primitive_root(p) == expected


def test_primitive_root_generates_full_cycle():
    flags = sieve(10000)
    for p in range(3, 10001):
        if not flags[p]:
            continue
        g = smallest_primitive_root(p)
        seen = set()
        x = 1
        for _ in range(p - 1):
            seen.add(x)
            x = x * g % p
        assert len(seen) == p - 1
