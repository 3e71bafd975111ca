import math
import random

import numpy as np
import pytest

from sqfap.arith import (
    IntervalTooLargeError,
    Modulus,
    euler_phi,
    factorize,
    inverse_table,
    is_prime,
    mobius_sieve,
    mod_inverse,
    primes_upto,
    sqrt_mod_prime,
    squarefree_indicator,
    tau3,
)


def mobius_trial(n):
    """Trial-division oracle for mu."""
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def test_mobius_point_values():
    assert mobius_sieve(1, 1).mu(1) == 1
    assert mobius_sieve(4, 4).mu(4) == 0
    assert mobius_sieve(30, 30).mu(30) == -1  # 2 * 3 * 5


def test_mobius_against_trial_division():
    table = mobius_sieve(1, 5000)
    for n in range(1, 5001):
        assert table.mu(n) == mobius_trial(n), n


def test_mobius_offset_interval():
    lo, hi = 10**7 + 1, 10**7 + 3000
    table = mobius_sieve(lo, hi)
    for n in random.Random(5).sample(range(lo, hi + 1), 100):
        assert table.mu(n) == mobius_trial(n), n


def test_mobius_segmented_matches_monolithic():
    whole = mobius_sieve(1, 300_000)
    pieces = mobius_sieve(1, 300_000, segment_width=2**12)
    assert np.array_equal(whole.values, pieces.values)


def test_mobius_window_near_1e12():
    lo = 10**12
    table = mobius_sieve(lo, lo + 20_000)
    sf = squarefree_indicator(lo, lo + 20_000)
    for n in random.Random(9).sample(range(lo, lo + 20_001), 8):
        assert table.mu(n) == mobius_trial(n), n
        assert bool(sf[n - lo]) == (mobius_trial(n) != 0), n


def test_mobius_rejects_bad_intervals():
    with pytest.raises(ValueError):
        mobius_sieve(0, 10)
    with pytest.raises(ValueError):
        mobius_sieve(10, 5)
    with pytest.raises(IntervalTooLargeError):
        mobius_sieve(1, 10**7, max_entries=10**6)


def test_squarefree_examples():
    sf = squarefree_indicator(1, 20)
    assert bool(sf[0]) is True  # n = 1
    assert bool(sf[11]) is False  # n = 12
    assert int(sf.sum()) == 13


def test_mobius_square_divisor_identity():
    # sum over d^2 | n of mu(d) equals the squarefree indicator
    N = 10**4
    table = mobius_sieve(1, N)
    sf = squarefree_indicator(1, N)
    acc = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, math.isqrt(N) + 1):
        acc[d * d :: d * d] += table.mu(d)
    assert np.array_equal(acc[1:], sf.astype(np.int64))


def test_mod_inverse_examples():
    assert mod_inverse(1, 7) == 1
    assert mod_inverse(2, 5) == 3
    assert mod_inverse(3, 7) == 5


def test_mod_inverse_rejects_non_coprime():
    with pytest.raises(ValueError):
        mod_inverse(6, 9)
    with pytest.raises(ValueError):
        mod_inverse(5, 1)


def test_mod_inverse_exhaustive_small_moduli():
    for q in range(2, 1001):
        for r in range(1, q):
            if math.gcd(r, q) == 1:
                rbar = mod_inverse(r, q)
                assert 1 <= rbar < q
                assert r * rbar % q == 1


def test_inverse_table_matches_mod_inverse():
    for q in (2, 3, 5, 101, 997):
        inv = inverse_table(q)
        for r in range(1, q):
            assert int(inv[r]) == mod_inverse(r, q)


def test_tau3_values():
    assert tau3(1) == 1
    for p in (2, 3, 5, 97):
        assert tau3(p) == 3
    assert tau3(6) == 9


def test_tau3_against_triple_enumeration():
    for d in range(1, 61):
        brute = sum(
            1
            for a in range(1, d + 1)
            for b in range(1, d + 1)
            if d % a == 0 and (d // a) % b == 0
        )
        assert tau3(d) == brute, d


def test_is_prime_examples():
    assert is_prime(2)
    assert not is_prime(1)
    assert is_prime(10**9 + 7)
    assert not is_prime(561)  # Carmichael
    assert not is_prime(10**12 + 1)
    assert is_prime(2**61 - 1)


def test_is_prime_exhaustive_small():
    sieve = np.ones(20_000, dtype=bool)
    sieve[:2] = False
    for p in range(2, 142):
        if sieve[p]:
            sieve[p * p :: p] = False
    for n in range(20_000):
        assert is_prime(n) == bool(sieve[n]), n


def test_primes_upto():
    assert primes_upto(1).size == 0
    assert list(primes_upto(20)) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primes_upto(10**5).size == 9592


def test_modulus_construction():
    assert Modulus(7).is_prime
    assert not Modulus(8).is_prime
    with pytest.raises(ValueError):
        Modulus(0)
    with pytest.raises(ValueError):
        Modulus(10).require_prime()


def test_factorize_and_phi():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert euler_phi(1) == 1
    assert euler_phi(997) == 996
    assert euler_phi(360) == 96


def test_sqrt_mod_prime():
    rng = random.Random(11)
    for p in (3, 5, 7, 13, 101, 997, 65537):
        for _ in range(20):
            x = rng.randrange(p)
            root = sqrt_mod_prime(x * x % p, p)
            assert root is not None
            assert root * root % p == x * x % p
        squares = {r * r % p for r in range(p)} if p < 1200 else None
        if squares is not None:
            for a in range(p):
                got = sqrt_mod_prime(a, p)
                assert (got is not None) == (a in squares)
