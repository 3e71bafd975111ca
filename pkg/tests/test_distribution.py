import math
import random
from fractions import Fraction

import pytest

from sqfap.arith import primes_upto
from sqfap.distribution import (
    ScanCapExceededError,
    count_squarefree_in_progression,
    counts_by_residue,
    error_term,
    is_squarefree_int,
    least_squarefree_in_progression,
    main_term,
    reference_term,
    squarefree_count,
    variance_over_residues,
)


def squarefree_trial(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def count_oracle(X, q, a):
    return sum(1 for n in range(1, X + 1) if n % q == a and squarefree_trial(n))


def test_count_examples():
    assert count_squarefree_in_progression(10, 3, 1) == 3  # {1, 7, 10}
    assert count_squarefree_in_progression(0, 7, 2) == 0
    assert count_squarefree_in_progression(10, 1, 0) == 7


def test_count_against_naive_double_loop():
    # trial-division indicator once, then literal per-class counting
    X = 10**4
    oracle_sf = [False] + [squarefree_trial(n) for n in range(1, X + 1)]
    for q in range(1, 101):
        per_class = [0] * q
        for n in range(1, X + 1):
            if oracle_sf[n]:
                per_class[n % q] += 1
        for a in range(q):
            assert count_squarefree_in_progression(X, q, a) == per_class[a], (q, a)


def test_count_random_tuples():
    rng = random.Random(31)
    for _ in range(60):
        X = rng.randint(0, 3000)
        q = rng.randint(1, 50)
        a = rng.randrange(q)
        assert count_squarefree_in_progression(X, q, a) == count_oracle(X, q, a)


def test_count_monotone_in_X():
    rng = random.Random(7)
    for _ in range(10):
        q = rng.randint(2, 60)
        a = rng.randrange(q)
        last = 0
        for X in range(0, 400, 17):
            cur = count_squarefree_in_progression(X, q, a)
            assert cur >= last
            last = cur


def test_count_rejects_bad_residue():
    with pytest.raises(ValueError):
        count_squarefree_in_progression(10, 3, 3)
    with pytest.raises(ValueError):
        count_squarefree_in_progression(-1, 3, 1)


def test_reference_examples():
    assert reference_term(10, 3) == Fraction(5, 2)
    assert reference_term(0, 11) == 0
    assert reference_term(10, 1) == 7


def test_main_term_linearity_and_value():
    assert main_term(2 * 10**5, 101).value == pytest.approx(2 * main_term(10**5, 101).value)
    expected = 6 / math.pi**2 / (1 - 101**-2) * 10**6 / 101
    assert main_term(10**6, 101).value == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        main_term(100, 10)


def test_main_term_tracks_reference():
    # empirical envelope: |main - reference| <= 3 sqrt(X) / sqrt(q)
    for X in (10**3, 10**4, 10**5, 10**6):
        for q in (3, 7, 31, 101, 499, 997):
            gap = abs(main_term(X, q).value - float(reference_term(X, q)))
            assert gap <= 3 * math.sqrt(X) / math.sqrt(q), (X, q, gap)


def test_error_examples():
    assert error_term(10, 3, 1).error == Fraction(1, 2)
    assert error_term(10, 3, 2).error == Fraction(-1, 2)
    assert error_term(1000, 1, 0).error == 0
    with pytest.raises(ValueError):
        error_term(10, 6, 3)


def test_error_record_fields():
    rec = error_term(10**4, 13, 5)
    assert rec.count - rec.reference == rec.error
    scale = 10**4 / 13
    assert rec.ratio_half == pytest.approx(float(rec.error) / scale**0.5)
    assert rec.ratio_quarter == pytest.approx(float(rec.error) / scale**0.25)


def test_variance_examples():
    assert variance_over_residues(10, 3) == Fraction(1, 2)
    assert variance_over_residues(777, 1) == 0


def test_variance_matches_error_composition():
    rng = random.Random(13)
    for _ in range(8):
        X = rng.randint(10, 2000)
        q = rng.choice([int(p) for p in primes_upto(60) if p > 2])
        composed = sum(error_term(X, q, a).error ** 2 for a in range(1, q))
        assert variance_over_residues(X, q) == composed


def test_variance_composite_moduli():
    for X, q in ((500, 12), (1000, 45), (2000, 8)):
        composed = sum(
            error_term(X, q, a).error ** 2 for a in range(1, q) if math.gcd(a, q) == 1
        )
        assert variance_over_residues(X, q) == composed


def test_zero_sum_exact():
    rng = random.Random(17)
    for _ in range(8):
        X = rng.randint(10, 2000)
        q = rng.choice([int(p) for p in primes_upto(60) if p > 2])
        assert sum(error_term(X, q, a).error for a in range(1, q)) == 0


def test_counts_by_residue_consistency():
    counts = counts_by_residue(10**4, 7)
    assert int(counts.sum()) == squarefree_count(10**4)
    for a in range(7):
        assert int(counts[a]) == count_squarefree_in_progression(10**4, 7, a)


def test_streaming_path_matches_cached(monkeypatch):
    import numpy as np

    from sqfap import distribution

    cached_counts = [count_squarefree_in_progression(10**5, 97, a) for a in range(97)]
    cached_residue = counts_by_residue(10**5, 97).copy()
    cached_ref = reference_term(10**5, 97)
    monkeypatch.setattr(distribution, "_CACHE_LIMIT", 10**4)
    # forces the segmented streaming branch for X = 1e5
    assert [count_squarefree_in_progression(10**5, 97, a) for a in range(97)] == cached_counts
    assert np.array_equal(counts_by_residue(10**5, 97), cached_residue)
    assert reference_term(10**5, 97) == cached_ref


def test_least_squarefree_examples():
    assert least_squarefree_in_progression(9, 1) == 1
    assert least_squarefree_in_progression(5, 4) == 14
    assert least_squarefree_in_progression(7, 4) == 11


def test_least_squarefree_is_minimal():
    rng = random.Random(3)
    for _ in range(40):
        q = rng.randint(2, 200)
        a = rng.randrange(1, q)
        if math.gcd(a, q) != 1:
            continue
        n = least_squarefree_in_progression(q, a)
        assert n % q == a % q and squarefree_trial(n)
        assert all(not squarefree_trial(m) for m in range(a if a else q, n, q))


def test_least_squarefree_cap():
    with pytest.raises(ScanCapExceededError):
        least_squarefree_in_progression(5, 4, cap=5)
    with pytest.raises(ValueError):
        least_squarefree_in_progression(6, 3)


def test_is_squarefree_int_matches_trial():
    for n in range(1, 3000):
        assert is_squarefree_int(n) == squarefree_trial(n), n
