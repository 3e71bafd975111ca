"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and recorded observations (slope, Weil maximum, max ratio_half).
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from sqfap.arith import is_prime, primes_upto
from sqfap.backend import BACKEND
from sqfap.cli import ScanConfig, fit_exponent, read_scan_rows, run_scan
from sqfap.decomposition import split_count
from sqfap.distribution import error_term, squarefree_indicator
from sqfap.expsums import inverse_square_phase_sum, short_kloosterman_sum, weil_constant_scan
from sqfap.sawtooth import build_approximation
from sqfap.sieve import (
    sieve_upper_bound,
    square_detection_instance,
    square_pair_count_bruteforce,
    square_weight_total,
)

SEED = 20250808


def _report(criterion, passed, detail):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


def _random_prime(rng, lo, hi):
    while True:
        p = rng.randint(lo, hi)
        if is_prime(p):
            return p


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # pay any JIT compilation cost before the timed criteria
    split_count(100, 7, 3, 5.0)
    inverse_square_phase_sum(0, 4, 5, 1)
    short_kloosterman_sum(3, 5, 1)
    square_pair_count_bruteforce(50, 4, 7, 1)
    build_approximation(5.0)


@pytest.fixture(scope="module")
def indicator_1e6():
    table = squarefree_indicator(1, 10**6)
    table.setflags(write=False)
    return table


@pytest.fixture(scope="module")
def big_scan(tmp_path_factory):
    """Criterion 8's scan, run at 1 and 8 threads with the same seed."""
    base = tmp_path_factory.mktemp("scan")
    q_values = tuple(int(p) for p in primes_upto(2000) if p >= 50)
    runs = {}
    for threads in (1, 8):
        path = base / f"scan_threads{threads}.csv"
        cfg = ScanConfig(
            X_list=(10**6,),
            q_values=q_values,
            a_spec="all",
            out=str(path),
            fmt="csv",
            threads=threads,
            seed=SEED,
            epsilon=0.0,
        )
        start = time.perf_counter()
        stats = run_scan(cfg)
        runs[threads] = {"path": path, "elapsed": time.perf_counter() - start, "stats": stats}
    return runs


def test_criterion_1_exact_decomposition(indicator_1e6):
    rng = random.Random(SEED)
    start = time.perf_counter()
    for i in range(200):
        X = rng.randint(10, 10**6)
        q = _random_prime(rng, 3, 10**4)
        a = rng.randint(1, q - 1)
        R = rng.uniform(1.0 + 1e-9, math.sqrt(X))
        parts = split_count(X, q, a, R)
        first = a - 1 if a >= 1 else q - 1
        brute = int(np.count_nonzero(indicator_1e6[first:X:q]))
        assert parts.total == brute, (X, q, a, R)
    elapsed = time.perf_counter() - start
    _report(1, elapsed <= 60, f"200 tuples exact (tolerance 0), {elapsed:.1f}s <= 60s [{BACKEND}]")
    assert elapsed <= 60


def test_criterion_2_error_term_oracle(indicator_1e6):
    assert error_term(10, 3, 1).error == Fraction(1, 2)
    assert error_term(10, 3, 2).error == Fraction(-1, 2)

    # zero sum for every X <= 1e5 and prime q <= 499: the union over coprime
    # classes of the per-class squarefree positions (the count path) must be
    # exactly the coprime squarefree positions (the reference path); prefix
    # counts at every X then agree, so sum_a E(X, q, a) = 0 identically.
    X = 10**5
    sf = indicator_1e6[:X]
    pos_all = np.nonzero(sf)[0] + 1
    for q in primes_upto(499):
        q = int(q)
        reference_route = pos_all[pos_all % q != 0]
        per_class = [np.nonzero(sf[a - 1 :: q])[0] * q + a for a in range(1, q)]
        count_route = np.sort(np.concatenate(per_class))
        assert np.array_equal(count_route, reference_route), q

    # literal API spot checks with exact rationals
    rng = random.Random(SEED + 2)
    for _ in range(25):
        Xs = rng.randint(10, 10**5)
        q = _random_prime(rng, 3, 499)
        assert sum(error_term(Xs, q, a).error for a in range(1, q)) == 0, (Xs, q)
    _report(2, True, "E(10,3,*) exact; zero-sum exhaustive over X <= 1e5, primes q <= 499")


def test_criterion_3_gauss_identity():
    start = time.perf_counter()
    worst = 0.0
    for q in primes_upto(1000):
        q = int(q)
        if q < 3:
            continue
        value = inverse_square_phase_sum(0, q - 1, q, 1).value
        expected = complex(math.sqrt(q) - 1.0) if q % 4 == 1 else complex(-1.0, math.sqrt(q))
        worst = max(worst, abs(value - expected))
        assert abs(value - expected) <= 1e-6, q
    elapsed = time.perf_counter() - start
    _report(3, elapsed <= 5, f"all primes q <= 1000, worst gap {worst:.2e} <= 1e-6, {elapsed:.2f}s <= 5s")
    assert elapsed <= 5


def test_criterion_4_weil_envelope():
    observed = weil_constant_scan(199)
    _report(4, observed <= 3.0, f"weil_constant_scan(199) observed maximum {observed:.6f} <= 3.0")
    assert observed <= 3.0


def test_criterion_5_psi_majorization():
    grid = np.arange(10**4) / 10**4
    saw = grid - np.floor(grid) - 0.5
    details = []
    for Y in (5.0, 20.0, 100.0):
        approx = build_approximation(Y, verify_grid=True)
        excess = float((np.abs(saw - approx.approximant(grid)) - approx.majorant(grid)).max())
        assert excess <= 1e-9, Y
        hs = np.arange(1, approx.truncation + 1)
        ceiling = 10.0 * np.minimum(1.0 / hs, Y**3 / hs**4.0)
        assert np.all(np.abs(approx.approximant_coeffs) <= ceiling), Y
        assert np.all(np.abs(approx.majorant_coeffs) <= ceiling), Y
        mean = float(approx.majorant(grid).mean())
        assert 1.0 / Y - 1e-6 <= mean <= 1.0 / Y + 4.0 / math.sqrt(Y), Y
        details.append(f"Y={Y:g}: excess {excess:.1e}, c {approx.decay_constant:.3f}, mean {mean:.5f}")
    _report(5, True, "; ".join(details))


def test_criterion_6_sieve_soundness():
    rng = random.Random(SEED + 6)
    for i in range(100):
        X = rng.randint(2_000, 10**5)
        q = _random_prime(rng, 5, 997)
        a = rng.randint(1, q - 1)
        R = max(2.0, X ** (1 / 3) * rng.uniform(0.6, 1.4))
        M = 1
        while 2 * M <= 2 * X / (R * R):
            M *= 2
        assert X / (2 * R * R * math.log(X)) < M <= 2 * X / (R * R)
        D = rng.uniform(9.0, 200.0)
        instance = square_detection_instance(X, M, q, a, D)
        report = sieve_upper_bound(instance, with_exact=True)
        pairs = square_pair_count_bruteforce(X, M, q, a)
        assert report.bound >= report.exact, (X, M, q, a, D)
        assert report.bound >= pairs, (X, M, q, a, D)
        assert square_weight_total(instance) == pairs, (X, M, q, a, D)
    _report(6, True, "100 instances: bound >= brute-force count, square-weight identity exact")


def test_criterion_7_kloosterman_full_range():
    rng = random.Random(SEED + 7)
    worst = 0.0
    for _ in range(50):
        q = _random_prime(rng, 3, 10**4)
        a = rng.randint(1, q - 1)
        value = short_kloosterman_sum(q - 1, q, a).value
        worst = max(worst, abs(value - (-1.0)))
        assert abs(value - (-1.0)) <= 1e-9, (q, a)
    _report(7, True, f"50 random (q, a): full-range sum = -1, worst gap {worst:.2e} <= 1e-9")


def test_criterion_8_conjecture_diagnostic(big_scan):
    single, eight = big_scan[1], big_scan[8]
    rows = read_scan_rows(str(single["path"]))
    fit = fit_exponent((X, q, abs(err)) for X, q, a, err, _ in rows)
    max_ratio_half = max(abs(r[4]) for r in rows)
    in_interval = 0.15 < fit.slope < 0.60
    _report(
        8,
        in_interval and single["elapsed"] <= 600 and eight["elapsed"] <= 120,
        f"slope {fit.slope:.6f} (required open interval (0.15, 0.60)), "
        f"max |ratio_half| {max_ratio_half:.6f} recorded, "
        f"{single['elapsed']:.1f}s single <= 600s, {eight['elapsed']:.1f}s @8 threads <= 120s, "
        f"n_points {fit.n_points}",
    )
    assert single["elapsed"] <= 600
    assert eight["elapsed"] <= 120
    assert math.isfinite(max_ratio_half)
    # the observed slope on exactly this grid is deterministic at ~0.1384 and
    # falls outside the stated interval; see the decisions ledger for the
    # verification that the underlying E values are exact
    assert in_interval, (
        f"fit slope {fit.slope:.6f} outside the stated interval (0.15, 0.60); "
        "see decisions ledger: spec-frozen interval does not match the true "
        "value at this grid"
    )


def test_criterion_9_scan_determinism(big_scan):
    b1 = big_scan[1]["path"].read_bytes()
    b8 = big_scan[8]["path"].read_bytes()
    identical = b1 == b8
    _report(9, identical, f"threads=1 vs threads=8: byte-identical ({len(b1)} bytes)")
    assert identical
