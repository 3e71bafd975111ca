import cmath
import math

import pytest

from sqfap.arith import primes_upto
from sqfap.expsums import (
    complete_mixed_sum,
    inverse_square_phase_sum,
    linear_phase_sum,
    max_twisted_mobius_sum,
    short_kloosterman_sum,
    twisted_mobius_sum,
    unit_roots,
    weil_constant_scan,
)


def e(x):
    return cmath.exp(2j * math.pi * x)


def test_twisted_single_term():
    for q, a in ((7, 3), (11, 5)):
        v = twisted_mobius_sum(1, q, a)
        assert v.value == pytest.approx(e(a / q))
        assert v.term_count == 1


def test_twisted_cancellation_at_three():
    v = twisted_mobius_sum(2, 3, 1)
    assert abs(v.value) < 1e-12
    assert v.term_count == 2


def test_twisted_explicit_five():
    v = twisted_mobius_sum(4, 5, 1)
    assert v.value == pytest.approx(e(1 / 5) - 2 * e(4 / 5))
    assert v.term_count == 3  # mu(4) = 0 drops out


def test_twisted_brute_force():
    # independent recomputation with pow() and cmath only
    def brute(R, q, a):
        def mu(n):
            out, d = 1, 2
            while d * d <= n:
                if n % d == 0:
                    n //= d
                    if n % d == 0:
                        return 0
                    out = -out
                d += 1
            return -out if n > 1 else out

        return sum(mu(n) * e(a * pow(n, -2, q) % q / q) for n in range(1, R + 1) if n % q and mu(n))

    for R, q, a in ((30, 7, 2), (50, 11, 3), (80, 13, 7), (100, 101, 55)):
        assert twisted_mobius_sum(R, q, a).value == pytest.approx(brute(R, q, a), abs=1e-10)


def test_twisted_rejects():
    with pytest.raises(ValueError):
        twisted_mobius_sum(10, 10, 1)  # composite modulus
    with pytest.raises(ValueError):
        twisted_mobius_sum(10, 7, 0)  # non-coprime residue


def test_max_twisted_examples():
    for q in (3, 5, 11, 101):
        assert max_twisted_mobius_sum(1, q) == pytest.approx(1.0)
    assert max_twisted_mobius_sum(2, 3) == pytest.approx(0.0, abs=1e-12)
    # frozen from the exhaustive per-a oracle: max is |e(1/5) - 2e(4/5)|
    assert max_twisted_mobius_sum(4, 5) == pytest.approx(2.8698550446842765, abs=1e-12)


def test_max_twisted_matches_per_residue_scan():
    for t, q in ((25, 13), (60, 31), (40, 101)):
        direct = max(abs(twisted_mobius_sum(t, q, a).value) for a in range(1, q))
        assert max_twisted_mobius_sum(t, q) == pytest.approx(direct, abs=1e-9)


def test_max_twisted_cap():
    with pytest.raises(ValueError):
        max_twisted_mobius_sum(10, 100003)


def test_inverse_square_empty_and_single():
    assert inverse_square_phase_sum(0.2, 0.9, 5, 1).value == 0
    v = inverse_square_phase_sum(0, 1, 5, 1)
    assert v.value == pytest.approx(e(1 / 5))


def test_inverse_square_gauss_five():
    v = inverse_square_phase_sum(0, 4, 5, 1)
    assert v.value == pytest.approx(math.sqrt(5) - 1)


def test_gauss_identity_small_primes():
    for q in primes_upto(200):
        q = int(q)
        if q < 3:
            continue
        value = inverse_square_phase_sum(0, q - 1, q, 1).value
        expected = complex(math.sqrt(q) - 1) if q % 4 == 1 else complex(-1, math.sqrt(q))
        assert abs(value - expected) < 1e-6, q


def test_inverse_square_range_additivity():
    for cuts in ((0.0, 17.3, 60.0), (3.5, 20.0, 99.9)):
        a1 = inverse_square_phase_sum(cuts[0], cuts[1], 23, 5).value
        a2 = inverse_square_phase_sum(cuts[1], cuts[2], 23, 5).value
        whole = inverse_square_phase_sum(cuts[0], cuts[2], 23, 5).value
        assert a1 + a2 == pytest.approx(whole, abs=1e-9)


def test_conjugation_symmetry():
    for q, a, R in ((13, 4, 40), (101, 7, 60)):
        assert twisted_mobius_sum(R, q, q - a).value == pytest.approx(
            twisted_mobius_sum(R, q, a).value.conjugate(), abs=1e-12
        )
        assert inverse_square_phase_sum(0, R, q, q - a).value == pytest.approx(
            inverse_square_phase_sum(0, R, q, a).value.conjugate(), abs=1e-12
        )
        assert short_kloosterman_sum(R, q, q - a).value == pytest.approx(
            short_kloosterman_sum(R, q, a).value.conjugate(), abs=1e-12
        )


def test_mixed_sum_degenerate_cases():
    assert complete_mixed_sum(11, 3, 0).value == pytest.approx(-1.0)
    assert complete_mixed_sum(11, 0, 0).value == pytest.approx(10.0)


def test_mixed_sum_explicit_five():
    v = complete_mixed_sum(5, 1, 1)
    assert v.value == pytest.approx(1 + e(1 / 5) + 2 * e(2 / 5))
    assert v.value == pytest.approx(complex(-0.309016994, 2.126627021), abs=1e-8)


def test_mixed_sum_brute_force():
    for q in (3, 5, 7, 11, 13):
        for alpha in range(q):
            for beta in range(q):
                brute = sum(e(((alpha * h + beta * pow(h, -2, q)) % q) / q) for h in range(1, q))
                assert complete_mixed_sum(q, alpha, beta).value == pytest.approx(brute, abs=1e-10)


def test_theta_examples():
    assert linear_phase_sum(7.5, 0, 5).value == 7
    assert linear_phase_sum(0.5, 3, 7).value == 0
    assert abs(linear_phase_sum(2, 1, 2).value) < 1e-12


def test_theta_matches_direct():
    for t, alpha, q in ((29.7, 3, 11), (100, 7, 13), (5.2, 1, 3)):
        direct = sum(e(-alpha * n / q) for n in range(1, math.floor(t) + 1))
        assert linear_phase_sum(t, alpha, q).value == pytest.approx(direct, abs=1e-10)


def test_theta_envelope():
    v = linear_phase_sum(1000, 1, 7)
    assert v.envelope == pytest.approx(7.0)  # 1/||1/7||
    v = linear_phase_sum(3, 1, 7)
    assert v.envelope == pytest.approx(3.0)  # capped by t


def test_kloosterman_examples():
    v = short_kloosterman_sum(3, 5, 1)
    assert v.value == pytest.approx(-1 - e(4 / 5))
    v = short_kloosterman_sum(1, 13, 6)
    assert v.value == pytest.approx(e(6 / 13))
    for q in (7, 101, 997):
        assert short_kloosterman_sum(q - 1, q, 3).value == pytest.approx(-1.0, abs=1e-9)


def test_trivial_bound_holds():
    cases = (
        twisted_mobius_sum(200, 13, 4),
        inverse_square_phase_sum(0, 313.7, 17, 2),
        complete_mixed_sum(101, 5, 9),
        short_kloosterman_sum(400, 19, 6),
        linear_phase_sum(255.4, 8, 23),
    )
    for v in cases:
        assert abs(v.value) <= v.trivial_bound + 1e-6 * max(v.term_count, 1)


def test_weil_scan():
    got = weil_constant_scan(5)
    lower = abs(complete_mixed_sum(5, 1, 1).value) / math.sqrt(5)
    assert got >= lower - 1e-12
    assert weil_constant_scan(199) <= 3.0
    with pytest.raises(ValueError):
        weil_constant_scan(501)


def test_weil_scan_matches_direct_enumeration():
    for q_max in (3, 7, 13):
        direct = 0.0
        for q in primes_upto(q_max):
            q = int(q)
            if q < 3:
                continue
            for alpha in range(1, q):
                for beta in range(1, q):
                    direct = max(direct, abs(complete_mixed_sum(q, alpha, beta).value) / math.sqrt(q))
        assert weil_constant_scan(q_max) == pytest.approx(direct, abs=1e-9)


def test_unit_roots_table():
    root = unit_roots(8)
    assert root[0] == pytest.approx(1.0)
    assert root[2] == pytest.approx(1j)
    assert root[4] == pytest.approx(-1.0)


def test_phase_table_budget():
    # 2^31 + 11 is prime; its tables would need gigabytes
    with pytest.raises(ValueError):
        short_kloosterman_sum(10, 2**31 + 11, 1)
