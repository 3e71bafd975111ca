"""Exact evaluation of the exponential sums used by the experiments.

Every operation returns an ExpSumValue pairing the complex value with its
trivial bound (the summand count) and, where a theoretical right-hand side
exists, an envelope evaluated with implied constant 1.  Envelopes are
diagnostics for ratio plots, never assertions.

Phases come from a precomputed root-of-unity table of size q, so per-term
work is a table lookup and error growth stays linear in the term count.
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .arith import as_modulus, inverse_table, mobius_sieve, primes_upto

MAX_SCAN_MODULUS = 10**5
MAX_WEIL_MODULUS = 500
# phase and inverse tables are O(q) memory; keep accidental huge moduli out
MAX_PHASE_MODULUS = 1 << 22


@dataclass(frozen=True)
class ExpSumValue:
    """A complex sum with its trivial bound and optional theoretical envelope."""

    value: complex
    term_count: int
    trivial_bound: float
    envelope: Optional[float] = None

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@lru_cache(maxsize=16)
def unit_roots(q: int) -> np.ndarray:
    """root[k] = e(k/q) = exp(2*pi*i*k/q) for 0 <= k < q."""
    if q > MAX_PHASE_MODULUS:
        raise ValueError(f"modulus {q} above table budget {MAX_PHASE_MODULUS}")
    root = np.exp(2j * np.pi * np.arange(q) / q)
    root.setflags(write=False)
    return root


@lru_cache(maxsize=16)
def _inverses(q: int) -> np.ndarray:
    if q > MAX_PHASE_MODULUS:
        raise ValueError(f"modulus {q} above table budget {MAX_PHASE_MODULUS}")
    inv = inverse_table(q)
    inv.setflags(write=False)
    return inv


def _require_coprime(a: int, q: int) -> int:
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    return a % q


def twisted_mobius_sum(R: int, q, a: int, require_coprime: bool = True) -> ExpSumValue:
    """Sum of mu(n) * e(a * nbar^2 / q) over n <= R.

    Terms with q | n carry an undefined inverse and are always excluded; for
    prime q that exclusion coincides with the coprimality condition, so the
    ``require_coprime`` flag does not change the value -- it only documents
    which bookkeeping convention the caller wants.
    """
    q = as_modulus(q).require_prime()
    a = _require_coprime(a, q)
    if R < 1:
        raise ValueError("R must be >= 1")
    mu = mobius_sieve(1, R).values
    value, count = kernels.twisted_mobius_kernel(mu, q, a, _inverses(q), unit_roots(q))
    envelope = R * (1.0 + q / R) ** (1.0 / 12.0) * q ** (-1.0 / 48.0)
    return ExpSumValue(value=value, term_count=count, trivial_bound=float(count), envelope=envelope)


def max_twisted_mobius_sum(t: int, q) -> float:
    """max over coprime a of |twisted_mobius_sum(t, q, a)|, exhaustively.

    The per-a sums collapse to one length-q DFT of the mu-weighted counts of
    nbar^2 classes, evaluated by FFT; the direct per-term path stays available
    through twisted_mobius_sum and is cross-checked in the test suite.
    """
    q = as_modulus(q).require_prime()
    if q > MAX_SCAN_MODULUS:
        raise ValueError(f"q = {q} above exhaustive-scan cap {MAX_SCAN_MODULUS}")
    if t < 1:
        raise ValueError("t must be >= 1")
    mu = mobius_sieve(1, t).values
    n = np.arange(1, t + 1, dtype=np.int64)
    nm = n % q
    keep = (mu != 0) & (nm != 0)
    inv = _inverses(q)
    cls = (inv[nm[keep]] ** 2) % q
    weights = np.bincount(cls, weights=mu[keep].astype(np.float64), minlength=q)
    spectrum = np.fft.fft(weights)
    return float(np.abs(spectrum[1:]).max()) if q > 1 else float(abs(spectrum[0]))


def inverse_square_phase_sum(A: float, B: float, q, a: int) -> ExpSumValue:
    """Sum of e(a * rbar^2 / q) over integers A < r <= B coprime to q."""
    q = as_modulus(q).require_prime()
    a = _require_coprime(a, q)
    lo = math.floor(A) + 1
    hi = math.floor(B)
    if hi < lo:
        return ExpSumValue(0j, 0, 0.0, envelope=(B - A) / q**0.5 + q**0.5)
    value, count = kernels.phase_sum_inverse_power(lo, hi, q, a, 2, _inverses(q), unit_roots(q))
    envelope = (B - A) / q**0.5 + q**0.5
    return ExpSumValue(value=value, term_count=count, trivial_bound=float(count), envelope=envelope)


def complete_mixed_sum(q, alpha: int, beta: int) -> ExpSumValue:
    """Sum over h = 1..q-1 of e((alpha*h + beta*hbar^2) / q), directly in O(q)."""
    q = as_modulus(q).require_prime()
    if q < 2:
        raise ValueError("q must be >= 2")
    alpha %= q
    beta %= q
    value = kernels.mixed_sum_kernel(q, alpha, beta, _inverses(q), unit_roots(q))
    envelope = math.sqrt(q) if alpha != 0 and beta != 0 else None
    return ExpSumValue(value=value, term_count=q - 1, trivial_bound=float(q - 1), envelope=envelope)


def linear_phase_sum(t: float, alpha: int, q) -> ExpSumValue:
    """Sum of e(-alpha*n/q) over n <= t, via the closed geometric form."""
    q = as_modulus(q).q
    if t < 0:
        raise ValueError("t must be >= 0")
    n = math.floor(t)
    alpha %= q
    if n == 0:
        env = min(t, _inv_distance(alpha, q)) if alpha else t
        return ExpSumValue(0j, 0, 0.0, envelope=env)
    if alpha == 0:
        return ExpSumValue(complex(n), n, float(n), envelope=float(min(t, n)))
    theta = -2.0 * math.pi * alpha / q
    # sum_{k=1..n} e^{ik theta} = e^{i(n+1)theta/2} * sin(n theta/2) / sin(theta/2)
    value = cmath.exp(1j * (n + 1) * theta / 2) * math.sin(n * theta / 2) / math.sin(theta / 2)
    envelope = min(t, _inv_distance(alpha, q))
    return ExpSumValue(value=value, term_count=n, trivial_bound=float(n), envelope=envelope)


def _inv_distance(alpha: int, q: int) -> float:
    """1 / || alpha/q ||, distance measured to the nearest integer."""
    d = min(alpha % q, q - alpha % q) / q
    return math.inf if d == 0 else 1.0 / d


def short_kloosterman_sum(M: int, q, a: int) -> ExpSumValue:
    """Sum of e(a * mbar / q) over m <= M coprime to q."""
    q = as_modulus(q).require_prime()
    a = _require_coprime(a, q)
    if M < 1:
        raise ValueError("M must be >= 1")
    value, count = kernels.phase_sum_inverse_power(1, M, q, a, 1, _inverses(q), unit_roots(q))
    envelope = None
    if M >= 2 and q >= 3:
        envelope = M * math.log(q) * math.log(math.log(q)) ** 3 / math.log(M) ** 1.5
    return ExpSumValue(value=value, term_count=count, trivial_bound=float(count), envelope=envelope)


def weil_constant_scan(q_max: int) -> float:
    """max of |complete mixed sum| / sqrt(q) over primes 3 <= q <= q_max and
    all alpha, beta in [1, q-1].

    Per prime the whole (alpha, beta) grid is one 2-D DFT of the class-count
    table, so the scan runs in O(q^2 log q) per modulus instead of O(q^3);
    the direct path is cross-checked against it for small q in the tests.
    """
    if q_max > MAX_WEIL_MODULUS:
        raise ValueError(f"q_max = {q_max} above scan cap {MAX_WEIL_MODULUS}")
    if q_max < 3:
        raise ValueError("q_max must be >= 3")
    best = 0.0
    for q in primes_upto(q_max):
        q = int(q)
        if q < 3:
            continue
        inv = _inverses(q)
        table = np.zeros((q, q))
        h = np.arange(1, q, dtype=np.int64)
        table[h, (inv[h] * inv[h]) % q] = 1.0
        spectrum = np.fft.fft2(table)
        best = max(best, float(np.abs(spectrum[1:, 1:]).max()) / math.sqrt(q))
    return best
