"""Squarefree counts in progressions, the reference term, and the error term.

The error E(X, q, a) = #{squarefree n <= X, n = a mod q} - S0, with
S0 = (1/phi(q)) * #{squarefree n <= X, gcd(n, q) = 1}, is kept as an exact
rational throughout: the acceptance identities are exact and floating E would
leak rounding into them.  Only the diagnostic ratios are floats.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import Modulus, as_modulus, euler_phi, primes_upto, squarefree_indicator

# 6/pi^2, the squarefree density
SQUAREFREE_DENSITY = 6.0 / math.pi**2

# cached indicator tables are capped at 32 MiB; larger X streams segments
_CACHE_LIMIT = 1 << 25


class ScanCapExceededError(LookupError):
    """Forward scan hit its cap without finding a squarefree element."""


@dataclass(frozen=True)
class ErrorRecord:
    """One (X, q, a) evaluation: exact count, reference term, and ratios."""

    X: int
    q: Modulus
    a: int
    count: int
    reference: Fraction
    error: Fraction
    ratio_half: float
    ratio_quarter: float


@dataclass(frozen=True)
class MainTermValue:
    """(6/pi^2) * (1 - q^-2)^-1 * X/q for prime q."""

    value: float
    X: int
    q: int


@lru_cache(maxsize=2)
def _indicator_upto(cap: int) -> np.ndarray:
    table = squarefree_indicator(1, cap)
    table.setflags(write=False)
    return table


def _indicator(X: int) -> np.ndarray:
    cap = 1 << max(10, (X - 1).bit_length())
    return _indicator_upto(cap)[:X]


def count_squarefree_in_progression(X: int, q, a: int) -> int:
    """Exact #{n <= X : n squarefree, n = a (mod q)}."""
    q = as_modulus(q).q
    if not 0 <= a < q:
        raise ValueError(f"residue {a} outside [0, {q})")
    if X < 0:
        raise ValueError("X must be >= 0")
    if X == 0:
        return 0
    if X <= _CACHE_LIMIT:
        sf = _indicator(X)
        start = a - 1 if a >= 1 else q - 1
        return int(np.count_nonzero(sf[start::q]))
    total = 0
    step = 1 << 24
    for lo in range(1, X + 1, step):
        hi = min(X, lo + step - 1)
        sf = squarefree_indicator(lo, hi)
        first = lo + (a - lo) % q
        if first <= hi:
            total += int(np.count_nonzero(sf[first - lo :: q]))
    return total


def squarefree_count(X: int) -> int:
    """#{n <= X : n squarefree}."""
    return count_squarefree_in_progression(X, 1, 0)


def counts_by_residue(X: int, q) -> np.ndarray:
    """Length-q vector: counts of squarefree n <= X in every class n = r (mod q)."""
    q = as_modulus(q).q
    if X <= 0:
        return np.zeros(q, dtype=np.int64)
    if X <= _CACHE_LIMIT:
        pos = np.nonzero(_indicator(X))[0] + 1
        return np.bincount(pos % q, minlength=q).astype(np.int64)
    out = np.zeros(q, dtype=np.int64)
    step = 1 << 24
    for lo in range(1, X + 1, step):
        hi = min(X, lo + step - 1)
        sf = squarefree_indicator(lo, hi)
        pos = np.nonzero(sf)[0] + lo
        out += np.bincount(pos % q, minlength=q).astype(np.int64)
    return out


def coprime_squarefree_count(X: int, q) -> int:
    """#{n <= X : n squarefree, gcd(n, q) = 1}."""
    q = as_modulus(q).q
    counts = counts_by_residue(X, q)
    residues = np.arange(q)
    coprime = np.gcd(residues, q) == 1
    return int(counts[coprime].sum())


def reference_term(X: int, q) -> Fraction:
    """Exact S0 = (1/phi(q)) * #{n <= X : n squarefree, gcd(n, q) = 1}."""
    q = as_modulus(q).q
    if X < 0:
        raise ValueError("X must be >= 0")
    return Fraction(coprime_squarefree_count(X, q), euler_phi(q))


def main_term(X: int, q) -> MainTermValue:
    """Closed-form density term for prime q; differs from S0 by O(X^1/2 / q)."""
    q = as_modulus(q).require_prime()
    value = SQUAREFREE_DENSITY / (1.0 - q**-2) * X / q
    return MainTermValue(value=value, X=X, q=q)


def error_term(X: int, q, a: int) -> ErrorRecord:
    """Exact E(X, q, a) for gcd(a, q) = 1, with diagnostic ratios."""
    qm = as_modulus(q)
    q = qm.q
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    count = count_squarefree_in_progression(X, qm, a % q)
    reference = reference_term(X, qm)
    error = count - reference
    scale = X / q
    err = float(error)
    ratio_half = err / scale**0.5 if scale > 0 else math.nan
    ratio_quarter = err / scale**0.25 if scale > 0 else math.nan
    return ErrorRecord(
        X=X,
        q=qm,
        a=a % q,
        count=count,
        reference=reference,
        error=error,
        ratio_half=ratio_half,
        ratio_quarter=ratio_quarter,
    )


def variance_over_residues(X: int, q) -> Fraction:
    """Exact sum of E(X, q, a)^2 over residues a coprime to q.

    Uses sum(c_a^2) - C^2/phi, which equals the definition exactly since
    sum(c_a) = C; the test suite cross-checks against composing error_term.
    """
    q = as_modulus(q).q
    counts = counts_by_residue(X, q)
    coprime = np.gcd(np.arange(q), q) == 1
    c = counts[coprime]
    total = int(c.sum())
    square_sum = int((c.astype(object) ** 2).sum())
    phi = euler_phi(q)
    return Fraction(square_sum * phi - total * total, phi)


def is_squarefree_int(n: int) -> bool:
    """Scalar squarefree test by trial division."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 4 == 0 or n % 9 == 0 or n % 25 == 0:
        return False
    for p in _scan_primes(math.isqrt(n)):
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
    return True


@lru_cache(maxsize=4)
def _scan_primes_upto(cap: int) -> tuple:
    return tuple(primes_upto(cap))


def _scan_primes(limit: int) -> tuple:
    # round the bound up to a power of two so the cache actually hits
    return _scan_primes_upto(1 << max(6, int(limit).bit_length()))


def least_squarefree_in_progression(q, a: int, cap: int = 10**9) -> int:
    """Smallest positive squarefree n = a (mod q), by forward scan.

    Raises ScanCapExceededError past ``cap`` so the tool never loops
    unboundedly (the scan succeeds far below the cap for desk-range q).
    """
    q = as_modulus(q).q
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    n = a % q
    if n == 0:
        n = q  # only q = 1 reaches here
    _scan_primes(math.isqrt(cap))
    while n <= cap:
        if is_squarefree_int(n):
            return n
        n += q
    raise ScanCapExceededError(f"no squarefree n = {a} (mod {q}) found up to {cap}")
