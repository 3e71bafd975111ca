"""Exact integer arithmetic and sieving primitives shared by every module.

Mobius tables are sieved segment by segment (cache-resident segments, default
width 2^22) and are immutable once built, so they are safe to share across
threads.  Primality is a deterministic Miller-Rabin witness check, valid for
all n below 2^64: a verification tool must not accept anything
probabilistically.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

DEFAULT_SEGMENT_WIDTH = 1 << 22
MAX_TABLE_ENTRIES = 1 << 31

# deterministic for every n < 3.3e24, in particular all 64-bit inputs
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class IntervalTooLargeError(MemoryError):
    """Sieve interval exceeds the configured memory budget."""


def is_prime(n: int) -> bool:
    """Deterministic primality check for 0 <= n < 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, ascending, as int64."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@dataclass(frozen=True)
class Modulus:
    """A modulus q >= 1 with its primality decided once, at construction."""

    q: int
    is_prime: bool = field(init=False)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"modulus must be >= 1, got {self.q}")
        object.__setattr__(self, "is_prime", is_prime(self.q))

    def require_prime(self) -> int:
        if not self.is_prime:
            raise ValueError(f"modulus {self.q} is not prime")
        return self.q


def as_modulus(q) -> Modulus:
    return q if isinstance(q, Modulus) else Modulus(int(q))


@dataclass(frozen=True)
class MobiusTable:
    """mu(n) for n in [lo, hi], stored as signed 8-bit values."""

    lo: int
    hi: int
    values: np.ndarray

    def mu(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside sieved interval [{self.lo}, {self.hi}]")
        return int(self.values[n - self.lo])

    def __len__(self) -> int:
        return self.hi - self.lo + 1


def _check_interval(lo: int, hi: int, max_entries: int):
    if lo < 1:
        raise ValueError(f"interval start must be >= 1, got {lo}")
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi - lo + 1 > max_entries:
        raise IntervalTooLargeError(
            f"interval [{lo}, {hi}] has {hi - lo + 1} entries, budget is {max_entries}"
        )


def mobius_sieve(
    lo: int,
    hi: int,
    segment_width: int = DEFAULT_SEGMENT_WIDTH,
    max_entries: int = MAX_TABLE_ENTRIES,
) -> MobiusTable:
    """Exact mu(n) over [lo, hi], sieved in segments of ``segment_width``."""
    _check_interval(lo, hi, max_entries)
    base = primes_upto(math.isqrt(hi))
    parts = []
    for s in range(lo, hi + 1, segment_width):
        e = min(hi, s + segment_width - 1)
        parts.append(kernels.mobius_segment(s, e, base))
    values = parts[0] if len(parts) == 1 else np.concatenate(parts)
    values.setflags(write=False)  # tables are shared across threads
    return MobiusTable(lo=lo, hi=hi, values=values)


def squarefree_indicator(
    lo: int,
    hi: int,
    segment_width: int = DEFAULT_SEGMENT_WIDTH,
    max_entries: int = MAX_TABLE_ENTRIES,
) -> np.ndarray:
    """Boolean table over [lo, hi]: entry is True iff no prime square divides n."""
    _check_interval(lo, hi, max_entries)
    base = primes_upto(math.isqrt(hi))
    parts = []
    for s in range(lo, hi + 1, segment_width):
        e = min(hi, s + segment_width - 1)
        parts.append(kernels.squarefree_segment(s, e, base))
    table = parts[0] if len(parts) == 1 else np.concatenate(parts)
    table.setflags(write=False)
    return table


def mod_inverse(r: int, q) -> int:
    """The residue rbar in [1, q-1] with r * rbar = 1 (mod q); q >= 2."""
    q = as_modulus(q).q
    if q < 2:
        raise ValueError("mod_inverse needs q >= 2")
    if math.gcd(r, q) != 1:
        raise ValueError(f"{r} is not invertible modulo {q}")
    return pow(r, -1, q)


def inverse_table(q: int) -> np.ndarray:
    """Inverse table for a prime q: inv[r] = r^-1 mod q for 1 <= r < q, inv[0] = 0."""
    inv = np.zeros(q, dtype=np.int64)
    if q >= 2:
        inv[1] = 1
        for i in range(2, q):
            inv[i] = (q - (q // i) * inv[q % i]) % q
    return inv


def factorize(n: int) -> dict:
    """Prime factorization {p: e} by trial division (fine at desk scale)."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        # 6k +- 1 wheel
        p += 2 if p % 6 == 5 else 4
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def tau3(d: int) -> int:
    """Number of ordered triples (a, b, c) with a*b*c = d."""
    if d < 1:
        raise ValueError("tau3 needs d >= 1")
    out = 1
    for e in factorize(d).values():
        out *= (e + 1) * (e + 2) // 2
    return out


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def sqrt_mod_prime(a: int, p: int):
    """A square root of a modulo prime p, or None if a is a non-residue.

    Tonelli-Shanks; returns a root in [0, p-1] (the other is p - root).
    """
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p - 1 = s * 2^e with s odd
    s, e = p - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = e, pow(z, s, p), pow(a, s, p), pow(a, (s + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r
