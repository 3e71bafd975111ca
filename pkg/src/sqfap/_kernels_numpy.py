"""Vectorized numpy implementations of the hot kernels.

These are the reference implementations; ``_kernels_numba`` mirrors every
signature with explicit ``@njit`` loops.  All kernels are pure and operate on
plain ints and numpy arrays so both backends stay drop-in interchangeable.

Conventions shared by both backends:

* intervals are inclusive on both ends,
* ``primes`` holds the base primes up to ``isqrt(hi)`` as int64,
* ``inv`` is a modular-inverse table for a prime modulus ``q``
  (``inv[r] = r^-1 mod q`` for ``1 <= r < q``),
* ``root[k] = exp(2*pi*i*k/q)`` for ``0 <= k < q``,
* moduli are assumed to fit in 32 bits so index arithmetic stays in int64.
"""

import numpy as np

_CHUNK = 1 << 20


def mobius_segment(lo, hi, primes):
    """Mobius values mu(n) for n in [lo, hi] as an int8 array."""
    width = hi - lo + 1
    mu = np.ones(width, dtype=np.int8)
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    for p in primes:
        p = int(p)
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        sl = slice(start - lo, width, p)
        mu[sl] = -mu[sl]
        rem[sl] //= p
        p2 = p * p
        start2 = ((lo + p2 - 1) // p2) * p2
        if start2 <= hi:
            mu[start2 - lo : width : p2] = 0
    # a leftover factor > sqrt(hi) is a single prime: one more sign flip
    np.negative(mu, where=rem > 1, out=mu)
    return mu


def squarefree_segment(lo, hi, primes):
    """Boolean table: n in [lo, hi] is divisible by no prime square."""
    width = hi - lo + 1
    sf = np.ones(width, dtype=bool)
    for p in primes:
        p2 = int(p) * int(p)
        if p2 > hi:
            break
        start2 = ((lo + p2 - 1) // p2) * p2
        if start2 <= hi:
            sf[start2 - lo : width : p2] = False
    return sf


def residue_counts(flags, lo, q):
    """Count set flags by residue class: out[r] = #{i : flags[i], (lo+i) % q == r}."""
    idx = np.nonzero(flags)[0]
    return np.bincount((lo + idx) % q, minlength=q)


def phase_sum_inverse_power(lo, hi, q, a, power, inv, root):
    """Sum of e(a * rbar**power / q) over integers r in [lo, hi] with q not | r.

    Returns (complex value, number of summands).
    """
    total = 0.0 + 0.0j
    count = 0
    for c0 in range(lo, hi + 1, _CHUNK):
        c1 = min(hi, c0 + _CHUNK - 1)
        rm = np.arange(c0, c1 + 1, dtype=np.int64) % q
        rm = rm[rm != 0]
        v = inv[rm]
        if power == 2:
            v = (v * v) % q
        idx = (a * v) % q
        total += root[idx].sum()
        count += idx.size
    return total, count


def twisted_mobius_kernel(mu, q, a, inv, root):
    """Sum of mu(n) * e(a * nbar^2 / q) over n = 1..len(mu) with q not | n.

    ``mu`` holds mu(1), mu(2), ... ; zero entries contribute nothing and are
    not counted as summands.
    """
    total = 0.0 + 0.0j
    count = 0
    size = mu.shape[0]
    for c0 in range(0, size, _CHUNK):
        c1 = min(size, c0 + _CHUNK)
        n = np.arange(c0 + 1, c1 + 1, dtype=np.int64)
        m = mu[c0:c1]
        nm = n % q
        keep = (m != 0) & (nm != 0)
        v = inv[nm[keep]]
        idx = (a * ((v * v) % q)) % q
        total += (m[keep] * root[idx]).sum()
        count += int(keep.sum())
    return total, count


def mixed_sum_kernel(q, alpha, beta, inv, root):
    """Complete sum over h = 1..q-1 of e((alpha*h + beta*hbar^2) / q)."""
    h = np.arange(1, q, dtype=np.int64)
    v = inv[h]
    idx = (alpha * h + beta * ((v * v) % q)) % q
    return complex(root[idx].sum())


def psi_progression_kernel(m_max, shift, q, a, inv):
    """Sum of psi(shift + a*mbar/q) over m = 1..m_max with q not | m.

    psi is the sawtooth x - floor(x) - 1/2.  Returns (value, summands).
    """
    total = 0.0
    count = 0
    for c0 in range(1, m_max + 1, _CHUNK):
        c1 = min(m_max, c0 + _CHUNK - 1)
        mm = np.arange(c0, c1 + 1, dtype=np.int64) % q
        mm = mm[mm != 0]
        x = shift + ((a * inv[mm]) % q) / q
        total += float(np.sum(x - np.floor(x) - 0.5))
        count += mm.size
    return total, count


def square_pair_count_kernel(M, q, a, X):
    """Brute-force count of pairs (m, r): M < m <= 2M, r*r*m <= X, r^2 m = a mod q."""
    rmax = _isqrt(X // M)
    m = np.arange(M + 1, 2 * M + 1, dtype=np.int64)
    am = a % q
    count = 0
    for r in range(1, rmax + 1):
        count += int(np.count_nonzero((r * r % q) * m % q == am))
    return count


def _isqrt(n):
    import math

    return math.isqrt(int(n))
