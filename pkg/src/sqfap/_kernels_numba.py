"""Numba ``@njit`` implementations of the hot kernels.

Signatures and conventions match ``_kernels_numpy`` exactly; see that module
for the contracts.  Long phase sums use Neumaier compensated accumulation so
absolute error stays near machine precision even at 1e8 terms.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _acc(s, c, x):
    # Neumaier error-free-transformation step
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


@njit(cache=True)
def _isqrt64(n):
    if n < 0:
        return 0
    r = int(np.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def mobius_segment(lo, hi, primes):
    width = hi - lo + 1
    mu = np.ones(width, dtype=np.int8)
    rem = np.empty(width, dtype=np.int64)
    for i in range(width):
        rem[i] = lo + i
    for j in range(primes.shape[0]):
        p = primes[j]
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        for n in range(start, hi + 1, p):
            i = n - lo
            mu[i] = -mu[i]
            rem[i] //= p
        p2 = p * p
        start2 = ((lo + p2 - 1) // p2) * p2
        for n in range(start2, hi + 1, p2):
            mu[n - lo] = 0
    for i in range(width):
        if rem[i] > 1:
            mu[i] = -mu[i]
    return mu


@njit(cache=True)
def squarefree_segment(lo, hi, primes):
    width = hi - lo + 1
    sf = np.ones(width, dtype=np.bool_)
    for j in range(primes.shape[0]):
        p = primes[j]
        p2 = p * p
        if p2 > hi:
            break
        start2 = ((lo + p2 - 1) // p2) * p2
        for n in range(start2, hi + 1, p2):
            sf[n - lo] = False
    return sf


@njit(cache=True)
def residue_counts(flags, lo, q):
    out = np.zeros(q, dtype=np.int64)
    for i in range(flags.shape[0]):
        if flags[i]:
            out[(lo + i) % q] += 1
    return out


@njit(cache=True)
def phase_sum_inverse_power(lo, hi, q, a, power, inv, root):
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    count = 0
    for r in range(lo, hi + 1):
        rm = r % q
        if rm == 0:
            continue
        v = inv[rm]
        if power == 2:
            v = (v * v) % q
        z = root[(a * v) % q]
        sr, cr = _acc(sr, cr, z.real)
        si, ci = _acc(si, ci, z.imag)
        count += 1
    return complex(sr + cr, si + ci), count


@njit(cache=True)
def twisted_mobius_kernel(mu, q, a, inv, root):
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    count = 0
    for i in range(mu.shape[0]):
        m = mu[i]
        if m == 0:
            continue
        nm = (i + 1) % q
        if nm == 0:
            continue
        v = inv[nm]
        z = root[(a * ((v * v) % q)) % q]
        sr, cr = _acc(sr, cr, m * z.real)
        si, ci = _acc(si, ci, m * z.imag)
        count += 1
    return complex(sr + cr, si + ci), count


@njit(cache=True)
def mixed_sum_kernel(q, alpha, beta, inv, root):
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for h in range(1, q):
        v = inv[h]
        z = root[(alpha * h + beta * ((v * v) % q)) % q]
        sr, cr = _acc(sr, cr, z.real)
        si, ci = _acc(si, ci, z.imag)
    return complex(sr + cr, si + ci)


@njit(cache=True)
def psi_progression_kernel(m_max, shift, q, a, inv):
    s = 0.0
    c = 0.0
    count = 0
    for m in range(1, m_max + 1):
        mm = m % q
        if mm == 0:
            continue
        x = shift + ((a * inv[mm]) % q) / q
        s, c = _acc(s, c, x - np.floor(x) - 0.5)
        count += 1
    return s + c, count


@njit(cache=True)
def square_pair_count_kernel(M, q, a, X):
    rmax = _isqrt64(X // M)
    am = a % q
    count = 0
    for r in range(1, rmax + 1):
        rr = r * r % q
        for m in range(M + 1, 2 * M + 1):
            if rr * m % q == am:
                count += 1
    return count
