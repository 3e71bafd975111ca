"""Selberg upper-bound sieve and its square-detection instantiation.

The sieve bound for a weighted sequence avoiding classes Omega_p mod p for
every p | P is  Y/J + sum over d | P, d <= sqrt(D) of tau3(d) |r_d|,  with
J = sum over d | P, d < sqrt(D) of h(d), h(p) = g(p)/(1 - g(p)).  The strict
bound in J versus the weak one in the remainder sum follows the statement
literally; they differ only when D is a perfect square.

Remainders r_d = mass_d - g(d) Y are kept as exact rationals whenever the
weights are integral (they are, in the square-detection case), so the
soundness inequality cannot fail on rounding; the reported bound carries a
stated 1e-9 slack.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from . import kernels
from .arith import as_modulus, inverse_table, primes_upto, tau3

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class SieveInstance:
    """A sieve problem: weights, sieving primes with forbidden classes, density.

    weights[n] is the mass at n (index 0 unused); sieving_primes are the odd
    primes whose product is the squarefree P; forbidden[p] is Omega_p; density
    maps p to g(p) as an exact Fraction; scale is the main-term Y; level is D.
    """

    weights: np.ndarray
    sieving_primes: Tuple[int, ...]
    forbidden: Dict[int, frozenset]
    density: Dict[int, Fraction]
    scale: Fraction
    level: float

    def __post_init__(self):
        seen = set()
        for p in self.sieving_primes:
            if p in seen or p % 2 == 0 or p < 3:
                raise ValueError(f"sieving primes must be distinct odd primes, got {self.sieving_primes}")
            seen.add(p)
            omega = self.forbidden[p]
            if not 0 < len(omega) < p:
                raise ValueError(f"Omega_{p} must be a proper nonempty class set")
            g = self.density[p]
            if not 0 < g < 1:
                raise ValueError(f"density g({p}) = {g} outside (0, 1)")

    @property
    def prime_product(self) -> int:
        """P, the (squarefree, odd) product of the sieving primes."""
        return math.prod(self.sieving_primes)

    def density_at(self, d: int) -> Fraction:
        """g(d) for a squarefree divisor d of P, by multiplicativity."""
        out = Fraction(1)
        for p in _divisor_primes(self, d):
            out *= self.density[p]
        return out


def _divisor_primes(instance: SieveInstance, d: int) -> Tuple[int, ...]:
    if d < 1:
        raise ValueError(f"divisor must be >= 1, got {d}")
    rest = d
    parts = []
    for p in instance.sieving_primes:
        if rest % p == 0:
            parts.append(p)
            rest //= p
            if rest % p == 0:
                raise ValueError(f"{d} is not squarefree")
    if rest != 1:
        raise ValueError(f"{d} does not divide P = {instance.prime_product}")
    return tuple(parts)


@dataclass(frozen=True)
class SieveReport:
    """Output of the sieve: upper bound, main-factor J, remainders, oracle count."""

    bound: float
    density_divisor_sum: float  # J
    remainders: Dict[int, float]
    exact: Optional[int] = None


def restricted_mass(instance: SieveInstance, d: int):
    """Total weight on n lying in Omega_p mod p for every p | d."""
    primes = _divisor_primes(instance, d)
    w = instance.weights
    mask = np.ones(w.size, dtype=bool)
    mask[0] = False
    n = np.arange(w.size)
    for p in primes:
        lookup = np.zeros(p, dtype=bool)
        lookup[list(instance.forbidden[p])] = True
        mask &= lookup[n % p]
    total = w[mask].sum()
    return int(total) if np.issubdtype(w.dtype, np.integer) else float(total)


def remainder_at(instance: SieveInstance, d: int):
    """r_d = restricted mass minus g(d) * Y, exact when the weights are integral."""
    return Fraction(restricted_mass(instance, d)) - instance.density_at(d) * instance.scale


def _divisors_below(primes: Tuple[int, ...], limit_sq: float):
    """Squarefree divisors d of prod(primes) with d*d <= limit_sq, ascending."""
    out = [1]
    for p in primes:
        out.extend([d * p for d in out if (d * p) ** 2 <= limit_sq])
    return sorted(d for d in out if d * d <= limit_sq)


def sieve_upper_bound(instance: SieveInstance, with_exact: bool = False) -> SieveReport:
    """The Selberg upper bound for the sifted mass, with remainder bookkeeping."""
    D = instance.level
    if D <= 1:
        raise ValueError("sieve level D must exceed 1")
    j_sum = Fraction(0)
    for d in _divisors_below(instance.sieving_primes, D):
        if d * d < D:
            g = instance.density_at(d)
            h = Fraction(1)
            for p in _divisor_primes(instance, d):
                gp = instance.density[p]
                h *= gp / (1 - gp)
            j_sum += h
    remainders = {}
    tail = Fraction(0)
    for d in _divisors_below(instance.sieving_primes, D):
        r = remainder_at(instance, d)
        remainders[d] = float(r)
        tail += tau3(d) * abs(r)
    bound = float(instance.scale / j_sum + tail) + BOUND_SLACK
    exact = sifted_count(instance) if with_exact else None
    return SieveReport(bound=bound, density_divisor_sum=float(j_sum), remainders=remainders, exact=exact)


def sifted_count(instance: SieveInstance):
    """Exact mass on n avoiding Omega_p for every p | P (brute enumeration)."""
    w = instance.weights
    mask = np.ones(w.size, dtype=bool)
    mask[0] = False
    n = np.arange(w.size)
    for p in instance.sieving_primes:
        lookup = np.zeros(p, dtype=bool)
        lookup[list(instance.forbidden[p])] = True
        mask &= ~lookup[n % p]
    total = w[mask].sum()
    return int(total) if np.issubdtype(w.dtype, np.integer) else float(total)


@lru_cache(maxsize=64)
def quadratic_residues(p: int) -> frozenset:
    """The squares modulo p, including 0."""
    return frozenset((r * r) % p for r in range(p))


def nonresidue_classes(p: int) -> frozenset:
    """Omega_p for square detection: classes that are not squares mod p.

    0 = 0^2 is a square, so |Omega_p| = (p-1)/2, matching g(p) = (p-1)/(2p).
    """
    return frozenset(range(p)) - quadratic_residues(p)


def square_detection_instance(X: int, M: int, q, a: int, D: float) -> SieveInstance:
    """Weights a_n = #{M < m <= 2M : m*n = a (mod q)} for n <= X/M, sieved by
    the non-square classes modulo every odd prime p <= sqrt(D), p != q."""
    q = as_modulus(q).require_prime()
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    if M < 1 or X < M:
        raise ValueError("need 1 <= M <= X")
    n_max = X // M
    inv = inverse_table(q)
    m = np.arange(M + 1, 2 * M + 1, dtype=np.int64)
    mm = m % q
    cls = (a * inv[mm[mm != 0]]) % q
    class_counts = np.bincount(cls, minlength=q)
    weights = np.zeros(n_max + 1, dtype=np.int64)
    n = np.arange(1, n_max + 1)
    weights[1:] = class_counts[n % q]
    primes = tuple(int(p) for p in primes_upto(math.isqrt(int(D))) if p > 2 and p != q)
    return SieveInstance(
        weights=weights,
        sieving_primes=primes,
        forbidden={p: nonresidue_classes(p) for p in primes},
        density={p: Fraction(p - 1, 2 * p) for p in primes},
        scale=Fraction(X, q),
        level=float(D),
    )


def square_weight_total(instance: SieveInstance) -> int:
    """Sum of the instance weights over perfect squares n."""
    w = instance.weights
    total = 0
    r = 1
    while r * r < w.size:
        total += int(w[r * r])
        r += 1
    return total


def square_pair_count_bruteforce(X: int, M: int, q, a: int) -> int:
    """Exact #{(m, r) : M < m <= 2M, r <= sqrt(X/M), r^2 m = a (mod q)}.

    Deliberately brute force (cost M * sqrt(X/M)); serves as the oracle the
    sieve bound is checked against.
    """
    q = as_modulus(q).require_prime()
    if M < 1 or X < M:
        raise ValueError("need 1 <= M <= X")
    return int(kernels.square_pair_count_kernel(M, q, a % q, X))
