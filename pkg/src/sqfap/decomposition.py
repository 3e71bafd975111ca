"""Exact decompositions of the squarefree count and the parameter schedules.

Writing every squarefree n <= X in the class a mod q as n = r^2 m with
squarefree kernel, the count splits at a cut R into a head (square factors
r <= R) and a tail (r > R); head + tail equals the direct count exactly, in
integer arithmetic.  The head further expands through the sawtooth psi into a
smooth density part and two psi sums.  That expansion is an identity except
when a psi argument lands on an integer, where the jump convention can shift
a term by one: arguments are therefore tested for integrality in exact
rational arithmetic and a boundary flag is raised instead of asserting.

Moduli dividing r are excluded throughout: such r contribute nothing to the
count (r^2 m = 0 != a mod q) and their inverse classes are undefined.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import as_modulus, inverse_table, mobius_sieve
from .sawtooth import psi_exact

_INV_TABLE_CEILING = 1 << 20


class RegimeError(ValueError):
    """A parameter-schedule precondition is violated; names the inequality."""


def _count_congruent(limit: int, q: int, c: int) -> int:
    """#{1 <= m <= limit : m = c (mod q)}, exact."""
    if limit <= 0:
        return 0
    c %= q
    if c == 0:
        return limit // q
    if c > limit:
        return 0
    return (limit - c) // q + 1


def _inverse_squares(X: int, q: int):
    """rbar^2 mod q as a function of r (table-backed for small q); q | r is
    the caller's job to skip."""
    if q <= _INV_TABLE_CEILING:
        inv = inverse_table(q)
        return lambda r: int(inv[r % q]) ** 2 % q
    return lambda r: pow(r, -2, q)


@dataclass(frozen=True)
class SplitCounts:
    """Head (r <= R), tail (r > R) parts of the squarefree count, and their sum."""

    head: int
    tail: int

    @property
    def total(self) -> int:
        return self.head + self.tail


def _check_cut(X: int, R: float):
    if X < 2:
        raise ValueError("X must be >= 2")
    if not 1 < R <= math.sqrt(X):
        raise ValueError(f"cut R = {R} outside (1, sqrt(X) = {math.sqrt(X):.6g}]")


def split_count(X: int, q, a: int, R: float) -> SplitCounts:
    """Split the progression count over the squarefree kernel at cut R.

    head = sum over r <= R, (r, q) = 1 of mu(r) * #{m <= X/r^2 : m = a rbar^2},
    tail the same over R < r <= sqrt(X); head + tail is the exact count.
    """
    q = as_modulus(q).require_prime()
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    _check_cut(X, R)
    mob = mobius_sieve(1, math.isqrt(X))
    inv_sq = _inverse_squares(X, q)
    head = tail = 0
    for r in range(1, math.isqrt(X) + 1):
        mu = mob.mu(r)
        if mu == 0 or r % q == 0:
            continue
        c = a * inv_sq(r) % q
        term = mu * _count_congruent(X // (r * r), q, c)
        if r <= R:
            head += term
        else:
            tail += term
    return SplitCounts(head=head, tail=tail)


@dataclass(frozen=True)
class HeadPsiParts:
    """The head expanded through psi: smooth density part and two psi sums.

    smooth - psi_end + psi_origin reproduces the head count exactly unless
    ``boundary`` is set (some psi argument was an integer).
    """

    smooth: float
    psi_end: float
    psi_origin: float
    boundary: bool


def _head_psi_parts_exact(X: int, q: int, a: int, R: float):
    mob = mobius_sieve(1, math.isqrt(X))
    inv_sq = _inverse_squares(X, q)
    smooth = Fraction(0)
    psi_end = Fraction(0)
    psi_origin = Fraction(0)
    boundary = False
    for r in range(1, math.isqrt(X) + 1):
        if r > R:
            break
        mu = mob.mu(r)
        if mu == 0 or r % q == 0:
            continue
        c = a * inv_sq(r) % q
        ratio = Fraction(X, q * r * r)
        end_arg = ratio - Fraction(c, q)
        origin_arg = Fraction(-c, q)
        if end_arg.denominator == 1 or origin_arg.denominator == 1:
            boundary = True
        smooth += mu * ratio
        psi_end += mu * psi_exact(end_arg)
        psi_origin += mu * psi_exact(origin_arg)
    return smooth, psi_end, psi_origin, boundary


def head_psi_parts(X: int, q, a: int, R: float) -> HeadPsiParts:
    """Expand the head of split_count through the sawtooth identity

    #{m <= Z : m = c (mod q)} = Z/q - psi((Z - c)/q) + psi(-c/q),

    computed in exact rational arithmetic and reported as floats."""
    q = as_modulus(q).require_prime()
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    _check_cut(X, R)
    smooth, psi_end, psi_origin, boundary = _head_psi_parts_exact(X, q, a % q, R)
    return HeadPsiParts(
        smooth=float(smooth),
        psi_end=float(psi_end),
        psi_origin=float(psi_origin),
        boundary=boundary,
    )


@dataclass(frozen=True)
class TailPairCounts:
    """Pair counts (r, m) with r^2 m = a (mod q), split at m = X/(R^2 log X)."""

    small_m: int
    large_m: int


def tail_pair_counts(X: int, q, a: int, R: float) -> TailPairCounts:
    """Count pairs m <= X/R^2, r <= sqrt(X/m), r^2 m = a (mod q), split at the
    cut X/(R^2 log X); small_m + large_m dominates |tail| of split_count.

    Counted residue-class by residue-class in O(sqrt(X)) exact steps; the
    brute-force double loop stays in the tests as the oracle."""
    q = as_modulus(q).require_prime()
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    if X < 3:
        raise ValueError("X must be >= 3")
    if not 1 < R <= X ** (1.0 / 3.0) * (1 + 1e-12):
        raise ValueError(f"cut R = {R} outside (1, X^(1/3) = {X ** (1 / 3):.6g}]")
    m_cut = math.floor(X / (R * R * math.log(X)))
    m_top = math.floor(X / (R * R))
    inv_sq = _inverse_squares(X, q)
    small = large = 0
    for r in range(1, math.isqrt(X) + 1):
        if r % q == 0:
            continue
        c = a * inv_sq(r) % q
        m_lim = X // (r * r)
        below_cut = _count_congruent(min(m_cut, m_lim), q, c)
        below_top = _count_congruent(min(m_top, m_lim), q, c)
        small += below_cut
        large += below_top - below_cut
    return TailPairCounts(small_m=small, large_m=large)


@dataclass(frozen=True)
class ParameterSchedule:
    """Evaluated parameter choices for one of the three bound regimes."""

    regime: int
    r_cut: float
    r0_cut: Optional[float] = None
    sharpness: Optional[float] = None  # Y
    level: Optional[float] = None  # D
    gamma: Optional[float] = None
    delta1: Optional[float] = None
    eta: Optional[float] = None


def parameter_schedule(
    regime: int,
    X: int,
    q: int,
    delta1: Optional[float] = None,
    eta: Optional[float] = None,
    gamma: Optional[float] = None,
) -> ParameterSchedule:
    """The exact parameter formulas for the requested regime.

    Regime 1 (q <= X^(2/5)):  Y = min(q^(1/96), X^(1/49) q^(-5/98), X^(1/5) q^(-2/5)),
    R = (X/q)^(1/2) Y^(1/2), R0 = (X/q)^(1/2) Y^(-1/2).

    Regime 2 (X^eta <= q <= X^(1/2 - eta), caller supplies eta and delta1;
    no effective delta2 is claimed):  R = (X/q)^(1/2 + delta1),
    R0 = (X/q)^(1/2 - delta1), Y = (X/q)^(2 delta1).

    Regime 3 (0 < gamma < 1/2, X > 3):  D = (log X)^gamma,
    R = X^(1/3) (log X)^(-1/6 + gamma/3) (loglog X)^(7/3).  At desk-scale X
    the asymptotic R formula can exceed X^(1/3); callers clamp before using
    it as a pair-count cut.
    """
    if X < 2 or q < 2:
        raise RegimeError("need X >= 2 and q >= 2")
    if regime == 1:
        if q > X ** 0.4:
            raise RegimeError(f"regime 1 needs q <= X^(2/5); q = {q}, X^(2/5) = {X ** 0.4:.6g}")
        Y = min(q ** (1 / 96), X ** (1 / 49) * q ** (-5 / 98), X ** 0.2 * q ** (-0.4))
        root = math.sqrt(X / q)
        return ParameterSchedule(regime=1, r_cut=root * math.sqrt(Y), r0_cut=root / math.sqrt(Y), sharpness=Y)
    if regime == 2:
        if eta is None or delta1 is None or not 0 < eta < 0.25 or delta1 <= 0:
            raise RegimeError("regime 2 needs 0 < eta < 1/4 and delta1 > 0")
        if not X**eta <= q <= X ** (0.5 - eta):
            raise RegimeError(
                f"regime 2 needs X^eta <= q <= X^(1/2 - eta); q = {q}, bounds = "
                f"[{X ** eta:.6g}, {X ** (0.5 - eta):.6g}]"
            )
        ratio = X / q
        R = ratio ** (0.5 + delta1)
        if R > math.sqrt(X):
            raise RegimeError(f"R = (X/q)^(1/2 + delta1) = {R:.6g} exceeds sqrt(X); reduce delta1")
        return ParameterSchedule(
            regime=2,
            r_cut=R,
            r0_cut=ratio ** (0.5 - delta1),
            sharpness=ratio ** (2 * delta1),
            delta1=delta1,
            eta=eta,
        )
    if regime == 3:
        if gamma is None or not 0 < gamma < 0.5:
            raise RegimeError("regime 3 needs 0 < gamma < 1/2")
        if X <= 3:
            raise RegimeError("regime 3 needs X > 3")
        logx = math.log(X)
        R = X ** (1 / 3) * logx ** (-1 / 6 + gamma / 3) * math.log(logx) ** (7 / 3)
        return ParameterSchedule(regime=3, r_cut=R, level=logx**gamma, gamma=gamma)
    raise RegimeError(f"unknown regime {regime!r}")


def bound_envelope(kind, X: int, q: int, epsilon: float = 0.0, gamma: Optional[float] = None) -> float:
    """Theoretical bound right-hand sides with implied constant 1.

    kind 1:      (X/q)^(1/2+eps) q^(-1/192) + (X/q)^(24/49+eps) q^(3/196).
    kind 3:      X^(1/3) (llX)^(7/3) / (log X)^(1/6-gamma/3)
                 + X (llX)^2 / (q (log X)^(gamma/2));  needs gamma.
    kind 'hooley': X^(1/2) q^(-1/2) + q^(1/2+eps), the comparison envelope.

    Regime 2's exponent saving delta(eta) is ineffective, so no envelope can
    be evaluated for it.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if X < 2 or q < 2:
        raise ValueError("need X >= 2 and q >= 2")
    ratio = X / q
    if kind == 1:
        return ratio ** (0.5 + epsilon) * q ** (-1 / 192) + ratio ** (24 / 49 + epsilon) * q ** (3 / 196)
    if kind == 3:
        if gamma is None or not 0 < gamma < 0.5:
            raise ValueError("kind 3 needs 0 < gamma < 1/2")
        if X <= 3:
            raise ValueError("kind 3 needs X > 3")
        logx = math.log(X)
        llx = math.log(logx)
        return X ** (1 / 3) * llx ** (7 / 3) / logx ** (1 / 6 - gamma / 3) + X * llx**2 / (q * logx ** (gamma / 2))
    if kind == "hooley":
        return math.sqrt(X) / math.sqrt(q) + q ** (0.5 + epsilon)
    if kind == 2:
        raise ValueError("regime 2 has an ineffective exponent saving; no envelope is evaluable")
    raise ValueError(f"unknown envelope kind {kind!r}")


@dataclass(frozen=True)
class DecompositionRecord:
    """One full decomposition evaluation at (X, q, a) with cut R."""

    X: int
    q: int
    a: int
    r_cut: float
    total: int
    head: int
    tail: int
    smooth: float
    psi_end: float
    psi_origin: float
    boundary: bool
    small_m: Optional[int] = None
    large_m: Optional[int] = None


def decompose(X: int, q, a: int, R: float, tail_counts: bool = False) -> DecompositionRecord:
    """Evaluate the full decomposition at one tuple; ``tail_counts`` adds the
    pair counts when R is inside their regime (R <= X^(1/3))."""
    qm = as_modulus(q)
    parts = split_count(X, qm, a, R)
    psi_parts = head_psi_parts(X, qm, a, R)
    small_m = large_m = None
    if tail_counts:
        pairs = tail_pair_counts(X, qm, a, R)
        small_m, large_m = pairs.small_m, pairs.large_m
    return DecompositionRecord(
        X=X,
        q=qm.q,
        a=a % qm.q,
        r_cut=R,
        total=parts.total,
        head=parts.head,
        tail=parts.tail,
        smooth=psi_parts.smooth,
        psi_end=psi_parts.psi_end,
        psi_origin=psi_parts.psi_origin,
        boundary=psi_parts.boundary,
        small_m=small_m,
        large_m=large_m,
    )
