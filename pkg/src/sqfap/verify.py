"""Cross-module invariant suites behind the ``verify`` CLI subcommand.

Each suite returns a list of CheckResult rows; a check that fails carries the
first counterexample found.  Everything is deterministic given the seed.
"""

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import decomposition, distribution, expsums, sawtooth, sieve
from .arith import is_prime, primes_upto


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: Optional[dict] = None


@dataclass
class _Recorder:
    results: list = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "", counterexample: Optional[dict] = None):
        self.results.append(CheckResult(name, bool(passed), detail, None if passed else counterexample))
        return passed


def _random_prime(rng, lo, hi):
    while True:
        p = rng.randint(lo, hi)
        if is_prime(p):
            return p


def identities_suite(seed: int = 20250808, tuples: int = 200) -> list:
    """Exact split/count/psi identities on random tuples, plus zero sums."""
    rng = random.Random(seed)
    rec = _Recorder()

    split_bad = None
    psi_bad = None
    checked_psi = 0
    for _ in range(tuples):
        X = rng.randint(50, 50_000)
        q = _random_prime(rng, 3, 997)
        a = rng.randint(1, q - 1)
        R = rng.uniform(1.0 + 1e-9, math.sqrt(X))
        parts = decomposition.split_count(X, q, a, R)
        direct = distribution.count_squarefree_in_progression(X, q, a)
        if parts.total != direct and split_bad is None:
            split_bad = {"X": X, "q": q, "a": a, "R": R, "split": parts.total, "count": direct}
        smooth, p_end, p_origin, boundary = decomposition._head_psi_parts_exact(X, q, a, R)
        if not boundary:
            checked_psi += 1
            if smooth - p_end + p_origin != parts.head and psi_bad is None:
                psi_bad = {"X": X, "q": q, "a": a, "R": R}
    rec.check("identities.split_equals_count", split_bad is None, f"{tuples} tuples", split_bad)
    rec.check("identities.head_psi_identity", psi_bad is None, f"{checked_psi} non-boundary tuples", psi_bad)

    zero_bad = None
    var_bad = None
    for _ in range(25):
        X = rng.randint(10, 3000)
        q = _random_prime(rng, 3, 199)
        records = [distribution.error_term(X, q, a) for a in range(1, q)]
        total = sum(r.error for r in records)
        if total != 0 and zero_bad is None:
            zero_bad = {"X": X, "q": q, "sum": str(total)}
        composed = sum(r.error**2 for r in records)
        if composed != distribution.variance_over_residues(X, q) and var_bad is None:
            var_bad = {"X": X, "q": q}
    rec.check("identities.zero_sum", zero_bad is None, "25 (X, q) pairs, exact", zero_bad)
    rec.check("identities.variance_composition", var_bad is None, "25 (X, q) pairs, exact", var_bad)
    return rec.results


def expsums_suite(seed: int = 20250808) -> list:
    rng = random.Random(seed)
    rec = _Recorder()

    gauss_bad = None
    for q in primes_upto(1000):
        q = int(q)
        if q < 3:
            continue
        value = expsums.inverse_square_phase_sum(0, q - 1, q, 1).value
        expected = complex(math.sqrt(q) - 1.0) if q % 4 == 1 else complex(-1.0, math.sqrt(q))
        if abs(value - expected) > 1e-6 and gauss_bad is None:
            gauss_bad = {"q": q, "value": str(value), "expected": str(expected)}
    rec.check("expsums.gauss_identity", gauss_bad is None, "all primes 3..997, tol 1e-6", gauss_bad)

    conj_bad = None
    for _ in range(40):
        q = _random_prime(rng, 5, 499)
        a = rng.randint(1, q - 1)
        R = rng.randint(2, 300)
        pairs = (
            ("twisted", expsums.twisted_mobius_sum(R, q, a).value, expsums.twisted_mobius_sum(R, q, q - a).value),
            (
                "inverse_square",
                expsums.inverse_square_phase_sum(0, R, q, a).value,
                expsums.inverse_square_phase_sum(0, R, q, q - a).value,
            ),
            ("kloosterman", expsums.short_kloosterman_sum(R, q, a).value, expsums.short_kloosterman_sum(R, q, q - a).value),
        )
        for label, plus, minus in pairs:
            if abs(plus.conjugate() - minus) > 1e-12 and conj_bad is None:
                conj_bad = {"sum": label, "q": q, "a": a, "R": R}
    rec.check("expsums.conjugation_symmetry", conj_bad is None, "40 tuples, tol 1e-12", conj_bad)

    add_bad = None
    for _ in range(40):
        q = _random_prime(rng, 5, 499)
        a = rng.randint(1, q - 1)
        cuts = sorted(rng.uniform(0, 400) for _ in range(3))
        left = expsums.inverse_square_phase_sum(cuts[0], cuts[1], q, a).value
        right = expsums.inverse_square_phase_sum(cuts[1], cuts[2], q, a).value
        whole = expsums.inverse_square_phase_sum(cuts[0], cuts[2], q, a).value
        if abs(left + right - whole) > 1e-9 and add_bad is None:
            add_bad = {"q": q, "a": a, "cuts": cuts}
    rec.check("expsums.range_additivity", add_bad is None, "40 random splits, tol 1e-9", add_bad)

    mixed_bad = None
    for q in primes_upto(50):
        q = int(q)
        if q < 3:
            continue
        for alpha in range(1, q):
            for beta in range(1, q):
                fast = expsums.complete_mixed_sum(q, alpha, beta).value
                brute = sum(
                    cmath.exp(2j * math.pi * ((alpha * h + beta * pow(h, -2, q)) % q) / q) for h in range(1, q)
                )
                if abs(fast - brute) > 1e-9 and mixed_bad is None:
                    mixed_bad = {"q": q, "alpha": alpha, "beta": beta}
    rec.check("expsums.mixed_sum_bruteforce", mixed_bad is None, "all primes q <= 50, all (alpha, beta)", mixed_bad)

    trivial_bad = None
    for _ in range(60):
        q = _random_prime(rng, 5, 499)
        a = rng.randint(1, q - 1)
        kind = rng.choice(("twisted", "inverse_square", "kloosterman", "mixed", "theta"))
        if kind == "twisted":
            v = expsums.twisted_mobius_sum(rng.randint(1, 400), q, a)
        elif kind == "inverse_square":
            v = expsums.inverse_square_phase_sum(0, rng.uniform(1, 400), q, a)
        elif kind == "kloosterman":
            v = expsums.short_kloosterman_sum(rng.randint(1, 400), q, a)
        elif kind == "mixed":
            v = expsums.complete_mixed_sum(q, rng.randint(0, q - 1), rng.randint(0, q - 1))
        else:
            v = expsums.linear_phase_sum(rng.uniform(0, 400), rng.randint(0, q - 1), q)
        if abs(v.value) > v.trivial_bound + 1e-6 * max(v.term_count, 1) and trivial_bad is None:
            trivial_bad = {"kind": kind, "q": q, "a": a, "value": abs(v.value), "bound": v.trivial_bound}
    rec.check("expsums.trivial_bound", trivial_bad is None, "60 random sums", trivial_bad)

    kloo_bad = None
    for _ in range(20):
        q = _random_prime(rng, 3, 2000)
        a = rng.randint(1, q - 1)
        v = expsums.short_kloosterman_sum(q - 1, q, a).value
        if abs(v - (-1.0)) > 1e-9 and kloo_bad is None:
            kloo_bad = {"q": q, "a": a, "value": str(v)}
    rec.check("expsums.kloosterman_full_range", kloo_bad is None, "20 tuples, tol 1e-9", kloo_bad)
    return rec.results


def psi_suite(sharpness_values=(5.0, 20.0, 100.0), grid_points: int = 10**4) -> list:
    rec = _Recorder()
    grid = np.arange(grid_points) / grid_points
    saw = grid - np.floor(grid) - 0.5
    for Y in sharpness_values:
        approx = sawtooth.build_approximation(Y)
        excess = np.abs(saw - approx.approximant(grid)) - approx.majorant(grid)
        worst = float(excess.max())
        rec.check(
            f"psi.majorization_Y{Y:g}",
            worst <= 1e-9,
            f"max(|psi - A| - B) = {worst:.3e} on {grid_points} points",
            None if worst <= 1e-9 else {"Y": Y, "worst": worst, "x": float(grid[int(excess.argmax())])},
        )
        rec.check(
            f"psi.coefficient_decay_Y{Y:g}",
            approx.decay_constant <= 10.0,
            f"measured constant {approx.decay_constant:.3f} <= 10",
            None if approx.decay_constant <= 10.0 else {"Y": Y, "constant": approx.decay_constant},
        )
        mean = float(approx.majorant(grid).mean())
        lo, hi = 1.0 / Y - 1e-6, 1.0 / Y + 4.0 / math.sqrt(Y)
        rec.check(
            f"psi.majorant_mean_Y{Y:g}",
            lo <= mean <= hi,
            f"grid mean {mean:.6f} in [{lo:.6f}, {hi:.6f}]",
            None if lo <= mean <= hi else {"Y": Y, "mean": mean},
        )
        nonneg = float(approx.majorant(grid).min())
        rec.check(
            f"psi.majorant_nonnegative_Y{Y:g}",
            nonneg >= -1e-12,
            f"min B = {nonneg:.3e}",
            None if nonneg >= -1e-12 else {"Y": Y, "min": nonneg},
        )
    return rec.results


def sieve_suite(seed: int = 20250808, instances: int = 100) -> list:
    rng = random.Random(seed)
    rec = _Recorder()
    sound_bad = None
    square_bad = None
    for _ in range(instances):
        X = rng.randint(2_000, 100_000)
        q = _random_prime(rng, 5, 997)
        a = rng.randint(1, q - 1)
        R = max(2.0, X ** (1 / 3) * rng.uniform(0.6, 1.4))
        lo_m = X / (2 * R * R * math.log(X))
        hi_m = 2 * X / (R * R)
        # largest power of two <= hi_m; hi_m/lo_m = 4 log X > 4 puts it in range
        M = 1
        while 2 * M <= hi_m:
            M *= 2
        assert lo_m < M <= hi_m
        D = rng.uniform(9.0, 200.0)
        instance = sieve.square_detection_instance(X, M, q, a, D)
        report = sieve.sieve_upper_bound(instance, with_exact=True)
        brute = sieve.square_pair_count_bruteforce(X, M, q, a)
        if (report.bound < report.exact or report.bound < brute) and sound_bad is None:
            sound_bad = {"X": X, "M": M, "q": q, "a": a, "D": D, "bound": report.bound, "exact": report.exact}
        if sieve.square_weight_total(instance) != brute and square_bad is None:
            square_bad = {"X": X, "M": M, "q": q, "a": a}
    rec.check("sieve.upper_bound_soundness", sound_bad is None, f"{instances} random instances", sound_bad)
    rec.check("sieve.square_weight_identity", square_bad is None, f"{instances} random instances", square_bad)

    base = sieve.square_detection_instance(5000, 16, 101, 5, 190.0)
    j_values = []
    for level in (4.0, 30.0, 80.0, 190.0):
        inst = sieve.SieveInstance(
            weights=base.weights,
            sieving_primes=base.sieving_primes,
            forbidden=base.forbidden,
            density=base.density,
            scale=base.scale,
            level=level,
        )
        j_values.append(sieve.sieve_upper_bound(inst).density_divisor_sum)
    monotone = all(x <= y + 1e-12 for x, y in zip(j_values, j_values[1:]))
    rec.check("sieve.j_monotone_in_level", monotone, f"J over levels: {j_values}", None if monotone else {"J": j_values})

    mult_ok = True
    for d1 in (3, 5, 7, 11):
        for d2 in (3, 5, 7, 11):
            if d1 == d2 or d1 * d2 > base.prime_product or base.prime_product % (d1 * d2):
                continue
            if base.density_at(d1 * d2) != base.density_at(d1) * base.density_at(d2):
                mult_ok = False
    rec.check("sieve.density_multiplicative", mult_ok, "coprime divisor pairs of P")
    return rec.results


SUITE_NAMES = ("identities", "expsums", "psi", "sieve")


def run_suites(names, seed: int = 20250808) -> list:
    out = []
    for name in names:
        if name == "identities":
            out.extend(identities_suite(seed=seed))
        elif name == "expsums":
            out.extend(expsums_suite(seed=seed))
        elif name == "psi":
            out.extend(psi_suite())
        elif name == "sieve":
            out.extend(sieve_suite(seed=seed))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out
