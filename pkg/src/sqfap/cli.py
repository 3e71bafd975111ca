"""Command-line front end: grid scans, exponent fits, and verification suites.

Determinism contract: a fixed config and seed produce byte-identical output
files regardless of thread count.  Work items are independent (X, q) cells;
results are emitted in ascending (X, q, a) order, exact rationals are written
as num/den strings, and floats carry 17 significant digits.

Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

import argparse
import json
import math
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from . import decomposition, expsums, sawtooth, sieve, verify
from .arith import is_prime, primes_upto
from .backend import BACKEND
from .distribution import reference_term, squarefree_indicator

SCAN_FIELDS = ("X", "q", "a", "count", "reference", "error", "ratio_half", "ratio_quarter")
ENVELOPE_FIELDS = ("envelope", "envelope_ratio")


def _f17(x: float) -> str:
    return format(float(x), ".17g")


class RowWriter:
    """Streams header metadata plus rows to CSV or JSONL deterministically."""

    def __init__(self, stream, fmt: str, fields: Tuple[str, ...]):
        self.stream = stream
        self.fmt = fmt
        self.fields = fields

    def header(self, meta: dict):
        if self.fmt == "csv":
            pairs = " ".join(f"{k}={v}" for k, v in meta.items())
            self.stream.write(f"# sqfap {pairs}\n")
            self.stream.write(",".join(self.fields) + "\n")
        else:
            self.stream.write(json.dumps({"header": meta}, sort_keys=True) + "\n")

    def row(self, values: dict):
        if self.fmt == "csv":
            self.stream.write(",".join(str(values[k]) for k in self.fields) + "\n")
        else:
            self.stream.write(json.dumps({k: values[k] for k in self.fields}) + "\n")


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline="\n"), True
    except OSError as exc:
        raise UsageError(f"cannot open output path {path!r}: {exc}")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ScanConfig:
    """One scan request: the (X, q, a) grid, output target, and envelope knobs."""

    X_list: Tuple[int, ...]
    q_values: Tuple[int, ...]
    a_spec: str  # "all" or "sample:K"
    out: Optional[str]
    fmt: str
    threads: int
    seed: int
    epsilon: float
    regime: Optional[object] = None  # None, 1, 3, or "hooley"
    gamma: float = 0.25


@dataclass(frozen=True)
class FitResult:
    """Least-squares slope of log max|E| against log(X/q)."""

    slope: float
    intercept: float
    n_points: int
    residual_rms: float


def fit_exponent(records) -> FitResult:
    """Fit log(max_a |E|) = slope * log(X/q) + intercept over (X, q) groups.

    ``records`` yields (X, q, abs_error) rows; groups with max |E| = 0 are
    dropped.  Raises ValueError on a degenerate design (fewer than 3 usable
    groups, or no spread in X/q).
    """
    groups = {}
    for X, q, abs_err in records:
        key = (int(X), int(q))
        err = abs(abs_err)
        if key not in groups or err > groups[key]:
            groups[key] = err
    points = [(math.log(X / q), math.log(float(e))) for (X, q), e in sorted(groups.items()) if e > 0]
    if len(points) < 3:
        raise ValueError(f"degenerate design: only {len(points)} groups with nonzero max |E|")
    x = np.array([p[0] for p in points])
    y = np.array([p[1] for p in points])
    if np.ptp(x) == 0:
        raise ValueError("degenerate design: all groups share the same X/q")
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ np.array([slope, intercept])
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        n_points=len(points),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
    )


def _residues_for(q: int, a_spec: str, seed: int):
    if a_spec == "all":
        return range(1, q)
    if a_spec.startswith("sample:"):
        k = int(a_spec.split(":", 1)[1])
        rng = random.Random(seed * 1_000_003 + q)
        pool = list(range(1, q))
        return sorted(rng.sample(pool, min(k, len(pool))))
    raise UsageError(f"bad residue spec {a_spec!r}; use 'all' or 'sample:K'")


def _scan_cell(X: int, q: int, positions: np.ndarray, cfg: ScanConfig):
    """All rows for one (X, q) cell, in ascending a."""
    cut = int(np.searchsorted(positions, X, side="right"))
    pos = positions[:cut]
    counts = np.bincount(pos % q, minlength=q)
    coprime_total = cut - int(counts[0])
    phi = q - 1
    envelope = None
    if cfg.regime is not None:
        envelope = decomposition.bound_envelope(cfg.regime, X, q, epsilon=cfg.epsilon, gamma=cfg.gamma)
    scale = X / q
    rows = []
    for a in _residues_for(q, cfg.a_spec, cfg.seed):
        count = int(counts[a])
        err = Fraction(count * phi - coprime_total, phi)
        fe = float(err)
        row = {
            "X": X,
            "q": q,
            "a": a,
            "count": count,
            "reference": str(Fraction(coprime_total, phi)),
            "error": str(err),
            "ratio_half": _f17(fe / scale**0.5),
            "ratio_quarter": _f17(fe / scale**0.25),
        }
        if envelope is not None:
            row["envelope"] = _f17(envelope)
            row["envelope_ratio"] = _f17(abs(fe) / envelope)
        rows.append(row)
    return rows


def run_scan(cfg: ScanConfig) -> dict:
    """Execute a scan; returns summary stats (rows written, max |ratio_half|)."""
    for q in cfg.q_values:
        if not is_prime(q):
            raise UsageError(f"scan moduli must be prime; got {q}")
    if not cfg.X_list or min(cfg.X_list) < 1:
        raise UsageError("scan needs at least one X >= 1")
    X_sorted = tuple(sorted(set(cfg.X_list)))
    q_sorted = tuple(sorted(set(cfg.q_values)))
    sf = squarefree_indicator(1, max(X_sorted))
    positions = (np.nonzero(sf)[0] + 1).astype(np.int64)
    positions.setflags(write=False)

    fields = SCAN_FIELDS + (ENVELOPE_FIELDS if cfg.regime is not None else ())
    meta = {
        "command": "scan",
        "seed": cfg.seed,
        "epsilon": cfg.epsilon,
        "regime": cfg.regime if cfg.regime is not None else "none",
        "gamma": cfg.gamma,
        "X": ",".join(map(str, X_sorted)),
        "q": ",".join(map(str, q_sorted)),
        "a": cfg.a_spec,
    }
    jobs = [(X, q) for X in X_sorted for q in q_sorted]
    stream, owned = _open_out(cfg.out)
    rows_written = 0
    max_ratio_half = 0.0
    try:
        writer = RowWriter(stream, cfg.fmt, fields)
        writer.header(meta)

        def work(job):
            return _scan_cell(job[0], job[1], positions, cfg)

        if cfg.threads > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                cell_iter = pool.map(work, jobs)
                for rows in cell_iter:
                    for row in rows:
                        writer.row(row)
                        rows_written += 1
                        max_ratio_half = max(max_ratio_half, abs(float(row["ratio_half"])))
        else:
            for job in jobs:
                for row in work(job):
                    writer.row(row)
                    rows_written += 1
                    max_ratio_half = max(max_ratio_half, abs(float(row["ratio_half"])))
    finally:
        if owned:
            stream.close()
    return {"rows": rows_written, "max_ratio_half": max_ratio_half}


def read_scan_rows(path: str, fmt: Optional[str] = None):
    """Parse a scan output file back into (X, q, a, error Fraction, ratio_half)."""
    if fmt is None:
        fmt = "jsonl" if path.endswith(".jsonl") else "csv"
    rows = []
    with open(path) as stream:
        if fmt == "jsonl":
            for line in stream:
                obj = json.loads(line)
                if "header" in obj:
                    continue
                rows.append(
                    (int(obj["X"]), int(obj["q"]), int(obj["a"]), Fraction(obj["error"]), float(obj["ratio_half"]))
                )
        else:
            header = None
            for line in stream:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                if header is None:
                    header = line.split(",")
                    continue
                rec = dict(zip(header, line.split(",")))
                rows.append(
                    (int(rec["X"]), int(rec["q"]), int(rec["a"]), Fraction(rec["error"]), float(rec["ratio_half"]))
                )
    return rows


# ----------------------------------------------------------------- commands


def _cmd_scan(args) -> int:
    regime = None
    if args.regime is not None:
        regime = "hooley" if args.regime == "hooley" else int(args.regime)
    if args.q_range is not None:
        lo, hi = args.q_range
        q_values = tuple(int(p) for p in primes_upto(hi) if p >= lo)
    elif args.q:
        q_values = tuple(args.q)
    else:
        raise UsageError("scan needs --q or --q-range")
    cfg = ScanConfig(
        X_list=tuple(args.X),
        q_values=q_values,
        a_spec=args.a,
        out=args.out,
        fmt=args.format,
        threads=args.threads,
        seed=args.seed,
        epsilon=args.epsilon,
        regime=regime,
        gamma=args.gamma,
    )
    stats = run_scan(cfg)
    print(f"scan: {stats['rows']} rows, max |ratio_half| = {stats['max_ratio_half']:.6g}", file=sys.stderr)
    return 0


def _cmd_fit(args) -> int:
    rows = read_scan_rows(args.input, args.format)
    try:
        result = fit_exponent((X, q, abs(err)) for X, q, a, err, _ in rows)
    except ValueError as exc:
        print(f"fit: {exc}", file=sys.stderr)
        return 2
    max_half = max((abs(r[4]) for r in rows), default=0.0)
    print(
        f"fit: slope={result.slope:.6f} intercept={result.intercept:.6f} "
        f"n_points={result.n_points} residual_rms={result.residual_rms:.6f} "
        f"max_ratio_half={max_half:.6g}"
    )
    return 0


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"expsum {args.kind} needs --{name.replace('_', '-')}")


def _cmd_expsum(args) -> int:
    kind = args.kind
    params = {}
    if kind == "twisted":
        _need(args, "R", "q")
        params = {"R": args.R, "q": args.q, "a": args.a}
        v = expsums.twisted_mobius_sum(args.R, args.q, args.a)
    elif kind == "inverse-square":
        _need(args, "A", "B", "q")
        params = {"A": args.A, "B": args.B, "q": args.q, "a": args.a}
        v = expsums.inverse_square_phase_sum(args.A, args.B, args.q, args.a)
    elif kind == "mixed":
        _need(args, "q", "alpha", "beta")
        params = {"q": args.q, "alpha": args.alpha, "beta": args.beta}
        v = expsums.complete_mixed_sum(args.q, args.alpha, args.beta)
    elif kind == "theta":
        _need(args, "t", "alpha", "q")
        params = {"t": args.t, "alpha": args.alpha, "q": args.q}
        v = expsums.linear_phase_sum(args.t, args.alpha, args.q)
    elif kind == "kloosterman":
        _need(args, "M", "q")
        params = {"M": args.M, "q": args.q, "a": args.a}
        v = expsums.short_kloosterman_sum(args.M, args.q, args.a)
    elif kind == "max-twisted":
        _need(args, "t", "q")
        value = expsums.max_twisted_mobius_sum(int(args.t), args.q)
        print(f"max-twisted: t={args.t:g} q={args.q} value={value!r}")
        _write_single_row(args, "expsum", {"kind": kind, "t": int(args.t), "q": args.q, "value": _f17(value)})
        return 0
    elif kind == "weil-scan":
        value = expsums.weil_constant_scan(args.q_max)
        print(f"weil-scan: q_max={args.q_max} max_ratio={value!r}")
        _write_single_row(args, "expsum", {"kind": kind, "q_max": args.q_max, "max_ratio": _f17(value)})
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown expsum kind {kind}")
    ratio = abs(v.value) / v.envelope if v.envelope else math.nan
    print(
        f"{kind}: value={v.value.real:.12g}{v.value.imag:+.12g}i |value|={abs(v.value):.12g} "
        f"terms={v.term_count} trivial={v.trivial_bound:g} envelope={v.envelope} ratio={ratio:.6g}"
    )
    row = {"kind": kind}
    row.update(params)
    row.update(
        {
            "value_re": _f17(v.value.real),
            "value_im": _f17(v.value.imag),
            "magnitude": _f17(abs(v.value)),
            "term_count": v.term_count,
            "trivial_bound": _f17(v.trivial_bound),
            "envelope": _f17(v.envelope) if v.envelope is not None else "",
            "envelope_ratio": _f17(ratio) if v.envelope else "",
        }
    )
    _write_single_row(args, "expsum", row)
    return 0


def _write_single_row(args, command: str, row: dict):
    """Write one structured row to --out when given (CSV/JSONL per --format)."""
    if getattr(args, "out", None) is None:
        return
    stream, owned = _open_out(args.out)
    try:
        writer = RowWriter(stream, args.format, tuple(row))
        writer.header({"command": command})
        writer.row(row)
    finally:
        if owned:
            stream.close()


def _cmd_decompose(args) -> int:
    record = decomposition.decompose(args.X, args.q, args.a, args.R, tail_counts=args.tail_counts)
    err = record.total - reference_term(args.X, args.q)
    row = {
        "X": record.X,
        "q": record.q,
        "a": record.a,
        "R": _f17(record.r_cut),
        "total": record.total,
        "head": record.head,
        "tail": record.tail,
        "smooth": _f17(record.smooth),
        "psi_end": _f17(record.psi_end),
        "psi_origin": _f17(record.psi_origin),
        "boundary": record.boundary,
        "error": str(err),
    }
    if record.small_m is not None:
        row["small_m"] = record.small_m
        row["large_m"] = record.large_m
    if args.regime is not None:
        regime = "hooley" if args.regime == "hooley" else int(args.regime)
        env = decomposition.bound_envelope(regime, args.X, args.q, epsilon=args.epsilon, gamma=args.gamma)
        row["envelope"] = _f17(env)
        row["envelope_ratio"] = _f17(abs(float(err)) / env)
        if regime in (1, 3):
            sched = decomposition.parameter_schedule(
                regime, args.X, args.q, delta1=args.delta1, eta=args.eta, gamma=args.gamma
            )
            row["schedule_R"] = _f17(sched.r_cut)
            if sched.r0_cut is not None:
                row["schedule_R0"] = _f17(sched.r0_cut)
            if sched.sharpness is not None:
                row["schedule_Y"] = _f17(sched.sharpness)
            if sched.level is not None:
                row["schedule_D"] = _f17(sched.level)
    print("decompose: " + " ".join(f"{k}={v}" for k, v in row.items()))
    _write_single_row(args, "decompose", row)
    return 0


def _cmd_sieve_check(args) -> int:
    rng = random.Random(args.seed)
    fields = ("X", "M", "q", "a", "D", "bound", "j_sum", "sifted", "pairs", "sound")
    stream, owned = _open_out(args.out)
    failures = 0
    try:
        writer = RowWriter(stream, args.format, fields)
        writer.header({"command": "sieve-check", "seed": args.seed, "count": args.count})
        for _ in range(args.count):
            X = rng.randint(2_000, args.x_max)
            q = _random_prime(rng, 5, args.q_max)
            a = rng.randint(1, q - 1)
            R = max(2.0, X ** (1 / 3) * rng.uniform(0.6, 1.4))
            M = 1
            while 2 * M <= 2 * X / (R * R):
                M *= 2
            D = rng.uniform(9.0, args.level_max)
            instance = sieve.square_detection_instance(X, M, q, a, D)
            report = sieve.sieve_upper_bound(instance, with_exact=True)
            pairs = sieve.square_pair_count_bruteforce(X, M, q, a)
            sound = report.bound >= report.exact and report.bound >= pairs
            sound = sound and sieve.square_weight_total(instance) == pairs
            if not sound:
                failures += 1
            writer.row(
                {
                    "X": X,
                    "M": M,
                    "q": q,
                    "a": a,
                    "D": _f17(D),
                    "bound": _f17(report.bound),
                    "j_sum": _f17(report.density_divisor_sum),
                    "sifted": report.exact,
                    "pairs": pairs,
                    "sound": sound,
                }
            )
    finally:
        if owned:
            stream.close()
    print(f"sieve-check: {args.count - failures}/{args.count} sound", file=sys.stderr)
    return 1 if failures else 0


def _cmd_psi_check(args) -> int:
    fields = ("Y", "degree", "truncation", "decay_constant", "worst_excess", "grid_mean", "ok")
    stream, owned = _open_out(args.out)
    failures = 0
    try:
        writer = RowWriter(stream, args.format, fields)
        writer.header({"command": "psi-check", "grid": args.grid})
        grid = np.arange(args.grid) / args.grid
        saw = grid - np.floor(grid) - 0.5
        for Y in args.Y:
            approx = sawtooth.build_approximation(Y)
            excess = float((np.abs(saw - approx.approximant(grid)) - approx.majorant(grid)).max())
            mean = float(approx.majorant(grid).mean())
            ok = (
                excess <= 1e-9
                and approx.decay_constant <= 10.0
                and 1.0 / Y - 1e-6 <= mean <= 1.0 / Y + 4.0 / math.sqrt(Y)
            )
            if not ok:
                failures += 1
            writer.row(
                {
                    "Y": _f17(Y),
                    "degree": approx.degree,
                    "truncation": approx.truncation,
                    "decay_constant": _f17(approx.decay_constant),
                    "worst_excess": _f17(excess),
                    "grid_mean": _f17(mean),
                    "ok": ok,
                }
            )
    finally:
        if owned:
            stream.close()
    print(f"psi-check: {len(args.Y) - failures}/{len(args.Y)} sharpness values pass", file=sys.stderr)
    return 1 if failures else 0


def _cmd_verify(args) -> int:
    names = verify.SUITE_NAMES if args.suite == "all" else (args.suite,)
    results = verify.run_suites(names, seed=args.seed)
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}"
        if not r.passed and r.counterexample is not None:
            line += f" counterexample={r.counterexample}"
        print(line)
    passed = sum(r.passed for r in results)
    print(f"# verify[{args.suite}]: {passed}/{len(results)} checks passed (backend={BACKEND})")
    if args.out:
        with open(args.out, "w", newline="\n") as stream:
            for r in results:
                stream.write(
                    json.dumps(
                        {"name": r.name, "passed": r.passed, "detail": r.detail, "counterexample": r.counterexample}
                    )
                    + "\n"
                )
    return 0 if passed == len(results) else 1


def _random_prime(rng, lo, hi):
    while True:
        p = rng.randint(lo, hi)
        if is_prime(p):
            return p


# ----------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqfap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--epsilon", type=float, default=0.0)

    p = sub.add_parser("scan", help="error-term grid scan")
    common(p)
    p.add_argument("--X", type=int, nargs="+", required=True)
    p.add_argument("--q", type=int, nargs="*", help="explicit prime moduli")
    p.add_argument("--q-range", type=int, nargs=2, metavar=("LO", "HI"), help="all primes in [LO, HI]")
    p.add_argument("--a", default="all", help="'all' or 'sample:K'")
    p.add_argument("--regime", choices=("1", "3", "hooley"), default=None)
    p.add_argument("--gamma", type=float, default=0.25)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("fit", help="log-log exponent fit of a scan file")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default=None)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("expsum", help="evaluate one exponential sum")
    p.add_argument(
        "kind",
        choices=("twisted", "max-twisted", "inverse-square", "mixed", "theta", "kloosterman", "weil-scan"),
    )
    p.add_argument("--out", default=None, help="also write the row to this path")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--q", type=int)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--R", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--A", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--q-max", type=int, default=199)
    p.set_defaults(func=_cmd_expsum)

    p = sub.add_parser("decompose", help="exact decomposition at one tuple")
    p.add_argument("--out", default=None, help="also write the row to this path")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--tail-counts", action="store_true")
    p.add_argument("--regime", choices=("1", "3", "hooley"), default=None)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.25)
    p.add_argument("--delta1", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("sieve-check", help="randomized square-detection sieve soundness")
    common(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--x-max", type=int, default=100_000)
    p.add_argument("--q-max", type=int, default=997)
    p.add_argument("--level-max", type=float, default=200.0)
    p.set_defaults(func=_cmd_sieve_check)

    p = sub.add_parser("psi-check", help="sawtooth approximation majorization checks")
    common(p)
    p.add_argument("--Y", type=float, nargs="+", default=[5.0, 20.0, 100.0])
    p.add_argument("--grid", type=int, default=10**4)
    p.set_defaults(func=_cmd_psi_check)

    p = sub.add_parser("verify", help="run cross-module invariant suites")
    p.add_argument("suite", choices=verify.SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=20250808)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
