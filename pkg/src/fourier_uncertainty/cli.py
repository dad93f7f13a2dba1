"""Command-line front end.

Every command prints (or writes with --out) a JSON document carrying
``"schema": "v1"``, the resolved configuration and a timestamp. Tables go
to --csv with 17 significant digits.

Exit codes: 0 ok, 1 usage error, 2 precondition violation, 3 uncertified
numerics, 4 verification failure under --expect-pass.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
import time

import numpy as np

from . import _backend
from .functional import (
    CrossoverError,
    DomainError,
    compare_crossover,
    crossover_table,
    smoothing_bound,
    tone_signal,
    uncertainty,
)
from .hypergeom import certify
from .kernel import KernelError, parse_kernel
from .optimizer import DEFAULT_EPS_GRID, minimize, probe_local_min
from .spectral import PreconditionError, weighted_sup
from .whittaker import (
    DEFAULT_ALT_K,
    DEFAULT_K_MAX,
    DEFAULT_ZETA_K,
    MARGIN_TOL,
    PERTURBATION_DIM,
    EvenPerturbation,
    stability_batch,
    stability_verify,
    sum_identities,
)

SCHEMA = "v1"
EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_UNCERTIFIED, EXIT_FAILED = 0, 1, 2, 3, 4
SMOOTH_SLACK = 1.02


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _plain(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return obj


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return v


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def read_signal(path) -> np.ndarray:
    """First numeric column of a CSV file; non-numeric rows (headers) are skipped."""
    vals = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                vals.append(float(row[0]))
            except ValueError:
                continue
    return np.asarray(vals, dtype=float)


def _config(args) -> dict:
    skip = {"handler", "func_name"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def emit(args, result: dict, status: int = EXIT_OK) -> int:
    doc = {
        "schema": SCHEMA,
        "command": args.func_name,
        "config": _config(args),
        "backend": _backend.name(),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "exit_code": status,
        "result": result,
    }
    text = json.dumps(_plain(doc), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return status


# handlers ----------------------------------------------------------------


def cmd_eval(args):
    k = parse_kernel(args.kernel)
    rep = uncertainty(k, args.alpha, args.beta)
    res = rep.to_dict()
    res["kernel"] = k.to_dict()
    return emit(args, res, EXIT_OK if rep.certified else EXIT_UNCERTIFIED)


def cmd_crossover(args):
    ka, kb = parse_kernel(args.kernel_a), parse_kernel(args.kernel_b)
    try:
        star = compare_crossover(ka, kb, args.alpha_lo, args.alpha_hi, args.beta)
    except CrossoverError as exc:
        return emit(args, {"error": str(exc), "brackets": exc.brackets}, EXIT_PRECONDITION)
    alphas = np.linspace(args.alpha_lo, args.alpha_hi, args.points)
    rows = crossover_table(ka, kb, alphas, args.beta)
    if args.csv:
        write_csv(args.csv, ["alpha", "J_A", "J_B"], rows)
    res = {
        "alpha_star": None if star is None else star,
        "alpha_star_4dp": None if star is None else round(star, 4),
        "J_A_at_hi": rows[-1][1],
        "J_B_at_hi": rows[-1][2],
        "A_below_B_at_hi": rows[-1][1] < rows[-1][2],
    }
    status = EXIT_OK
    if args.expect_pass and star is None:
        status = EXIT_FAILED
    return emit(args, res, status)


def cmd_smooth(args):
    k = parse_kernel(args.kernel)
    sup = weighted_sup(k, args.beta)
    if args.signal:
        signals = [("file", read_signal(args.signal))]
    elif args.tone is not None:
        signals = [("tone", tone_signal(args.tone, args.duration, args.spacing))]
    else:
        rng = np.random.default_rng(args.seed)
        signals = [(f"noise{i}", rng.standard_normal(args.length)) for i in range(args.random)]
    rows = []
    for name, f in signals:
        r = smoothing_bound(k, f, args.spacing, args.beta, sup=sup)
        rows.append((name, r.lhs, r.rhs, r.ratio))
    if args.csv:
        write_csv(args.csv, ["signal", "lhs", "rhs", "ratio"], rows)
    worst = max(r[3] for r in rows)
    res = {
        "sup": sup.value,
        "sup_certified": sup.certified,
        "max_ratio": worst,
        "min_ratio": min(r[3] for r in rows),
        "signals": [{"signal": n, "lhs": a, "rhs": b, "ratio": c} for n, a, b, c in rows],
    }
    status = EXIT_OK if sup.certified else EXIT_UNCERTIFIED
    if args.expect_pass and worst > SMOOTH_SLACK:
        status = EXIT_FAILED
    return emit(args, res, status)


def cmd_sup(args):
    k = parse_kernel(args.kernel)
    r = weighted_sup(k, args.beta, args.cutoff)
    return emit(args, r.to_dict(), EXIT_OK if r.certified else EXIT_UNCERTIFIED)


def cmd_certify(args):
    if args.K < 1:
        raise PreconditionError("K must be >= 1")
    cert = certify(args.alpha, args.K, workers=args.threads)
    res = cert.to_dict()
    if args.csv:
        write_csv(
            args.csv,
            ["k", "value", "trunc_bound", "sign", "terms_used", "precision_bits"],
            [(r["k"], r["value"], r["trunc_bound"], r["sign"], r["terms_used"], r["precision_bits"]) for r in res["values"]],
        )
    if cert.verdict.startswith("INCONCLUSIVE"):
        status = EXIT_UNCERTIFIED
    elif args.expect_pass and not cert.passed:
        status = EXIT_FAILED
    else:
        status = EXIT_OK
    return emit(args, res, status)


def cmd_verify(args):
    if args.coeffs is not None:
        f = EvenPerturbation(tuple(json.loads(args.coeffs)))
        r = stability_verify(f, args.alpha, args.k_max)
        res = r.to_dict()
        res["coeffs"] = f.to_list()
        bad = not r.holds
    else:
        if args.seeds < 1:
            raise PreconditionError("--seeds must be >= 1")
        rows = stability_batch(
            args.alpha, range(args.seed, args.seed + args.seeds), args.dim, args.k_max, workers=args.threads
        )
        if args.csv:
            write_csv(args.csv, ["seed", "lhs", "rhs", "margin"], rows)
        margins = [r[3] for r in rows]
        violations = [r[0] for r in rows if r[3] < -MARGIN_TOL]
        res = {
            "count": len(rows),
            "min_margin": min(margins),
            "max_margin": max(margins),
            "tolerance": MARGIN_TOL,
            "violating_seeds": violations,
        }
        bad = bool(violations)
    return emit(args, res, EXIT_FAILED if (args.expect_pass and bad) else EXIT_OK)


def cmd_sums(args):
    s = sum_identities(args.alpha, args.alt_K, args.K)
    ok = s.zeta4_ok and s.alt_ok
    return emit(args, s.to_dict(), EXIT_FAILED if (args.expect_pass and not ok) else EXIT_OK)


def cmd_run(args):
    start = args.start
    if start not in ("characteristic", "random"):
        start = parse_kernel(start)
    r = minimize(
        args.alpha, args.beta, args.dim, start, args.iters, args.seed, nonnegative=args.nonnegative,
    )
    if args.csv:
        write_csv(args.csv, ["iter", "J"], list(enumerate(r.trace)))
    status = EXIT_OK if math.isfinite(r.J) else EXIT_UNCERTIFIED
    return emit(args, r.to_dict(), status)


def cmd_probe(args):
    eps = tuple(float(e) for e in args.eps)
    reps = probe_local_min(args.alpha, args.N, eps, args.seed, args.dim, workers=args.threads)
    if args.csv:
        write_csv(
            args.csv,
            ["seed", "slope", "predicted_slope", "lemma_margin"] + [f"J_eps_{e:g}" for e in eps],
            [(r.seed, r.one_sided_slope, r.predicted_slope, r.margin, *r.J_values) for r in reps],
        )
    slopes = [r.one_sided_slope for r in reps]
    uncert = [r.seed for r in reps if not all(r.certified)]
    bad = [r.seed for r in reps if not r.ok]
    res = {
        "J0": reps[0].J0,
        "N": len(reps),
        "min_slope": min(slopes),
        "max_slope": max(slopes),
        "violating_seeds": bad,
        "uncertified_seeds": uncert,
        "directions": [r.to_dict() for r in reps] if args.full else None,
    }
    status = EXIT_OK
    if uncert:
        status = EXIT_UNCERTIFIED
    if args.expect_pass and bad:
        status = EXIT_FAILED
    return emit(args, res, status)


# parser ------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--out", help="write the JSON report here instead of stdout")
    g.add_argument("--json", action="store_true", help="JSON output (the default)")
    g.add_argument("--threads", type=int, default=1, help="maximum worker threads")
    g.add_argument("--backend", choices=_backend.available(), help="kernel implementation")
    return p


def _add_eval(p):
    p.add_argument("--kernel", default="characteristic")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)


def _add_crossover(p):
    p.add_argument("--kernel-a", default="characteristic")
    p.add_argument("--kernel-b", default="gaussian")
    p.add_argument("--alpha-lo", type=float, default=1.0)
    p.add_argument("--alpha-hi", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--points", type=int, default=64, help="rows in the CSV sweep")
    p.add_argument("--csv")
    p.add_argument("--expect-pass", action="store_true")


def _add_smooth(p):
    p.add_argument("--kernel", default="characteristic")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--signal", help="CSV file, first column = samples")
    src.add_argument("--tone", type=float, help="Hann-windowed cosine at this frequency")
    src.add_argument("--random", type=int, default=1, help="number of white-noise signals")
    p.add_argument("--duration", type=float, default=200.0)
    p.add_argument("--length", type=int, default=4096)
    p.add_argument("--spacing", type=float, default=1.0 / 64.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.add_argument("--expect-pass", action="store_true")


def _add_sup(p):
    p.add_argument("--kernel", default="characteristic")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--cutoff", type=float)


def _add_certify(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--K", type=int, default=100)
    p.add_argument("--csv")
    p.add_argument("--expect-pass", action="store_true")


def _add_verify(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--seeds", type=int, default=100, help="number of random perturbations")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--dim", type=int, default=PERTURBATION_DIM)
    p.add_argument("--coeffs", help="JSON list of cosine coefficients (single perturbation)")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--csv")
    p.add_argument("--expect-pass", action="store_true")


def _add_sums(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--K", type=int, default=DEFAULT_ZETA_K, help="terms in the odd zeta(4) sum")
    p.add_argument("--alt-K", type=int, default=DEFAULT_ALT_K, help="terms in the alternating a_k sum")
    p.add_argument("--expect-pass", action="store_true")


def _add_run(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=6)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", default="characteristic", help="characteristic, random, or a kernel spec")
    p.add_argument("--nonnegative", action="store_true")
    p.add_argument("--csv")


def _add_probe(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=PERTURBATION_DIM)
    p.add_argument("--eps", type=float, nargs="+", default=list(DEFAULT_EPS_GRID))
    p.add_argument("--full", action="store_true", help="include every direction in the JSON")
    p.add_argument("--csv")
    p.add_argument("--expect-pass", action="store_true")


COMMANDS = {
    "functional": {"eval": (_add_eval, cmd_eval), "crossover": (_add_crossover, cmd_crossover), "smooth": (_add_smooth, cmd_smooth)},
    "spectral": {"sup": (_add_sup, cmd_sup)},
    "hypergeom": {"certify": (_add_certify, cmd_certify)},
    "stability": {"verify": (_add_verify, cmd_verify), "sums": (_add_sums, cmd_sums)},
    "optimize": {"run": (_add_run, cmd_run), "probe": (_add_probe, cmd_probe)},
}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="fourier-uncertainty", description="Numerical checks for Fourier uncertainty kernels.")
    top = parser.add_subparsers(dest="group", metavar="command", parser_class=_Parser)
    top.required = True
    for group, actions in COMMANDS.items():
        gp = top.add_parser(group, help=f"{group} commands")
        sub = gp.add_subparsers(dest="action", metavar="action", parser_class=_Parser)
        sub.required = True
        for action, (add, handler) in actions.items():
            for target in (sub, top):
                p = target.add_parser(action, parents=[common], help=f"{group} {action}")
                add(p)
                p.set_defaults(handler=handler, func_name=f"{group} {action}")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.__dict__.pop("group", None)
    args.__dict__.pop("action", None)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    if args.backend:
        _backend.use(args.backend)
    t0 = time.perf_counter()
    try:
        status = args.handler(args)
    except (PreconditionError, KernelError, DomainError, ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ArithmeticError as exc:
        print(f"numerics could not be certified: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    print(f"[{args.func_name}] {time.perf_counter() - t0:.2f}s exit {status}", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
