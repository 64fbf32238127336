"""``ofq`` command-line front end.

Output is deterministic: JSON keys are sorted and floats carry 17 significant
digits; CSV uses '.' as the decimal separator. Exit status is 0 on success,
2 on invalid input and 3 when an iterative solver fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import acceptance, heat, interp, spectral
from .errors import ConvergenceFailure, OFQError
from .fmatrix import canonicalize, from_lambda, params
from .haagerup import r_value, upper_bound
from .polynomial import (
    AnalyticPoly,
    adjoint_l2_norm_schur,
    degree_norms,
    l2_norm,
    lp_equiv_norm,
    monomial_l2_norm,
    plancherel_norm,
)
from .repdata import dim_table

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_CONVERGENCE = 0, 1, 2, 3


# -- formatting --------------------------------------------------------------

def _fmt_float(x):
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj):
    """JSON with sorted keys and 17-significant-digit floats; nan/inf become null."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# -- argument helpers -----------------------------------------------------------

def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _read_matrix(path):
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        re_part = np.asarray(data["re"], dtype=float)
        im_part = np.asarray(data.get("im", np.zeros_like(re_part)), dtype=float)
        return re_part + 1j * im_part
    return np.asarray([[complex(v) if not isinstance(v, list) else complex(*v) for v in row]
                       for row in data])


def _context(args):
    if getattr(args, "matrix", None) is not None and getattr(args, "lam", None) is not None:
        raise OFQError("give either --matrix or --lambda, not both")
    if getattr(args, "matrix", None) is not None:
        c, _ = canonicalize(_read_matrix(args.matrix), args.tol_can, args.tol_pair)
    elif getattr(args, "lam", None) is not None:
        c = from_lambda(args.lam, args.sign)
    else:
        raise OFQError("an F-matrix is required: --matrix FILE or --lambda L1,...,LN")
    return c, params(c, args.series_tol)


def _matrix_json(w):
    return {"re": np.real(w).tolist(), "im": np.imag(w).tolist()}


def _workers():
    try:
        return max(1, int(os.environ.get("OFQ_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- subcommands ------------------------------------------------------------------

def cmd_canonicalize(args):
    if args.matrix is None:
        raise OFQError("canonicalize needs --matrix FILE")
    F = _read_matrix(args.matrix)
    c, w = canonicalize(F, args.tol_can, args.tol_pair)
    residual = float(np.max(np.abs(w @ F @ w.T - c.matrix())))
    out = c.to_dict()
    out.update({"w": _matrix_json(w), "residual": residual, "kac": c.kac})
    return {"json": out}


def cmd_params(args):
    _, p = _context(args)
    return {"json": p.to_dict()}


def cmd_dims(args):
    _, p = _context(args)
    tab = dim_table(p, args.kmax)
    rows = [(k, tab.d[k], tab.log_d[k], tab.n_cl[k]) for k in range(args.kmax + 1)]
    return {"header": ["k", "d_k", "log_d_k", "n_k"], "rows": rows}


def _load_poly(args, c):
    if args.poly is not None:
        with open(args.poly) as fh:
            data = json.load(fh)
        f = AnalyticPoly.from_dict(data)
        if f.c != c:
            f = AnalyticPoly(dict(f.terms), c)
        return f
    if args.gen is not None:
        s, t = args.gen
        return AnalyticPoly.generator_power(s, t, args.k, c)
    raise OFQError("give --poly FILE or --gen S,T [--k K]")


def cmd_norms(args):
    if args.poly is not None and args.matrix is None and args.lam is None:
        # the polynomial file carries its own lambda and sign
        with open(args.poly) as fh:
            c = AnalyticPoly.from_dict(json.load(fh)).c
        p = params(c, args.series_tol)
    else:
        c, p = _context(args)
    f = _load_poly(args, c)
    out = {
        "l2": l2_norm(f, p),
        "adjoint_l2": adjoint_l2_norm_schur(f, p),
        "plancherel": plancherel_norm(f, p),
        "degrees": [{"k": k, "l2": n, "scaled": s} for k, n, s in degree_norms(f, p)],
        "l1_functional": interp.l1_functional(f, p),
    }
    if args.p is not None:
        out["p"] = args.p
        # the equivalent-norm formula is stated for homogeneous polynomials only
        out["lp_equiv"] = lp_equiv_norm(f, args.p, p) if len(f.degrees()) <= 1 else None
        if 1.0 < args.p <= 2.0:
            out["lorentz"] = interp.lorentz_functional(f, args.p, p)
    return {"json": out}


def cmd_haagerup_bounds(args):
    c, p = _context(args)
    s, t = args.gen
    M = args.M

    def row(k):
        g = spectral.SingleGenPoly(s, t, (0.0,) * k + (1.0,), c)
        key = ((s,) * k, (t,) * k)
        l2 = monomial_l2_norm(*key, c, p)
        lower = spectral.cstar_lower_bound(g, max(M, k), p, method=args.method, max_iter=args.max_iter)
        R = r_value([key], c) if k else 1.0
        upper = upper_bound(k, R, p) * l2
        if lower > upper * (1 + 1e-12):
            raise AssertionError(f"lower bound exceeds upper bound at k = {k}")
        return (k, l2, lower / l2, upper / l2, R, upper / lower)

    rows = _ordered_map(row, range(args.kmax + 1))
    return {"header": ["k", "l2", "lower_over_l2", "upper_over_l2", "R", "upper_over_lower"], "rows": rows}


def cmd_toeplitz_bound(args):
    c, p = _context(args)
    g = spectral.SingleGenPoly(args.s, args.t, tuple(args.coeffs), c)
    M = args.M if args.M is not None else spectral.default_M(g.deg)
    rep = spectral.toeplitz_report(g, M, p, method=args.method, max_iter=args.max_iter)
    return {"json": rep.to_dict()}


def cmd_heat(args):
    c, p = _context(args)
    spec = heat.HeatSpec(p)
    tF = heat.optimal_time(p)
    out = {"t_F": tF, "kac": p.kac, "c": spec.table(args.K)}
    if args.t is not None:
        if args.t < 0:
            raise OFQError("t must be nonnegative")
        t = args.t
        out["t"] = t
        out["verdict"] = heat.classify_multiplier(heat.heat_family(t, p), p)
        probe = heat.series_probe(lambda k: math.exp(-t * spec.c(k)), p, args.K)
        out.update({"partial_sum": probe.partial_sum, "tail_bound": probe.tail_bound,
                    "ratio": probe.ratio, "probe_verdict": probe.verdict})
    return {"json": out}


def cmd_multiplier_check(args):
    _, p = _context(args)
    fam = heat.MultiplierFamily(A=args.A, rho=args.rho, alpha=args.alpha)
    out = {
        "A": fam.A,
        "rho": fam.rho,
        "alpha": fam.alpha,
        "rho2_F4": fam.rho ** 2 * p.F_norm ** 4,
        "verdict": heat.classify_multiplier(fam, p),
    }
    if args.probe_K:
        out["probe"] = heat.series_probe(fam.phi, p, args.probe_K).to_dict()
    return {"json": out}


def _pattern(name, n, seed):
    if name == "ones":
        return np.ones(n + 1)
    if name == "e0":
        x = np.zeros(n + 1)
        x[0] = 1.0
        return x
    if name == "random":
        return np.random.default_rng(seed).normal(size=n + 1)
    raise OFQError(f"unknown pattern {name!r}")


def _sweep(text):
    lo, _, hi = text.partition("..")
    try:
        lo, hi = int(lo.split("=")[-1]), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected n=LO..HI, got {text!r}") from exc
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError("need 1 <= LO <= HI")
    out = []
    n = lo
    while n <= hi:
        out.append(n)
        n *= 2
    return out


def cmd_interp_witness(args):
    c, p = _context(args)
    if args.sweep:
        rows = []
        for n in args.sweep:
            rep = interp.separation_witness(args.p, _pattern(args.pattern, n, args.seed), p)
            rows.append((n, rep.ratio))
        return {"header": ["n", "ratio"], "rows": rows}
    rep = interp.separation_witness(args.p, _pattern(args.pattern, args.n, args.seed), p, c)
    return {"json": rep.to_dict()}


def cmd_repro(args):
    wanted = args.only or [num for num, _, _ in acceptance.CRITERIA]
    results = [acceptance.run(num) for num in wanted]
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {"all_passed": all(r.passed for r in results), "criteria": [r.to_dict() for r in results]}
    return {"json": report, "exit": EXIT_OK if report["all_passed"] else EXIT_FAIL}


# -- parser ---------------------------------------------------------------------------

def _add_common(sp, context=True):
    sp.add_argument("--config", help="JSON file of option values; command-line flags win")
    sp.add_argument("--format", choices=["json", "csv"], default=None, help="output format")
    sp.add_argument("--output", "-o", help="write the result here instead of stdout")
    if context:
        sp.add_argument("--lambda", dest="lam", type=_floats, help="canonical lambda, comma-separated")
        sp.add_argument("--sign", type=int, choices=[-1, 1], default=1, help="sign of conj(F) F")
        sp.add_argument("--matrix", help="JSON file with F (nested list, or {re, im})")
        sp.add_argument("--tol-can", type=_positive, default=1e-8, help="canonical-form residual tolerance")
        sp.add_argument("--tol-pair", type=_positive, default=1e-8,
                        help="tolerance for pairing singular values")
        sp.add_argument("--series-tol", type=_positive, default=1e-14, help="truncation tolerance for C_q")


def build_parser():
    ap = argparse.ArgumentParser(prog="ofq", description="Numerical toolkit for free orthogonal quantum groups.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("canonicalize", help="reduce an F-matrix to canonical form")
    _add_common(sp)
    sp.set_defaults(func=cmd_canonicalize)

    sp = sub.add_parser("params", help="N_q, q, r_q, C_q, ||F||, Kac flag")
    _add_common(sp)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("dims", help="quantum and classical dimensions up to --kmax")
    _add_common(sp)
    sp.add_argument("--kmax", type=int, default=10)
    sp.set_defaults(func=cmd_dims, default_format="csv")

    sp = sub.add_parser("norms", help="L2, adjoint, degree and Lp-equivalent norms of a polynomial")
    _add_common(sp)
    sp.add_argument("--poly", help="polynomial JSON {lambda, sign, terms: [{s, t, re, im}]}")
    sp.add_argument("--gen", type=_ints, help="generator S,T for (u_ST)^k")
    sp.add_argument("--k", type=int, default=1, help="power used with --gen")
    sp.add_argument("--p", type=float, help="exponent for the Lp-equivalent and Lorentz functionals")
    sp.set_defaults(func=cmd_norms)

    sp = sub.add_parser("haagerup-bounds",
                        help="lower and upper C*-norm bounds of (u_ST)^k over k, divided by the L2 norm")
    _add_common(sp)
    sp.add_argument("--gen", type=_ints, required=True, help="generator S,T")
    sp.add_argument("--kmax", type=int, default=10)
    sp.add_argument("--M", type=int, default=400, help="truncation size")
    sp.add_argument("--method", choices=["lanczos", "power", "svd"], default="lanczos",
                    help="largest-singular-value solver")
    sp.add_argument("--max-iter", type=int, default=spectral.POWER_MAX_ITER, help="solver iteration cap")
    sp.set_defaults(func=cmd_haagerup_bounds, default_format="csv")

    sp = sub.add_parser("toeplitz-bound", help="certified bounds for sum_k x_k (u_ST)^k")
    _add_common(sp)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--coeffs", type=_floats, required=True, help="x_0,...,x_n")
    sp.add_argument("--M", type=int, help="truncation size (default max(400, 50 deg))")
    sp.add_argument("--method", choices=["lanczos", "power", "svd"], default="lanczos",
                    help="largest-singular-value solver")
    sp.add_argument("--max-iter", type=int, default=spectral.POWER_MAX_ITER, help="solver iteration cap")
    sp.set_defaults(func=cmd_toeplitz_bound)

    sp = sub.add_parser("heat", help="heat eigenvalues c_k, t_F and the verdict at time --t")
    _add_common(sp)
    sp.add_argument("--t", type=float)
    sp.add_argument("--K", type=int, default=60, help="number of terms sampled")
    sp.set_defaults(func=cmd_heat)

    sp = sub.add_parser("multiplier-check", help="classify phi(k) = A rho^k (k+1)^alpha")
    _add_common(sp)
    sp.add_argument("--rho", type=_positive, required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--A", type=_positive, default=1.0)
    sp.add_argument("--probe-K", type=int, default=0, help="also run the empirical series probe")
    sp.set_defaults(func=cmd_multiplier_check)

    sp = sub.add_parser("interp-witness", help="Lp vs L^{p,p} separation witness")
    _add_common(sp)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, default=64, help="truncation degree")
    sp.add_argument("--pattern", choices=["ones", "e0", "random"], default="ones")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sweep", type=_sweep, help="n=LO..HI over powers of two; emits CSV (n, ratio)")
    sp.set_defaults(func=cmd_interp_witness)

    sp = sub.add_parser("repro", help="run the acceptance suite and write a report")
    _add_common(sp, context=False)
    sp.add_argument("--only", type=_ints, help="comma-separated criterion numbers")
    sp.set_defaults(func=cmd_repro)
    return ap


def _config_tokens(path):
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise OFQError("config file must hold a JSON object")
    tokens = []
    for key, val in cfg.items():
        flag = "--lambda" if key in ("lambda", "lam") else "--" + key.replace("_", "-")
        if isinstance(val, list):
            val = ",".join(str(v) for v in val)
        tokens += [flag, str(val)]
    return tokens


def parse(argv=None):
    """Parse ``argv``. Options from ``--config`` are placed before the
    command-line ones, so explicit flags win (argparse keeps the last value)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        args = ap.parse_args(argv[:1] + _config_tokens(args.config) + argv[1:])
    return args


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        args = parse(argv)
        result = args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    except ConvergenceFailure as exc:
        print(f"ofq: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (OFQError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"ofq: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    fmt = args.format or getattr(args, "default_format", "json")
    if "rows" in result:
        if fmt == "csv":
            text = to_csv(result["header"], result["rows"])
        else:
            text = dumps([dict(zip(result["header"], r)) for r in result["rows"]]) + "\n"
    else:
        if fmt == "csv":
            flat = {k: v for k, v in result["json"].items() if not isinstance(v, (dict, list))}
            text = to_csv(sorted(flat), [[flat[k] for k in sorted(flat)]])
        else:
            text = dumps(result["json"]) + "\n"
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return result.get("exit", EXIT_OK)


def main(argv=None):
    return run(argv)
