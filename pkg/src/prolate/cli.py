"""
Command-line driver.

Subcommands::

    prolate pswf          eigenvalues (and optionally grid values) of PSWFs
    prolate extrap        extrapolation mu-sweep plus the sampled extrapolant
    prolate kernel-eig    eigenvalues of the K1/K2 kernel operators
    prolate kernel-invert inversion mu-sweep for the built-in signal pairs

Output is CSV (17 significant digits, ``#`` header lines echoing the
configuration) or JSON with the same records. Exit status: 0 on success,
1 on an accuracy or numerical failure, 2 on a usage error.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .blkernel import Inverter, apply_forward, builtin_kernels, kernel_eigen, test_signal_pair
from .eigsolve import Penalty, TikhonovConfig
from .errors import AccuracyError, ConfigurationError, DomainError, NumericalError
from .extrapolate import SIGNALS, Extrapolator, mu_sweep
from .pswf import (pswf_bessel_ie, pswf_legendre_galerkin, pswf_sinc_ie, eval_pswf,
                   default_n_keep)
from .quadrature import gauss_legendre_rule, lgl_rule, split_gauss_rule

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_ACCURACY, EXIT_USAGE = 0, 1, 2


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _mu_grid(text):
    """``a:b:step`` in log10 units, or a comma-separated list of values."""
    try:
        if ":" in text:
            a, b, step = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int(math.floor((b - a) / step + 1e-9)) + 1
            return [10.0 ** (a + i * step) for i in range(count)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mu grid {text!r}; use 'a:b:step' or 'm1,m2,...'")


def _positive_float(text):
    v = float(text)
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _emit(meta, tables, fmt, out):
    """Write ``tables`` (name -> (columns, rows)) as CSV or JSON."""
    if fmt == "json":
        payload = {"meta": meta,
                   "records": {name: [dict(zip(cols, row)) for row in rows]
                               for name, (cols, rows) in tables.items()}}
        json.dump(payload, out, indent=1, default=float)
        out.write("\n")
        return
    for key, value in meta.items():
        out.write(f"# {key}: {value}\n")
    first = True
    for name, (cols, rows) in tables.items():
        if not first:
            out.write("\n")
        first = False
        out.write(f"# table: {name}\n")
        writer = csv.writer(out, lineterminator="\r\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _meta(args, **extra):
    meta = {"prolate_version": __version__, "command": args.command}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "output", "format", "func"):
            continue
        meta[key] = value if not isinstance(value, list) else ",".join(_fmt(v) for v in value)
    meta.update(extra)
    return meta


# ---------------------------------------------------------------- subcommands

def run_pswf(args):
    n_keep = args.keep if args.keep is not None else default_n_keep(args.sigma)
    methods = ["legendre", "bessel", "sinc"] if args.method == "all" else [args.method]
    rule = gauss_legendre_rule(args.n_quad) if args.n_quad else None
    sets = {}
    for m in methods:
        if m == "legendre":
            sets[m] = pswf_legendre_galerkin(args.sigma, args.n, n_keep)
        elif m == "bessel":
            sets[m] = pswf_bessel_ie(args.sigma, args.n, n_keep, rule)
        else:
            m_max = args.m_max if args.m_max is not None else args.n // 2
            sets[m] = pswf_sinc_ie(args.sigma, m_max, n_keep, rule)
    k = min(len(s) for s in sets.values())
    cols = ["index"] + [f"lambda_{m}" for m in methods]
    rows = [[i] + [sets[m].eigenvalues[i] for m in methods] for i in range(k)]
    tables = {"eigenvalues": (cols, rows)}
    if args.grid:
        t = np.linspace(-1.0, 1.0, args.grid)
        m = methods[0]
        gcols = ["t"] + [f"phi_{i}" for i in range(k)]
        vals = [eval_pswf(sets[m], i, t) for i in range(k)]
        tables[f"phi_{m}"] = (gcols, [[t[j]] + [v[j] for v in vals] for j in range(t.size)])
    return _meta(args, n_keep=n_keep), tables


def _signal(args):
    fn = SIGNALS[args.signal]
    if args.signal == "x2":
        return lambda t: fn(args.sigma, t, nu=args.nu)
    return lambda t: fn(args.sigma, t)


def run_extrap(args):
    if args.basis == "sinc" and args.penalty == "sobolev":
        raise ConfigurationError("the Sobolev penalty is only available in the Bessel basis")
    x = _signal(args)
    ex = Extrapolator(args.sigma, args.basis, args.n, args.n_quad)
    rows = mu_sweep(ex, x, args.mu, args.penalty)
    ok = [r for r in rows if r.ok]
    if not ok:
        raise NumericalError("every mu in the sweep failed")
    best = min(ok, key=lambda r: r.e_rel)
    res = ex.run(x, TikhonovConfig(best.mu, Penalty(args.penalty)))
    t = np.linspace(-5.0, 5.0, args.grid)
    exact = np.asarray(x(t))
    approx = np.asarray(res(t))
    tables = {
        "sweep": (["mu", "e_rel", "residual_norm", "solution_norm", "ok"],
                  [[r.mu, r.e_rel, r.residual_norm, r.solution_norm, int(r.ok)] for r in rows]),
        "extrapolant": (["t", "x_exact", "x_extrap", "abs_err"],
                        [[t[i], exact[i], approx[i], abs(exact[i] - approx[i])]
                         for i in range(t.size)]),
    }
    return _meta(args, mu_best=_fmt(best.mu), n_basis=args.n), tables


def run_kernel_eig(args):
    k = builtin_kernels(args.kernel, args.sigma)
    rule = kernel_rule = None
    check = True
    if args.quad == "split":
        kernel_rule = split_gauss_rule(4 * args.n)
    elif args.quad == "lgl":
        # unsplit LGL on a kinked spectrum does not pass the self-check
        kernel_rule = lgl_rule(4 * args.n + 1)
        check = False
    es = kernel_eigen(k, args.basis, args.n, args.keep, rule, kernel_rule, check=check)
    rows = [[i, es.eigenvalues[i]] for i in range(len(es))]
    return _meta(args), {"eigenvalues": (["index", "lambda"], rows)}


def run_kernel_invert(args):
    if args.basis == "sinc" and args.penalty == "sobolev":
        raise ConfigurationError("the Sobolev penalty is only available in the Bessel basis")
    pair = test_signal_pair(args.pair, args.nu)
    k = builtin_kernels("K2", pair.sigma)
    inv = Inverter(k, args.basis, args.n)

    def x(t):
        return apply_forward(k, pair.y, t)

    rows = inv.sweep(x, args.mu, args.penalty, exact=pair.y)
    return (_meta(args, kernel="K2", sigma=_fmt(pair.sigma)),
            {"sweep": (["mu", "e_rel", "residual_norm", "solution_norm"], rows)})


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="prolate", description=__doc__.splitlines()[1])
    p.add_argument("--version", action="version", version=f"prolate {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--output", "-o", default="-", help="output file ('-' for stdout)")

    sp = sub.add_parser("pswf", help="PSWF eigenvalues by one or all methods")
    sp.add_argument("--sigma", type=_positive_float, required=True)
    sp.add_argument("--method", choices=["legendre", "bessel", "sinc", "all"], default="bessel")
    sp.add_argument("--all-methods", dest="method", action="store_const", const="all",
                    help="same as --method all (columns legendre, bessel, sinc)")
    sp.add_argument("--n", type=_positive_int, default=1000, help="basis size")
    sp.add_argument("--n-quad", type=_positive_int, default=None,
                    help="Gauss nodes (default 4 x basis size)")
    sp.add_argument("--m-max", type=int, default=None, help="sinc translates -m..m (default n/2)")
    sp.add_argument("--keep", type=_positive_int, default=None)
    sp.add_argument("--grid", type=_positive_int, default=0,
                    help="also tabulate phi_n on this many points of [-1, 1]")
    common(sp)
    sp.set_defaults(func=run_pswf)

    sp = sub.add_parser("extrap", help="extrapolation mu-sweep for a test signal")
    sp.add_argument("--signal", choices=sorted(SIGNALS), required=True)
    sp.add_argument("--sigma", type=_positive_float, required=True)
    sp.add_argument("--nu", type=int, default=2, help="Bessel order for x2")
    sp.add_argument("--basis", choices=["bessel", "sinc"], default="bessel")
    sp.add_argument("--penalty", choices=["standard", "sobolev"], default="standard")
    sp.add_argument("--n", type=_positive_int, default=400)
    sp.add_argument("--n-quad", type=_positive_int, default=1600)
    sp.add_argument("--mu", type=_mu_grid, default=_mu_grid("-16:0:0.5"),
                    help="log10 grid 'a:b:step' or explicit list (write --mu=-12:-6:1 for negatives)")
    sp.add_argument("--grid", type=_positive_int, default=1001,
                    help="points of (-5, 5) for the extrapolant table")
    common(sp)
    sp.set_defaults(func=run_extrap)

    sp = sub.add_parser("kernel-eig", help="eigenvalues of a built-in kernel operator")
    sp.add_argument("--kernel", choices=["K1", "K2"], required=True)
    sp.add_argument("--sigma", type=_positive_float, default=8.0)
    sp.add_argument("--basis", choices=["bessel", "sinc"], default="bessel")
    sp.add_argument("--n", type=_positive_int, default=200)
    sp.add_argument("--keep", type=_positive_int, default=8)
    sp.add_argument("--quad", choices=["gauss", "split", "lgl"], default="gauss",
                    help="kernel-matrix rule: gauss (split fallback), split, or unsplit lgl")
    common(sp)
    sp.set_defaults(func=run_kernel_eig)

    sp = sub.add_parser("kernel-invert", help="inversion mu-sweep for a built-in signal pair")
    sp.add_argument("--pair", choices=["pair1", "pair2"], required=True)
    sp.add_argument("--nu", type=_positive_int, default=4)
    sp.add_argument("--basis", choices=["bessel", "sinc"], default="bessel")
    sp.add_argument("--penalty", choices=["standard", "sobolev"], default="standard")
    sp.add_argument("--n", type=_positive_int, default=200)
    sp.add_argument("--mu", type=_mu_grid, default=_mu_grid("-16:0:0.5"))
    common(sp)
    sp.set_defaults(func=run_kernel_invert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        meta, tables = args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"prolate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, NumericalError) as exc:
        print(f"prolate: accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    buf = io.StringIO()
    _emit(meta, tables, args.format, buf)
    if args.output == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
