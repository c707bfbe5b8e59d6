"""Command-line entry point: every subcommand writes a CSV table.

Each table starts with '#' lines giving the package version, the exact
invocation and the seed; floats use 17 significant digits and nothing
time-dependent is written, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import shlex
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

PROG = "paircorr"


class CliError(Exception):
    """Validation failure reported as a one-line diagnostic."""


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    footer: list[str] = field(default_factory=list)

    def add(self, *values):
        self.rows.append(list(values))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return "" if v is None else str(v)


def render(table: Table, invocation: str, seed) -> str:
    buf = io.StringIO()
    buf.write(f"# {PROG} {__version__}\n")
    buf.write(f"# invocation: {invocation}\n")
    buf.write(f"# seed: {'none' if seed is None else seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(v) for v in row])
    for line in table.footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _atomic_write(path: Path, data: str | bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data.encode("ascii") if isinstance(data, str) else data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- constants

def _constants_rows():
    from .fbounds import montgomery_taylor_constant
    from .hilbert import embedding_constants
    from .kernels import c0, dirichlet_min, x1
    from .sunrise import L_minus, L_plus

    ec = embedding_constants()
    ref_m = {1: (-1.0, 1e-12), 2: (-1.25, 1e-10), 3: (-(14 * math.sqrt(7) + 7) / 27, 1e-10), 4: (-2.03911, 1e-5)}
    rows = [
        ("c0", c0(), -0.21723, 1e-5),
        ("x1", x1(), 4.49340, 1e-5),
        ("C_MT", montgomery_taylor_constant(), 1.32749, 1e-5),
        ("L_minus", L_minus(), 0.9028, 5e-4),
        ("L_plus", L_plus(), 1.0736, 5e-4),
        ("lambda_inf", ec.lambda_inf, 3.33354, 1e-5),
        ("theta", ec.theta, 0.27385, 1e-5),
        ("eta", ec.eta, 0.67551, 1e-5),
        ("D_squared", ec.D_squared, 0.3244, 5e-4),
    ]
    for n in range(1, 11):
        ref, tol = ref_m.get(n, (None, None))
        rows.append((f"m({n})", dirichlet_min(n), ref, tol))
    return rows


def cmd_constants(args) -> Table:
    t = Table(["name", "computed", "reference", "deviation", "tolerance", "ok"])
    bad = []
    for name, val, ref, tol in _constants_rows():
        if ref is None:
            t.add(name, val, None, None, None, None)
            continue
        dev = abs(val - ref)
        ok = dev <= tol
        if not ok:
            bad.append(name)
        t.add(name, val, ref, dev, tol, ok)
    if bad:
        t.footer.append("outside tolerance: " + " ".join(bad))
    return t


# ---------------------------------------------------------------- fbound

_KINDS = ("tri-upper", "tri-lower", "sym-upper", "sym-lower", "int-upper", "int-lower")


def cmd_fbound(args) -> Table:
    from .fbounds import c_bounds_interval, c_minus_symmetric, c_minus_triangle, c_plus_symmetric, c_plus_triangle

    b, beta, steps = args.b, args.beta, args.steps
    if steps < 1:
        raise CliError("--steps must be >= 1")
    if not beta > b:
        raise CliError("--beta must exceed --b")
    family, side = args.kind.split("-")
    if family == "sym" and b != 1:
        raise CliError("symmetric bounds are for windows starting at 1; use --b 1")
    if family in ("sym", "int") and b < 1:
        raise CliError("--b must be >= 1")
    if family == "tri" and b < 0:
        raise CliError("--b must be >= 0")
    t = Table(["beta", "ell", "value"])
    for k in range(1, steps + 1):
        x = b + (beta - b) * k / steps
        ell = x - b
        if family == "tri":
            v = (c_plus_triangle if side == "upper" else c_minus_triangle)(ell)
        elif family == "sym":
            v = (c_plus_symmetric if side == "upper" else c_minus_symmetric)(x)
        else:
            lo, hi = c_bounds_interval(b, x)
            v = hi if side == "upper" else lo
        t.add(x, ell, v)
    return t


# ---------------------------------------------------------------- jbound

def cmd_jbound(args) -> Table:
    from .jbounds import j_bounds, j_interval_bounds, legacy_comparison

    if args.legacy:
        t = Table(["quantity", "prior", "computed", "reference"])
        for row in legacy_comparison():
            t.add(row["quantity"], row["prior"], row["computed"], row["reference"])
        return t
    if args.beta is None:
        raise CliError("--beta is required")
    t = Table(["b", "beta", "lower_coeff", "upper_coeff"])
    try:
        if args.b is None:
            jb = j_bounds(args.beta)
            t.add(None, jb.beta, jb.lower_coeff, jb.upper_coeff)
        else:
            lo, hi = j_interval_bounds(args.b, args.beta)
            t.add(args.b, args.beta, lo, hi)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return t


# ---------------------------------------------------------------- logderiv

def cmd_logderiv(args) -> Table:
    from .logderiv import g_curves, u_minus, u_plus, v_minus, v_plus

    if not 0 < args.a_min < args.a_max:
        raise CliError("need 0 < --a-min < --a-max")
    if args.steps < 1:
        raise CliError("--steps must be >= 1")
    a = np.linspace(args.a_min, args.a_max, args.steps + 1)
    gm, gp = g_curves(a)
    cols = [a, u_minus(a), u_plus(a), v_minus(a), v_plus(a), gm, gp]
    t = Table(["a", "U_minus", "U_plus", "V_minus", "V_plus", "G_minus", "G_plus"])
    for row in zip(*cols):
        t.add(*row)
    return t


# ---------------------------------------------------------------- hilbert

def cmd_hilbert(args) -> Table:
    from .hilbert import embedding_constants, solve_level, verify_extremality

    if args.limit:
        ec = embedding_constants()
        chk = verify_extremality()
        t = Table(["name", "value"])
        for name, v in (("lambda_inf", ec.lambda_inf), ("Q_inf", ec.lambda_inf / 2), ("theta", ec.theta),
                        ("eta", ec.eta), ("D_squared", ec.D_squared), ("norm_pw", chk.norm_pw),
                        ("ratio_sampling", chk.ratio_sampling), ("ratio_quadrature", chk.ratio_quadrature)):
            t.add(name, v)
        return t
    if args.level < 1:
        raise CliError("--level must be >= 1")
    if args.coeffs:
        sol = solve_level(args.level)
        t = Table(["k", "a_k"])
        for k, a in enumerate(sol.coeffs, 1):
            t.add(k, a)
        t.footer.append(f"lambda={_fmt(sol.lam)} Q={_fmt(sol.Q)}")
        return t
    t = Table(["N", "lambda", "Q"])
    for n in range(1, args.level + 1):
        sol = solve_level(n)
        t.add(n, sol.lam, sol.Q)
    return t


# ---------------------------------------------------------------- search

def cmd_search(args) -> Table:
    from .epsearch import search

    try:
        res = search(args.problem, degree=args.degree, restarts=args.restarts, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    t = Table(["key", "value"])
    t.add("problem", res.problem)
    t.add("degree", res.degree)
    t.add("restarts", res.restarts)
    t.add("value", res.value)
    t.add("record", res.record)
    t.add("status", res.status)
    for k, c in enumerate(res.profile.even):
        t.add(f"coeff_alpha^{2 * k}", c)
    for i, v in enumerate(res.restart_values):
        t.add(f"restart_{i}", v)
    return t


# ---------------------------------------------------------------- empirical

def cmd_empirical(args) -> Table:
    from .empirical import DatasetError, compare_report, form_factor, load_zeros

    if args.steps < 1:
        raise CliError("--steps must be >= 1")
    try:
        ds = load_zeros(args.zeros, args.T)
    except (OSError, DatasetError) as exc:
        raise CliError(str(exc)) from None
    if args.report:
        try:
            rep = compare_report(ds, args.alpha_min, args.alpha_max, args.steps, args.cutoff)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        t = Table(["alpha", "value", "truncation_bound", "reference", "deviation"])
        for r in rep.rows:
            t.add(r.alpha, r.value, r.truncation_bound, r.reference, r.deviation)
        t.footer += [
            f"integral={_fmt(rep.integral)} lower={_fmt(rep.lower)} upper={_fmt(rep.upper)}",
            f"conjectured={_fmt(rep.conjectured)} density_reference={_fmt(rep.density_reference)}",
            f"flag: {rep.note}",
        ]
        return t
    if not args.alpha_max >= args.alpha_min:
        raise CliError("--alpha-max must be >= --alpha-min")
    if not args.cutoff > 0:
        raise CliError("--cutoff must be positive")
    t = Table(["alpha", "value", "truncation_bound"])
    for a in np.linspace(args.alpha_min, args.alpha_max, args.steps + 1):
        est = form_factor(ds, float(a), args.cutoff)
        t.add(est.alpha, est.value, est.truncation_bound)
    return t


# ---------------------------------------------------------------- figures

def figure_tables() -> dict[str, tuple[Table, dict]]:
    """name -> (table, plot options); the first column is the abscissa."""
    from .fbounds import c_bounds_interval, c_minus_triangle, c_plus_triangle, upper_stack
    from .hilbert import embedding_constants, extremal_f, extremal_norm_sq, solve_level
    from .kernels import sinc
    from .logderiv import g_curves, u_minus, u_plus, v_minus, v_plus
    from .sunrise import DEFAULT_DEPTH, build_decomposition, g_minus, g_plus

    out: dict[str, tuple[Table, dict]] = {}

    a = np.linspace(0.05, 10.0, 400)
    gm, gp = g_curves(a)
    t = Table(["a", "G_minus", "G_plus"])
    for row in zip(a, gm, gp):
        t.add(*row)
    out["g_curves"] = (t, dict(xlabel="a", title="G-, G+", hlines=(1.0,)))

    t = Table(["a", "U_minus_over_V_minus", "U_plus_over_V_plus"])
    for row in zip(a, u_minus(a) / v_minus(a), u_plus(a) / v_plus(a)):
        t.add(*row)
    out["uv_ratios"] = (t, dict(xlabel="a", title="U/V", hlines=(1.0,)))

    ell = np.linspace(0.01, 6.0, 600)
    t = Table(["ell", "C_plus_triangle", "C_minus_triangle", "conjectured"])
    for e in ell:
        t.add(e, c_plus_triangle(e), c_minus_triangle(e), e)
    out["triangle_bounds"] = (t, dict(xlabel="ell", title="triangle bounds", steps=("conjectured",)))

    beta = np.linspace(1.01, 6.0, 500)
    t = Table(["beta", "C_minus_1_beta", "C_plus_1_beta", "conjectured"])
    for bt in beta:
        lo, hi = c_bounds_interval(1.0, bt)
        t.add(bt, lo, hi, bt - 1)
    out["c1beta"] = (t, dict(xlabel="beta", title="bounds on [1, beta]", steps=("conjectured",)))

    dec = build_decomposition(DEFAULT_DEPTH)
    x = np.linspace(0.0, 8 * math.pi, 1601)
    t = Table(["x", "sinc_sq", "g_minus", "g_plus"])
    s2 = np.asarray(sinc(x / math.pi)) ** 2
    for row in zip(x, s2, g_minus(x), g_plus(x, dec)):
        t.add(*row)
    out["sunrise"] = (t, dict(xlabel="x", title="sunrise envelopes", ylim=(0.0, 0.1)))

    cfg = upper_stack(2.5)
    t = Table(["delta", "height", "shift"])
    for p in cfg.parts:
        t.add(p.profile.delta, p.height, p.shift)
    t.footer.append(f"window=[{_fmt(cfg.b)}, {_fmt(cfg.b + cfg.length)}]")
    out["stack_l2.5_parts"] = (t, {})
    al = np.linspace(-1.0, 3.5, 901)
    ts = cfg.transform_sum(al)
    ind = ((al >= cfg.b) & (al <= cfg.b + cfg.length)).astype(float)
    t = Table(["alpha", "transform_sum", "indicator"])
    for row in zip(al, ts, ind):
        t.add(*row)
    out["stack_l2.5"] = (t, dict(xlabel="alpha", title="majorant stack, ell = 2.5", steps=("indicator",)))

    ec = embedding_constants()
    t = Table(["N", "lambda_N", "lambda_inf"])
    for n in range(1, 201):
        t.add(n, solve_level(n).lam, ec.lambda_inf)
    out["hilbert_levels"] = (t, dict(xlabel="N", title="lambda_N", steps=("lambda_inf",)))

    z = np.linspace(-6.0, 6.0, 1201)
    f = np.asarray(extremal_f(z, ec.theta)) / math.sqrt(extremal_norm_sq(ec.theta))
    t = Table(["x", "extremal", "sinc"])
    for row in zip(z, f, np.asarray(sinc(z))):
        t.add(*row)
    out["hilbert_extremal"] = (t, dict(xlabel="x", title="normalized extremal"))
    return out


def cmd_figures(args, invocation: str) -> list[Path]:
    from .plotting import line_figure

    out_dir = Path(args.out)
    written: list[Path] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, (table, opts) in figure_tables().items():
            path = out_dir / f"{name}.csv"
            _atomic_write(path, render(table, invocation, None))
            written.append(path)
            if not opts:
                continue
            cols = list(zip(*table.rows))
            series = {c: cols[i] for i, c in enumerate(table.columns) if i}
            written.append(line_figure(out_dir / f"{name}.png", cols[0], series, **opts))
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return written


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        if name != "figures":
            sp.add_argument("-o", "--output", help="write the CSV here instead of stdout")
        return sp

    add("constants", "reproduce the headline constants")

    sp = add("fbound", "sample a bound family for integrals of F")
    sp.add_argument("--kind", choices=_KINDS, required=True)
    sp.add_argument("--b", type=float, default=1.0, help="window start (tri: ell is measured from b)")
    sp.add_argument("--beta", type=float, required=True, help="largest window end")
    sp.add_argument("--steps", type=int, default=100)

    sp = add("jbound", "bounds for the prime variance coefficients")
    sp.add_argument("--beta", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--legacy", action="store_true", help="table of earlier constants")

    sp = add("logderiv", "second-moment envelopes of the log derivative")
    sp.add_argument("--a-min", type=float, default=0.05)
    sp.add_argument("--a-max", type=float, default=6.0)
    sp.add_argument("--steps", type=int, default=100)

    sp = add("hilbert", "embedding constant via the level equations")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--level", type=int)
    g.add_argument("--limit", action="store_true")
    sp.add_argument("--coeffs", action="store_true", help="with --level: print a_1..a_N")

    sp = add("search", "seeded multi-start search over Krein profiles")
    sp.add_argument("--problem", choices=("ep4", "ep5"), required=True)
    sp.add_argument("--degree", type=int, default=8)
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("empirical", "form factor of a zero table")
    sp.add_argument("--zeros", required=True)
    sp.add_argument("--T", type=float)
    sp.add_argument("--alpha-min", type=float, default=0.0)
    sp.add_argument("--alpha-max", type=float, default=3.0)
    sp.add_argument("--steps", type=int, default=60)
    sp.add_argument("--cutoff", type=float, default=100.0)
    sp.add_argument("--report", action="store_true",
                    help="integrate over [alpha-min, alpha-max] and compare with the bounds")

    sp = add("figures", "write CSV and PNG for every figure")
    sp.add_argument("--out", required=True)
    return p


_COMMANDS = {
    "constants": cmd_constants,
    "fbound": cmd_fbound,
    "jbound": cmd_jbound,
    "logderiv": cmd_logderiv,
    "hilbert": cmd_hilbert,
    "search": cmd_search,
    "empirical": cmd_empirical,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    invocation = shlex.join([PROG, *argv])
    try:
        if args.command == "figures":
            for path in cmd_figures(args, invocation):
                print(path)
            return 0
        table = _COMMANDS[args.command](args)
        text = render(table, invocation, getattr(args, "seed", None))
        if args.output:
            _atomic_write(Path(args.output), text)
        else:
            sys.stdout.write(text)
        if any(line.startswith("outside tolerance") for line in table.footer):
            print(f"{PROG}: error: {table.footer[0]}", file=sys.stderr)
            return 1
        return 0
    except CliError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"{PROG}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
