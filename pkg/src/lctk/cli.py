"""``lctk`` command-line interface.

Exit status: 0 on success, 1 on domain errors (the error class name is
printed), 2 on usage errors including unbound parameters.
"""

import argparse
import contextlib
import json
import sys

from . import __version__
from .algebra.text import format_rational
from .algebra import (
    Binding,
    TransferFunction,
    as_rational,
    parse_tf,
    tf_eval,
    tf_feedback,
    tf_to_json,
)
from .circuits import format_netlist, netlist_tf, parse_netlist, parse_value
from .circuits import realize_compensator, realize_controller
from .errors import LctkError, UnboundParameter
from .laplace import ACTUAL_INIT, ZERO_INIT, laplace_numeric, laplace_symbolic, parse_sexpr
from .laplace.symbolic import NEG_INF
from .lti import OdeSystem, oracle_check_tf, transfer_function
from .margins import DEFAULT_RANGE, bode_sweep, default_ppd, margin_report
from .ufss import UfssParams, ufss_pitch_tf


class UsageError(Exception):
    pass


def _g(x):
    return f"{x:.6g}"


def _complex_arg(text):
    t = text.replace(" ", "").replace("i", "j")
    if t.endswith("j") and (len(t) == 1 or t[-2] in "+-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _binding_arg(text):
    name, sep, value = text.partition("=")
    if not sep or not name.strip().isidentifier():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), as_rational(value.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad value in {text!r}") from None


def _binding(args):
    return Binding(dict(getattr(args, "bind", None) or []))


def _read_text(arg):
    """Inline text, ``-`` for stdin, or a path."""
    if arg == "-":
        return sys.stdin.read()
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError:
        return arg


def _dump(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def _complex_json(z):
    return [z.real, z.imag]


def _roc_text(roc):
    return "-inf" if roc == NEG_INF else format_rational(roc)


# -- subcommands ----------------------------------------------------------------

def cmd_laplace(args, out):
    expr = parse_sexpr(args.expr)
    iv = {"zero": ZERO_INIT, "actual": ACTUAL_INIT}[args.iv]
    res = laplace_symbolic(expr, iv)
    check = None
    if args.check is not None:
        s = args.check
        symbolic = tf_eval(res.tf, None, s)
        numeric = laplace_numeric(expr, s, tol=args.tol)
        diff = abs(symbolic - numeric)
        check = {"s": _complex_json(s), "symbolic": _complex_json(symbolic),
                 "numeric": _complex_json(numeric), "abs_diff": diff}
    if args.json:
        data = {"tf": str(res.tf), "tf_json": tf_to_json(res.tf), "roc": _roc_text(res.roc)}
        if check:
            data["check"] = check
        _dump(data, out)
    else:
        out.write(f"{res.tf}  ROC: Re s > {_roc_text(res.roc)}\n")
        if check:
            out.write(f"check at s = {_g(args.check)}: symbolic {_g(complex(*check['symbolic']))}"
                      f"  numeric {_g(complex(*check['numeric']))}  diff {_g(check['abs_diff'])}\n")
    return 0


def _ode_from_arg(arg):
    text = _read_text(arg)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"ODE input is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "alpha" not in data or "beta" not in data:
        raise UsageError('ODE JSON needs "alpha" and "beta" lists')
    return OdeSystem.from_json(data)


def cmd_tf_from_ode(args, out):
    tf = transfer_function(_ode_from_arg(args.ode))
    if args.json:
        _dump({"tf": str(tf), "tf_json": tf_to_json(tf)}, out)
    else:
        out.write(f"{tf}\n")
    return 0


def cmd_tf_from_netlist(args, out):
    net = parse_netlist(_read_text(args.netlist))
    tf, trace = netlist_tf(net)
    if args.json:
        data = {"tf": str(tf), "tf_json": tf_to_json(tf)}
        if args.trace:
            data["trace"] = {"unknowns": list(trace.unknowns), "equations": list(trace.equations),
                             "steps": list(trace.steps)}
        _dump(data, out)
    else:
        out.write(f"{tf}\n")
        if args.trace:
            out.write(trace.format() + "\n")
    return 0


def _ppd(args):
    return args.ppd if args.ppd is not None else default_ppd()


def cmd_bode(args, out):
    tf = parse_tf(args.tf)
    sweep = bode_sweep(tf, _binding(args), args.wmin, args.wmax, _ppd(args))
    out.write(sweep.to_csv())
    return 0


def _report_text(rep, out, label=""):
    def opt(x, unit=""):
        return "none" if x is None else _g(x) + unit

    p = f"{label}: " if label else ""
    out.write(f"{p}gain crossovers: {', '.join(_g(w) for w in rep.gain_crossovers) or 'none'}\n")
    out.write(f"{p}phase crossovers: {', '.join(_g(w) for w in rep.phase_crossovers) or 'none'}\n")
    out.write(f"{p}phase margin: {opt(rep.phase_margin_deg, ' deg')} at w = {opt(rep.w_gc)}\n")
    out.write(f"{p}gain margin (|GH| at phase crossover): {opt(rep.gain_margin_db, ' dB')}"
              f" at w = {opt(rep.w_pc)}\n")
    out.write(f"{p}gain margin (conventional): {opt(rep.gain_margin_db_conventional, ' dB')}\n")
    out.write(f"{p}closed-loop Routh verdict: {rep.stable_closed_loop or 'n/a'}\n")


def cmd_margins(args, out):
    g = parse_tf(args.g)
    h = parse_tf(args.h) if args.h else TransferFunction(1)
    rep = margin_report(g, h, _binding(args), (args.wmin, args.wmax), _ppd(args))
    if args.text:
        _report_text(rep, out)
    else:
        _dump(rep.to_json(), out)
    return 0


def cmd_verify(args, out):
    sys_ = _ode_from_arg(args.ode)
    tf = parse_tf(args.tf)
    samples = args.s or [1, 2, 1 + 1j]
    rep = oracle_check_tf(sys_, tf, _binding(args), samples, dt=args.dt, threshold=args.threshold)
    if args.text:
        for x in rep.samples:
            out.write(f"s = {_g(x.s)}: measured {_g(x.measured)}  expected {_g(x.expected)}"
                      f"  rel error {_g(x.rel_error)}\n")
        out.write(("PASS" if rep.passed else "FAIL") + f" (threshold {_g(rep.threshold)})\n")
    else:
        _dump(rep.to_json(), out)
    return 0 if rep.passed else 1


def cmd_case_ufss(args, out):
    params = UfssParams(args.k1, args.k2)
    tf = ufss_pitch_tf(params)
    reports = {}
    if args.margins:
        wr = (args.wmin, args.wmax)
        reports["open_loop"] = margin_report(tf, 1, None, wr, _ppd(args))
        reports["closed_loop"] = margin_report(tf_feedback(tf), 1, None, wr, _ppd(args))
    if args.json:
        data = {"K1": format_rational(params.K1.constant_value()),
                "K2": format_rational(params.K2.constant_value()),
                "tf": str(tf), "tf_json": tf_to_json(tf)}
        for k, rep in reports.items():
            data[k] = rep.to_json()
        _dump(data, out)
    else:
        out.write(f"{tf}\n")
        for k, rep in reports.items():
            _report_text(rep, out, k.replace("_", " "))
    return 0


def _param_arg(text):
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), value.strip()


def cmd_realize(args, out):
    try:
        params = {k: parse_value(v) for k, v in args.params}
    except LctkError as exc:
        raise UsageError(f"bad component value: {exc}") from None
    if args.family == "controller":
        net = realize_controller(args.kind, params)
    else:
        net = realize_compensator(args.kind, args.realization, params)
    out.write(format_netlist(net))
    if args.tf:
        tf, _ = netlist_tf(net)
        out.write(f"# V(out)/V(in) = {tf}\n")
    return 0


# -- parser -------------------------------------------------------------------

def _sweep_flags(p):
    p.add_argument("--wmin", type=float, default=DEFAULT_RANGE[0], help="lowest frequency, rad/s")
    p.add_argument("--wmax", type=float, default=DEFAULT_RANGE[1], help="highest frequency, rad/s")
    p.add_argument("--ppd", type=int, default=None,
                   help="points per decade (default 200, or $LCTK_SWEEP_PPD)")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bind", action="append", type=_binding_arg, metavar="NAME=VALUE",
                        help="bind a parameter to a number (repeatable)")

    parser = argparse.ArgumentParser(
        prog="lctk",
        description="Transfer functions of linear control systems: Laplace transforms, "
                    "ODE and netlist derivations, Bode sweeps and stability margins.",
    )
    parser.add_argument("--version", action="version", version=f"lctk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("laplace", help="symbolic Laplace transform of a time expression")
    p.add_argument("expr", help='s-expression, e.g. "(exp -1)" or "(add (pow 2) (sin 3))"')
    p.add_argument("--check", type=_complex_arg, metavar="S",
                   help="compare against numeric quadrature at this s")
    p.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance for --check")
    p.add_argument("--iv", choices=("zero", "actual"), default="zero",
                   help="initial values for derivatives (default zero)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_laplace)

    p = sub.add_parser("tf", help="derive a transfer function")
    tsub = p.add_subparsers(dest="source", required=True, metavar="SOURCE")
    q = tsub.add_parser("from-ode", help="from ODE coefficient JSON (file, inline, or -)")
    q.add_argument("ode")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_tf_from_ode)
    q = tsub.add_parser("from-netlist", help="from a netlist file (or - for stdin)")
    q.add_argument("netlist")
    q.add_argument("--trace", action="store_true", help="print the nodal equations and elimination")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_tf_from_netlist)

    p = sub.add_parser("bode", parents=[common], help="Bode sweep as CSV")
    p.add_argument("tf")
    _sweep_flags(p)
    p.set_defaults(func=cmd_bode)

    p = sub.add_parser("margins", parents=[common], help="gain/phase margins of G*H as JSON")
    p.add_argument("g")
    p.add_argument("--h", default=None, help="feedback path (default 1)")
    p.add_argument("--text", action="store_true", help="human-readable output")
    _sweep_flags(p)
    p.set_defaults(func=cmd_margins)

    p = sub.add_parser("verify", parents=[common],
                       help="check a transfer function against simulation of an ODE")
    p.add_argument("ode", help="ODE coefficient JSON (file, inline, or -)")
    p.add_argument("--tf", required=True)
    p.add_argument("--threshold", type=float, default=1e-2)
    p.add_argument("--dt", type=float, default=2e-3)
    p.add_argument("--s", action="append", type=_complex_arg, help="sample point (repeatable)")
    p.add_argument("--text", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("case", help="built-in case studies")
    csub = p.add_subparsers(dest="case", required=True, metavar="CASE")
    q = csub.add_parser("ufss", help="submersible pitch loop")
    q.add_argument("--k1", required=True, type=as_rational, help="pitch gain")
    q.add_argument("--k2", required=True, type=as_rational, help="pitch rate sensor gain")
    q.add_argument("--margins", action="store_true",
                   help="margins of the pitch TF and of its unity-feedback closure")
    q.add_argument("--json", action="store_true")
    _sweep_flags(q)
    q.set_defaults(func=cmd_case_ufss)

    p = sub.add_parser("realize", help="netlist of a built-in realization")
    p.add_argument("family", choices=("controller", "compensator"))
    p.add_argument("kind", help="P I D PI PD PID, or lag lead laglead")
    p.add_argument("params", nargs="*", type=_param_arg, metavar="NAME=VALUE",
                   help="component values, e.g. R1=10k C1=1u (omitted ones stay symbolic)")
    p.add_argument("--realization", choices=("active", "passive"), default="active")
    p.add_argument("--tf", action="store_true", help="append the derived TF as a comment")
    p.set_defaults(func=cmd_realize)
    return parser


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UnboundParameter as exc:
        err.write(parser.format_usage())
        err.write(f"lctk: usage error: {exc}; bind with --bind NAME=VALUE\n")
        return 2
    except (UsageError, ValueError) as exc:
        err.write(parser.format_usage())
        err.write(f"lctk: usage error: {exc}\n")
        return 2
    except LctkError as exc:
        err.write(f"lctk: {exc.name}: {exc}\n")
        return 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
