"""Command-line interface: ``capinradius <command> [options]``.

Exit codes: 0 success, 1 failed check or solver failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import report
from .config import ConfigError, apply_defaults, config_path, load_section
from .core import AnnulusGeometry, Exponents, SolverError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
DOMAINS = ("slab", "punctured-ball", "lattice", "ball")


class UsageError(ValueError):
    pass


def _floats(text: str):
    return [float(v) for v in text.replace(",", " ").split()]


def _points(text: str):
    pts = []
    for item in text.split(";"):
        if item.strip():
            x, y = _floats(item)
            pts.append((x, y))
    return pts


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _exp(args) -> Exponents:
    _need(args, "N", "p")
    return Exponents(args.N, args.p)


def _g6(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return str(x)
    return format(float(x), ".6g")


def _table(rows, header) -> str:
    cells = [list(header)] + [[_g6(v) if not isinstance(v, str) else v for v in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


class Output:
    """Collects results; prints human text or JSON and writes ``--out``."""

    def __init__(self, args):
        self.args = args
        self.results = {}
        self.lines = []

    def add(self, key, value):
        self.results[key] = value

    def say(self, text: str):
        self.lines.append(text)

    def flush(self, kind: str) -> None:
        run = {k: v for k, v in sorted(vars(self.args).items())
               if k not in ("func", "out", "json", "config")}
        payload = {"run_config": run, **self.results}
        text = report.dumps(payload, kind)
        if self.args.out:
            report.write_text(self.args.out, text)
        if self.args.json:
            sys.stdout.write(text)
        else:
            print("\n".join(self.lines))


# --------------------------------------------------------------------------- #
# commands

def cmd_capacity(args, out: Output) -> int:
    from .exact import cap_ball_value, cap_point
    exp = _exp(args)
    if args.points:
        from .grid2d import capacity_error_band
        _need(args, "R")
        pts = _points(args.points)
        val, band = capacity_error_band(exp, pts, AnnulusGeometry(args.R / 2, args.R), args.n)
        out.add("capacity", report.tagged(val, "numeric", band, band=band, n=args.n))
        out.say(f"cap_p(points; B_R) = {val:.17g}  method=numeric  band={band:.3g}  n={args.n}")
        return EXIT_OK
    if args.point:
        _need(args, "R")
        c = cap_point(exp, args.R)
        out.add("capacity", report.tagged(c.value, c.method.value, c.tol, status=c.status.value))
        out.say(f"cap_p({{0}}; B_R) = {c.value:.17g}  method={c.method.value}  status={c.status.value}")
        return EXIT_OK
    _need(args, "r", "R")
    geom = AnnulusGeometry(args.r, args.R)
    ref = cap_ball_value(exp.N, exp.p, args.r, args.R)
    out.add("capacity", report.tagged(ref, "closed-form", 0.0))
    out.say(f"cap_p(B_r; B_R) = {ref:.17g}  method=closed-form  tol=0")
    if args.numeric:
        from .radial import radial_capacity
        num, _, rep = radial_capacity(exp, geom, args.n)
        rel = abs(num.value - ref) / ref
        out.add("numeric", report.tagged(num.value, num.method.value, num.tol,
                                         rel_error=rel, n=args.n))
        out.say(f"radial P1 (n={args.n}) = {num.value:.17g}  method=numeric  rel.err={rel:.3g}")
    return EXIT_OK


def cmd_shell(args, out: Output) -> int:
    from . import shell
    _need(args, "N", "p", "r1", "r2", "R")
    N, p, r1, r2, R = args.N, args.p, args.r1, args.r2, args.R
    if p == 1.0:
        k = shell.shell_constant_p1(N, r1, r2, R)
        h = shell.cheeger_shell_constant(N, r1, r2, R)
        out.add("shell", {"sharp_p1": report.tagged(k, "closed-form", 0.0),
                          "cheeger": report.tagged(h, "closed-form", 0.0)})
        out.say(_table([["sharp (p=1)", k], ["Cheeger", h]], ["quantity", "value"]))
        return EXIT_OK
    exp = Exponents(N, p)
    vals = {
        "energy": shell.shell_energy_closed_form(exp, r1, r2, R),
        "sharp": shell.sharp_shell_constant(exp, r1, r2, R),
        "normalized_sharp": shell.normalized_sharp_constant(exp, r1, r2, R),
        "handy": shell.handy_shell_bound(exp, r1, r2, R),
        "rough": shell.rough_shell_bound(exp, r1, R),
    }
    out.add("shell", {k: report.tagged(v, "closed-form", shell.QUAD_RTOL) for k, v in vals.items()})
    out.say(_table([[k, v] for k, v in vals.items()], ["quantity", "value"]))
    if args.profile_csv:
        prof = shell.shell_profile(exp, r1, r2, R)
        rho = np.linspace(0.0, R, args.samples + 1)
        v = prof(rho)
        report.write_text(args.profile_csv, report.csv_text(["rho", "v"], zip(rho.tolist(), v.tolist())))
        out.say(f"profile written to {args.profile_csv}")
    return EXIT_OK


def cmd_constants(args, out: Output) -> int:
    from . import constants as cst
    exp = _exp(args)
    _need(args, "gamma")
    cfg = cst.BoundConfig(args.mazya_C, args.lambda_B1, args.gamma)
    tsc = cst.two_sided_constants(exp, cfg)
    out.add("eps0", report.tagged(tsc.eps0, "closed-form", 0.0))
    out.add("C_upper", report.tagged(tsc.C_upper, "closed-form", 0.0))
    rows = [["eps0", tsc.eps0], ["C", tsc.C_upper]]
    if tsc.sigma is not None:
        out.add("sigma", report.tagged(tsc.sigma, "numeric", 1e-8, note=tsc.sigma_note))
        rows.append(["sigma", tsc.sigma])
    else:
        out.add("sigma", None)
    out.say(_table(rows, ["constant", "value"]))
    if tsc.sigma is None:
        out.say("sigma: pass --mazya-C to evaluate the lower constant")
    if args.asymptotics:
        rep = cst.asymptotics_check(exp)
        out.add("asymptotics", rep)
        out.say(_table([[g, s] for g, s in zip(rep.gammas, rep.scaled)], ["gamma", "scaled C"]))
    if args.sweep_csv:
        gs = np.linspace(0.05, 0.95, 19).tolist()
        report.write_text(args.sweep_csv, report.csv_text(
            ["gamma", "C"], [(g, cst.upper_constant(exp, g)) for g in gs]))
        out.say(f"gamma sweep written to {args.sweep_csv}")
    return EXIT_OK


def _domain(args):
    from .inradius import DomainSpec
    _need(args, "domain", "N")
    size = args.size
    if args.domain == "slab":
        return DomainSpec.slab(args.N, 1.0 if size is None else size)
    if args.domain in ("punctured-ball", "ball"):
        return DomainSpec.punctured_ball(args.N, 1.0 if size is None else size)
    if args.domain == "lattice":
        return DomainSpec.perforated_lattice(args.N, 0.1 if size is None else size)
    raise UsageError(f"unknown domain {args.domain!r}")


def cmd_inradius(args, out: Output) -> int:
    from . import inradius as ir
    from .geometry import phi_N
    exp = _exp(args)
    if args.phi_csv:
        rs = np.linspace(1.0, 10.0, 91).tolist()
        report.write_text(args.phi_csv, report.csv_text(
            ["r", "Phi_N"], [(r, phi_N(exp.N, r)) for r in rs]))
        out.say(f"Phi_N curve written to {args.phi_csv}")
    if args.degeneration:
        rows = []
        for k in range(1, 7):
            d = ir.slab_degeneration(exp, 2.0 ** k)
            rows.append([d.r, d.gamma_lo, d.gamma_hi])
        out.add("degeneration", [dict(zip(("r", "gamma_lo", "gamma_hi"), r)) for r in rows])
        out.say(_table(rows, ["r", "gamma_r lower", "gamma_r upper"]))
        return EXIT_OK
    _need(args, "gamma")
    if args.threshold:
        rg = ir.slab_threshold(exp, args.gamma)
        out.add("r_gamma", report.tagged(rg, "numeric", 1e-13, target=ir.slab_target(exp, args.gamma)))
        out.say(f"r_gamma = {rg:.17g}  (Phi_N(r_gamma) = {ir.slab_target(exp, args.gamma):.17g})")
        return EXIT_OK
    dom = _domain(args)
    if args.r is not None:
        center = _floats(args.center) if args.center else [0.0] * exp.N
        v = ir.negligibility_test(dom, center, args.r, exp, args.gamma, args.n)
        out.add("verdict", v)
        out.say(f"{v.verdict.value}: cap in [{v.cap_lo:.6g}, {v.cap_hi:.6g}], "
                f"threshold {v.threshold:.6g}")
        return EXIT_OK
    b = ir.capacitary_inradius(dom, exp, args.gamma, args.tol)
    out.add("bracket", b)
    out.say(f"R_(p,gamma) in [{b.lo:.17g}, {b.hi:.17g}]  method={b.method}")
    for note in b.notes:
        out.say("note: " + note)
    return EXIT_OK


def cmd_lambda(args, out: Output) -> int:
    from . import benchmarks as bm
    exp = _exp(args)
    if args.domain == "slab":
        est = bm.lambda_slab(exp, args.q, 1.0 if args.size is None else args.size)
    elif args.domain in ("ball", "punctured-ball"):
        est = bm.lambda_ball(exp, args.q, 1.0 if args.size is None else args.size)
    elif args.domain == "lattice":
        est = bm.lambda_perforated(exp, 0.1 if args.size is None else args.size, args.n or 129)
    else:
        raise UsageError("lambda needs --domain slab|ball|lattice")
    out.add("lambda", est)
    extra = f"  bound={est.bound:.6g}" if est.bound is not None else ""
    out.say(f"lambda = {est.value:.17g}  method={est.method}{extra}")
    for w in est.witness:
        out.say("  witness " + "  ".join(_g6(v) for v in w))
    return EXIT_OK


def _sandwich_default():
    from .benchmarks import verify_sandwich
    from .constants import BoundConfig
    from .inradius import DomainSpec
    rep = verify_sandwich(DomainSpec.slab(3), Exponents(3, 2.0), 2.0, 0.5, BoundConfig(1.0, None, 0.5))
    return rep


def cmd_verify(args, out: Output) -> int:
    from .suites import SUITES, run_suites
    names = list(SUITES) if args.suite == "all" else ([] if args.suite == "sandwich" else [args.suite])
    results = run_suites(names, args.seed, args.samples)
    ok = True
    rows = []
    for r in results:
        rows.append([r.name, r.samples, r.failures, r.worst, "PASS" if r.ok else "FAIL"])
        ok &= r.ok
    out.add("suites", results)
    if args.suite in ("all", "sandwich"):
        rep = _sandwich_default()
        out.add("sandwich", rep)
        rows.append(["sandwich", 1, int(not rep.upper_ok), rep.C_over_lo_p,
                     "PASS" if rep.upper_ok else "FAIL"])
        ok &= bool(rep.upper_ok)
    out.say(_table(rows, ["suite", "samples", "failures", "worst", "status"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args, out: Output) -> int:
    from . import constants as cst
    from .geometry import phi_N
    from .inradius import perforated_lambda_bound, slab_threshold
    exp = Exponents(args.N or 3, args.p or 2.0)
    d = Path(args.out_dir)
    gs = np.linspace(0.05, 0.95, 19).tolist()
    gamma_rows = [(g, cst.upper_constant(exp, g), cst.epsilon0(exp, g)) for g in gs]
    eps = [1e-1, 1e-2, 1e-3, 1e-4]
    two = Exponents(2, 2.0)
    eps_rows = [(e, perforated_lambda_bound(two, e)) for e in eps]
    rs = np.linspace(1.0, 10.0, 91).tolist()
    phi_rows = [(r, phi_N(exp.N, r)) for r in rs]
    files = {
        "gamma_sweep.csv": report.csv_text(["gamma", "C", "eps0"], gamma_rows),
        "eps_sweep.csv": report.csv_text(["eps", "lambda_bound"], eps_rows),
        "phi_curve.csv": report.csv_text(["r", "Phi_N"], phi_rows),
    }
    for name, text in files.items():
        report.write_text(d / name, text)
    summary = {
        "constants": {"N": exp.N, "p": exp.p,
                      "gamma_sweep": [{"gamma": g, "C": report.tagged(c, "closed-form", 0.0),
                                       "eps0": report.tagged(e, "closed-form", 0.0)}
                                      for g, c, e in gamma_rows]},
        "perforated_bound": [{"eps": e, "bound": report.tagged(b, "closed-form", 0.0)}
                             for e, b in eps_rows],
    }
    if exp.regime.value == "1<p<N":
        summary["r_gamma"] = report.tagged(slab_threshold(exp, 0.5), "numeric", 1e-13, gamma=0.5)
    report.write_text(d / "report.json", report.dumps(summary, "report"))
    out.add("files", sorted(files) + ["report.json"])
    out.say("wrote " + ", ".join(str(d / f) for f in sorted(files) + ["report.json"]))
    return EXIT_OK


# --------------------------------------------------------------------------- #
# parser

def _common(sp):
    sp.add_argument("--N", type=int, help="dimension")
    sp.add_argument("--p", type=float, help="exponent p >= 1")
    sp.add_argument("--json", action="store_true", help="print JSON instead of text")
    sp.add_argument("--out", help="also write the JSON result to this path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="capinradius",
                                 description="Capacities, capacitary inradius and Poincare constants.")
    ap.add_argument("--config", help="INI config file (default: $CAPINRADIUS_CONFIG)")
    sub = ap.add_subparsers(dest="command", metavar="command")

    sp = sub.add_parser("capacity", help="ball, point and obstacle capacities")
    _common(sp)
    sp.add_argument("--r", type=float)
    sp.add_argument("--R", type=float)
    sp.add_argument("--numeric", action="store_true", help="also run the radial P1 solver")
    sp.add_argument("--point", action="store_true", help="capacity of the center of B_R")
    sp.add_argument("--points", help="planar point obstacle 'x,y;x,y' (grid solve)")
    sp.add_argument("--n", type=int, default=4096, help="cells (radial) or grid side")
    sp.set_defaults(func=cmd_capacity)

    sp = sub.add_parser("shell", help="shell potential and Poincare constants")
    _common(sp)
    for k in ("r1", "r2", "R"):
        sp.add_argument("--" + k, type=float)
    sp.add_argument("--profile-csv", help="write the radial profile to this CSV")
    sp.add_argument("--samples", type=int, default=200, help="profile sample count")
    sp.set_defaults(func=cmd_shell)

    sp = sub.add_parser("constants", help="eps0, C and sigma")
    _common(sp)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--mazya-C", dest="mazya_C", type=float, help="Maz'ya-Poincare constant")
    sp.add_argument("--lambda-B1", dest="lambda_B1", type=float, help="override lambda_p(B_1)")
    sp.add_argument("--asymptotics", action="store_true")
    sp.add_argument("--sweep-csv", help="write gamma vs C to this CSV")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("inradius", help="capacitary inradius brackets and slab threshold")
    _common(sp)
    sp.add_argument("--domain", choices=DOMAINS, default="slab")
    sp.add_argument("--size", type=float, help="slab half-width, ball radius or hole radius")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--n", type=int, default=None, help="grid side for planar fallbacks")
    sp.add_argument("--r", type=float, help="single negligibility test at this radius")
    sp.add_argument("--center", help="center coordinates for --r")
    sp.add_argument("--threshold", action="store_true", help="slab threshold r_gamma")
    sp.add_argument("--degeneration", action="store_true", help="gamma_r for r = 2^k")
    sp.add_argument("--phi-csv", help="write r vs Phi_N(r) to this CSV")
    sp.set_defaults(func=cmd_inradius)

    sp = sub.add_parser("lambda", help="benchmark eigenvalue estimates")
    _common(sp)
    sp.add_argument("--domain", choices=DOMAINS, default="slab")
    sp.add_argument("--size", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("verify", help="property suites and sandwich reports")
    sp.add_argument("--suite", default="all",
                    choices=("grotzsch", "shell-order", "eps0", "asymptotics", "superconformal",
                             "capacity", "sandwich", "all"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", help="aggregate JSON and plot-data CSVs")
    sp.add_argument("--N", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--out-dir", default="capinradius-report")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        pre, _ = ap.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if pre.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_CONFIG
    sub = ap._subparsers._group_actions[0].choices[pre.command]
    try:
        path = config_path(pre.config)
        if path:
            apply_defaults(sub, load_section(path, pre.command))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args)
    try:
        code = args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        out.flush(args.command)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
