"""theta-forge command line.

Exit codes: 0 success, 1 bad input, 2 a verification failed, 3 a series or
solver did not converge.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._mp import ctx, format_complex, parse_complex
from .errors import NoConvergence, TailNotConverged, ThetaForgeError, TruncationTooCoarse

SCHEMA = 1
EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CONVERGENCE = 0, 1, 2, 3
FUNCS = ("theta1", "theta2", "theta3", "theta4", "sigma", "zeta", "wp", "wp_prime",
         "eta", "eta_dedekind", "g2", "g3", "J")
GRIDS = ("A", "B_eps", "B_sigma", "G_theta1", "G_ab")
SUITES = ("x", "tau", "var", "g2g3", "scalars", "family", "noncanonical", "p6")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CliConfig:
    command: str
    precision: float = 1e-10
    seed: int = 0
    output: str = "json"
    args: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1e-13 <= self.precision <= 1e-4:
            raise UsageError("--precision must lie in [1e-13, 1e-4]")
        if self.output not in ("json", "csv", "plain"):
            raise UsageError("--report must be json, csv or plain")


def _complex(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("THETA_FORGE_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(z) -> str:
    return format_complex(z, 20)


def _posterior(fn):
    """Value at working precision and an a posteriori bound from a higher-precision rerun."""
    v = fn()
    with ctx.workdps(ctx.dps + 15):
        w = fn()
    return v, float(abs(ctx.mpc(v) - w)) + float(abs(v)) * 10.0 ** (-ctx.dps + 2)


# eval


def _eval_value(func, x, tau, budget):
    from . import constants as C
    from .theta import theta_bounded
    from .weierstrass import zeta_wp

    if func.startswith("theta"):
        b = theta_bounded(int(func[-1]), x, tau, budget)
        return b.value, b.error
    if func in ("sigma", "zeta", "wp", "wp_prime"):
        attr = {"sigma": "sigma", "zeta": "zeta", "wp": "wp", "wp_prime": "wp_prime"}[func]
        return _posterior(lambda: getattr(zeta_wp(x, tau), attr))
    if func == "eta":
        return _posterior(lambda: C.eta_w(tau, budget))
    if func == "eta_dedekind":
        b = C.eta_dedekind_bounded(tau, budget)
        return b.value, b.error
    if func in ("g2", "g3"):
        return _posterior(lambda: C.g2_g3_lambert(tau, budget)[func == "g3"])
    return _posterior(lambda: C.klein_j(tau, budget))


def cmd_eval(cfg: CliConfig, out):
    from .theta import SeriesBudget

    a = cfg.args
    budget = SeriesBudget()
    value, bound = _eval_value(a["func"], a["x"], a["tau"], budget)
    if bound > cfg.precision:
        raise TailNotConverged(f"achieved bound {bound:.3g} exceeds --precision {cfg.precision:g}")
    rec = {"schema": SCHEMA, "func": a["func"], "x": _fmt(a["x"]), "tau": _fmt(a["tau"]),
           "value": _fmt(value), "error_bound": bound}
    if cfg.output == "plain":
        out.write(f"{_fmt(value)} +/- {bound:.3g}\n")
    elif cfg.output == "csv":
        out.write("func,value,error_bound\n")
        out.write(f"{a['func']},{_fmt(value)},{bound:.3g}\n")
    else:
        out.write(json.dumps(rec) + "\n")
    return EXIT_OK


# coeffs


def cmd_coeffs(cfg: CliConfig, out):
    from . import series as S

    a = cfg.args
    m, n = a["m"], a["n"]
    grid = a["grid"]
    if grid == "A":
        g = S.grid_A(m, n)
    elif grid == "B_eps":
        g = S.grid_B_eps(a["eps"], m, n)
    elif grid == "B_sigma":
        g = S.grid_B_sigma(m, n)
    elif grid == "G_theta1":
        g = S.grid_G_theta1(m, n)
    else:
        g = S.G_ab_permuted(a["alpha"], a["beta"], m, n)
    rec = dict(schema=SCHEMA, **g.to_json(), error_bound=0)
    if cfg.output == "json":
        out.write(json.dumps(rec) + "\n")
    else:
        sep = "," if cfg.output == "csv" else " "
        for row in rec["rows"]:
            out.write(sep.join(row) + "\n")
    return EXIT_OK


# verify


def _sample_tau(rng):
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.6))


def _sample_x(rng):
    return complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.2, 0.2))


def _suite_checks(suite, rng, samples, tol_scale):
    """Deterministic list of (suite, point, tol_scale) items to evaluate."""
    out = []
    for _ in range(samples):
        tau, x = _sample_tau(rng), _sample_x(rng)
        if suite in ("x", "tau"):
            pt = (x, tau)
        elif suite in ("var", "g2g3", "scalars"):
            pt = (tau,)
        elif suite == "family":
            pt = (_sample_x(rng) * 0.5, _sample_x(rng) * 0.5, 1, x, tau)
        elif suite == "noncanonical":
            pt = (x, complex(0, rng.uniform(1.0, 1.6)), rng.uniform(0.8, 1.3))
        else:
            pt = (complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                  complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                  complex(rng.uniform(0.2, 0.8), rng.uniform(-0.3, 0.3)))
        out.append((suite, pt, tol_scale))
    return out


def _run_check(item):
    from . import diffsys as D
    from . import noncanonical as N
    from . import painleve as P

    suite, args, scale = item
    vals = [ctx.mpc(v) for v in args]
    try:
        if suite == "x":
            reps = [D.residual_X(vals[0], vals[1], 1e-9 * scale)]
        elif suite == "tau":
            reps = [D.residual_TAU(vals[0], vals[1], 1e-9 * scale)]
        elif suite == "var":
            reps = [D.residual_VAR(vals[0], 1e-9 * scale)]
        elif suite == "g2g3":
            reps = [D.residual_G2G3(vals[0], 1e-9 * scale)]
        elif suite == "scalars":
            reps = [D.residual_scalar(w, vals[0], 1e-8 * scale) for w in ("chazy", "jacobi_c", "halphen_x")]
            reps.append(D.residual_scalar("psi", vals[0], 1e-6 * scale))
        elif suite == "family":
            reps = [D.verify_solution_family_sol(*vals, tol=1e-8 * scale)]
        elif suite == "noncanonical":
            x, mu, kappa = vals
            gs = N.GeneralSolution(0.1, 0.2, 1, kappa, mu)
            params = N.params_from_family(gs, 0.9, 1.1, 0.95, eta=0.3)
            reps = [N.family_x_residual(gs, params, x, tol=1e-8 * scale)]
        else:
            A, B, x = vals
            h = P.PicardHitchinParams(A, B, "hitchin")
            p = P.PicardHitchinParams(A, B, "picard")
            r1 = P.p6_residual(lambda s: P.hitchin_solution(h, s), x, *P.HITCHIN)
            r2 = P.p6_residual(lambda s: P.picard_solution(p, s), x, *P.PICARD)
            reps = [D.SystemResidual("P6", (A, B, x), [r1, r2], 1e-6 * scale, ["hitchin", "picard"])]
        return [r.to_json() for r in reps]
    except ThetaForgeError as exc:
        return [{"system": suite, "point": [_fmt(v) for v in vals], "skipped": type(exc).__name__,
                 "pass": True}]


def cmd_verify(cfg: CliConfig, out):
    a = cfg.args
    suites = SUITES if a["suite"] == "all" else (a["suite"],)
    rng = random.Random(cfg.seed)
    items = []
    for s in suites:
        items += _suite_checks(s, rng, a["samples"], a["tol_scale"])
    n = _threads()
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_run_check, items))
    else:
        results = [_run_check(i) for i in items]
    flat = [r for rs in results for r in rs]
    failed = [r for r in flat if not r["pass"]]
    report = {"schema": SCHEMA, "seed": cfg.seed, "samples": a["samples"], "suites": list(suites),
              "checks": len(flat), "failed": len(failed), "results": flat}
    if cfg.output == "json":
        out.write(json.dumps(report) + "\n")
    else:
        for r in flat:
            mark = "PASS" if r["pass"] else "FAIL"
            out.write(f"{mark} {r['system']} max_residual={r.get('max_residual', 0):.3g} tol={r.get('tol', 0):.1g}\n")
    return EXIT_VERIFY if failed else EXIT_OK


# invert


def cmd_invert(cfg: CliConfig, out):
    from .constants import invariants_of_periods, modular_inversion

    g2, g3 = cfg.args["g2"], cfg.args["g3"]
    om, omp = modular_inversion(g2, g3)
    b2, b3 = invariants_of_periods(om, omp)
    err = max(float(abs(b2 - g2) / max(abs(g2), 1)), float(abs(b3 - g3) / max(abs(g3), 1)))
    rec = {"schema": SCHEMA, "g2": _fmt(g2), "g3": _fmt(g3), "omega": _fmt(om), "omega_prime": _fmt(omp),
           "tau": _fmt(omp / om), "error_bound": err}
    if err > cfg.precision:
        out.write(json.dumps(rec) + "\n")
        return EXIT_VERIFY
    if cfg.output == "plain":
        out.write(f"omega={_fmt(om)} omega_prime={_fmt(omp)} +/- {err:.3g}\n")
    else:
        out.write(json.dumps(rec) + "\n")
    return EXIT_OK


# poles


def _parse_range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, expected lo:hi") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("range must have lo <= hi")
    return lo, hi


def cmd_poles(cfg: CliConfig, out, err):
    from .painleve import pole_lattice

    a = cfg.args
    m_range = a["m_range"] or a["range"]
    lat = pole_lattice(a["A"], a["B"], a["range"], m_range, tol=a["zero_tol"])
    lines = list(lat.csv_rows())
    lines[0] += ",theta_abs"
    for i, p in enumerate(lat.poles, 1):
        lines[i] += f",{p.theta_abs:.3e}"
    meta = dict(schema=SCHEMA, **lat.metadata())
    if a["out"]:
        with open(a["out"], "w") as fh:
            fh.write("\n".join(lines) + "\n")
        with open(a["out"] + ".json", "w") as fh:
            json.dump(meta, fh, indent=1)
    else:
        out.write("\n".join(lines) + "\n")
        err.write(json.dumps(meta) + "\n")
    ok = lat.verified_count >= 0.99 * max(lat.admissible_count, 1)
    return EXIT_OK if ok else EXIT_VERIFY


# p6


def cmd_p6(cfg: CliConfig, out):
    from . import painleve as P

    a = cfg.args
    params = P.PicardHitchinParams(a["A"], a["B"], a["variant"])
    x = a["x"]
    y, bound = _posterior(lambda: P.solution(params, x))
    rec = {"schema": SCHEMA, "variant": a["variant"], "x": _fmt(x), "y": _fmt(y), "error_bound": bound}
    code = EXIT_OK
    if a["residual"]:
        r = P.p6_residual(lambda s: P.solution(params, s), x, *params.p6_params)
        rec["residual"] = r
        rec["residual_tol"] = 1e-6
        if r > 1e-6:
            code = EXIT_VERIFY
    if a["okamoto"]:
        pic = P.PicardHitchinParams(params.A, params.B, "picard")
        yo, bo = _posterior(lambda: P.okamoto_picard(pic, x))
        rec["okamoto_y"] = _fmt(yo)
        rec["okamoto_error_bound"] = bo
    if cfg.output == "plain":
        out.write(" ".join(f"{k}={v}" for k, v in rec.items()) + "\n")
    else:
        out.write(json.dumps(rec) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="theta-forge", description="Verified theta-function numerics.")
    p.add_argument("--precision", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default="json", choices=("json", "csv", "plain"))
    # the same options are accepted after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--report", choices=("json", "csv", "plain"), default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    e = sub.add_parser("eval", help="evaluate a function at (x, tau)")
    e.add_argument("--func", required=True, choices=FUNCS)
    e.add_argument("--x", type=_complex, default=parse_complex("0"))
    e.add_argument("--tau", type=_complex, required=True)

    c = sub.add_parser("coeffs", help="export an integer recurrence grid")
    c.add_argument("--grid", required=True, choices=GRIDS)
    c.add_argument("--m", type=int, default=6)
    c.add_argument("--n", type=int, default=6)
    c.add_argument("--eps", type=int, default=1, choices=(0, 1))
    c.add_argument("--alpha", type=int, default=1)
    c.add_argument("--beta", type=int, default=0)

    v = sub.add_parser("verify", help="randomized residual sweeps")
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--samples", type=int, default=5)
    v.add_argument("--tol-scale", dest="tol_scale", type=float, default=1.0)

    i = sub.add_parser("invert", help="half-periods from (g2, g3)")
    i.add_argument("--g2", type=_complex, required=True)
    i.add_argument("--g3", type=_complex, required=True)

    q = sub.add_parser("poles", help="first-series pole lattice as CSV")
    q.add_argument("--A", type=_complex, required=True)
    q.add_argument("--B", type=_complex, required=True)
    q.add_argument("--range", type=_parse_range, required=True, help="n range lo:hi (also m unless --m-range)")
    q.add_argument("--m-range", dest="m_range", type=_parse_range, default=None)
    q.add_argument("--zero-tol", dest="zero_tol", type=float, default=1e-8)
    q.add_argument("--out", default=None, help="CSV path; metadata goes to <path>.json")

    s = sub.add_parser("p6", help="Picard or Hitchin solution of Painleve VI")
    s.add_argument("--variant", default="hitchin", choices=("hitchin", "picard"))
    s.add_argument("--A", type=_complex, required=True)
    s.add_argument("--B", type=_complex, required=True)
    s.add_argument("--x", type=_complex, required=True)
    s.add_argument("--residual", action="store_true")
    s.add_argument("--okamoto", action="store_true")
    return p


def run(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    handlers = {"eval": cmd_eval, "coeffs": cmd_coeffs, "verify": cmd_verify,
                "invert": cmd_invert, "p6": cmd_p6}
    try:
        if cfg.command == "poles":
            return cmd_poles(cfg, out, err)
        return handlers[cfg.command](cfg, out)
    except (NoConvergence, TailNotConverged, TruncationTooCoarse) as exc:
        err.write(f"convergence failure: {exc}\n")
        return EXIT_CONVERGENCE
    except (ThetaForgeError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        args = {k: v for k, v in vars(ns).items() if k not in ("command", "precision", "seed", "report")}
        cfg = CliConfig(ns.command, ns.precision, ns.seed, ns.report, args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
