"""Command-line surface: every constant, table, and figure-class of the
renormalization analysis as JSON/CSV artifacts.

Exit codes: 0 success, 1 invariant failure, 2 usage error, 3 numerical
failure (no root, weak expansion, empty domain, ...).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import extension as ext
from . import horseshoe as hs
from . import report as rpt
from . import verify as ver
from .pwa import build_pwa
from .quadratic import QuadraticUnimodal, eval_map
from .scaling import (
    DivisionGuard,
    EmptyDomain,
    Period,
    conditions,
    feasible_domain,
    gaps,
    return_map,
    scaling_from_critical,
)
from .solver import MultipleRoots, NoRoot, continuum_sweep, solve_fixed_point
from .tower import (
    DEFAULT_DEPTH,
    InvalidFactor,
    ScalingSequence,
    build_tower,
    cantor_dimension,
    hor_bound,
    ratio_report,
    verify_proper,
)

NUMERICAL_ERRORS = (
    NoRoot,
    MultipleRoots,
    EmptyDomain,
    DivisionGuard,
    InvalidFactor,
    hs.ExpansionTooWeak,
    ext.FillerOvershoot,
    ext.NonConvergent,
)


def _period(args) -> Period:
    return Period.THREE if args.period == 3 else Period.FIVE


def _add_common(p):
    p.add_argument("--period", type=int, choices=(3, 5), default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--eps", type=str, default=None, help="comma-separated eps list")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", type=str, choices=("json", "csv"), default=None)
    p.add_argument("--config", type=str, default=None, help="JSON file of defaults; flags win")


def build_parser():
    ap = argparse.ArgumentParser(prog="renorm", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("solve", "feasible", "tower", "extend", "horseshoe"):
        _add_common(sub.add_parser(name))
    p = sub.add_parser("plotdata")
    p.add_argument("kind", choices=("scaling", "returnmap", "cobweb", "tower", "extension"))
    _add_common(p)
    p = sub.add_parser("verify")
    p.add_argument("suite", choices=("all", "tower", "pwa", "extension", "horseshoe"))
    _add_common(p)
    p.add_argument("--full", action="store_true", help="acceptance-scale depths")
    return ap


DEFAULTS = {
    "period": 3,
    "tol": 1e-13,
    "grid": 2000,
    "step": 1e-4,
    "resolution": 256,
    "seed": 0,
    "format": "json",
}


def _merge_config(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
    for key, value in vars(args).items():
        if value is None and key in cfg:
            setattr(args, key, cfg[key])
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _config_echo(args) -> dict:
    skip = {"command", "config"}
    return {
        k: v for k, v in sorted(vars(args).items())
        if k not in skip and v is not None
    }


def _emit(args, text: str) -> None:
    if args.out:
        rpt.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _emit_report(args, results: dict) -> None:
    doc = rpt.make_report(args.command, _config_echo(args), results)
    text = rpt.write_report(doc, args.out)
    if not args.out:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    period = _period(args)
    domain = feasible_domain(period, scan_step=args.step)
    rep = solve_fixed_point(period, domain, tol=args.tol)
    factor = scaling_from_critical(period, rep.c_star)
    gv = gaps(period, rep.c_star)
    _emit_report(
        args,
        {
            "period": period.p,
            "c_star": rep.c_star,
            "residual": rep.residual,
            "derivative": rep.derivative_estimate,
            "expanding": rep.expanding,
            "bracketing_interval": list(rep.bracketing_interval),
            "scaling_factor": list(factor.s),
            "scaling_sum": sum(factor.s),
            "gaps": list(gv.gaps),
            "feasible_intervals": [list(iv) for iv in domain.intervals],
        },
    )
    return 0


def cmd_feasible(args) -> int:
    period = _period(args)
    domain = feasible_domain(period, scan_step=args.step)
    bind = {round(c, 9): name for c, name in domain.boundaries + domain.punctures}
    if args.format == "csv":
        rows = []
        for lo, hi in domain.intervals:
            rows.append(
                (lo, hi, "lo:%s;hi:%s" % (bind.get(round(lo, 9), "-"), bind.get(round(hi, 9), "-")))
            )
        _emit(args, rpt.to_csv(("lo", "hi", "binding_condition"), rows))
    else:
        _emit_report(
            args,
            {
                "period": period.p,
                "intervals": [list(iv) for iv in domain.intervals],
                "boundaries": [{"c": c, "condition": n} for c, n in domain.boundaries],
                "punctures": [{"c": c, "condition": n} for c, n in domain.punctures],
            },
        )
    return 0


def _solved_sequence(period, tol):
    rep = solve_fixed_point(period, tol=tol)
    return rep, ScalingSequence.stationary(period, rep.c_star)


def cmd_plotdata(args) -> int:
    period = _period(args)
    kind = args.kind
    if kind == "scaling":
        cs = np.linspace(1e-3, 0.499, args.grid)
        cond = conditions(period, cs)
        k = period.k
        header = ["c"] + [f"S{i}" for i in range(1, k + 1)] + ["sum"]
        rows = [
            tuple([c] + [float(cond[i][j]) for i in range(k)] + [float(cond[:k, j].sum())])
            for j, c in enumerate(cs)
        ]
    elif kind == "returnmap":
        domain = feasible_domain(period, scan_step=args.step)
        header = ["interval", "c", "R"]
        rows = []
        for k, (lo, hi) in enumerate(domain.intervals):
            for c in np.linspace(lo + 1e-9, hi - 1e-9, args.grid // len(domain.intervals)):
                try:
                    rows.append((k, float(c), float(return_map(period, float(c)))))
                except DivisionGuard:
                    continue
    elif kind == "cobweb":
        rep, _ = _solved_sequence(period, args.tol)
        u = QuadraticUnimodal(rep.c_star)
        header = ["x", "y"]
        rows = [(0.0, 0.0)]
        x = 0.0
        for _ in range(period.p + 1):
            y = eval_map(u, x)
            rows.append((x, y))
            rows.append((y, y))
            x = y
    elif kind == "tower":
        rep, seq = _solved_sequence(period, args.tol)
        t = build_tower(seq, args.depth or DEFAULT_DEPTH)
        header = ["n", "family", "lo", "hi"]
        rows = [
            (n, i, *t.generations[n - 1][i])
            for n in range(1, t.depth + 1)
            for i in t.families
        ]
    else:  # extension
        rep, seq = _solved_sequence(period, args.tol)
        depth = args.depth or (8 if period is Period.THREE else 6)
        f = build_pwa(seq, depth + 2)
        curve = ext.extend(*ext.seed_pieces(f, resolution=args.resolution), depth=depth,
                           resolution=args.resolution)
        header = ["x", "value", "derivative", "level"]
        rows = [
            (float(x), float(y), float(d), int(m))
            for p in curve.pieces
            for x, y, d, m in zip(p.xs, p.ys, p.ds, [p.level] * len(p.xs))
        ]
    _emit(args, rpt.to_csv(header, rows))
    return 0


def cmd_tower(args) -> int:
    period = _period(args)
    rep, seq = _solved_sequence(period, args.tol)
    depth = args.depth or DEFAULT_DEPTH
    t = build_tower(seq, depth)
    margin, decay = verify_proper(seq, depth)
    rr = ratio_report(t)
    hb = hor_bound(t)
    _emit_report(
        args,
        {
            "period": period.p,
            "c_star": rep.c_star,
            "depth": depth,
            "generations": [
                {str(i): list(t.generations[n - 1][i]) for i in t.families}
                for n in range(1, depth + 1)
            ],
            "labels_y": t.labels["y"],
            "labels_z": t.labels["z"],
            "central_sizes": [t.size(n, 2) for n in range(1, depth + 1)],
            "proper_margin": margin,
            "geometric_decay": decay,
            "ratio_deviation": rr.max_deviation,
            "hor_rho": hb.rho,
            "hor_satisfied": hb.satisfied,
            "cantor_dimension": cantor_dimension(t.factors[0]),
        },
    )
    return 0


def cmd_extend(args) -> int:
    period = _period(args)
    rep, seq = _solved_sequence(period, args.tol)
    depth = args.depth or (8 if period is Period.THREE else 6)
    f = build_pwa(seq, depth + 2)
    curve = ext.extend(*ext.seed_pieces(f, resolution=args.resolution), depth=depth,
                       resolution=args.resolution)
    tip = ext.quadratic_tip(curve, rep.c_star)
    _emit_report(
        args,
        {
            "period": period.p,
            "depth": depth,
            "resolution": args.resolution,
            "lipschitz_profile": ext.lipschitz_profile(curve),
            "max_slope_profile": ext.max_slope_profile(curve),
            "junction_mismatch": curve.junction_mismatch(),
            "quadratic_tip": tip,
            "quadratic_tip_algebraic": 1.0 / (1.0 - rep.c_star) ** 2,
            "window": list(curve.meta["window"]),
            "unimodal": ext.unimodal_check(curve),
        },
    )
    return 0


def cmd_horseshoe(args) -> int:
    eps = tuple(float(x) for x in (args.eps or "1.02,1.0,0.98").split(","))
    b = hs.build_branch_system(*eps)
    n_max = min(args.depth or 6, hs.CYLINDER_CAP)
    counts = [hs.cylinder_count(b, n) for n in range(1, n_max + 1)]
    sweep = continuum_sweep(min(eps), max(eps), 5)
    word = hs.dense_orbit_word(2, alphabet=len(eps))
    coding = hs.code_to_point(b, word, min(len(word), 12))
    _emit_report(
        args,
        {
            "epsilons": list(eps),
            "fixed_points": list(b.fixed_points),
            "derivatives": [r.derivative_estimate for r in b.reports],
            "branch_domains": [list(d) for d in b.domains],
            "cylinder_counts": counts,
            "entropy_estimates": [float(np.log(c) / n) for n, c in enumerate(counts, start=1)],
            "ln_alphabet": float(np.log(len(eps))),
            "eps_sweep": [list(r) for r in sweep.rows],
            "dense_word_prefix": list(word.symbols[:12]),
            "dense_word_coding": coding.c_alpha,
            "coding_residual": coding.residual,
        },
    )
    return 0


def cmd_verify(args) -> int:
    period = _period(args)
    if args.suite == "horseshoe" and period is Period.FIVE:
        print("horseshoe suite runs on the period-three system", file=sys.stderr)
        return 2
    rows = ver.run_suite(args.suite, period, seed=args.seed, quick=not args.full)
    failed = [r for r in rows if not r["ok"]]
    for r in rows:
        status = "PASS" if r["ok"] else "FAIL"
        print(f"{status} {r['name']}: value={r['value']:.6g} bound={r['bound']:.6g}")
    if args.out:
        doc = rpt.make_report(args.command, _config_echo(args), {"checks": rows, "passed": not failed})
        rpt.write_report(doc, args.out)
    if failed:
        print(
            f"{len(failed)} invariant(s) failed, first: {failed[0]['name']}",
            file=sys.stderr,
        )
        return 1
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "feasible": cmd_feasible,
    "plotdata": cmd_plotdata,
    "tower": cmd_tower,
    "extend": cmd_extend,
    "horseshoe": cmd_horseshoe,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _merge_config(args)
        return COMMANDS[args.command](args)
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
