"""Command-line front end.

One line of key=value output per query, 12 significant digits, exit code 0
on success, 1 on domain/resource errors, 2 on usage errors.
"""

import argparse
import math
import sys

from . import experiments
from .census import psi
from .dickman import build_rho_table, rho
from .errors import SmoothlabError
from .formats import format_sig12
from .shifted import t_exact, t_via_mobius, v_exact, main_terms

_EPILOG = "Numeric output carries 12 significant digits."


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothlab",
        description="Smooth-number counts, Dickman rho, and shifted-totient sums.",
        epilog=_EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", help="exact count of y-smooth integers up to x")
    p.add_argument("--x", type=float, required=True, help="upper bound x")
    p.add_argument("--y", type=float, required=True, help="smoothness bound y")

    p = sub.add_parser("rho", help="Dickman rho at a point")
    p.add_argument("--u", type=float, required=True, help="evaluation point u")
    p.add_argument("--h", type=float, default=1.0 / 256.0, help="table step (default 1/256)")

    p = sub.add_parser("tsum", help="shifted-totient sum T(x, y) and T/psi")
    p.add_argument("--x", type=float, required=True, help="upper bound x")
    p.add_argument("--y", type=float, required=True, help="smoothness bound y")
    p.add_argument("--a", type=int, required=True, help="nonzero shift a")
    p.add_argument(
        "--delta",
        type=float,
        default=None,
        help="also report the Moebius split at this cutoff",
    )

    p = sub.add_parser("vsum", help="normalized shifted-totient average V(x, y)")
    p.add_argument("--x", type=float, required=True, help="upper bound x")
    p.add_argument("--y", type=float, required=True, help="smoothness bound y")
    p.add_argument("--a", type=int, required=True, help="nonzero shift a")

    p = sub.add_parser("scan", help="convergence scan driven by a config file")
    p.add_argument("--config", required=True, help="flat key = value config file")
    p.add_argument("--out", default=None, help="override the config output path")

    p = sub.add_parser("discrepancy", help="progression discrepancy report")
    p.add_argument("--x", type=float, required=True, help="upper bound x")
    p.add_argument("--y", type=float, required=True, help="smoothness bound y")
    p.add_argument("--delta", type=float, required=True, help="modulus cutoff")
    p.add_argument(
        "--z-mode",
        choices=("fixed_x", "max_over_grid"),
        default="fixed_x",
        help="probe z = x only, or a geometric z grid",
    )
    p.add_argument("--out", default=None, help="write the JSON report here")

    p = sub.add_parser("ftratio", help="coprime-count ratios for chosen moduli")
    p.add_argument("--x", type=float, required=True, help="upper bound x")
    p.add_argument("--y", type=float, required=True, help="smoothness bound y")
    p.add_argument("--d-list", required=True, help="comma-separated moduli")
    p.add_argument("--out", default=None, help="write rows as CSV here")

    return parser


def _emit(pairs) -> None:
    print(" ".join(f"{k}={v}" for k, v in pairs))


def _run_psi(args) -> int:
    _emit([("psi", psi(args.x, args.y))])
    return 0


def _run_rho(args) -> int:
    table = build_rho_table(u_max=max(2.0, math.ceil(args.u)), h=args.h)
    _emit([("rho", format_sig12(rho(table, args.u)))])
    return 0


def _run_tsum(args) -> int:
    t = t_exact(args.x, args.y, args.a)
    ratio = t / psi(args.x, args.y)
    pairs = [("t", format_sig12(t)), ("ratio", format_sig12(ratio))]
    if args.delta is not None:
        split = t_via_mobius(args.x, args.y, args.a, args.delta)
        pairs += [
            ("sigma1", format_sig12(split.sigma1)),
            ("sigma2", format_sig12(split.sigma2)),
            ("total", format_sig12(split.total)),
            ("delta_used", format_sig12(split.delta_used)),
        ]
    _emit(pairs)
    return 0


def _run_vsum(args) -> int:
    v = v_exact(args.x, args.y, args.a)
    terms = main_terms(args.x, args.y, psi(args.x, args.y))
    _emit([("v", format_sig12(v)), ("v_main", format_sig12(terms.v_main))])
    return 0


def _run_scan(args) -> int:
    cfg = experiments.load_config(args.config)
    if args.out is not None:
        cfg = experiments.ScanConfig(
            x_grid=cfg.x_grid,
            a_list=cfg.a_list,
            y=cfg.y,
            y_rule=cfg.y_rule,
            C=cfg.C,
            epsilon=cfg.epsilon,
            delta_gamma=cfg.delta_gamma,
            delta_delta=cfg.delta_delta,
            A=cfg.A,
            output_path=args.out,
        )
    records = experiments.convergence_scan(cfg)
    failed = sum(1 for r in records if r.error is not None)
    pairs = [("rows", len(records)), ("failed", failed)]
    if cfg.output_path:
        pairs.append(("out", cfg.output_path))
    _emit(pairs)
    return 0


def _run_discrepancy(args) -> int:
    report = experiments.granville_discrepancy(args.x, args.y, args.delta, args.z_mode)
    if args.out:
        experiments.write_json_report(
            args.out,
            config={
                "x": report.x,
                "y": report.y,
                "delta": report.delta,
                "z_mode": report.z_mode,
                "notes": list(report.notes),
            },
            rows=[[r.d, r.deviation] for r in report.rows],
            goldens={
                "total": report.total,
                "total_over_psi": report.total_over_psi,
            },
        )
    _emit(
        [
            ("total", format_sig12(report.total)),
            ("total_over_psi", format_sig12(report.total_over_psi)),
            ("rows", len(report.rows)),
        ]
        + ([("out", args.out)] if args.out else [])
    )
    return 0


def _run_ftratio(args) -> int:
    d_list = [int(v) for v in args.d_list.split(",") if v.strip()]
    rows = experiments.ft_ratio_scan(args.x, args.y, d_list)
    for r in rows:
        _emit(
            [
                ("d", r.d),
                ("ratio", format_sig12(r.ratio)),
                ("dev", format_sig12(r.dev)),
                ("lemma_scale", format_sig12(r.lemma_scale)),
            ]
        )
    if args.out:
        experiments.write_ft_csv(args.out, rows)
        _emit([("out", args.out)])
    return 0


_HANDLERS = {
    "psi": _run_psi,
    "rho": _run_rho,
    "tsum": _run_tsum,
    "vsum": _run_vsum,
    "scan": _run_scan,
    "discrepancy": _run_discrepancy,
    "ftratio": _run_ftratio,
}


def run(argv) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except SmoothlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
