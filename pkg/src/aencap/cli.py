"""Command-line front door: single-point bounds, sweeps, validation, samples.

Exit codes: 0 success, 2 invalid parameters or flags, 3 series
non-convergence with no quadrature fallback possible, 4 validation
failure.  All floating output uses 17 significant digits so values
round-trip losslessly, and a fixed seed makes byte-identical reruns.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from typing import IO

from .bounds import bounds_report
from .dists import sample_channel, write_samples_csv
from .entropy import LN2, QuadratureControl
from .errors import AencapError, NonConvergence, NonPositiveMean
from .harness import CSV_HEADER, SweepSpec, cross_validate, sweep
from .params import validate_params
from .series import SeriesControl


def _add_params_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--mx", type=float, required=True, help="input mean budget m_x")
    sp.add_argument("--ms", type=float, required=True, help="interference mean m_s")
    sp.add_argument("--mz", type=float, required=True, help="noise mean m_z")


def _add_numeric_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--tol", type=float, default=1e-12, help="series relative tolerance")
    sp.add_argument("--max-terms", type=int, default=10_000_000, help="series term cap")
    sp.add_argument("--quad-tol", type=float, default=1e-10, help="quadrature absolute tolerance")
    sp.add_argument("--mc-samples", type=int, default=100_000, help="Monte Carlo sample count")
    sp.add_argument("--seed", type=int, default=1, help="deterministic seed")


def _add_output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--units", choices=("nats", "bits"), default="nats")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aencap",
        description=(
            "Inner and outer capacity bounds of the additive exponential noise "
            "channel with exponential interference known at the transmitter"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    b = sub.add_parser("bounds", help="bounds for a single channel instance")
    _add_params_flags(b)
    _add_numeric_flags(b)
    _add_output_flags(b)

    s = sub.add_parser("sweep", help="bound sweep over (m_z, snr) cells")
    s.add_argument("--mz-list", required=True, help="comma-separated noise means")
    s.add_argument(
        "--ms-rule",
        default="equal",
        help="interference rule: equal | fixed:VALUE | ratio:FACTOR",
    )
    s.add_argument("--snr-min", type=float, default=10.0)
    s.add_argument("--snr-max", type=float, default=1e6)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--spacing", choices=("log", "linear"), default="log")
    _add_numeric_flags(s)
    _add_output_flags(s)

    v = sub.add_parser("validate", help="cross-validate all evaluation routes")
    _add_params_flags(v)
    _add_numeric_flags(v)
    _add_output_flags(v)

    smp = sub.add_parser("sample", help="export channel draws as CSV")
    _add_params_flags(smp)
    _add_numeric_flags(smp)
    smp.add_argument("--out", default=None, help="output path (default: stdout)")

    return parser


def _controls(args: argparse.Namespace) -> tuple[SeriesControl, QuadratureControl]:
    return (
        SeriesControl(rel_tol=args.tol, max_terms=args.max_terms),
        QuadratureControl(abs_tol=args.quad_tol),
    )


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fp:
            yield fp


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _run_bounds(args: argparse.Namespace) -> int:
    p = validate_params(args.mx, args.ms, args.mz)
    ctrl, qctrl = _controls(args)
    rep = bounds_report(p, ctrl, qctrl)
    conv = 1.0 if args.units == "nats" else 1.0 / LN2
    suffix = "nats" if args.units == "nats" else "bits"
    record = {
        "m_x": p.m_x,
        "m_s": p.m_s,
        "m_z": p.m_z,
        "snr": p.m_x / p.m_z,
        f"c_out_{suffix}": rep.c_out_nats * conv,
        f"c_in_{suffix}": rep.c_in_nats * conv,
        f"gap_{suffix}": rep.gap_nats * conv,
        f"asymptote_{suffix}": rep.asymptote_nats * conv,
        "regime": rep.regime.value,
        "method": rep.method,
        "terms_used": int(rep.diagnostics.get("terms_used", 0)),
        "status": rep.status,
        "diagnostics": {k: v for k, v in rep.diagnostics.items()},
    }
    with _open_out(args.out) as fp:
        if args.format == "json":
            json.dump(record, fp, indent=1)
            fp.write("\n")
        else:
            header = CSV_HEADER if args.units == "nats" else CSV_HEADER.replace("_nats", "_bits")
            fp.write(header + "\n")
            cells = [
                _fmt(p.m_x),
                _fmt(p.m_s),
                _fmt(p.m_z),
                _fmt(p.m_x / p.m_z),
                _fmt(rep.c_out_nats * conv),
                _fmt(rep.c_in_nats * conv),
                _fmt(rep.gap_nats * conv),
                rep.regime.value,
                rep.method,
                str(int(rep.diagnostics.get("terms_used", 0))),
                rep.status,
            ]
            fp.write(",".join(cells) + "\n")
    return 0


def _parse_ms_rule(text: str) -> tuple[str, float | None]:
    if text == "equal":
        return "equal", None
    for rule in ("fixed", "ratio"):
        if text.startswith(rule + ":"):
            return rule, float(text.split(":", 1)[1])
    raise ValueError(f"unknown ms-rule {text!r}; expected equal, fixed:VALUE, or ratio:FACTOR")


def _run_sweep(args: argparse.Namespace) -> int:
    mz_values = tuple(float(v) for v in args.mz_list.split(","))
    rule, value = _parse_ms_rule(args.ms_rule)
    spec = SweepSpec(
        mz_values=mz_values,
        ms_rule=rule,
        ms_value=value,
        snr_min=args.snr_min,
        snr_max=args.snr_max,
        points=args.points,
        spacing=args.spacing,
        units=args.units,
    )
    ctrl, _ = _controls(args)
    result = sweep(spec, ctrl)
    with _open_out(args.out) as fp:
        if args.format == "json":
            result.to_json(fp)
        else:
            result.to_csv(fp)
    return 0


def _run_validate(args: argparse.Namespace) -> int:
    p = validate_params(args.mx, args.ms, args.mz)
    ctrl, qctrl = _controls(args)
    report = cross_validate(p, ctrl, qctrl, n_mc=args.mc_samples, seed=args.seed)
    records = [
        {
            "name": c.name,
            "lhs": c.lhs,
            "rhs": c.rhs,
            "abs_diff": c.abs_diff,
            "tolerance": c.tolerance,
            "pass": c.passed,
        }
        for c in report.checks
    ]
    with _open_out(args.out) as fp:
        if args.format == "json":
            json.dump(
                {
                    "m_x": p.m_x,
                    "m_s": p.m_s,
                    "m_z": p.m_z,
                    "regime": report.regime.value,
                    "seed": report.seed,
                    "overall_pass": report.overall_pass,
                    "checks": records,
                },
                fp,
                indent=1,
            )
            fp.write("\n")
        else:
            fp.write("name,lhs,rhs,abs_diff,tolerance,pass\n")
            for c in report.checks:
                fp.write(
                    f"{c.name},{_fmt(c.lhs)},{_fmt(c.rhs)},{_fmt(c.abs_diff)},"
                    f"{_fmt(c.tolerance)},{str(c.passed).lower()}\n"
                )
    return 0 if report.overall_pass else 4


def _run_sample(args: argparse.Namespace) -> int:
    p = validate_params(args.mx, args.ms, args.mz)
    draws = sample_channel(args.mc_samples, p, args.seed)
    with _open_out(args.out) as fp:
        write_samples_csv(draws, fp)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    runners = {
        "bounds": _run_bounds,
        "sweep": _run_sweep,
        "validate": _run_validate,
        "sample": _run_sample,
    }
    try:
        return runners[args.subcommand](args)
    except (NonPositiveMean, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except AencapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
