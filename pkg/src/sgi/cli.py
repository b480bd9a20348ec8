"""Command-line front end.

Subcommands:

* ``compute``      — per-region index table, national aggregate, surplus
  counts, density outputs, map-join CSV.
* ``sensitivity``  — index under crude vs effective fertility per region.
* ``simulate``     — stable-series generator, closed-form/cohort-ratio
  identity check, and matching microsimulation.
* ``density``      — kernel density of a value column from any CSV.
* ``smam``         — marriage-age estimation from a marital-status CSV.

Exit codes: 0 success, 1 input validation failure, 2 computation failure.
Data files are written deterministically; volatile run metadata
(timestamp, command line) goes to a ``run_meta.json`` sidecar instead.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import __version__
from .density import render_density_svg
from .index import growth_rate, sgi_value
from .ingest import load_bundle
from .model import (
    ComputationError,
    ConfigurationError,
    DegenerateCellError,
    InvalidInputError,
    MarriageTiming,
    MissingDataError,
    SchemaError,
    SgiError,
    UndefinedSmamError,
    canonicalize_sex_ratio,
)
from .oracle import (
    generate_stable_series,
    matching_trajectory,
    run_matching_microsim,
    stable_cohort_ratio,
)
from .report import (
    emit_density,
    map_csv_text,
    report_csv_text,
    report_json_text,
    run_compute,
    run_sensitivity,
    sensitivity_csv_text,
    sensitivity_json_text,
    trajectory_csv_text,
)
from .smam import compute_smam, DEFAULT_UPPER_LIMIT

_VALIDATION_ERRORS = (
    SchemaError,
    InvalidInputError,
    MissingDataError,
    DegenerateCellError,
    ConfigurationError,
    FileNotFoundError,
)


def _add_io_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out-dir",
        type=Path,
        default=Path("."),
        help="directory for output files (default: current directory)",
    )
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="write only this format (default: both)",
    )


def _add_bundle_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("regions_csv", type=Path, help="per-region parameter CSV")
    parser.add_argument(
        "--marital", type=Path, default=None, help="marital-status CSV"
    )
    parser.add_argument(
        "--sources", type=Path, default=None, help="provenance/vintage JSON"
    )
    parser.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="marriage-to-first-birth interval override (years)",
    )
    parser.add_argument(
        "--omega",
        type=float,
        default=DEFAULT_UPPER_LIMIT,
        help="terminal age for marriage-age estimation (default 50)",
    )


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _write_meta(out_dir: Path, args: argparse.Namespace) -> None:
    meta = {
        "tool": "sgi",
        "version": __version__,
        "command": " ".join(sys.argv[1:]),
        "unix_time": int(time.time()),
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "run_meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _share_lines(prefix: str, result, surplus, convention: str) -> list[str]:
    lines = []
    if convention in ("paper", "both"):
        lines.append(
            f"{prefix}surplus share (headline, index-1): "
            f"{result.surplus_share_paper:+.4f}"
            + (f"  surplus men: {surplus.paper:,}" if surplus else "")
        )
    if convention in ("ratio", "both"):
        lines.append(
            f"{prefix}surplus share (ratio, 1-1/index): "
            f"{result.surplus_share_ratio:+.4f}"
            + (f"  surplus men: {surplus.ratio:,}" if surplus else "")
        )
    return lines


def _cmd_compute(args: argparse.Namespace) -> int:
    bundle = load_bundle(
        args.regions_csv,
        marital_csv=args.marital,
        sources_json=args.sources,
        omega=args.omega,
    )
    report = run_compute(
        bundle,
        alpha_override=args.alpha,
        balance_tolerance=args.balance_tolerance,
        bandwidth=args.bandwidth,
    )
    out = args.out_dir
    if args.format in (None, "csv"):
        _write(out / "report.csv", report_csv_text(report))
        _write(out / "map.csv", map_csv_text(report))
    if args.format in (None, "json"):
        _write(out / "report.json", report_json_text(report, bundle))
    if report.density is not None:
        density_csv = "x,y\n" + "".join(
            f"{x!r},{y!r}\n" for x, y in report.density.points()
        )
        _write(out / "density.csv", density_csv)
        render_density_svg(
            report.density,
            out / "density.svg",
            references=[
                ("balance", 1.0, "green"),
                ("national", report.national.sgi, "black"),
            ],
            title="Distribution of regional index values",
            xlabel="surplus groom index",
        )
        print(f"wrote {out / 'density.svg'}")
    _write_meta(out, args)

    print()
    print(f"regions computed: {len(report.per_region)}")
    for record in report.per_region[:5]:
        print(
            f"  {record.region.region_id:>12}  sgi={record.result.sgi:.4f}"
            f"  n={record.result.growth_rate:+.5f}"
        )
    if len(report.per_region) > 5:
        print(f"  ... ({len(report.per_region) - 5} more in report.csv)")
    print(f"national (aggregated inputs): sgi={report.national.sgi:.4f}")
    print(f"mean of regional values:      sgi={report.mean_region_sgi:.4f}")
    for line in _share_lines(
        "national ", report.national, None, args.share_convention
    ):
        print(line)
    if report.totals is not None:
        if args.share_convention in ("paper", "both"):
            print(f"summed regional surplus men (headline): {report.totals.paper:,}")
        if args.share_convention in ("ratio", "both"):
            print(f"summed regional surplus men (ratio):    {report.totals.ratio:,}")
    return 0


def _cmd_sensitivity(args: argparse.Namespace) -> int:
    bundle = load_bundle(
        args.regions_csv,
        marital_csv=args.marital,
        sources_json=args.sources,
        omega=args.omega,
    )
    rows = run_sensitivity(bundle, alpha_override=args.alpha)
    out = args.out_dir
    if args.format in (None, "csv"):
        _write(out / "sensitivity.csv", sensitivity_csv_text(rows))
    if args.format in (None, "json"):
        _write(out / "sensitivity.json", sensitivity_json_text(rows))
    _write_meta(out, args)
    print()
    print(f"{'region':>12}  {'crude':>8}  {'effective':>9}  {'diff':>8}")
    for row in rows:
        print(
            f"{row.region_id:>12}  {row.sgi_crude:8.4f}  {row.sgi_effective:9.4f}"
            f"  {row.abs_diff:+8.4f}"
        )
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    sex_ratio = canonicalize_sex_ratio(args.sex_ratio, args.srb_convention)
    timing = MarriageTiming(
        male_age=args.male_age,
        female_age=args.female_age,
        birth_interval=args.alpha,
    )
    if args.rt_effective is not None:
        rt = args.rt_effective
    elif args.tfr is not None:
        rt = args.tfr * (1.0 - args.u5mr)
    else:
        raise InvalidInputError("supply either --rt-effective or --tfr")
    series = generate_stable_series(
        sex_ratio, rt, timing, years=args.years, b0=args.b0
    )
    closed_form = sgi_value(sex_ratio, rt, timing)
    ratio = stable_cohort_ratio(series, timing, at_year=series.end_year)
    shares = run_matching_microsim(
        series, timing, burn_in=args.burn_in, integer_cohorts=args.integer_cohorts
    )
    expected_male_share = max(0.0, 1.0 - 1.0 / closed_form)
    expected_female_share = max(0.0, 1.0 - closed_form)

    out = args.out_dir
    _write(
        out / "trajectory.csv",
        trajectory_csv_text(
            matching_trajectory(series, timing, integer_cohorts=args.integer_cohorts)
        ),
    )
    summary = {
        "inputs": {
            "sex_ratio_females_per_male": sex_ratio.females_per_male,
            "rt_effective": rt,
            "male_age": timing.male_age,
            "female_age": timing.female_age,
            "alpha": timing.birth_interval,
            "years": args.years,
            "burn_in": args.burn_in,
            "b0": args.b0,
            "integer_cohorts": args.integer_cohorts,
        },
        "growth_rate": growth_rate(rt, sex_ratio, timing),
        "sgi_closed_form": closed_form,
        "stable_cohort_ratio": ratio,
        "identity_rel_error": abs(ratio - closed_form) / closed_form,
        "unmatched_male_share": shares.unmatched_male_share,
        "unmatched_female_share": shares.unmatched_female_share,
        "expected_unmatched_male_share": expected_male_share,
        "expected_unmatched_female_share": expected_female_share,
    }
    _write(out / "summary.json", json.dumps(summary, sort_keys=True, indent=2) + "\n")
    _write_meta(out, args)

    print()
    print(f"growth rate n:          {summary['growth_rate']:+.6f} per year")
    print(f"closed-form index:      {closed_form:.9f}")
    print(f"stable cohort ratio:    {ratio:.9f}")
    print(f"identity rel. error:    {summary['identity_rel_error']:.3e}")
    print(
        f"unmatched male share:   {shares.unmatched_male_share:.4f}"
        f"  (steady state {expected_male_share:.4f})"
    )
    print(
        f"unmatched female share: {shares.unmatched_female_share:.4f}"
        f"  (steady state {expected_female_share:.4f})"
    )
    return 0


def _cmd_density(args: argparse.Namespace) -> int:
    with open(args.values_csv, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or args.column not in reader.fieldnames:
            raise SchemaError(
                f"{args.values_csv}: no column {args.column!r} in header"
            )
        values = []
        for i, row in enumerate(reader):
            cell = (row.get(args.column) or "").strip()
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise SchemaError(
                    f"{args.values_csv}:{i + 2} column {args.column!r}: "
                    f"non-numeric value {cell!r}"
                ) from None
    references = [("balance", 1.0, "green")]
    if args.reference is not None:
        references.append(("reference", args.reference, "black"))
    out = args.out_dir
    curve = emit_density(
        values,
        bandwidth=args.bandwidth,
        svg_path=out / "density.svg",
        references=references,
    )
    _write(
        out / "density.csv",
        "x,y\n" + "".join(f"{x!r},{y!r}\n" for x, y in curve.points()),
    )
    print(f"wrote {out / 'density.svg'}")
    _write_meta(out, args)
    print()
    print(f"values:    {len(values)}")
    print(f"bandwidth: {curve.bandwidth:.6g}")
    print(f"mode:      {curve.mode:.6g}")
    print(f"integral:  {curve.integral():.4f}")
    return 0


def _cmd_smam(args: argparse.Namespace) -> int:
    from .ingest import _load_marital  # shared validation path

    tables = _load_marital(args.marital_csv, args.omega)
    lines = ["region_id,sex,smam"]
    print(f"{'region':>12}  {'sex':>6}  {'smam':>7}")
    for rid in sorted(tables):
        for sex in sorted(tables[rid], key=lambda s: s.value):
            value = compute_smam(tables[rid][sex])
            lines.append(f"{rid},{sex.value},{value!r}")
            print(f"{rid:>12}  {sex.value:>6}  {value:7.3f}")
    if args.out_dir is not None:
        _write(args.out_dir / "smam.csv", "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgi",
        description=(
            "Marriage-market imbalance index from demographic inputs, with "
            "stable-population and microsimulation verification."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser(
        "compute", help="per-region index report with national aggregate"
    )
    _add_bundle_options(p_compute)
    _add_io_options(p_compute)
    p_compute.add_argument(
        "--share-convention",
        choices=("paper", "ratio", "both"),
        default="both",
        help="which surplus-share convention to print (files carry both)",
    )
    p_compute.add_argument(
        "--balance-tolerance",
        type=float,
        default=0.005,
        help="half-width of the balanced band around 1 (default 0.005)",
    )
    p_compute.add_argument(
        "--bandwidth", type=float, default=None, help="density bandwidth override"
    )
    p_compute.set_defaults(func=_cmd_compute)

    p_sens = sub.add_parser(
        "sensitivity", help="index under crude vs effective fertility"
    )
    _add_bundle_options(p_sens)
    _add_io_options(p_sens)
    p_sens.set_defaults(func=_cmd_sensitivity)

    p_sim = sub.add_parser(
        "simulate", help="stable-series oracle and matching microsimulation"
    )
    p_sim.add_argument("--sex-ratio", type=float, required=True)
    p_sim.add_argument(
        "--srb-convention",
        default="females_per_male",
        choices=(
            "females_per_male",
            "females_per_1000_males",
            "males_per_100_females",
        ),
    )
    p_sim.add_argument("--tfr", type=float, default=None)
    p_sim.add_argument("--u5mr", type=float, default=0.0, help="proportion in [0,1)")
    p_sim.add_argument(
        "--rt-effective",
        type=float,
        default=None,
        help="effective fertility directly (overrides --tfr/--u5mr)",
    )
    p_sim.add_argument("--male-age", type=float, required=True)
    p_sim.add_argument("--female-age", type=float, required=True)
    p_sim.add_argument("--alpha", type=float, default=2.0)
    p_sim.add_argument("--years", type=int, default=200)
    p_sim.add_argument("--burn-in", type=int, default=50)
    p_sim.add_argument("--b0", type=float, default=1000.0)
    p_sim.add_argument(
        "--integer-cohorts",
        action="store_true",
        help="round cohort sizes to whole persons (demonstration only)",
    )
    _add_io_options(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_density = sub.add_parser("density", help="kernel density of a CSV column")
    p_density.add_argument("values_csv", type=Path)
    p_density.add_argument("--column", default="sgi")
    p_density.add_argument("--bandwidth", type=float, default=None)
    p_density.add_argument(
        "--reference",
        type=float,
        default=None,
        help="extra vertical reference line (e.g. the national value)",
    )
    _add_io_options(p_density)
    p_density.set_defaults(func=_cmd_density)

    p_smam = sub.add_parser(
        "smam", help="marriage-age estimation from a marital-status CSV"
    )
    p_smam.add_argument("marital_csv", type=Path)
    p_smam.add_argument("--omega", type=float, default=DEFAULT_UPPER_LIMIT)
    p_smam.add_argument("--out-dir", type=Path, default=None)
    p_smam.set_defaults(func=_cmd_smam)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ComputationError, UndefinedSmamError, SgiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
