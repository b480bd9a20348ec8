"""Run-level orchestration: per-region results, national aggregate, output.

A run takes a validated :class:`~sgi.ingest.DatasetBundle`, computes the
index for every region, aggregates a national figure two ways (from
population-weighted inputs, and as the plain mean of regional index
values — the two need not agree, so both are reported), estimates the
cross-region density of index values, and serializes everything as CSV
and JSON.

Serialization is deterministic: identical inputs and options produce
byte-identical files.  Nothing time- or host-dependent is written here;
run metadata belongs in a sidecar (see the command-line front end).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .density import DensityCurve, kernel_density, render_density_svg
from .index import SurplusMen, compute_sgi, effective_fertility, surplus_men
from .ingest import DatasetBundle, resolve_timing
from .model import (
    ComputationError,
    DEFAULT_BALANCE_TOLERANCE,
    InvalidInputError,
    MarriageTiming,
    RegionInputs,
    SexRatioAtBirth,
    SgiError,
    SgiResult,
)

__all__ = [
    "RegionRecord",
    "RunReport",
    "SensitivityRow",
    "run_compute",
    "run_sensitivity",
    "emit_density",
    "report_csv_text",
    "report_json_text",
    "map_csv_text",
    "sensitivity_csv_text",
    "sensitivity_json_text",
    "trajectory_csv_text",
    "REPORT_COLUMNS",
]

REPORT_COLUMNS = (
    "region_id",
    "name",
    "sgi",
    "effective_fertility",
    "growth_rate",
    "surplus_share_paper",
    "surplus_share_ratio",
    "surplus_men_paper",
    "surplus_men_ratio",
    "u5mr_is_proxy",
)

#: Acceptable deviation of the density curve's trapezoid integral from 1.
_DENSITY_INTEGRAL_TOL = 0.01


@dataclass(frozen=True)
class RegionRecord:
    """One region's inputs, resolved timing, and computed result."""

    region: RegionInputs
    timing: MarriageTiming
    timing_sources: dict[str, str]
    result: SgiResult
    surplus: SurplusMen | None


@dataclass(frozen=True)
class RunReport:
    """Everything one run produces, ready for serialization.

    ``per_region`` is sorted by descending index value.  ``national`` is
    computed from population-weighted national inputs, not from the
    regional index values; ``mean_region_sgi`` is the unweighted mean of
    those values, reported alongside for transparency.
    """

    per_region: tuple[RegionRecord, ...]
    national: SgiResult
    national_timing: MarriageTiming
    national_inputs: dict[str, float]
    mean_region_sgi: float
    totals: SurplusMen | None
    density: DensityCurve | None
    config_echo: dict

    def __post_init__(self) -> None:
        values = [record.result.sgi for record in self.per_region]
        if values != sorted(values, reverse=True):
            raise InvalidInputError("per_region must be sorted by descending sgi")
        if self.density is not None:
            integral = self.density.integral()
            if abs(integral - 1.0) > _DENSITY_INTEGRAL_TOL:
                raise InvalidInputError(
                    f"density curve integrates to {integral:.4f}, "
                    f"outside 1 ± {_DENSITY_INTEGRAL_TOL}"
                )


def _weighted_mean(values: Sequence[float], weights: Sequence[float]) -> float:
    total = sum(weights)
    return sum(v * w for v, w in zip(values, weights)) / total


def run_compute(
    bundle: DatasetBundle,
    alpha_override: float | None = None,
    balance_tolerance: float = DEFAULT_BALANCE_TOLERANCE,
    bandwidth: float | None = None,
) -> RunReport:
    """Compute the index for every region plus the national aggregate.

    Per-region failures are collected and raised together as a single
    :class:`~sgi.model.ComputationError` so one bad region does not mask
    another.  The cross-region density is omitted when fewer than two
    regions are present.
    """
    records: list[RegionRecord] = []
    failures: list[str] = []
    for region in bundle.regions:
        try:
            resolved = resolve_timing(bundle, region.region_id, alpha_override)
            rt = effective_fertility(region.fertility)
            result = compute_sgi(
                region.sex_ratio,
                rt,
                resolved.timing,
                male_pop_15_54=region.male_pop_15_54,
                balance_tolerance=balance_tolerance,
            )
            surplus = (
                surplus_men(result, region.male_pop_15_54)
                if region.male_pop_15_54 is not None
                else None
            )
            records.append(
                RegionRecord(
                    region=region,
                    timing=resolved.timing,
                    timing_sources=resolved.sources,
                    result=result,
                    surplus=surplus,
                )
            )
        except SgiError as exc:
            failures.append(f"{region.region_id}: {exc}")
    if failures:
        raise ComputationError(
            f"{len(failures)} region(s) failed to compute:\n  "
            + "\n  ".join(failures)
        )

    records.sort(key=lambda r: (-r.result.sgi, r.region.region_id))

    pops = [r.region.male_pop_15_54 for r in records]
    if all(p is not None and p > 0 for p in pops):
        weights = [float(p) for p in pops]  # type: ignore[arg-type]
        weights_mode = "male_pop_15_54"
    else:
        weights = [1.0] * len(records)
        weights_mode = "equal (male_pop_15_54 missing for some regions)"

    national_inputs = {
        "sex_ratio": _weighted_mean(
            [r.region.sex_ratio.females_per_male for r in records], weights
        ),
        "tfr": _weighted_mean([r.region.fertility.tfr for r in records], weights),
        "u5mr": _weighted_mean([r.region.fertility.u5mr for r in records], weights),
        "male_age": _weighted_mean([r.timing.male_age for r in records], weights),
        "female_age": _weighted_mean([r.timing.female_age for r in records], weights),
        "alpha": _weighted_mean([r.timing.birth_interval for r in records], weights),
    }
    national_timing = MarriageTiming(
        male_age=national_inputs["male_age"],
        female_age=national_inputs["female_age"],
        birth_interval=national_inputs["alpha"],
    )
    national_pop = (
        sum(pops) if all(p is not None for p in pops) else None  # type: ignore[arg-type]
    )
    national = compute_sgi(
        SexRatioAtBirth(national_inputs["sex_ratio"]),
        national_inputs["tfr"] * (1.0 - national_inputs["u5mr"]),
        national_timing,
        male_pop_15_54=national_pop,
        balance_tolerance=balance_tolerance,
    )

    totals = None
    if all(r.surplus is not None for r in records) and records:
        totals = SurplusMen(
            paper=sum(r.surplus.paper for r in records),  # type: ignore[union-attr]
            ratio=sum(r.surplus.ratio for r in records),  # type: ignore[union-attr]
        )

    sgi_values = [r.result.sgi for r in records]
    density = (
        kernel_density(sgi_values, bandwidth=bandwidth)
        if len(sgi_values) >= 2
        else None
    )

    config_echo = {
        "alpha_override": alpha_override,
        "balance_tolerance": balance_tolerance,
        "bandwidth": bandwidth if bandwidth is not None else "silverman",
        "default_alpha": bundle.default_alpha,
        "national_weights": weights_mode,
        "regions": len(records),
    }
    return RunReport(
        per_region=tuple(records),
        national=national,
        national_timing=national_timing,
        national_inputs=national_inputs,
        mean_region_sgi=sum(sgi_values) / len(sgi_values),
        totals=totals,
        density=density,
        config_echo=config_echo,
    )


@dataclass(frozen=True)
class SensitivityRow:
    """Index under crude vs effective fertility for one region."""

    region_id: str
    name: str
    u5mr: float
    age_gap: float
    sgi_crude: float
    sgi_effective: float

    @property
    def abs_diff(self) -> float:
        return self.sgi_effective - self.sgi_crude

    @property
    def rel_diff(self) -> float:
        return self.sgi_effective / self.sgi_crude - 1.0


def run_sensitivity(
    bundle: DatasetBundle,
    alpha_override: float | None = None,
) -> list[SensitivityRow]:
    """Compare the index under crude and effective fertility, per region.

    For any region with positive under-five mortality and a positive
    spousal age gap the effective-fertility index strictly exceeds the
    crude one: ignoring early-life mortality overstates the female inflow
    and so understates the imbalance.
    """
    rows: list[SensitivityRow] = []
    failures: list[str] = []
    for region in bundle.regions:
        try:
            resolved = resolve_timing(bundle, region.region_id, alpha_override)
            crude = compute_sgi(region.sex_ratio, region.fertility.tfr, resolved.timing)
            effective = compute_sgi(
                region.sex_ratio,
                effective_fertility(region.fertility),
                resolved.timing,
            )
            rows.append(
                SensitivityRow(
                    region_id=region.region_id,
                    name=region.name,
                    u5mr=region.fertility.u5mr,
                    age_gap=resolved.timing.age_gap,
                    sgi_crude=crude.sgi,
                    sgi_effective=effective.sgi,
                )
            )
        except SgiError as exc:
            failures.append(f"{region.region_id}: {exc}")
    if failures:
        raise ComputationError(
            f"{len(failures)} region(s) failed to compute:\n  "
            + "\n  ".join(failures)
        )
    rows.sort(key=lambda r: (-r.sgi_effective, r.region_id))
    return rows


def emit_density(
    values: Sequence[float],
    bandwidth: float | None = None,
    svg_path: str | Path | None = None,
    references: Sequence[tuple[str, float, str]] = (),
    title: str = "Distribution of index values",
    xlabel: str = "surplus groom index",
) -> DensityCurve:
    """Kernel density of index values, optionally rendered to SVG.

    Returns the curve; when ``svg_path`` is given the same curve is also
    written as a standalone vector graphic with the requested vertical
    reference lines.
    """
    curve = kernel_density(values, bandwidth=bandwidth)
    if svg_path is not None:
        render_density_svg(
            curve, svg_path, references=references, title=title, xlabel=xlabel
        )
    return curve


# ---------------------------------------------------------------------------
# Serialization.  All writers return text so callers control file placement;
# floats are rendered with repr for full precision and determinism.


def _fmt(value: float | int | bool | None) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_csv_text(report: RunReport) -> str:
    """Per-region results as CSV with the fixed report schema."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for record in report.per_region:
        surplus = record.surplus
        writer.writerow(
            [
                record.region.region_id,
                record.region.name,
                _fmt(record.result.sgi),
                _fmt(record.result.effective_fertility),
                _fmt(record.result.growth_rate),
                _fmt(record.result.surplus_share_paper),
                _fmt(record.result.surplus_share_ratio),
                _fmt(surplus.paper if surplus else None),
                _fmt(surplus.ratio if surplus else None),
                _fmt(record.region.u5mr_is_proxy),
            ]
        )
    return buf.getvalue()


def map_csv_text(report: RunReport) -> str:
    """Join-ready index values keyed by region_id (no geometry)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["region_id", "name", "sgi"])
    for record in report.per_region:
        writer.writerow(
            [record.region.region_id, record.region.name, _fmt(record.result.sgi)]
        )
    return buf.getvalue()


def _result_dict(result: SgiResult) -> dict:
    return {
        "sgi": result.sgi,
        "effective_fertility": result.effective_fertility,
        "growth_rate": result.growth_rate,
        "balanced": result.balanced,
        "surplus_share_paper": result.surplus_share_paper,
        "surplus_share_ratio": result.surplus_share_ratio,
        "surplus_men": result.surplus_men,
    }


def report_json_dict(report: RunReport, bundle: DatasetBundle | None = None) -> dict:
    """The full report as a JSON-serializable dictionary."""
    doc: dict = {
        "config": report.config_echo,
        "regions": [
            {
                "region_id": record.region.region_id,
                "name": record.region.name,
                "u5mr_is_proxy": record.region.u5mr_is_proxy,
                "male_pop_15_54": record.region.male_pop_15_54,
                "timing": {
                    "male_age": record.timing.male_age,
                    "female_age": record.timing.female_age,
                    "alpha": record.timing.birth_interval,
                    "sources": record.timing_sources,
                },
                **_result_dict(record.result),
                "surplus_men_paper": record.surplus.paper if record.surplus else None,
                "surplus_men_ratio": record.surplus.ratio if record.surplus else None,
            }
            for record in report.per_region
        ],
        "national": {
            "inputs": report.national_inputs,
            **_result_dict(report.national),
        },
        "mean_region_sgi": report.mean_region_sgi,
        "totals": (
            {"paper": report.totals.paper, "ratio": report.totals.ratio}
            if report.totals
            else None
        ),
        "density": (
            {
                "bandwidth": report.density.bandwidth,
                "points": report.density.points(),
            }
            if report.density
            else None
        ),
    }
    if bundle is not None:
        doc["provenance"] = dict(bundle.provenance)
        doc["vintage"] = dict(bundle.vintage)
        doc["warnings"] = list(bundle.warnings)
    return doc


def report_json_text(report: RunReport, bundle: DatasetBundle | None = None) -> str:
    """Deterministic JSON rendering of the report (round-trip stable)."""
    return json.dumps(
        report_json_dict(report, bundle), sort_keys=True, indent=2
    ) + "\n"


def sensitivity_csv_text(rows: Sequence[SensitivityRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "region_id",
            "name",
            "u5mr",
            "age_gap",
            "sgi_crude",
            "sgi_effective",
            "abs_diff",
            "rel_diff",
        ]
    )
    for row in rows:
        writer.writerow(
            [
                row.region_id,
                row.name,
                _fmt(row.u5mr),
                _fmt(row.age_gap),
                _fmt(row.sgi_crude),
                _fmt(row.sgi_effective),
                _fmt(row.abs_diff),
                _fmt(row.rel_diff),
            ]
        )
    return buf.getvalue()


def sensitivity_json_text(rows: Sequence[SensitivityRow]) -> str:
    doc = [
        {
            "region_id": row.region_id,
            "name": row.name,
            "u5mr": row.u5mr,
            "age_gap": row.age_gap,
            "sgi_crude": row.sgi_crude,
            "sgi_effective": row.sgi_effective,
            "abs_diff": row.abs_diff,
            "rel_diff": row.rel_diff,
        }
        for row in rows
    ]
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def trajectory_csv_text(rows) -> str:
    """Year-by-year matching ledger as CSV (NaN cells rendered empty)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "year",
            "male_births",
            "female_births",
            "men_at_marriage",
            "women_at_marriage",
            "matches",
            "unmatched_men",
            "unmatched_women",
        ]
    )
    for row in rows:
        writer.writerow(
            [
                row.year,
                *(
                    "" if value != value else _fmt(value)  # NaN check
                    for value in row[1:]
                ),
            ]
        )
    return buf.getvalue()
