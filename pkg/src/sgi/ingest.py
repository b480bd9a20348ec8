"""CSV ingestion and harmonization of regional demographic inputs.

Two fixed schemas, UTF-8 comma-separated with a required header row:

``regions.csv``
    region_id,name,srb_value,srb_convention,tfr,u5mr,u5mr_units,
    u5mr_is_proxy,male_pop_15_54,a_m,a_f,alpha
    (male_pop_15_54, a_m, a_f and alpha may be blank)

``marital.csv``
    region_id,sex,age_lower,age_upper,total,never_married

Every validation failure is reported with file, row and column; all
failures in a file are collected into a single :class:`SchemaError` so a
bad file is diagnosed in one pass.  Sex ratios outside [0.5, 1.5] females
per male are implausible but computable, so they warn instead of failing.

An optional sources JSON file supplies provenance ("where did this number
come from") and vintage ("which period is it for") labels per field, plus
a dataset-level default marriage-to-first-birth interval.  Fields without
an explicit provenance entry are attributed to the file they were read
from, so provenance is never empty.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    FertilityInputs,
    InvalidInputError,
    MarriageTiming,
    MissingDataError,
    RegionInputs,
    SchemaError,
    Sex,
    SexRatioConvention,
    U5mrUnits,
    DEFAULT_BIRTH_INTERVAL,
    canonicalize_sex_ratio,
)
from .smam import AgeGroupRow, MaritalStatusTable, compute_smam, DEFAULT_UPPER_LIMIT

__all__ = [
    "DatasetBundle",
    "ResolvedTiming",
    "load_bundle",
    "resolve_timing",
    "REGIONS_COLUMNS",
    "MARITAL_COLUMNS",
]

REGIONS_COLUMNS = (
    "region_id",
    "name",
    "srb_value",
    "srb_convention",
    "tfr",
    "u5mr",
    "u5mr_units",
    "u5mr_is_proxy",
    "male_pop_15_54",
    "a_m",
    "a_f",
    "alpha",
)

MARITAL_COLUMNS = (
    "region_id",
    "sex",
    "age_lower",
    "age_upper",
    "total",
    "never_married",
)

#: Plausibility band for the canonical sex ratio; values outside warn.
_SRB_PLAUSIBLE = (0.5, 1.5)

_PROXY_SOURCE_MARKERS = ("infant", "imr")


@dataclass(frozen=True)
class DatasetBundle:
    """Validated, harmonized inputs for a set of regions.

    Immutable after load.  ``marital_tables`` maps region_id to a dict
    keyed by :class:`Sex`; ``provenance`` and ``vintage`` map field names
    to source and period labels.
    """

    regions: tuple[RegionInputs, ...]
    marital_tables: dict[str, dict[Sex, MaritalStatusTable]]
    provenance: dict[str, str]
    vintage: dict[str, str]
    default_alpha: float | None = None
    warnings: tuple[str, ...] = ()
    _by_id: dict[str, RegionInputs] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_by_id", {r.region_id: r for r in self.regions}
        )

    def region(self, region_id: str) -> RegionInputs:
        try:
            return self._by_id[region_id]
        except KeyError:
            raise MissingDataError(f"unknown region {region_id!r}") from None

    @property
    def region_ids(self) -> list[str]:
        return [r.region_id for r in self.regions]


class _RowErrors:
    """Collects per-cell validation failures for one file."""

    def __init__(self, path: Path):
        self.path = path
        self.messages: list[str] = []

    def add(self, row: int, column: str, problem: str) -> None:
        self.messages.append(f"{self.path}:{row} column {column!r}: {problem}")

    def raise_if_any(self) -> None:
        if self.messages:
            raise SchemaError(
                f"{len(self.messages)} validation failure(s) in {self.path}:\n  "
                + "\n  ".join(self.messages)
            )


def _open_rows(path: Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing required column(s) {', '.join(missing)}"
            )
        return [{k: (v or "").strip() for k, v in row.items() if k} for row in reader]


def _parse_float(
    cell: str, row: int, column: str, errors: _RowErrors
) -> float | None:
    try:
        return float(cell)
    except ValueError:
        errors.add(row, column, f"non-numeric value {cell!r}")
        return None


def _parse_int(cell: str, row: int, column: str, errors: _RowErrors) -> int | None:
    try:
        return int(cell)
    except ValueError:
        errors.add(row, column, f"not a whole number: {cell!r}")
        return None


def _parse_bool(
    cell: str, row: int, column: str, errors: _RowErrors
) -> bool | None:
    lowered = cell.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    errors.add(row, column, f"expected true/false, got {cell!r}")
    return None


def _load_regions(
    path: Path, collected_warnings: list[str]
) -> tuple[RegionInputs, ...]:
    errors = _RowErrors(path)
    rows = _open_rows(path, REGIONS_COLUMNS)
    regions: list[RegionInputs] = []
    seen: dict[str, int] = {}
    for i, row in enumerate(rows):
        lineno = i + 2  # 1-based, header on line 1
        rid = row["region_id"]
        if not rid:
            errors.add(lineno, "region_id", "must not be empty")
            continue
        if rid in seen:
            errors.add(
                lineno, "region_id", f"duplicate of {rid!r} on row {seen[rid]}"
            )
            continue
        seen[rid] = lineno

        srb_value = _parse_float(row["srb_value"], lineno, "srb_value", errors)
        convention = row["srb_convention"] or SexRatioConvention.FEMALES_PER_MALE.value
        sex_ratio = None
        if srb_value is not None:
            try:
                sex_ratio = canonicalize_sex_ratio(srb_value, convention)
            except (InvalidInputError, ValueError) as exc:
                errors.add(lineno, "srb_value", str(exc))
        if sex_ratio is not None:
            s = sex_ratio.females_per_male
            if not _SRB_PLAUSIBLE[0] <= s <= _SRB_PLAUSIBLE[1]:
                collected_warnings.append(
                    f"{path}:{lineno} region {rid!r}: sex ratio {s:.4g} females "
                    f"per male is outside the plausible band "
                    f"{_SRB_PLAUSIBLE[0]}-{_SRB_PLAUSIBLE[1]}"
                )

        tfr = _parse_float(row["tfr"], lineno, "tfr", errors)
        u5mr = _parse_float(row["u5mr"], lineno, "u5mr", errors)
        units = row["u5mr_units"] or U5mrUnits.PROPORTION.value
        fertility = None
        if tfr is not None and u5mr is not None:
            try:
                fertility = FertilityInputs.from_units(tfr, u5mr, units)
            except (InvalidInputError, ValueError) as exc:
                errors.add(lineno, "u5mr", str(exc))

        proxy = False
        if row["u5mr_is_proxy"]:
            proxy = _parse_bool(row["u5mr_is_proxy"], lineno, "u5mr_is_proxy", errors)

        pop = None
        if row["male_pop_15_54"]:
            pop = _parse_int(row["male_pop_15_54"], lineno, "male_pop_15_54", errors)
            if pop is not None and pop < 0:
                errors.add(lineno, "male_pop_15_54", f"must be >= 0, got {pop}")
                pop = None

        optional_ages = {}
        for column in ("a_m", "a_f", "alpha"):
            optional_ages[column] = (
                _parse_float(row[column], lineno, column, errors)
                if row[column]
                else None
            )

        if sex_ratio is None or fertility is None or proxy is None:
            continue
        try:
            regions.append(
                RegionInputs(
                    region_id=rid,
                    name=row["name"] or rid,
                    sex_ratio=sex_ratio,
                    fertility=fertility,
                    male_age=optional_ages["a_m"],
                    female_age=optional_ages["a_f"],
                    alpha=optional_ages["alpha"],
                    male_pop_15_54=pop,
                    u5mr_is_proxy=bool(proxy),
                )
            )
        except InvalidInputError as exc:
            errors.add(lineno, "region_id", f"invalid region inputs: {exc}")
    errors.raise_if_any()
    return tuple(regions)


def _load_marital(
    path: Path, omega: float
) -> dict[str, dict[Sex, MaritalStatusTable]]:
    errors = _RowErrors(path)
    rows = _open_rows(path, MARITAL_COLUMNS)
    grouped: dict[tuple[str, Sex], list[tuple[int, AgeGroupRow]]] = {}
    for i, row in enumerate(rows):
        lineno = i + 2
        rid = row["region_id"]
        if not rid:
            errors.add(lineno, "region_id", "must not be empty")
            continue
        try:
            sex = Sex(row["sex"].lower())
        except ValueError:
            errors.add(lineno, "sex", f"expected male/female, got {row['sex']!r}")
            continue
        lower = _parse_float(row["age_lower"], lineno, "age_lower", errors)
        upper = _parse_float(row["age_upper"], lineno, "age_upper", errors)
        total = _parse_int(row["total"], lineno, "total", errors)
        never = _parse_int(row["never_married"], lineno, "never_married", errors)
        if None in (lower, upper, total, never):
            continue
        try:
            group = AgeGroupRow(
                lower=lower, upper=upper, total=total, never_married=never
            )
        except SchemaError as exc:
            errors.add(lineno, "never_married", str(exc))
            continue
        grouped.setdefault((rid, sex), []).append((lineno, group))

    tables: dict[str, dict[Sex, MaritalStatusTable]] = {}
    for (rid, sex), entries in grouped.items():
        entries.sort(key=lambda item: item[1].lower)
        first_line = entries[0][0]
        try:
            table = MaritalStatusTable(
                sex=sex,
                rows=tuple(group for _, group in entries),
                upper_limit=omega,
            )
        except SchemaError as exc:
            errors.add(first_line, "age_lower", f"region {rid!r} {sex.value}: {exc}")
            continue
        tables.setdefault(rid, {})[sex] = table
    errors.raise_if_any()
    return tables


def _check_proxy_provenance(
    regions: tuple[RegionInputs, ...], provenance: dict[str, str]
) -> None:
    """A mortality value sourced from infant mortality must be flagged."""
    global_source = provenance.get("u5mr", "").lower()
    global_is_imr = any(m in global_source for m in _PROXY_SOURCE_MARKERS)
    problems = []
    for region in regions:
        source = provenance.get(f"u5mr:{region.region_id}", "").lower()
        is_imr = global_is_imr or any(m in source for m in _PROXY_SOURCE_MARKERS)
        if is_imr and not region.u5mr_is_proxy:
            problems.append(region.region_id)
    if problems:
        raise SchemaError(
            "u5mr provenance names an infant-mortality source but "
            f"u5mr_is_proxy is false for region(s): {', '.join(problems)}"
        )


def load_bundle(
    regions_csv: str | Path,
    marital_csv: str | Path | None = None,
    sources_json: str | Path | None = None,
    omega: float = DEFAULT_UPPER_LIMIT,
    default_alpha: float | None = None,
) -> DatasetBundle:
    """Load and validate a dataset bundle from CSV files.

    Parameters
    ----------
    regions_csv : path
        Per-region parameters (required).
    marital_csv : path, optional
        Never-married counts by age group, required for any region whose
        marriage ages are not supplied directly.
    sources_json : path, optional
        JSON object with optional keys ``provenance`` (field -> source
        label; per-region entries use ``"field:region_id"`` keys),
        ``vintage`` (field -> period label) and ``default_alpha``.
    omega : float
        Terminal age for marriage-age estimation from marital tables.
    default_alpha : float, optional
        Dataset-level marriage-to-first-birth interval, overriding a
        value from ``sources_json``.
    """
    regions_csv = Path(regions_csv)
    collected_warnings: list[str] = []
    provenance: dict[str, str] = {}
    vintage: dict[str, str] = {}
    sources_alpha = None
    if sources_json is not None:
        sources_json = Path(sources_json)
        with open(sources_json, encoding="utf-8") as fh:
            try:
                sources = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{sources_json}: invalid JSON ({exc})") from exc
        if not isinstance(sources, dict):
            raise SchemaError(f"{sources_json}: expected a JSON object at top level")
        provenance.update(
            {str(k): str(v) for k, v in sources.get("provenance", {}).items()}
        )
        vintage.update(
            {str(k): str(v) for k, v in sources.get("vintage", {}).items()}
        )
        if sources.get("default_alpha") is not None:
            sources_alpha = float(sources["default_alpha"])

    regions = _load_regions(regions_csv, collected_warnings)
    if not regions:
        raise SchemaError(f"{regions_csv}: no regions found")

    tables: dict[str, dict[Sex, MaritalStatusTable]] = {}
    if marital_csv is not None:
        marital_csv = Path(marital_csv)
        tables = _load_marital(marital_csv, omega)
        known = {r.region_id for r in regions}
        orphans = sorted(set(tables) - known)
        if orphans:
            raise SchemaError(
                f"{marital_csv}: marital tables for unknown region(s): "
                + ", ".join(orphans)
            )

    # Every region must leave the loader computable: supplied ages or a
    # marital table to estimate them from, per sex.
    incomplete = []
    for region in regions:
        have = tables.get(region.region_id, {})
        if region.male_age is None and Sex.MALE not in have:
            incomplete.append(f"{region.region_id} (male)")
        if region.female_age is None and Sex.FEMALE not in have:
            incomplete.append(f"{region.region_id} (female)")
    if incomplete:
        raise MissingDataError(
            "no marriage age supplied and no marital table to derive it "
            "from: " + ", ".join(incomplete)
        )

    _check_proxy_provenance(regions, provenance)

    # Default provenance: attribute fields to the file they came from.
    for field_name in ("srb", "tfr", "u5mr", "male_pop_15_54", "a_m", "a_f", "alpha"):
        provenance.setdefault(field_name, str(regions_csv))
    if marital_csv is not None:
        provenance.setdefault("marital", str(marital_csv))

    alpha = default_alpha if default_alpha is not None else sources_alpha
    for message in collected_warnings:
        warnings.warn(message, stacklevel=2)
    return DatasetBundle(
        regions=regions,
        marital_tables=tables,
        provenance=provenance,
        vintage=vintage,
        default_alpha=alpha,
        warnings=tuple(collected_warnings),
    )


@dataclass(frozen=True)
class ResolvedTiming:
    """Marriage timing for one region plus where each number came from."""

    timing: MarriageTiming
    sources: dict[str, str]


def resolve_timing(
    bundle: DatasetBundle,
    region_id: str,
    alpha_override: float | None = None,
) -> ResolvedTiming:
    """Resolve a region's marriage timing, deriving ages when needed.

    Supplied ages pass through; missing ages are estimated from the
    region's marital-status tables.  The marriage-to-first-birth interval
    resolves as: explicit override, then the region's own value, then the
    dataset default, then the package default — and its origin is always
    recorded in the returned sources.
    """
    region = bundle.region(region_id)
    tables = bundle.marital_tables.get(region_id, {})
    sources: dict[str, str] = {}

    ages: dict[Sex, float] = {}
    for sex, supplied in ((Sex.MALE, region.male_age), (Sex.FEMALE, region.female_age)):
        key = "male_age" if sex is Sex.MALE else "female_age"
        if supplied is not None:
            ages[sex] = supplied
            sources[key] = "supplied"
        elif sex in tables:
            ages[sex] = compute_smam(tables[sex])
            sources[key] = "estimated from marital-status table"
        else:
            raise MissingDataError(
                f"region {region_id!r}: no {sex.value} marriage age supplied "
                "and no marital table to derive it from"
            )

    if alpha_override is not None:
        alpha, alpha_source = alpha_override, "override"
    elif region.alpha is not None:
        alpha, alpha_source = region.alpha, "region value"
    elif bundle.default_alpha is not None:
        alpha, alpha_source = bundle.default_alpha, "dataset default"
    else:
        alpha, alpha_source = (
            DEFAULT_BIRTH_INTERVAL,
            f"package default ({DEFAULT_BIRTH_INTERVAL})",
        )
    sources["alpha"] = alpha_source

    timing = MarriageTiming(
        male_age=ages[Sex.MALE],
        female_age=ages[Sex.FEMALE],
        birth_interval=alpha,
    )
    return ResolvedTiming(timing=timing, sources=sources)
