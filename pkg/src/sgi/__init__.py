"""Marriage-market imbalance from census structure and vital rates.

The package computes a closed-form index of how many men reaching
marriageable age can find a bride of the customary age, given the sex
ratio at birth, effective fertility (births surviving early childhood),
and marriage timing — and verifies that closed form against an
independent stable-population cohort oracle and a year-by-year matching
microsimulation.
"""

from .model import (
    ComputationError,
    ConfigurationError,
    DegenerateCellError,
    FertilityInputs,
    InvalidInputError,
    MarriageTiming,
    MissingDataError,
    RegionInputs,
    SchemaError,
    Sex,
    SexRatioAtBirth,
    SexRatioConvention,
    SgiError,
    SgiResult,
    U5mrUnits,
    UndefinedSmamError,
    canonicalize_sex_ratio,
    express_sex_ratio,
    DEFAULT_BALANCE_TOLERANCE,
    DEFAULT_BIRTH_INTERVAL,
)
from .index import (
    SurplusMen,
    compute_sgi,
    effective_fertility,
    growth_rate,
    imbalance_condition,
    sgi_value,
    sgi_value_expanded,
    surplus_men,
)
from .smam import (
    AgeGroupRow,
    MaritalStatusTable,
    compute_smam,
    proportions_single,
    DEFAULT_UPPER_LIMIT,
)
from .oracle import (
    CohortSeries,
    MicrosimShares,
    births_at,
    generate_stable_series,
    matching_trajectory,
    run_matching_microsim,
    stable_cohort_ratio,
)
from .density import (
    DensityCurve,
    kernel_density,
    render_density_svg,
    silverman_bandwidth,
)
from .ingest import DatasetBundle, ResolvedTiming, load_bundle, resolve_timing
from .report import (
    RegionRecord,
    RunReport,
    SensitivityRow,
    emit_density,
    run_compute,
    run_sensitivity,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "SgiError",
    "InvalidInputError",
    "SchemaError",
    "DegenerateCellError",
    "UndefinedSmamError",
    "MissingDataError",
    "ConfigurationError",
    "ComputationError",
    "Sex",
    "SexRatioConvention",
    "SexRatioAtBirth",
    "U5mrUnits",
    "FertilityInputs",
    "MarriageTiming",
    "RegionInputs",
    "SgiResult",
    "canonicalize_sex_ratio",
    "express_sex_ratio",
    "DEFAULT_BALANCE_TOLERANCE",
    "DEFAULT_BIRTH_INTERVAL",
    # index
    "effective_fertility",
    "growth_rate",
    "imbalance_condition",
    "sgi_value",
    "sgi_value_expanded",
    "compute_sgi",
    "surplus_men",
    "SurplusMen",
    # smam
    "AgeGroupRow",
    "MaritalStatusTable",
    "proportions_single",
    "compute_smam",
    "DEFAULT_UPPER_LIMIT",
    # oracle
    "CohortSeries",
    "generate_stable_series",
    "births_at",
    "stable_cohort_ratio",
    "matching_trajectory",
    "run_matching_microsim",
    "MicrosimShares",
    # density
    "DensityCurve",
    "silverman_bandwidth",
    "kernel_density",
    "render_density_svg",
    # ingest
    "DatasetBundle",
    "ResolvedTiming",
    "load_bundle",
    "resolve_timing",
    # report
    "RegionRecord",
    "RunReport",
    "SensitivityRow",
    "run_compute",
    "run_sensitivity",
    "emit_density",
]
