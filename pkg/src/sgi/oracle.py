"""Independent checks of the closed-form index.

Two routes, both built from the stable-population primitives (exponential
birth series, constant sex split, fixed marriage ages) rather than from
the index formula itself:

* :func:`stable_cohort_ratio` reads the men-to-women ratio at marriage
  straight off a generated birth series, ``M[t - A_m] / F[t - A_f]``,
  evaluating real-valued ages by geometric interpolation (exact on an
  exponential series).  For a stable series this must coincide with the
  closed form to floating-point accuracy: that identity is the central
  verification of the package.
* :func:`run_matching_microsim` plays the marriage market forward year by
  year, matching the cohorts reaching marriage age one-to-one, and
  accumulates the share of each sex left unmatched.  Ages are rounded to
  whole years here, so it is a coarser, dynamic confirmation: for a
  stable series the cumulative unmatched male share tends to
  ``max(0, 1 - 1/SGI)``.

Cohort sizes are real-valued throughout to keep the checks deterministic
and convergence clean; an integer mode with explicit rounding exists for
demonstration only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .index import growth_rate
from .model import (
    ConfigurationError,
    InvalidInputError,
    MarriageTiming,
    Sex,
    SexRatioAtBirth,
)

__all__ = [
    "CohortSeries",
    "generate_stable_series",
    "births_at",
    "stable_cohort_ratio",
    "matching_trajectory",
    "run_matching_microsim",
    "MatchingYear",
    "MicrosimShares",
]

#: Relative tolerance for the constant-sex-split invariant of a series.
_RATIO_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class CohortSeries:
    """Annual male and female birth counts with a constant sex split.

    The series may follow any growth path, but the female-to-male ratio
    must be the same every year (a constant sex ratio at birth is part of
    the model).  Counts are real-valued.
    """

    start_year: int
    male_births: np.ndarray = field(repr=False)
    female_births: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        male = np.asarray(self.male_births, dtype=float)
        female = np.asarray(self.female_births, dtype=float)
        object.__setattr__(self, "male_births", male)
        object.__setattr__(self, "female_births", female)
        if male.ndim != 1 or female.ndim != 1 or male.shape != female.shape:
            raise InvalidInputError(
                "male_births and female_births must be 1-d arrays of equal length"
            )
        if male.size == 0:
            raise InvalidInputError("a cohort series needs at least one year")
        if not (np.all(np.isfinite(male)) and np.all(np.isfinite(female))):
            raise InvalidInputError("birth counts must be finite")
        if np.any(male <= 0) or np.any(female <= 0):
            raise InvalidInputError("birth counts must be positive")
        ratio = female / male
        s = ratio[0]
        if np.any(np.abs(ratio - s) > _RATIO_RTOL * s):
            raise InvalidInputError(
                "female/male births must be a constant ratio across years"
            )

    @property
    def years(self) -> int:
        return int(self.male_births.size)

    @property
    def end_year(self) -> int:
        return self.start_year + self.years - 1

    @property
    def sex_ratio(self) -> SexRatioAtBirth:
        """The constant female-per-male split of the series."""
        return SexRatioAtBirth(float(self.female_births[0] / self.male_births[0]))

    def births(self, sex: Sex) -> np.ndarray:
        return self.male_births if sex is Sex.MALE else self.female_births


def generate_stable_series(
    sex_ratio: SexRatioAtBirth,
    rt_effective: float,
    timing: MarriageTiming,
    years: int,
    b0: float = 1000.0,
    start_year: int = 0,
) -> CohortSeries:
    """Generate the exponential birth series of a stable population.

    Total births follow ``B_t = b0 * exp(n t)`` with ``n`` solved from the
    female-line reproduction balance, then split into ``F_t = B_t S/(1+S)``
    and ``M_t = B_t / (1+S)``.  The series is self-consistent by
    construction: every female cohort equals the surviving daughters of
    the cohort one generation earlier.

    ``years`` must cover at least ``A_m + A_f + birth_interval`` (rounded
    up) so that every lookback used by the checks exists.
    """
    if b0 <= 0 or not math.isfinite(b0):
        raise InvalidInputError(f"b0 must be a positive finite number, got {b0!r}")
    needed = math.ceil(timing.male_age + timing.generation_length)
    if years < needed:
        raise ConfigurationError(
            f"series of {years} years is too short: need at least {needed} "
            "(male marriage age + female marriage age + birth interval)"
        )
    n = growth_rate(rt_effective, sex_ratio, timing)
    t = np.arange(years, dtype=float)
    total = b0 * np.exp(n * t)
    return CohortSeries(
        start_year=start_year,
        male_births=total * sex_ratio.male_share,
        female_births=total * sex_ratio.female_share,
    )


def births_at(series: CohortSeries, sex: Sex, year: float) -> float:
    """Births of one sex at a real-valued year, by geometric interpolation.

    Between stored years the series is interpolated as
    ``v[k] * (v[k+1]/v[k]) ** f`` — exact for any geometric series, so
    real-valued marriage ages can be applied to a stable series without
    discretization error.
    """
    pos = float(year) - series.start_year
    last = series.years - 1
    if pos < 0 or pos > last:
        raise ConfigurationError(
            f"year {year!r} outside series range "
            f"[{series.start_year}, {series.end_year}]"
        )
    values = series.births(sex)
    k = int(math.floor(pos))
    f = pos - k
    if f == 0.0:
        return float(values[k])
    return float(values[k] * (values[k + 1] / values[k]) ** f)


def stable_cohort_ratio(
    series: CohortSeries, timing: MarriageTiming, at_year: int
) -> float:
    """Men-to-women ratio at marriage in a given year, read off the series.

    Men marrying in ``at_year`` were born ``male_age`` years earlier, the
    women they match ``female_age`` years earlier.  Both lookbacks must
    fall inside the series.  For a series from
    :func:`generate_stable_series` this equals the closed-form index.
    """
    men = births_at(series, Sex.MALE, at_year - timing.male_age)
    women = births_at(series, Sex.FEMALE, at_year - timing.female_age)
    return men / women


class MatchingYear(NamedTuple):
    """One simulated marriage-market year."""

    year: int
    male_births: float
    female_births: float
    men_at_marriage: float
    women_at_marriage: float
    matches: float
    unmatched_men: float
    unmatched_women: float


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def matching_trajectory(
    series: CohortSeries,
    timing: MarriageTiming,
    integer_cohorts: bool = False,
) -> Iterator[MatchingYear]:
    """Yield the year-by-year matching ledger for a birth series.

    Each year, men aged ``round(male_age)`` are matched one-to-one with
    women aged ``round(female_age)``; the scarcer side is fully matched
    and the excess on the other side counts as unmatched for that year.
    Unmatched individuals do not carry over: the market is an
    instantaneous cohort comparison, matching the steady state the closed
    form describes, not a queueing model.

    Years whose lookback falls before the series start are yielded with
    NaN matching columns so the birth series remains complete in output.
    """
    age_m = _round_half_up(timing.male_age)
    age_f = _round_half_up(timing.female_age)
    male = series.male_births
    female = series.female_births
    for t in range(series.years):
        year = series.start_year + t
        if t - age_m < 0 or t - age_f < 0:
            yield MatchingYear(
                year=year,
                male_births=float(male[t]),
                female_births=float(female[t]),
                men_at_marriage=math.nan,
                women_at_marriage=math.nan,
                matches=math.nan,
                unmatched_men=math.nan,
                unmatched_women=math.nan,
            )
            continue
        men = float(male[t - age_m])
        women = float(female[t - age_f])
        if integer_cohorts:
            men = float(_round_half_up(men))
            women = float(_round_half_up(women))
        matches = min(men, women)
        yield MatchingYear(
            year=year,
            male_births=float(male[t]),
            female_births=float(female[t]),
            men_at_marriage=men,
            women_at_marriage=women,
            matches=matches,
            unmatched_men=men - matches,
            unmatched_women=women - matches,
        )


class MicrosimShares(NamedTuple):
    """Cumulative post-burn-in unmatched shares, one per sex."""

    unmatched_male_share: float
    unmatched_female_share: float


def run_matching_microsim(
    series: CohortSeries,
    timing: MarriageTiming,
    burn_in: int,
    integer_cohorts: bool = False,
) -> MicrosimShares:
    """Cumulative unmatched share of each sex after a burn-in period.

    Years with index below ``burn_in`` (relative to the series start) are
    simulated but excluded from the accumulated totals, as are years whose
    marriage-age lookback precedes the series.  For a stable series with
    index above 1 the male share tends to ``1 - 1/SGI`` (up to the
    whole-year rounding of ages); below 1 the roles reverse.
    """
    if burn_in < 0:
        raise ConfigurationError(f"burn_in must be >= 0, got {burn_in!r}")
    horizon_needed = burn_in + max(
        _round_half_up(timing.male_age), _round_half_up(timing.female_age)
    )
    if series.years <= horizon_needed:
        raise ConfigurationError(
            f"series of {series.years} years is too short for burn_in={burn_in}: "
            f"need more than {horizon_needed} years"
        )
    total_men = total_women = 0.0
    lost_men = lost_women = 0.0
    for t, row in enumerate(
        matching_trajectory(series, timing, integer_cohorts=integer_cohorts)
    ):
        if t < burn_in or math.isnan(row.matches):
            continue
        total_men += row.men_at_marriage
        total_women += row.women_at_marriage
        lost_men += row.unmatched_men
        lost_women += row.unmatched_women
    if total_men == 0.0 or total_women == 0.0:
        raise ConfigurationError(
            "no post-burn-in years with a valid marriage-age lookback"
        )
    return MicrosimShares(
        unmatched_male_share=lost_men / total_men,
        unmatched_female_share=lost_women / total_women,
    )
