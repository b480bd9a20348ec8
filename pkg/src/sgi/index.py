"""The surplus groom index and its supporting stable-population algebra.

The model: a stable population in which every cohort grows at a constant
exponential rate ``n``, births split between the sexes by a constant sex
ratio ``S`` (females per male), and everyone marries exactly once, men at
mean age ``A_m`` and women at mean age ``A_f``.  Mothers bear ``r̃``
surviving children at mean age ``A_f + α``, where ``r̃`` is the *effective*
fertility rate: total fertility discounted by under-five mortality, the
births that actually survive to marriageable ages.

Self-reproduction of the female line pins down the growth rate::

    n = [ln(r̃) + ln(S / (1 + S))] / (A_f + α)

The index compares the men reaching marriage age in a given year with the
women reaching marriage age the same year (born ΔA = A_m − A_f years
later)::

    SGI = (1/S) * [(1 + S) / (r̃ S)] ** (ΔA / (A_f + α))
        = exp(-(n ΔA + ln S))

Values above 1 mean more grooms than brides.  ``imbalance_condition``
returns the exponent's negation, ``n ΔA + ln S``, whose sign is therefore
always opposite to that of ``SGI − 1``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .model import (
    DEFAULT_BALANCE_TOLERANCE,
    FertilityInputs,
    InvalidInputError,
    MarriageTiming,
    SexRatioAtBirth,
    SgiResult,
)

__all__ = [
    "effective_fertility",
    "growth_rate",
    "imbalance_condition",
    "sgi_value",
    "sgi_value_expanded",
    "compute_sgi",
    "surplus_men",
    "SurplusMen",
]


def effective_fertility(fertility: FertilityInputs) -> float:
    """Births per woman surviving early childhood: ``tfr * (1 - u5mr)``."""
    return fertility.tfr * (1.0 - fertility.u5mr)


def growth_rate(
    rt_effective: float, sex_ratio: SexRatioAtBirth, timing: MarriageTiming
) -> float:
    """Stable-population growth rate implied by effective fertility.

    Solves the female-line reproduction balance for ``n``: each woman
    marrying at ``A_f`` bears ``rt_effective`` surviving children at age
    ``A_f + birth_interval``, a share ``S/(1+S)`` of them girls.

    Returns the per-year exponential rate; zero exactly at replacement
    (``rt_effective * S/(1+S) == 1``).
    """
    rt = float(rt_effective)
    if not math.isfinite(rt) or rt <= 0:
        raise InvalidInputError(f"effective fertility must be > 0, got {rt!r}")
    return (math.log(rt) + math.log(sex_ratio.female_share)) / timing.generation_length


def imbalance_condition(
    n: float, sex_ratio: SexRatioAtBirth, timing: MarriageTiming
) -> float:
    """Signed imbalance margin ``n * ΔA + ln(S)``.

    Non-positive values signal a groom surplus (the female inflow cannot
    cover the male cohorts ΔA years older); positive values signal a
    groom deficit.  Zero iff the index is exactly 1.
    """
    return n * timing.age_gap + math.log(sex_ratio.females_per_male)


def sgi_value(
    sex_ratio: SexRatioAtBirth, rt_effective: float, timing: MarriageTiming
) -> float:
    """The index in its primary closed form.

    ``(1/S) * [(1+S) / (r̃ S)] ** (ΔA / (A_f + α))``.  Exactly 1 for
    ``S = 1, r̃ = 2`` and exactly ``1/S`` for ``ΔA = 0``.
    """
    rt = float(rt_effective)
    if not math.isfinite(rt) or rt <= 0:
        raise InvalidInputError(f"effective fertility must be > 0, got {rt!r}")
    s = sex_ratio.females_per_male
    exponent = timing.age_gap / timing.generation_length
    return (1.0 / s) * ((1.0 + s) / (rt * s)) ** exponent


def sgi_value_expanded(
    sex_ratio: SexRatioAtBirth, rt_effective: float, timing: MarriageTiming
) -> float:
    """Algebraically equivalent expanded form of :func:`sgi_value`.

    ``(1+S)**E / (S**(1+E) * r̃**E)`` with ``E = ΔA / (A_f + α)``.  Kept
    as an internal cross-check that the two printed forms of the index
    agree to floating-point accuracy.
    """
    rt = float(rt_effective)
    if not math.isfinite(rt) or rt <= 0:
        raise InvalidInputError(f"effective fertility must be > 0, got {rt!r}")
    s = sex_ratio.females_per_male
    e = timing.age_gap / timing.generation_length
    return (1.0 + s) ** e / (s ** (1.0 + e) * rt**e)


def compute_sgi(
    sex_ratio: SexRatioAtBirth,
    rt_effective: float,
    timing: MarriageTiming,
    male_pop_15_54: int | None = None,
    balance_tolerance: float = DEFAULT_BALANCE_TOLERANCE,
) -> SgiResult:
    """Evaluate the index and package it with its derived quantities.

    Parameters
    ----------
    sex_ratio : SexRatioAtBirth
        Females born per male born.
    rt_effective : float
        Effective fertility (births per woman surviving to age five).
    timing : MarriageTiming
        Marriage ages and marriage-to-first-birth interval.
    male_pop_15_54 : int, optional
        When given, the surplus head count under the headline share
        convention is filled in on the result.
    balance_tolerance : float
        Half-width of the reporting band around 1 for the ``balanced``
        flag; the raw value is always preserved.
    """
    sgi = sgi_value(sex_ratio, rt_effective, timing)
    n = growth_rate(rt_effective, sex_ratio, timing)
    surplus = None
    if male_pop_15_54 is not None:
        surplus = int(round(male_pop_15_54 * (sgi - 1.0)))
    return SgiResult(
        effective_fertility=rt_effective,
        growth_rate=n,
        sgi=sgi,
        balanced=abs(sgi - 1.0) <= balance_tolerance,
        surplus_share_paper=sgi - 1.0,
        surplus_share_ratio=1.0 - 1.0 / sgi,
        surplus_men=surplus,
        balance_tolerance=balance_tolerance,
    )


class SurplusMen(NamedTuple):
    """Surplus head counts under the two share conventions.

    ``paper`` applies the headline convention (index − 1); ``ratio``
    applies the cohort-ratio convention (1 − 1/index).  Iterating or
    unpacking yields the headline figure first.
    """

    paper: int
    ratio: int


def surplus_men(result: SgiResult, male_pop_15_54: int) -> SurplusMen:
    """Absolute surplus men implied by an index value and a population base.

    Both conventions are evaluated; each is rounded to the nearest whole
    person.  Negative values indicate a groom deficit (surplus brides).
    """
    if male_pop_15_54 < 0:
        raise InvalidInputError(
            f"male_pop_15_54 must be >= 0, got {male_pop_15_54!r}"
        )
    return SurplusMen(
        paper=int(round(male_pop_15_54 * result.surplus_share_paper)),
        ratio=int(round(male_pop_15_54 * result.surplus_share_ratio)),
    )
