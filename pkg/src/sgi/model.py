"""Domain types and unit conventions shared across the package.

The canonical sex-ratio convention everywhere inside the package is
*females per male*; every other published convention (females per 1000
males, males per 100 females) is converted at the boundary by
:func:`canonicalize_sex_ratio`.  Under-five mortality is stored as a
proportion in [0, 1); rates published per 1000 live births are converted
via :meth:`FertilityInputs.from_units`.

All types are immutable value objects.  Invariants are enforced at
construction, so no downstream operation ever observes an invalid
instance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class SgiError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SgiError, ValueError):
    """A numeric input violates a domain precondition."""


class SchemaError(SgiError, ValueError):
    """A table or file does not conform to its required layout."""


class DegenerateCellError(SchemaError):
    """A table cell makes a required quantity undefined (e.g. a zero total)."""


class UndefinedSmamError(SgiError, ValueError):
    """The marriage-age estimator is undefined (nobody ever marries)."""


class MissingDataError(SgiError, LookupError):
    """A required input is absent and cannot be derived."""


class ConfigurationError(SgiError, ValueError):
    """A run configuration is unusable (e.g. simulation horizon too short)."""


class ComputationError(SgiError):
    """One or more per-region computations failed after validation passed."""


class Sex(enum.Enum):
    MALE = "male"
    FEMALE = "female"


class SexRatioConvention(enum.Enum):
    """Publication conventions for the sex ratio at birth."""

    FEMALES_PER_MALE = "females_per_male"
    FEMALES_PER_1000_MALES = "females_per_1000_males"
    MALES_PER_100_FEMALES = "males_per_100_females"


def _require_finite(value: float, field: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{field} must be finite, got {value!r}")
    return value


def _require_positive(value: float, field: str) -> float:
    value = _require_finite(value, field)
    if value <= 0:
        raise InvalidInputError(f"{field} must be > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class SexRatioAtBirth:
    """Sex ratio at birth in canonical form: females born per male born."""

    females_per_male: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "females_per_male",
            _require_positive(self.females_per_male, "sex ratio (females per male)"),
        )

    @property
    def female_share(self) -> float:
        """Share of births that are female, S / (1 + S)."""
        s = self.females_per_male
        return s / (1.0 + s)

    @property
    def male_share(self) -> float:
        """Share of births that are male, 1 / (1 + S)."""
        return 1.0 / (1.0 + self.females_per_male)


def canonicalize_sex_ratio(
    value: float, convention: SexRatioConvention | str
) -> SexRatioAtBirth:
    """Convert a published sex-ratio value to canonical females-per-male form.

    Parameters
    ----------
    value : float
        The ratio as published, strictly positive.
    convention : SexRatioConvention or str
        Which convention ``value`` is expressed in.

    Raises
    ------
    InvalidInputError
        If ``value`` is non-positive or non-finite, or the convention is
        unknown.
    """
    convention = SexRatioConvention(convention)
    value = _require_positive(value, f"sex ratio ({convention.value})")
    if convention is SexRatioConvention.FEMALES_PER_MALE:
        return SexRatioAtBirth(value)
    if convention is SexRatioConvention.FEMALES_PER_1000_MALES:
        return SexRatioAtBirth(value / 1000.0)
    # males per 100 females: invert to females per male
    return SexRatioAtBirth(100.0 / value)


def express_sex_ratio(
    ratio: SexRatioAtBirth, convention: SexRatioConvention | str
) -> float:
    """Express a canonical sex ratio in another publication convention.

    Inverse of :func:`canonicalize_sex_ratio`: round-tripping through any
    convention reproduces the canonical value to floating-point accuracy.
    """
    convention = SexRatioConvention(convention)
    s = ratio.females_per_male
    if convention is SexRatioConvention.FEMALES_PER_MALE:
        return s
    if convention is SexRatioConvention.FEMALES_PER_1000_MALES:
        return s * 1000.0
    return 100.0 / s


class U5mrUnits(enum.Enum):
    """Units in which an under-five mortality value is supplied."""

    PROPORTION = "proportion"
    PER_1000 = "per_1000"


@dataclass(frozen=True)
class FertilityInputs:
    """Total fertility rate and under-five mortality for one population.

    ``u5mr`` is stored as a proportion of live births dying before age
    five.  Use :meth:`from_units` when the source publishes deaths per
    1000 live births.
    """

    tfr: float
    u5mr: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "tfr", _require_positive(self.tfr, "tfr"))
        u = _require_finite(self.u5mr, "u5mr")
        if not 0.0 <= u < 1.0:
            raise InvalidInputError(f"u5mr must lie in [0, 1), got {u!r}")
        object.__setattr__(self, "u5mr", u)

    @classmethod
    def from_units(
        cls, tfr: float, u5mr: float, units: U5mrUnits | str = U5mrUnits.PROPORTION
    ) -> "FertilityInputs":
        units = U5mrUnits(units)
        if units is U5mrUnits.PER_1000:
            u5mr = float(u5mr) / 1000.0
        return cls(tfr=tfr, u5mr=u5mr)


#: Default marriage-to-first-birth interval in years, applied whenever a
#: dataset does not supply one.  Echoed in run output as an explicit
#: assumption.
DEFAULT_BIRTH_INTERVAL = 2.0


@dataclass(frozen=True)
class MarriageTiming:
    """Mean ages at first marriage and the marriage-to-first-birth interval.

    ``birth_interval`` is the average time from marriage to first birth,
    so mothers give birth at mean age ``female_age + birth_interval``.
    The spousal age gap may be negative (women marrying older men is the
    usual case, but nothing here requires it).
    """

    male_age: float
    female_age: float
    birth_interval: float = DEFAULT_BIRTH_INTERVAL

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "male_age", _require_positive(self.male_age, "male_age")
        )
        object.__setattr__(
            self, "female_age", _require_positive(self.female_age, "female_age")
        )
        b = _require_finite(self.birth_interval, "birth_interval")
        if b < 0:
            raise InvalidInputError(f"birth_interval must be >= 0, got {b!r}")
        object.__setattr__(self, "birth_interval", b)
        if self.female_age + b <= 0:
            raise InvalidInputError(
                "female_age + birth_interval must be > 0 "
                f"(got {self.female_age!r} + {b!r})"
            )

    @property
    def age_gap(self) -> float:
        """Spousal age gap in years, male minus female."""
        return self.male_age - self.female_age

    @property
    def generation_length(self) -> float:
        """Mean age of mothers at birth: female marriage age plus interval."""
        return self.female_age + self.birth_interval


@dataclass(frozen=True)
class RegionInputs:
    """One region's demographic parameters.

    Marriage ages may be supplied directly (``male_age`` / ``female_age``)
    or left ``None`` when they are to be derived from the region's
    marital-status tables.  ``alpha`` optionally overrides the
    marriage-to-first-birth interval for this region.
    """

    region_id: str
    name: str
    sex_ratio: SexRatioAtBirth
    fertility: FertilityInputs
    male_age: float | None = None
    female_age: float | None = None
    alpha: float | None = None
    male_pop_15_54: int | None = None
    u5mr_is_proxy: bool = False

    def __post_init__(self) -> None:
        if not self.region_id:
            raise InvalidInputError("region_id must be a non-empty string")
        for field in ("male_age", "female_age"):
            v = getattr(self, field)
            if v is not None:
                object.__setattr__(self, field, _require_positive(v, field))
        if self.alpha is not None:
            a = _require_finite(self.alpha, "alpha")
            if a < 0:
                raise InvalidInputError(f"alpha must be >= 0, got {a!r}")
            object.__setattr__(self, "alpha", a)
        if self.male_pop_15_54 is not None:
            pop = int(self.male_pop_15_54)
            if pop < 0:
                raise InvalidInputError(
                    f"male_pop_15_54 must be >= 0, got {self.male_pop_15_54!r}"
                )
            object.__setattr__(self, "male_pop_15_54", pop)

    @property
    def has_supplied_ages(self) -> bool:
        return self.male_age is not None and self.female_age is not None

    def timing(self, alpha: float | None = None) -> MarriageTiming:
        """Assemble marriage timing from directly supplied ages.

        ``alpha`` takes precedence over the region's own value; the
        package default is used when neither is present.  Raises
        :class:`MissingDataError` when ages were not supplied (use the
        ingestion layer to derive them from marital-status tables).
        """
        if not self.has_supplied_ages:
            raise MissingDataError(
                f"region {self.region_id!r} has no supplied marriage ages"
            )
        if alpha is None:
            alpha = self.alpha if self.alpha is not None else DEFAULT_BIRTH_INTERVAL
        return MarriageTiming(
            male_age=self.male_age,  # type: ignore[arg-type]
            female_age=self.female_age,  # type: ignore[arg-type]
            birth_interval=alpha,
        )


#: Default half-width of the band around 1 inside which a market is
#: reported as balanced.  The raw index value is always preserved.
DEFAULT_BALANCE_TOLERANCE = 0.005


@dataclass(frozen=True)
class SgiResult:
    """Index value and derived quantities for one set of inputs.

    Two surplus-share conventions are carried side by side:

    * ``surplus_share_paper`` = index − 1, the headline convention under
      which an index of 1.11 reads as "11 percent of men";
    * ``surplus_share_ratio`` = 1 − 1/index, the unmatched share implied
      by reading the index literally as a men-to-women cohort ratio.

    Both are stored because the two readings genuinely differ away from
    balance and downstream counts are reported under each.
    """

    effective_fertility: float
    growth_rate: float
    sgi: float
    balanced: bool
    surplus_share_paper: float
    surplus_share_ratio: float
    surplus_men: int | None = None
    balance_tolerance: float = DEFAULT_BALANCE_TOLERANCE

    def __post_init__(self) -> None:
        _require_positive(self.sgi, "sgi")
        _require_positive(self.effective_fertility, "effective_fertility")
        _require_finite(self.growth_rate, "growth_rate")
        # The share fields are definitional; reject inconsistent instances.
        if self.surplus_share_paper != self.sgi - 1.0:
            raise InvalidInputError(
                "surplus_share_paper must equal sgi - 1 exactly"
            )
        if self.surplus_share_ratio != 1.0 - 1.0 / self.sgi:
            raise InvalidInputError(
                "surplus_share_ratio must equal 1 - 1/sgi exactly"
            )
        if self.balanced != (abs(self.sgi - 1.0) <= self.balance_tolerance):
            raise InvalidInputError(
                "balanced flag inconsistent with sgi and balance_tolerance"
            )
