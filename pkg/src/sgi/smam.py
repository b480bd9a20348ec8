"""Singulate mean age at marriage from proportions never married.

The estimator turns one cross-sectional census tabulation — counts and
never-married counts by sex and age group — into the mean age at first
marriage among people who eventually marry.  It is the standard discrete
procedure used with census data:

1. accumulate the person-years lived single up to the terminal age ω
   (everyone is single through age 15, so that contributes 15 years flat),
2. estimate the fraction who never marry as the average proportion single
   in the age groups on either side of ω,
3. subtract the single years attributable to the never-marrying and
   renormalize to those who do marry::

       SMAM = (SS - ω * R) / (1 - R)

   with ``SS = 15 + Σ width_g * p_g`` over the groups tiling [15, ω) and
   ``R`` the never-marrying fraction.

Age groups may be any contiguous tiling with boundaries at 15 and ω
(5-year census groups and single-year tables both work).  Sexes are
estimated independently and nothing is smoothed, so every number is
traceable to its input cells.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    DegenerateCellError,
    InvalidInputError,
    SchemaError,
    Sex,
    UndefinedSmamError,
)

__all__ = [
    "AgeGroupRow",
    "MaritalStatusTable",
    "proportions_single",
    "compute_smam",
    "DEFAULT_UPPER_LIMIT",
]

#: Conventional terminal age: first marriage is assumed not to occur at or
#: beyond this age plus the width of the following group.
DEFAULT_UPPER_LIMIT = 50.0

#: Youngest age entering the estimator; everyone below it counts as single.
_BASE_AGE = 15.0


@dataclass(frozen=True)
class AgeGroupRow:
    """Counts for one age group ``[lower, upper)``."""

    lower: float
    upper: float
    total: int
    never_married: int

    def __post_init__(self) -> None:
        if not self.upper > self.lower:
            raise SchemaError(
                f"age group upper bound must exceed lower bound, got "
                f"[{self.lower}, {self.upper})"
            )
        if self.total < 0 or self.never_married < 0:
            raise SchemaError(
                f"counts must be non-negative in age group "
                f"[{self.lower}, {self.upper})"
            )
        if self.never_married > self.total:
            raise SchemaError(
                f"never_married ({self.never_married}) exceeds total "
                f"({self.total}) in age group [{self.lower}, {self.upper})"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def label(self) -> str:
        return f"[{self.lower:g}, {self.upper:g})"


@dataclass(frozen=True)
class MaritalStatusTable:
    """Never-married counts by age group for one sex.

    Rows must be contiguous, non-overlapping and ascending, cover at least
    ``[15, upper_limit + 5)``, and have group boundaries at exactly 15 and
    at ``upper_limit`` so the estimator's pieces line up.
    """

    sex: Sex
    rows: tuple[AgeGroupRow, ...]
    upper_limit: float = DEFAULT_UPPER_LIMIT

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise SchemaError("marital status table has no rows")
        omega = float(self.upper_limit)
        if omega <= _BASE_AGE:
            raise InvalidInputError(
                f"upper_limit must exceed {_BASE_AGE}, got {omega!r}"
            )
        object.__setattr__(self, "upper_limit", omega)
        prev = None
        for row in self.rows:
            if prev is not None and row.lower != prev.upper:
                raise SchemaError(
                    f"age groups must be contiguous and ascending: "
                    f"{prev.label} is followed by {row.label}"
                )
            prev = row
        if self.rows[0].lower > _BASE_AGE or self.rows[-1].upper < omega + 5.0:
            raise SchemaError(
                f"table must cover [{_BASE_AGE:g}, {omega + 5:g}), got "
                f"[{self.rows[0].lower:g}, {self.rows[-1].upper:g})"
            )
        boundaries = {self.rows[0].lower} | {row.upper for row in self.rows}
        for needed in (_BASE_AGE, omega):
            if needed not in boundaries:
                raise SchemaError(
                    f"no age-group boundary at {needed:g}; groups must align "
                    f"with {_BASE_AGE:g} and the upper limit {omega:g}"
                )


def proportions_single(
    table: MaritalStatusTable,
) -> list[tuple[tuple[float, float], float]]:
    """Proportion never married per age group, in table order.

    A zero-total group has no defined proportion and is rejected rather
    than silently treated as zero.
    """
    out = []
    for row in table.rows:
        if row.total == 0:
            raise DegenerateCellError(
                f"age group {row.label} has total 0; "
                "proportion never married is undefined"
            )
        out.append(((row.lower, row.upper), row.never_married / row.total))
    return out


def compute_smam(table: MaritalStatusTable) -> float:
    """Singulate mean age at marriage for one sex, in years.

    Raises :class:`UndefinedSmamError` when the never-marrying fraction is
    1 (nobody ever marries).  For tables whose proportions never married
    are non-increasing in age — any coherent cross-section of a cohort
    subject only to first marriage — the result lies in
    ``[15, upper_limit]``.
    """
    omega = table.upper_limit
    props = dict(proportions_single(table))

    single_years = _BASE_AGE
    last_before = first_after = None
    for (lower, upper), p in props.items():
        if lower >= _BASE_AGE and upper <= omega:
            single_years += (upper - lower) * p
        if upper == omega:
            last_before = p
        if lower == omega:
            first_after = p
    # Table invariants guarantee both boundary groups exist.
    assert last_before is not None and first_after is not None
    never_marrying = (last_before + first_after) / 2.0
    if never_marrying == 1.0:
        raise UndefinedSmamError(
            "everyone is never married around the upper age limit; "
            "mean age at marriage is undefined"
        )
    return (single_years - omega * never_marrying) / (1.0 - never_marrying)
