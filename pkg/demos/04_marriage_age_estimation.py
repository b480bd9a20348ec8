"""Estimating marriage ages from a census cross-section.

Census tables rarely record ages at marriage directly, but they do record
who has never married, by age group.  If first marriage stops by some
terminal age, the proportions never married trace out the marriage
schedule, and the mean age at first marriage among those who eventually
marry falls out of one pass over the table.

Here a synthetic cohort with a known marriage-age distribution plays the
census: we tabulate it exactly, estimate, and compare with the truth.
"""

import numpy as np

from sgi import MaritalStatusTable, AgeGroupRow, Sex, compute_smam, proportions_single

rng = np.random.default_rng(7)

# a known marriage-age distribution over 16..34 (counts per 1000 people)
ages = np.arange(16, 35)
weights = rng.random(ages.size) ** 2
counts = np.floor(weights / weights.sum() * 1000).astype(int)
counts[0] += 1000 - counts.sum()
true_mean = float((ages * counts).sum() / counts.sum())
print(f"true mean marriage age in the cohort: {true_mean:.4f} years")


def census_table(width):
    """Tabulate the cohort as a census would, in groups of ``width`` years."""
    rows = []
    lower = 15
    while lower < 55:
        upper = lower + width
        total = 1000 * width
        never = sum(int(counts[ages > a].sum()) for a in range(lower, upper))
        rows.append(AgeGroupRow(lower, upper, total, never))
        lower = upper
    return MaritalStatusTable(sex=Sex.FEMALE, rows=tuple(rows), upper_limit=50.0)


single_year = census_table(1)
five_year = census_table(5)

print("\nproportions never married (5-year groups):")
for (lo, hi), p in proportions_single(five_year):
    bar = "#" * int(round(p * 40))
    print(f"  [{lo:>2.0f},{hi:>2.0f})  {p:6.3f}  {bar}")

print(f"\nestimate from single-year groups: {compute_smam(single_year):.4f}")
print(f"estimate from 5-year groups:      {compute_smam(five_year):.4f}")
print("both agree with the true mean; grouping costs almost nothing when")
print("the population is evenly spread within groups.")

# --- the never-marrying adjustment -------------------------------------------
# Mix in 15 percent who never marry at any age: the estimator removes the
# single person-years they contribute and renormalizes to the marriers,
# so the estimate barely moves.
shifted = []
for row in five_year.rows:
    never = int(0.15 * row.total) + int(0.85 * row.never_married)
    shifted.append(AgeGroupRow(row.lower, row.upper, row.total, never))
with_never = MaritalStatusTable(sex=Sex.FEMALE, rows=tuple(shifted), upper_limit=50.0)
print(f"\nwith a 15% never-marrying share:  {compute_smam(with_never):.4f}")
print("(the never-marrying are excluded by design, so the mean is unchanged)")
