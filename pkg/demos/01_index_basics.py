"""The closed-form index, step by step.

A marriage market under monogamy clears when the women reaching
marriageable age can absorb the men reaching it — men who are typically a
few years older, i.e. born into earlier, differently-sized cohorts.  The
index condenses that comparison into one number from four ingredients:

* the sex ratio at birth (females per male),
* effective fertility: births per woman that survive early childhood,
* the mean ages at first marriage of men and women,
* the marriage-to-first-birth interval.

A value of 1 means balance; 1.11 means roughly 11 percent of men in the
marrying cohorts find no bride of the customary age.
"""

from sgi import (
    FertilityInputs,
    MarriageTiming,
    SexRatioAtBirth,
    compute_sgi,
    effective_fertility,
    growth_rate,
    imbalance_condition,
    surplus_men,
)

# --- a perfectly balanced market -------------------------------------------
# Equal numbers of boys and girls at birth, two surviving children per
# woman (exact replacement), so every cohort has the same size: the age
# gap has nothing to bite on.
balanced = compute_sgi(
    SexRatioAtBirth(1.0),
    rt_effective=2.0,
    timing=MarriageTiming(male_age=26, female_age=21, birth_interval=2),
)
print("balanced market:")
print(f"  index    = {balanced.sgi}")
print(f"  growth n = {balanced.growth_rate} per year")
print(f"  balanced = {balanced.balanced}")

# --- skewed births, growing population --------------------------------------
# 900 girls per 1000 boys and effective fertility well above replacement.
# Growth works in the grooms' favour: the women five years younger come
# from larger cohorts, partly offsetting the birth imbalance.
sex_ratio = SexRatioAtBirth(0.90)
fertility = FertilityInputs(tfr=3.2, u5mr=0.05)
timing = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
rt = effective_fertility(fertility)
growing = compute_sgi(sex_ratio, rt, timing)
print("\nskewed births, fast growth (tfr 3.2):")
print(f"  effective fertility = {rt:.4f}")
print(f"  growth n            = {growing.growth_rate:+.5f}")
print(f"  index               = {growing.sgi:.4f}")

# --- the same sex ratio after fertility decline ------------------------------
# Drop fertility to 1.9: younger female cohorts shrink, the offset
# vanishes, and the same birth imbalance now binds.
declined = compute_sgi(
    sex_ratio, effective_fertility(FertilityInputs(1.9, 0.05)), timing
)
print("\nsame sex ratio after fertility decline (tfr 1.9):")
print(f"  growth n = {declined.growth_rate:+.5f}")
print(f"  index    = {declined.sgi:.4f}")
print(f"  headline share of men unmatched: {declined.surplus_share_paper:.1%}")

# --- the sign condition -------------------------------------------------------
# The margin n*gap + ln(S) tells the same story with a sign: negative
# margin, groom surplus; positive margin, groom deficit.
for label, result in (("fast growth", growing), ("after decline", declined)):
    margin = imbalance_condition(result.growth_rate, sex_ratio, timing)
    print(f"\nmargin ({label}): {margin:+.5f}  ->  index {result.sgi:.4f}")

# --- from shares to people ----------------------------------------------------
# Two conventions for heads: the headline reading (index - 1) and the
# cohort-ratio reading (1 - 1/index).  Both are reported everywhere.
counts = surplus_men(declined, male_pop_15_54=10_000_000)
print("\non a base of 10 million men aged 15-54:")
print(f"  headline convention: {counts.paper:,} surplus grooms")
print(f"  ratio convention:    {counts.ratio:,} surplus grooms")

# --- what ignoring child mortality does --------------------------------------
crude = compute_sgi(sex_ratio, 1.9, timing)
print("\ncrude fertility (ignoring under-five mortality):")
print(f"  index {crude.sgi:.4f} vs {declined.sgi:.4f} with effective fertility")
print("  crude fertility overstates the female inflow and so understates")
print("  the imbalance whenever mortality and the age gap are positive.")
