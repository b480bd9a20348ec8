import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgi.model import DegenerateCellError, SchemaError, Sex, UndefinedSmamError
from sgi.smam import AgeGroupRow, MaritalStatusTable, compute_smam, proportions_single


def five_year_table(never_by_group, total=1000, omega=50.0, sex=Sex.FEMALE):
    """Build a table over [15, 55) from never-married counts per 5-year group."""
    assert len(never_by_group) == 8  # 15-19 ... 50-54
    rows = [
        AgeGroupRow(15 + 5 * i, 20 + 5 * i, total, never)
        for i, never in enumerate(never_by_group)
    ]
    return MaritalStatusTable(sex=sex, rows=tuple(rows), upper_limit=omega)


class TestTableInvariants:
    def test_never_married_cannot_exceed_total(self):
        with pytest.raises(SchemaError, match="exceeds total"):
            AgeGroupRow(15, 20, 100, 101)

    def test_rows_must_be_contiguous(self):
        rows = (
            AgeGroupRow(15, 20, 100, 50),
            AgeGroupRow(25, 30, 100, 10),  # gap at [20, 25)
        )
        with pytest.raises(SchemaError, match="contiguous"):
            MaritalStatusTable(sex=Sex.MALE, rows=rows)

    def test_must_cover_through_omega_plus_five(self):
        rows = tuple(
            AgeGroupRow(15 + 5 * i, 20 + 5 * i, 100, 0) for i in range(7)
        )  # stops at 50: the [50, 55) group is missing
        with pytest.raises(SchemaError, match="cover"):
            MaritalStatusTable(sex=Sex.MALE, rows=rows)

    def test_boundary_must_align_with_omega(self):
        rows = (
            AgeGroupRow(15, 22, 100, 50),
            AgeGroupRow(22, 48, 100, 10),
            AgeGroupRow(48, 56, 100, 5),  # no boundary at 50
        )
        with pytest.raises(SchemaError, match="boundary"):
            MaritalStatusTable(sex=Sex.MALE, rows=rows)


class TestProportionsSingle:
    def test_exact_divisions(self):
        table = five_year_table([100, 25 * 10, 0, 0, 0, 0, 0, 0], total=1000)
        props = dict(proportions_single(table))
        assert props[(15.0, 20.0)] == 0.1
        assert props[(20.0, 25.0)] == 0.25
        assert props[(45.0, 50.0)] == 0.0

    def test_all_single_and_all_married_rows(self):
        table = five_year_table([1000, 0, 0, 0, 0, 0, 0, 0])
        props = dict(proportions_single(table))
        assert props[(15.0, 20.0)] == 1.0
        assert props[(45.0, 50.0)] == 0.0

    def test_zero_total_row_is_an_error_not_a_silent_zero(self):
        rows = list(five_year_table([0] * 8).rows)
        rows[3] = AgeGroupRow(30, 35, 0, 0)
        table = MaritalStatusTable(sex=Sex.FEMALE, rows=tuple(rows))
        with pytest.raises(DegenerateCellError, match=r"\[30, 35\)"):
            proportions_single(table)


class TestComputeSmam:
    def test_everyone_married_before_fifteen(self):
        table = five_year_table([0] * 8)
        assert compute_smam(table) == 15.0

    def test_universal_marriage_at_exactly_twenty(self):
        table = five_year_table([1000, 0, 0, 0, 0, 0, 0, 0])
        assert compute_smam(table) == 20.0

    def test_nobody_ever_marries_is_undefined(self):
        table = five_year_table([1000] * 8)
        with pytest.raises(UndefinedSmamError):
            compute_smam(table)

    def test_never_marrying_adjustment(self):
        # 20% never marry at every age observed near the limit; the single
        # years they contribute are removed and the result renormalized.
        table = five_year_table([1000, 600, 300, 200, 200, 200, 200, 200])
        # SS = 15 + 5*(1.0 + 0.6 + 0.3 + 0.2*4) = 15 + 13.5 = 28.5
        # R = 0.2  ->  SMAM = (28.5 - 10) / 0.8 = 23.125
        assert compute_smam(table) == pytest.approx(23.125, rel=1e-12)


class SyntheticCohort:
    """Brute-force oracle: a fixed marriage-age distribution over 16-34.

    ``counts[m]`` people (out of ``n``) marry at exact integer age ``m``;
    the cross-section observed at age ``a`` counts someone as never
    married iff their marriage age exceeds ``a``.  The oracle statistic is
    the exact mean marriage age among the marriers.
    """

    def __init__(self, seed=20110301, n=1000, never_share=0.0):
        rng = np.random.default_rng(seed)
        ages = np.arange(16, 35)
        weights = rng.random(ages.size) ** 2
        counts = np.floor(weights / weights.sum() * n).astype(int)
        counts[0] += n - counts.sum()  # make the population add up exactly
        self.ages = ages
        self.counts = counts
        self.n = n

    def true_mean(self):
        return float((self.ages * self.counts).sum() / self.counts.sum())

    def never_married_above(self, age):
        return int(self.counts[self.ages > age].sum())

    def table(self, width, omega=50.0):
        rows = []
        lower = 15
        while lower < omega + 5:
            upper = lower + width
            total = self.n * width
            never = sum(self.never_married_above(a) for a in range(lower, upper))
            rows.append(AgeGroupRow(lower, upper, total, never))
            lower = upper
        return MaritalStatusTable(sex=Sex.MALE, rows=tuple(rows), upper_limit=omega)


class TestSyntheticOracle:
    def test_single_year_groups_recover_the_exact_mean(self):
        cohort = SyntheticCohort()
        smam = compute_smam(cohort.table(width=1))
        assert smam == pytest.approx(cohort.true_mean(), abs=1e-9)

    def test_five_year_groups_within_a_tenth_of_a_year(self):
        cohort = SyntheticCohort()
        smam = compute_smam(cohort.table(width=5))
        assert smam == pytest.approx(cohort.true_mean(), abs=0.1)

    @pytest.mark.parametrize("seed", [1, 7, 42, 2024])
    def test_oracle_agreement_across_distributions(self, seed):
        cohort = SyntheticCohort(seed=seed)
        assert compute_smam(cohort.table(width=1)) == pytest.approx(
            cohort.true_mean(), abs=1e-9
        )
        assert compute_smam(cohort.table(width=5)) == pytest.approx(
            cohort.true_mean(), abs=0.1
        )


# Non-increasing never-married counts: the coherent cross-section of a
# population subject only to first marriage.
monotone_counts = st.lists(
    st.integers(min_value=0, max_value=1000), min_size=8, max_size=8
).map(lambda xs: sorted(xs, reverse=True))


class TestProperties:
    @given(monotone_counts)
    @settings(max_examples=300)
    def test_range_on_coherent_tables(self, counts):
        table = five_year_table(counts)
        if counts[-2] + counts[-1] == 2000:  # nobody ever marries
            with pytest.raises(UndefinedSmamError):
                compute_smam(table)
            return
        smam = compute_smam(table)
        assert 15.0 - 1e-9 <= smam <= 50.0 + 1e-9

    @given(
        monotone_counts,
        st.integers(min_value=0, max_value=5),  # rows [15,20) .. [40,45)
        st.integers(min_value=1, max_value=200),
    )
    @settings(max_examples=300)
    def test_monotone_in_proportions_below_the_terminal_window(
        self, counts, row, bump
    ):
        # Raising the proportion single in any group that does not feed the
        # never-marrying adjustment (groups ending before omega) cannot
        # lower the estimate.  Groups at the omega boundary also shift the
        # never-marrying share, where the effect genuinely reverses.
        if counts[-2] + counts[-1] == 2000:
            return
        base = compute_smam(five_year_table(counts))
        bumped = list(counts)
        bumped[row] = min(1000, bumped[row] + bump)
        assert compute_smam(five_year_table(bumped)) >= base - 1e-12
