import math

import numpy as np
import pytest

from sgi.index import sgi_value
from sgi.model import (
    ConfigurationError,
    InvalidInputError,
    MarriageTiming,
    Sex,
    SexRatioAtBirth,
)
from sgi.oracle import (
    CohortSeries,
    births_at,
    generate_stable_series,
    matching_trajectory,
    run_matching_microsim,
    stable_cohort_ratio,
)


def rt_for_target_sgi(target, sex_ratio, timing):
    """Invert the closed form: effective fertility that yields ``target``."""
    n = -math.log(target * sex_ratio.females_per_male) / timing.age_gap
    return math.exp(n * timing.generation_length) / sex_ratio.female_share


class TestCohortSeries:
    def test_requires_constant_sex_split(self):
        male = np.array([100.0, 100.0, 100.0])
        female = np.array([90.0, 92.0, 90.0])
        with pytest.raises(InvalidInputError, match="constant ratio"):
            CohortSeries(start_year=0, male_births=male, female_births=female)

    def test_requires_positive_counts(self):
        with pytest.raises(InvalidInputError):
            CohortSeries(
                start_year=0,
                male_births=np.array([100.0, 0.0]),
                female_births=np.array([90.0, 0.0]),
            )

    def test_sex_ratio_property(self):
        series = CohortSeries(
            start_year=0,
            male_births=np.array([100.0, 200.0]),
            female_births=np.array([90.0, 180.0]),
        )
        assert series.sex_ratio.females_per_male == pytest.approx(0.9, rel=1e-12)


class TestGenerateStableSeries:
    def test_balanced_inputs_give_flat_series(self):
        s = SexRatioAtBirth(1.0)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        series = generate_stable_series(s, 2.0, t, years=60, b0=1000.0)
        assert np.allclose(series.male_births, 500.0, rtol=1e-12)
        assert np.allclose(series.female_births, 500.0, rtol=1e-12)

    def test_single_child_halves_every_generation(self):
        # one surviving child per woman, even split, generation length 25:
        # direct ratio of totals 25 years apart must be 1/2
        s = SexRatioAtBirth(1.0)
        t = MarriageTiming(male_age=25, female_age=23, birth_interval=2)
        series = generate_stable_series(s, 1.0, t, years=80, b0=1000.0)
        total = series.male_births + series.female_births
        assert np.allclose(total[25:] / total[:-25], 0.5, rtol=1e-9)

    def test_reproduction_recursion_holds_pointwise(self):
        # F_t = rt * F_{t-(A_f+alpha)} * S/(1+S) at every year with history
        s = SexRatioAtBirth(0.9)
        t = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
        rt = 2.3
        series = generate_stable_series(s, rt, t, years=80)
        lag = t.generation_length
        for year in range(math.ceil(lag), series.years):
            expected = rt * births_at(series, Sex.FEMALE, year - lag) * s.female_share
            actual = float(series.female_births[year])
            assert actual == pytest.approx(expected, rel=1e-9)

    def test_growth_is_geometric(self):
        s = SexRatioAtBirth(0.9)
        t = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
        series = generate_stable_series(s, 2.3, t, years=60)
        ratios = series.male_births[1:] / series.male_births[:-1]
        assert np.allclose(ratios, ratios[0], rtol=1e-9)

    def test_insufficient_horizon_is_a_configuration_error(self):
        s = SexRatioAtBirth(0.9)
        t = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
        with pytest.raises(ConfigurationError, match="too short"):
            generate_stable_series(s, 2.3, t, years=40)  # needs >= 49


class TestStableCohortRatio:
    def test_balanced_inputs_give_unity(self):
        s = SexRatioAtBirth(1.0)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        series = generate_stable_series(s, 2.0, t, years=60)
        assert stable_cohort_ratio(series, t, at_year=59) == pytest.approx(
            1.0, rel=1e-12
        )

    def test_zero_gap_is_the_birth_split(self):
        s = SexRatioAtBirth(0.85)
        t = MarriageTiming(male_age=22, female_age=22, birth_interval=2)
        for rt in (1.5, 2.5, 4.0):
            series = generate_stable_series(s, rt, t, years=60)
            assert stable_cohort_ratio(series, t, at_year=59) == pytest.approx(
                1.0 / 0.85, rel=1e-12
            )

    def test_identity_with_closed_form_on_random_grid(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(500):
            s_val = rng.uniform(0.7, 1.2)
            rt = rng.uniform(1.2, 5.0)
            a_f = rng.uniform(16.0, 28.0)
            gap = rng.uniform(-2.0, 10.0)
            alpha = rng.uniform(0.0, 4.0)
            s = SexRatioAtBirth(s_val)
            t = MarriageTiming(male_age=a_f + gap, female_age=a_f, birth_interval=alpha)
            years = math.ceil(t.male_age + t.generation_length) + 2
            series = generate_stable_series(s, rt, t, years=years)
            ratio = stable_cohort_ratio(series, t, at_year=series.end_year)
            closed = sgi_value(s, rt, t)
            worst = max(worst, abs(ratio - closed) / closed)
        assert worst < 1e-9

    def test_out_of_range_year_is_rejected(self):
        s = SexRatioAtBirth(0.9)
        t = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
        series = generate_stable_series(s, 2.3, t, years=60)
        with pytest.raises(ConfigurationError, match="outside series"):
            stable_cohort_ratio(series, t, at_year=10)  # male lookback < start
        with pytest.raises(ConfigurationError, match="outside series"):
            # female lookback beyond the last stored year
            stable_cohort_ratio(series, t, at_year=series.end_year + 25)


def shocked_series(s, rt, timing, years, shock=4.0, decay=10.0):
    """A non-geometric series: stable path times a decaying transient."""
    from sgi.index import growth_rate

    n = growth_rate(rt, s, timing)
    t = np.arange(years, dtype=float)
    total = 1000.0 * np.exp(n * t) * (1.0 + shock * np.exp(-t / decay))
    return CohortSeries(
        start_year=0,
        male_births=total * s.male_share,
        female_births=total * s.female_share,
    )


class TestMatchingMicrosim:
    def test_balanced_series_has_no_unmatched(self):
        s = SexRatioAtBirth(1.0)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        series = generate_stable_series(s, 2.0, t, years=120)
        shares = run_matching_microsim(series, t, burn_in=30)
        assert shares.unmatched_male_share == 0.0
        assert shares.unmatched_female_share == 0.0

    def test_surplus_grooms_match_the_reciprocal_share(self):
        s = SexRatioAtBirth(0.8)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        rt = rt_for_target_sgi(1.25, s, t)
        series = generate_stable_series(s, rt, t, years=200)
        shares = run_matching_microsim(series, t, burn_in=50)
        assert shares.unmatched_male_share == pytest.approx(
            1.0 - 1.0 / 1.25, abs=0.01
        )
        assert shares.unmatched_female_share == 0.0

    def test_surplus_brides_is_the_mirror_case(self):
        s = SexRatioAtBirth(1.1)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        rt = rt_for_target_sgi(0.9, s, t)
        series = generate_stable_series(s, rt, t, years=200)
        target = sgi_value(s, rt, t)
        assert target == pytest.approx(0.9, rel=1e-12)
        shares = run_matching_microsim(series, t, burn_in=50)
        assert shares.unmatched_male_share == 0.0
        assert shares.unmatched_female_share == pytest.approx(1.0 - 0.9, abs=0.01)

    def test_conservation_every_year(self):
        s = SexRatioAtBirth(0.8)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        series = generate_stable_series(s, 2.2, t, years=120)
        for row in matching_trajectory(series, t):
            if math.isnan(row.matches):
                continue
            assert row.matches == min(row.men_at_marriage, row.women_at_marriage)
            assert row.unmatched_men >= 0 and row.unmatched_women >= 0
            assert row.unmatched_men == 0 or row.unmatched_women == 0

    def test_integer_mode_rounds_cohorts(self):
        s = SexRatioAtBirth(0.8)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        series = generate_stable_series(s, 2.2, t, years=120, b0=997.0)
        rows = [
            r
            for r in matching_trajectory(series, t, integer_cohorts=True)
            if not math.isnan(r.matches)
        ]
        assert all(r.men_at_marriage == int(r.men_at_marriage) for r in rows)
        assert all(r.women_at_marriage == int(r.women_at_marriage) for r in rows)

    def test_convergence_with_growing_horizon(self):
        # Off the stable path (an early birth shock) the cumulative share
        # approaches the steady-state value as the horizon grows, with the
        # transient's weight diluting like 1/T: doubling the horizon about
        # halves the distance.
        s = SexRatioAtBirth(0.8)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        rt = rt_for_target_sgi(1.25, s, t)
        steady = 1.0 - 1.0 / 1.25
        distances = []
        for years in (80, 160, 320, 640):
            series = shocked_series(s, rt, t, years, shock=1.0, decay=8.0)
            shares = run_matching_microsim(series, t, burn_in=0)
            distances.append(abs(shares.unmatched_male_share - steady))
        assert distances == sorted(distances, reverse=True)
        for before, after in zip(distances, distances[1:]):
            assert after < 0.6 * before
        assert distances[-1] < 0.01

    def test_degenerate_horizon_is_rejected(self):
        s = SexRatioAtBirth(0.8)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        series = generate_stable_series(s, 2.2, t, years=60)
        with pytest.raises(ConfigurationError, match="too short"):
            run_matching_microsim(series, t, burn_in=50)
