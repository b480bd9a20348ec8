"""Acceptance gate: one test per release criterion, with a PASS line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criteria 1-6, 8 and 9 are pure properties of the code and carry
hard tolerances.  Criterion 7 depends on externally assembled data; its
contract is: reproduce the published headline values within tolerance,
or document the divergence in REPRODUCTION.md — never tune it away.
"""

import csv
import importlib.resources
import math
import re
import time
from pathlib import Path

import numpy as np
import pytest

from sgi.density import kernel_density
from sgi.index import (
    compute_sgi,
    effective_fertility,
    growth_rate,
    imbalance_condition,
    sgi_value,
    surplus_men,
)
from sgi.ingest import load_bundle
from sgi.model import FertilityInputs, MarriageTiming, SexRatioAtBirth
from sgi.oracle import generate_stable_series, run_matching_microsim, stable_cohort_ratio
from sgi.report import run_compute, run_sensitivity
from sgi.smam import compute_smam
from tests.test_oracle import rt_for_target_sgi
from tests.test_smam import SyntheticCohort, five_year_table

DATA = importlib.resources.files("sgi") / "data" / "india_2011"
REPO_ROOT = Path(__file__).resolve().parent.parent


def report(criterion, passed, detail):
    print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
    return passed


def random_grid(n, seed=20110211):
    rng = np.random.default_rng(seed)
    return zip(
        rng.uniform(0.7, 1.2, n),    # sex ratio, females per male
        rng.uniform(1.2, 5.0, n),    # effective fertility
        rng.uniform(16.0, 28.0, n),  # female marriage age
        rng.uniform(-2.0, 10.0, n),  # spousal age gap
        rng.uniform(0.0, 4.0, n),    # marriage-to-first-birth interval
    )


def test_criterion_1_closed_form_equals_cohort_oracle():
    n_tuples = 10_000
    started = time.monotonic()
    worst = 0.0
    for s_val, rt, a_f, gap, alpha in random_grid(n_tuples):
        s = SexRatioAtBirth(s_val)
        t = MarriageTiming(male_age=a_f + gap, female_age=a_f, birth_interval=alpha)
        years = math.ceil(t.male_age + t.generation_length) + 2
        series = generate_stable_series(s, rt, t, years=years)
        ratio = stable_cohort_ratio(series, t, at_year=series.end_year)
        closed = sgi_value(s, rt, t)
        worst = max(worst, abs(ratio - closed) / closed)
    elapsed = time.monotonic() - started
    ok = worst < 1e-9 and elapsed < 60.0
    assert report(
        1,
        ok,
        f"cohort-oracle identity on {n_tuples} random tuples: "
        f"max rel err {worst:.3e} (< 1e-9), {elapsed:.1f}s (< 60s)",
    )


def test_criterion_2_trivial_exactness():
    t = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
    balanced = sgi_value(SexRatioAtBirth(1.0), 2.0, t)
    n_repl = growth_rate(2.0, SexRatioAtBirth(1.0), t)
    zero_gap_ok = True
    for s_val in (0.8, 0.9, 0.95, 1.07):
        t0 = MarriageTiming(male_age=22, female_age=22, birth_interval=2)
        for rt in (1.5, 2.0, 3.3):
            zero_gap_ok &= sgi_value(SexRatioAtBirth(s_val), rt, t0) == 1.0 / s_val
    ok = balanced == 1.0 and n_repl == 0.0 and zero_gap_ok
    assert report(
        2,
        ok,
        f"S=1,r=2 gives SGI={balanced} and n={n_repl} exactly; "
        f"zero gap gives 1/S exactly for all tested S",
    )


def test_criterion_3_condition_equivalence():
    checked = 0
    for s_val, rt, a_f, gap, alpha in random_grid(10_000, seed=7):
        s = SexRatioAtBirth(s_val)
        t = MarriageTiming(male_age=a_f + gap, female_age=a_f, birth_interval=alpha)
        margin = imbalance_condition(growth_rate(rt, s, t), s, t)
        sgi = sgi_value(s, rt, t)
        if sgi > 1.0 + 1e-12:
            assert margin < 0.0
        elif sgi < 1.0 - 1e-12:
            assert margin > 0.0
        else:
            assert abs(margin) < 1e-9
        checked += 1
    # exact simultaneous zero at the balanced point
    t = MarriageTiming(male_age=26, female_age=21, birth_interval=2)
    s1 = SexRatioAtBirth(1.0)
    assert imbalance_condition(growth_rate(2.0, s1, t), s1, t) == 0.0
    assert sgi_value(s1, 2.0, t) == 1.0
    assert report(
        3,
        True,
        f"sign(n*gap + ln S) opposite to sign(SGI-1) on {checked} tuples, "
        "zeros simultaneous at the balanced point",
    )


def test_criterion_4_microsim_convergence():
    cases = {1.1: 0.85, 1.25: 0.8, 1.5: 0.7}
    details = []
    for target, s_val in cases.items():
        s = SexRatioAtBirth(s_val)
        t = MarriageTiming(male_age=25, female_age=20, birth_interval=3)
        rt = rt_for_target_sgi(target, s, t)
        assert sgi_value(s, rt, t) == pytest.approx(target, rel=1e-12)
        series = generate_stable_series(s, rt, t, years=200)
        shares = run_matching_microsim(series, t, burn_in=50)
        expected = 1.0 - 1.0 / target
        assert shares.unmatched_male_share == pytest.approx(expected, abs=0.01)
        details.append(
            f"SGI={target}: share {shares.unmatched_male_share:.4f} "
            f"vs {expected:.4f}"
        )
    assert report(4, True, "200y horizon, 50y burn-in within 0.01 -- " + "; ".join(details))


def test_criterion_5_smam_sanity():
    at_twenty = compute_smam(five_year_table([1000, 0, 0, 0, 0, 0, 0, 0]))
    by_fifteen = compute_smam(five_year_table([0] * 8))
    cohort = SyntheticCohort()
    one_year = compute_smam(cohort.table(width=1))
    five_year = compute_smam(cohort.table(width=5))
    truth = cohort.true_mean()
    ok = (
        at_twenty == 20.0
        and by_fifteen == 15.0
        and abs(one_year - truth) <= 1e-9
        and abs(five_year - truth) <= 0.1
    )
    assert report(
        5,
        ok,
        f"universal-at-20 -> {at_twenty}, all-by-15 -> {by_fifteen}; synthetic "
        f"oracle mean {truth:.4f}: single-year off by {abs(one_year - truth):.2e}, "
        f"five-year off by {abs(five_year - truth):.2e}",
    )


def test_criterion_6_crude_vs_effective_ordering():
    assert effective_fertility(FertilityInputs(2.4, 0.052)) == 2.2752
    bundle = load_bundle(DATA / "regions.csv", sources_json=DATA / "sources.json")
    rows = run_sensitivity(bundle)
    eligible = [r for r in rows if r.u5mr > 0 and r.age_gap > 0]
    assert len(eligible) == len(bundle.regions)  # fixture: all qualify
    violations = [r.region_id for r in eligible if not r.sgi_effective > r.sgi_crude]
    assert not violations
    assert report(
        6,
        True,
        f"effective fertility 2.4*(1-0.052) == 2.2752 exactly; "
        f"SGI(effective) > SGI(crude) for all {len(eligible)} regions with "
        "positive mortality and age gap",
    )


def _published_sgi():
    with (DATA / "published_sgi_2011.csv").open(encoding="utf-8") as fh:
        return {row["region_id"]: float(row["sgi"]) for row in csv.DictReader(fh)}


def test_criterion_7_reproduction_or_documented_divergence():
    national_rows = {"regions.csv": "IN0103", "regions_tfr2011.csv": "IN2011"}
    outcomes = []
    hit = False
    for fname, nat_id in national_rows.items():
        for alpha in np.arange(1.0, 4.001, 0.25):
            states = run_compute(
                load_bundle(DATA / fname, sources_json=DATA / "sources.json"),
                alpha_override=float(alpha),
            )
            national_run = run_compute(
                load_bundle(
                    DATA / "india_national.csv", sources_json=DATA / "sources.json"
                ),
                alpha_override=float(alpha),
            )
            national = next(
                r.result.sgi
                for r in national_run.per_region
                if r.region.region_id == nat_id
            )
            punjab = next(
                r.result.sgi
                for r in states.per_region
                if r.region.region_id == "PB"
            )
            outcomes.append((fname, alpha, national, punjab))
            if abs(national - 1.11) <= 0.02 and abs(punjab - 1.33) <= 0.03:
                hit = True
    if hit:
        assert report(7, True, "assembled fixture reproduces the published headline values")
        return
    # The criterion's fallback: the divergence must be documented in the
    # repository's reproduction notes, not tuned away.
    notes_path = REPO_ROOT / "REPRODUCTION.md"
    assert notes_path.exists(), "REPRODUCTION.md missing while targets unmet"
    notes = notes_path.read_text(encoding="utf-8")
    assert "1.11" in notes and "1.33" in notes
    assert re.search(r"diverge|does not reproduce|not recover", notes, re.I)
    nat_range = (
        min(o[2] for o in outcomes),
        max(o[2] for o in outcomes),
    )
    pb_range = (
        min(o[3] for o in outcomes),
        max(o[3] for o in outcomes),
    )
    # the documented ranges must actually cover what the fixture computes
    for bound in (*nat_range, *pb_range):
        assert any(
            abs(bound - float(m)) < 1e-3 for m in re.findall(r"\d\.\d{3}", notes)
        ), f"REPRODUCTION.md does not cite computed value {bound:.3f}"
    assert report(
        7,
        True,
        "published 1.11/1.33 not reproduced by the assembled fixture under any "
        f"alpha in [1,4] (national {nat_range[0]:.3f}-{nat_range[1]:.3f}, "
        f"Punjab {pb_range[0]:.3f}-{pb_range[1]:.3f}); divergence documented "
        "in REPRODUCTION.md, property criteria remain binding",
    )


def test_criterion_8_density_mode_and_mass():
    published = _published_sgi()
    values = list(published.values())
    assert len(values) == 24
    curve = kernel_density(values)
    ok = 1.08 <= curve.mode <= 1.14 and abs(curve.integral() - 1.0) <= 0.01
    assert report(
        8,
        ok,
        f"density of the 24 published state values: mode {curve.mode:.4f} in "
        f"[1.08, 1.14], integral {curve.integral():.4f} within 1 +/- 0.01",
    )


def test_criterion_9_surplus_count_arithmetic():
    # an index of exactly 1.11 via the zero-gap identity SGI = 1/S
    s = SexRatioAtBirth(1.0 / 1.11)
    t = MarriageTiming(male_age=21, female_age=21, birth_interval=2)
    result = compute_sgi(s, 2.0, t)
    assert result.sgi == pytest.approx(1.11, rel=1e-15)
    counts = surplus_men(result, 354_000_000)
    ok = 38_900_000 <= counts.paper <= 39_000_000
    assert report(
        9,
        ok,
        f"SGI=1.11 on a base of 354,000,000 men gives {counts.paper:,} "
        "surplus grooms under the headline convention (38.9-39.0 million)",
    )
