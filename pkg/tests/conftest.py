import pytest

REGIONS_HEADER = (
    "region_id,name,srb_value,srb_convention,tfr,u5mr,u5mr_units,"
    "u5mr_is_proxy,male_pop_15_54,a_m,a_f,alpha"
)

MARITAL_HEADER = "region_id,sex,age_lower,age_upper,total,never_married"


def write_csv(path, header, rows):
    path.write_text(header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def two_region_files(tmp_path):
    """A minimal valid bundle: one balanced region, one zero-gap region."""
    regions = write_csv(
        tmp_path / "regions.csv",
        REGIONS_HEADER,
        [
            # balanced: S=1, effective fertility 2 (u5mr 0), any timing
            "BAL,Balanced,1.0,females_per_male,2.0,0.0,proportion,false,1000000,26,21,2",
            # zero spousal gap: index collapses to 1/S
            "GAP0,ZeroGap,0.95,females_per_male,3.7,0.0,proportion,false,2000000,21,21,2",
        ],
    )
    return regions


def marital_block(region_id, sex, never_by_group, total=1000):
    """Rows for one sex over [15, 55) in 5-year groups."""
    return [
        f"{region_id},{sex},{15 + 5 * i},{20 + 5 * i},{total},{never}"
        for i, never in enumerate(never_by_group)
    ]


@pytest.fixture
def tables_only_files(tmp_path):
    """A region whose marriage ages must come from its marital tables.

    Universal marriage at exactly 20 for men, at exactly 15 for women, so
    the derived ages are 20.0 and 15.0 with nothing estimated.
    """
    regions = write_csv(
        tmp_path / "regions.csv",
        REGIONS_HEADER,
        ["TAB,TablesOnly,0.9,females_per_male,2.5,0.05,proportion,false,,,,"],
    )
    marital = write_csv(
        tmp_path / "marital.csv",
        MARITAL_HEADER,
        marital_block("TAB", "male", [1000, 0, 0, 0, 0, 0, 0, 0])
        + marital_block("TAB", "female", [0, 0, 0, 0, 0, 0, 0, 0]),
    )
    return regions, marital
