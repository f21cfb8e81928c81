import copy
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdclab.errors import ConfigError, KindError
from sdclab.risk import Scenario, k_anonymity_risk
from sdclab.steps import replay
from sdclab.table import Predicate
from sdclab.transforms import (
    add_uniform_integer_noise,
    bin_custom_ranges,
    bin_fixed_width,
    bin_quantiles,
    equal_frequency_edges,
    generalize_date_period,
    nearest_rank_quantiles,
    recode_categories,
    suppress_cells,
    suppress_duplicate_rows,
    truncate_datetime,
)
from sdclab.values import (
    DayTime,
    Suppressed,
    ValueKind,
    is_missing,
    parse_date_token,
)
from sdclab.csvio import write_csv

from .conftest import make_ds, random_qi_dataset
from .strategies import numeric_qi_datasets, qi_datasets

D = parse_date_token

_INTERVAL = re.compile(r"^\[(-?[\d.]+), (-?[\d.]+)([)\]])$")
_PERIOD = re.compile(r"^(\d{4}/\d{2}/\d{2})–(\d{4}/\d{2}/\d{2})$")


def interval_contains(label: str, v) -> bool:
    m = _INTERVAL.match(label)
    assert m, label
    lo, hi = float(m.group(1)), float(m.group(2))
    return lo <= v < hi if m.group(3) == ")" else lo <= v <= hi


def period_contains(label: str, day: int) -> bool:
    m = _PERIOD.match(label)
    assert m, label
    return D(m.group(1)) <= day <= D(m.group(2))


# ---------------------------------------------------------------------------
# suppression
# ---------------------------------------------------------------------------

def ages_ds():
    return make_ds(
        {
            "Age": (ValueKind.NUMERIC, [0, 1, 67]),
            "AgeMonth": (ValueKind.NUMERIC, [7, 14, 811]),
        }
    )


def test_suppress_cells_by_predicate_on_other_column():
    out = suppress_cells(ages_ds(), "AgeMonth", Predicate.of(("Age", ">=", 1)))
    assert out.column("AgeMonth") == (7, Suppressed("*"), Suppressed("*"))
    assert out.provenance[-1].affected == {"cells_suppressed": 2}


def test_suppress_cells_cells_become_missing():
    out = suppress_cells(ages_ds(), "AgeMonth", Predicate.of(("Age", ">=", 1)))
    assert sum(1 for v in out.column("AgeMonth") if is_missing(v)) == 2


def test_suppress_cells_no_match_is_identity():
    ds = ages_ds()
    assert suppress_cells(ds, "AgeMonth", Predicate.of(("Age", ">", 100))) == ds


def test_suppress_cells_custom_symbol_renders_on_export():
    out = suppress_cells(
        ages_ds(), "AgeMonth", Predicate.of(("Age", ">=", 1)), symbol="NA"
    )
    text = write_csv(out)
    assert "1,NA" in text
    # and reloads as missing thanks to the symbol joining missing_tokens
    from sdclab.csvio import load_csv

    assert load_csv(text, out.schema) == out


def stay_rows():
    return make_ds(
        {
            "Id": (ValueKind.CATEGORICAL, ["p1", "p1", "p2"]),
            "Hosp": (
                ValueKind.DATE,
                [D("2020/03/01"), D("2020/06/01"), D("2020/04/01")],
            ),
        }
    )


def test_suppress_duplicates_keeps_earliest():
    out = suppress_duplicate_rows(stay_rows(), ["Id"], "Hosp")
    assert out.n == 2
    assert out.column("Hosp") == (D("2020/03/01"), D("2020/04/01"))


def test_suppress_duplicates_unique_keys_identity():
    ds = make_ds(
        {
            "Id": (ValueKind.CATEGORICAL, ["a", "b"]),
            "Hosp": (ValueKind.DATE, [D("2020/03/01"), D("2020/03/02")]),
        }
    )
    assert suppress_duplicate_rows(ds, ["Id"], "Hosp") == ds


def test_suppress_duplicates_stable_tie_break():
    ds = make_ds(
        {
            "Id": (ValueKind.CATEGORICAL, ["a", "a"]),
            "Hosp": (ValueKind.DATE, [D("2020/03/01"), D("2020/03/01")]),
            "Mark": (ValueKind.CATEGORICAL, ["first", "second"]),
        }
    )
    out = suppress_duplicate_rows(ds, ["Id"], "Hosp")
    assert out.column("Mark") == ("first",)


def test_suppress_duplicates_requires_ordered_column():
    with pytest.raises(KindError):
        suppress_duplicate_rows(stay_rows(), ["Hosp"], "Id")


# ---------------------------------------------------------------------------
# truncation and date-period generalisation
# ---------------------------------------------------------------------------

def test_truncate_datetime_drops_time():
    ds = make_ds(
        {
            "T": (
                ValueKind.DATETIME,
                [DayTime(D("2020/03/15"), 14 * 3600 + 22 * 60 + 1), None],
            )
        }
    )
    out = truncate_datetime(ds, "T")
    assert out.column("T") == (D("2020/03/15"), None)
    assert out.schema.col("T").kind is ValueKind.DATE


def test_truncate_midnight_fixed_point():
    ds = make_ds({"T": (ValueKind.DATETIME, [DayTime(D("2020/03/15"), 0)])})
    assert truncate_datetime(ds, "T").column("T") == (D("2020/03/15"),)


def test_truncate_merges_same_day_rows():
    ds = make_ds(
        {
            "T": (
                ValueKind.DATETIME,
                [DayTime(D("2020/03/15"), 60), DayTime(D("2020/03/15"), 7200)],
            )
        }
    )
    out = truncate_datetime(ds, "T")
    assert out.column("T")[0] == out.column("T")[1]
    assert k_anonymity_risk(out, Scenario.of("T")).risk_percent == 0.0


def test_truncate_rejects_non_datetime():
    with pytest.raises(KindError):
        truncate_datetime(stay_rows(), "Hosp")


def test_generalize_period_hand_bucket():
    ds = make_ds({"Date": (ValueKind.DATE, [D("2020/03/15")])})
    out = generalize_date_period(ds, "Date", 7, anchor="2020/03/10")
    assert out.column("Date") == ("2020/03/10–2020/03/16",)
    assert out.schema.col("Date").kind is ValueKind.CATEGORICAL


def test_generalize_period_anchor_in_first_bucket():
    ds = make_ds({"Date": (ValueKind.DATE, [D("2020/03/10")])})
    out = generalize_date_period(ds, "Date", 7, anchor="2020/03/10")
    assert out.column("Date") == ("2020/03/10–2020/03/16",)


def test_generalize_period_one_day_is_relabeling():
    ds = make_ds(
        {"Date": (ValueKind.DATE, [D("2020/03/10"), D("2020/03/11"), D("2020/03/10")])}
    )
    before = k_anonymity_risk(ds, Scenario.of("Date")).risk_percent
    out = generalize_date_period(ds, "Date", 1)
    assert k_anonymity_risk(out, Scenario.of("Date")).risk_percent == before
    assert len(set(out.column("Date"))) == 2


def test_generalize_period_dataset_min_anchor():
    ds = make_ds({"Date": (ValueKind.DATE, [D("2020/03/12"), D("2020/03/14")])})
    out = generalize_date_period(ds, "Date", 5)
    assert out.provenance[-1].step.params["resolved_anchor"] == "2020/03/12"
    assert out.column("Date") == ("2020/03/12–2020/03/16",) * 2


def test_generalize_period_rejects_bad_period():
    ds = make_ds({"Date": (ValueKind.DATE, [D("2020/03/12")])})
    with pytest.raises(ConfigError):
        generalize_date_period(ds, "Date", 0)


# ---------------------------------------------------------------------------
# re-coding
# ---------------------------------------------------------------------------

def outcomes():
    return make_ds(
        {
            "Outcome": (
                ValueKind.CATEGORICAL,
                ["Home", "Nursing home", "Death", "Home", None],
            )
        }
    )


def test_recode_merges_categories():
    out = recode_categories(
        outcomes(), "Outcome", {"Home": "Recovered", "Nursing home": "Recovered"}
    )
    assert out.column("Outcome") == ("Recovered", "Recovered", "Death", "Recovered", None)


def test_recode_mass_conservation():
    ds = outcomes()
    before = [v for v in ds.column("Outcome") if v is not None]
    out = recode_categories(
        ds, "Outcome", {"Home": "Recovered", "Nursing home": "Recovered"}
    )
    merged = sum(1 for v in out.column("Outcome") if v == "Recovered")
    assert merged == before.count("Home") + before.count("Nursing home")


def test_recode_empty_mapping_identity():
    ds = outcomes()
    assert recode_categories(ds, "Outcome", {}) == ds


def test_recode_rejects_numeric_column():
    with pytest.raises(KindError):
        recode_categories(ages_ds(), "Age", {})


# ---------------------------------------------------------------------------
# binning
# ---------------------------------------------------------------------------

def test_bin_fixed_width_hand_bucket():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [67])})
    assert bin_fixed_width(ds, "Age", 5).column("Age") == ("[65, 70)",)


def test_bin_fixed_width_left_closed_boundary():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [65])})
    assert bin_fixed_width(ds, "Age", 5).column("Age") == ("[65, 70)",)


def test_bin_fixed_width_single_bin_kills_column_risk():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [1, 2, 3])})
    out = bin_fixed_width(ds, "Age", 1000)
    assert len(set(out.column("Age"))) == 1
    assert k_anonymity_risk(out, Scenario.of("Age")).risk_percent == 0.0


def test_bin_fixed_width_negative_values():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [-1])})
    assert bin_fixed_width(ds, "Age", 5).column("Age") == ("[-5, 0)",)


def test_bin_fixed_width_rejects_bad_width():
    with pytest.raises(ConfigError):
        bin_fixed_width(ages_ds(), "Age", 0)


def test_nearest_rank_quantiles_hand_computed():
    assert nearest_rank_quantiles(list(range(1, 9)), 4) == [2, 4, 6]


def test_bin_quantiles_one_to_eight():
    ds = make_ds({"V": (ValueKind.NUMERIC, list(range(1, 9)))})
    out = bin_quantiles(ds, "V", 4)
    assert out.provenance[-1].step.params["resolved_edges"] == [1, 2, 4, 6, 8]
    assert out.column("V") == (
        "[1, 2)",
        "[2, 4)",
        "[2, 4)",
        "[4, 6)",
        "[4, 6)",
        "[6, 8]",
        "[6, 8]",
        "[6, 8]",
    )


def test_bin_quantiles_median_split():
    ds = make_ds({"V": (ValueKind.NUMERIC, [1, 2, 3, 4])})
    out = bin_quantiles(ds, "V", 2)
    assert out.column("V") == ("[1, 2)", "[2, 4]", "[2, 4]", "[2, 4]")


def test_bin_quantiles_constant_column_rejected():
    ds = make_ds({"V": (ValueKind.NUMERIC, [3, 3, 3])})
    with pytest.raises(ConfigError):
        bin_quantiles(ds, "V", 2)


def test_bin_quantiles_every_value_assigned():
    ds = make_ds({"V": (ValueKind.NUMERIC, [1, 1, 1, 2, 3, 4, 5, 9, None])})
    out = bin_quantiles(ds, "V", 4)
    assert sum(1 for v in out.column("V") if v is not None) == 8


def test_bin_custom_ranges_newborn_bucket():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [0, 20, 35])})
    out = bin_custom_ranges(ds, "Age", [0, 16, 30, 40])
    assert out.column("Age") == ("[0, 16)", "[16, 30)", "[30, 40]")


def test_bin_custom_ranges_interior_edge_goes_right():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [16])})
    out = bin_custom_ranges(ds, "Age", [0, 16, 30])
    assert out.column("Age") == ("[16, 30]",)


def test_bin_custom_ranges_single_bin():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [0, 67, 120])})
    out = bin_custom_ranges(ds, "Age", [0, 120])
    assert set(out.column("Age")) == {"[0, 120]"}


def test_bin_custom_ranges_value_outside_edges():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [121])})
    with pytest.raises(ConfigError):
        bin_custom_ranges(ds, "Age", [0, 120])


def test_bin_custom_ranges_non_monotone_edges():
    with pytest.raises(ConfigError):
        bin_custom_ranges(ages_ds(), "Age", [0, 10, 10])


def test_equal_frequency_edges_helper():
    ds = make_ds({"V": (ValueKind.NUMERIC, list(range(100)))})
    edges = equal_frequency_edges(ds, "V", 4, min_width=10)
    assert edges[0] == 0 and edges[-1] == 99
    assert all(b - a >= 10 for a, b in zip(edges, edges[1:]))
    out = bin_custom_ranges(ds, "V", edges)
    assert sum(1 for v in out.column("V") if v is not None) == 100


# ---------------------------------------------------------------------------
# noise
# ---------------------------------------------------------------------------

def test_noise_zero_interval_is_identity():
    ds = ages_ds()
    assert add_uniform_integer_noise(ds, "Age", 0, 0, seed=1) == ds


def test_noise_bounds_hold_on_dates():
    ds = make_ds({"Date": (ValueKind.DATE, [D("2020/06/01")] * 50)})
    out = add_uniform_integer_noise(ds, "Date", -3, 3, seed=9)
    for v in out.column("Date"):
        assert abs(v - D("2020/06/01")) <= 3


def test_noise_deterministic_given_seed():
    ds = make_ds({"Age": (ValueKind.NUMERIC, list(range(100)))})
    a = add_uniform_integer_noise(ds, "Age", -3, 3, seed=42)
    b = add_uniform_integer_noise(ds, "Age", -3, 3, seed=42)
    assert a == b
    c = add_uniform_integer_noise(ds, "Age", -3, 3, seed=43)
    assert a != c


def test_noise_skips_missing_cells():
    ds = make_ds({"Age": (ValueKind.NUMERIC, [1, None, 3])})
    out = add_uniform_integer_noise(ds, "Age", -3, 3, seed=5)
    assert out.column("Age")[1] is None


def test_noise_unseeded_records_seed_for_replay():
    ds = ages_ds()
    out = add_uniform_integer_noise(ds, "Age", -3, 3)
    recorded = out.provenance[-1].step
    assert recorded.seed is not None
    assert replay(ds, out.provenance) == out


def test_noise_rejects_empty_interval():
    with pytest.raises(ConfigError):
        add_uniform_integer_noise(ages_ds(), "Age", 3, -3, seed=1)


def test_noise_rejects_categorical():
    ds = outcomes()
    with pytest.raises(KindError):
        add_uniform_integer_noise(ds, "Outcome", -1, 1, seed=1)


# ---------------------------------------------------------------------------
# catalog-wide properties
# ---------------------------------------------------------------------------

def test_truthfulness_cell_by_cell(rng):
    for _ in range(15):
        n = rng.randint(4, 30)
        values = [rng.randint(0, 50) for _ in range(n)] + [None]
        ds = make_ds({"V": (ValueKind.NUMERIC, values)})
        width_out = bin_fixed_width(ds, "V", rng.randint(1, 9))
        for before, after in zip(ds.column("V"), width_out.column("V")):
            if before is not None:
                assert interval_contains(after, before)
        if len({v for v in values if v is not None}) >= 4:
            q_out = bin_quantiles(ds, "V", 4)
            for before, after in zip(ds.column("V"), q_out.column("V")):
                if before is not None:
                    assert interval_contains(after, before)


def test_truthfulness_date_period(rng):
    for _ in range(10):
        days = [18300 + rng.randint(0, 40) for _ in range(20)]
        ds = make_ds({"Date": (ValueKind.DATE, days)})
        out = generalize_date_period(ds, "Date", rng.randint(1, 9))
        for before, after in zip(days, out.column("Date")):
            assert period_contains(after, before)


def test_truncate_truthfulness():
    ds = make_ds({"T": (ValueKind.DATETIME, [DayTime(18300, 7200)])})
    out = truncate_datetime(ds, "T")
    assert out.column("T")[0] == 18300  # same calendar day


_MAPPING_STEPS = [
    lambda ds, col: truncate_datetime(ds, col),
    lambda ds, col: generalize_date_period(ds, col, 3),
    lambda ds, col: bin_fixed_width(ds, col, 4),
    lambda ds, col: recode_categories(ds, col, {"a": "ab", "b": "ab"}),
    lambda ds, col: suppress_cells(ds, col, Predicate.always()),
]


def _applicable_steps(kind: ValueKind):
    if kind is ValueKind.DATETIME:
        return [_MAPPING_STEPS[0], _MAPPING_STEPS[4]]
    if kind is ValueKind.DATE:
        return [_MAPPING_STEPS[1], _MAPPING_STEPS[4]]
    if kind is ValueKind.NUMERIC:
        return [_MAPPING_STEPS[2], _MAPPING_STEPS[4]]
    return [_MAPPING_STEPS[3], _MAPPING_STEPS[4]]


def test_coarsening_never_increases_risk(rng):
    cases = 0
    while cases < 100:
        ds = random_qi_dataset(rng, rng.randint(2, 40), rng.randint(1, 3))
        scenario = Scenario(ds.schema.names)
        col = rng.choice(ds.schema.names)
        step = rng.choice(_applicable_steps(ds.schema.col(col).kind))
        before = k_anonymity_risk(ds, scenario).risk_percent
        after = k_anonymity_risk(step(ds, col), scenario).risk_percent
        assert after <= before
        cases += 1


@given(qi_datasets(min_rows=1))
def test_whole_column_suppression_coarsens(ds):
    scenario = Scenario(ds.schema.names)
    before = k_anonymity_risk(ds, scenario).risk_percent
    out = suppress_cells(ds, ds.schema.names[0], Predicate.always())
    assert k_anonymity_risk(out, scenario).risk_percent <= before


@given(numeric_qi_datasets(min_rows=6, distinct_floor=5))
def test_binning_mass_conservation(ds):
    non_missing = sum(1 for v in ds.column("num") if v is not None)
    for out in (
        bin_fixed_width(ds, "num", 7),
        bin_quantiles(ds, "num", 4),
    ):
        assert sum(1 for v in out.column("num") if v is not None) == non_missing
        counts: dict[str, int] = {}
        for v in out.column("num"):
            if v is not None:
                counts[v] = counts.get(v, 0) + 1
        assert sum(counts.values()) == non_missing


def test_transforms_do_not_mutate_input(rng):
    ds = random_qi_dataset(rng, 20, 3, 0.2)
    snapshot = copy.deepcopy(ds.columns)
    for col in ds.schema.names:
        kind = ds.schema.col(col).kind
        for step in _applicable_steps(kind):
            try:
                step(ds, col)
            except ConfigError:
                pass
        if kind in (ValueKind.NUMERIC, ValueKind.DATE):
            add_uniform_integer_noise(ds, col, -2, 2, seed=3)
    assert ds.columns == snapshot


def test_replay_reproduces_full_chain(rng):
    for _ in range(10):
        ds = random_qi_dataset(rng, rng.randint(5, 30), 3, 0.15)
        out = ds
        for col in ds.schema.names:
            kind = ds.schema.col(col).kind
            out = rng.choice(_applicable_steps(kind))(out, col)
        if any(
            c.kind in (ValueKind.NUMERIC, ValueKind.DATE)
            for c in out.schema.columns
        ):
            target = next(
                c.name
                for c in out.schema.columns
                if c.kind in (ValueKind.NUMERIC, ValueKind.DATE)
            )
            out = add_uniform_integer_noise(
                out, target, -3, 3, seed=rng.randint(0, 99)
            )
        assert replay(ds, out.provenance) == out


def test_step_serialization_round_trip():
    from sdclab.steps import TransformStep

    step = TransformStep("BinFixedWidth", {"column": "Age", "width": 5, "origin": 0})
    assert TransformStep.from_obj(step.to_obj()) == step
    assert step.perturbative is False
    noisy = TransformStep(
        "AddUniformIntegerNoise", {"column": "D", "lo": -3, "hi": 3}, seed=7
    )
    assert noisy.perturbative is True
    assert noisy.target_columns() == ("D",)
