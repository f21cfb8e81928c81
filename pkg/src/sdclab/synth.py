"""Seeded generator of Covid-like hospital admission tables.

The real study data is private; this generator reproduces its structure and
the marginals the workflow depends on: record count, subset sizes (deaths,
nursing-home discharges, intensive care, newborns, re-incident stays), mean
age, second-resolution test timestamps, and pervasive "Unknown" cells.

Age, gender, and outcome are drawn by quota cells at 5-year age-bin
granularity with every non-empty cell holding at least three records, so
5-year age generalisation plus outcome re-coding provably leaves no
equivalence class smaller than three. Subset counts are exact quotas
(round(fraction × n)), not Bernoulli draws.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from typing import Any

from sdclab.errors import ConfigError
from sdclab.schema import AttributeClass, Column, Schema
from sdclab.table import Dataset
from sdclab.values import DayTime, ValueKind, is_missing, parse_date_token

PATHOLOGY_FLAGS = (
    "CANC",
    "Cerebrovascular",
    "Diabetes",
    "Kidney",
    "Liver",
    "Lung",
    "Heart",
    "Smoking",
    "Obesity",
)

_DEFAULT_PREVALENCE = {
    "CANC": 0.15,
    "Cerebrovascular": 0.12,
    "Diabetes": 0.25,
    "Kidney": 0.12,
    "Liver": 0.06,
    "Lung": 0.16,
    "Heart": 0.30,
    "Smoking": 0.12,
    "Obesity": 0.20,
}

_DEFAULT_UNKNOWN_RATES = {
    "DateOfOnset": 0.55,
    "PlaceOfInfection": 0.45,
    "CloseContactRecordId": 0.90,
    "IntensiveCare": 0.03,
    "pathologies": 0.04,
}

# (female share, age mean, age sd) per outcome code
_OUTCOME_SHAPES = {
    "H": (0.48, 66.0, 17.0),
    "D": (0.42, 78.0, 11.0),
    "N": (0.63, 84.0, 7.0),
    "O": (0.50, 62.0, 18.0),
}

_ADULT_BINS = tuple(range(15, 100, 5))


@dataclass(frozen=True)
class SyntheticConfig:
    n: int = 1716
    seed: int = 42
    date_window: tuple[str, str] = ("2020/03/01", "2021/01/31")
    mean_age_target: float = 67.0
    death_fraction: float = 368 / 1716
    nursing_fraction: float = 41 / 1716
    other_outcome_fraction: float = 40 / 1716
    intensive_care_fraction: float = 529 / 1716
    newborn_fraction: float = 12 / 1716
    reincident_fraction: float = 31 / 1716
    gender_unknown_fraction: float = 26 / 1716
    pathology_prevalence: dict[str, float] = field(
        default_factory=lambda: dict(_DEFAULT_PREVALENCE)
    )
    unknown_rates: dict[str, float] = field(
        default_factory=lambda: dict(_DEFAULT_UNKNOWN_RATES)
    )

    def __post_init__(self):
        if self.n < 0:
            raise ConfigError("n must be >= 0")
        fracs = {
            "death_fraction": self.death_fraction,
            "nursing_fraction": self.nursing_fraction,
            "other_outcome_fraction": self.other_outcome_fraction,
            "intensive_care_fraction": self.intensive_care_fraction,
            "newborn_fraction": self.newborn_fraction,
            "reincident_fraction": self.reincident_fraction,
            "gender_unknown_fraction": self.gender_unknown_fraction,
        }
        for name, value in fracs.items():
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.death_fraction + self.nursing_fraction + self.other_outcome_fraction > 1.0:
            raise ConfigError("exclusive outcome fractions sum to more than 1")

    def counts(self) -> dict[str, int]:
        return {
            "reincident": round(self.reincident_fraction * self.n),
            "death": round(self.death_fraction * self.n),
            "nursing": round(self.nursing_fraction * self.n),
            "other": round(self.other_outcome_fraction * self.n),
            "intensive_care": round(self.intensive_care_fraction * self.n),
            "newborn": round(self.newborn_fraction * self.n),
            "gender_unknown": round(self.gender_unknown_fraction * self.n),
        }

    def to_obj(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "seed": self.seed,
            "date_window": list(self.date_window),
            "mean_age_target": self.mean_age_target,
            "death_fraction": self.death_fraction,
            "nursing_fraction": self.nursing_fraction,
            "other_outcome_fraction": self.other_outcome_fraction,
            "intensive_care_fraction": self.intensive_care_fraction,
            "newborn_fraction": self.newborn_fraction,
            "reincident_fraction": self.reincident_fraction,
            "gender_unknown_fraction": self.gender_unknown_fraction,
            "pathology_prevalence": dict(self.pathology_prevalence),
            "unknown_rates": dict(self.unknown_rates),
        }

    @staticmethod
    def from_obj(obj: dict[str, Any]) -> "SyntheticConfig":
        base = SyntheticConfig()
        kwargs: dict[str, Any] = {}
        for key in base.to_obj():
            if key in obj:
                kwargs[key] = obj[key]
        if "date_window" in kwargs:
            kwargs["date_window"] = tuple(kwargs["date_window"])
        return replace(base, **kwargs)

    @staticmethod
    def from_json(text: str) -> "SyntheticConfig":
        return SyntheticConfig.from_obj(json.loads(text))


def hospital_schema() -> Schema:
    cols = [
        Column("RecordId", ValueKind.IDENTIFIER, AttributeClass.DIRECT_IDENTIFIER),
        Column("Age", ValueKind.NUMERIC, AttributeClass.QUASI_IDENTIFIER),
        Column("AgeDay", ValueKind.NUMERIC, AttributeClass.QUASI_IDENTIFIER),
        Column("AgeMonth", ValueKind.NUMERIC, AttributeClass.QUASI_IDENTIFIER),
        Column("CloseContactRecordId", ValueKind.IDENTIFIER),
        Column(
            "DateOfFirstPositiveLabResult",
            ValueKind.DATETIME,
            AttributeClass.QUASI_IDENTIFIER,
        ),
        Column("DateOfHospitalisation", ValueKind.DATE, AttributeClass.QUASI_IDENTIFIER),
        Column("DateOfDischarge", ValueKind.DATE, AttributeClass.QUASI_IDENTIFIER),
        Column("DateOfOnset", ValueKind.DATE),
        Column("Gender", ValueKind.CATEGORICAL, AttributeClass.QUASI_IDENTIFIER),
        Column("Hospitalisation", ValueKind.CATEGORICAL),
        Column("IntensiveCare", ValueKind.CATEGORICAL, AttributeClass.SENSITIVE),
        Column("Outcome", ValueKind.CATEGORICAL, AttributeClass.QUASI_IDENTIFIER),
        Column("PlaceOfInfection", ValueKind.CATEGORICAL),
    ]
    cols += [
        Column(flag, ValueKind.CATEGORICAL, AttributeClass.SENSITIVE)
        for flag in PATHOLOGY_FLAGS
    ]
    return Schema(tuple(cols))


def _normal_weights(mu: float, sd: float) -> list[float]:
    out = []
    for b in _ADULT_BINS:
        center = b + 2.5
        out.append(math.exp(-0.5 * ((center - mu) / sd) ** 2))
    return out


def _allocate_cells(total: int, weights: list[float], min_cell: int = 3) -> list[int]:
    """Largest-remainder allocation over the adult bins with every non-zero
    cell at least ``min_cell``; small remainders fold into the largest cell."""
    if total <= 0:
        return [0] * len(weights)
    wsum = sum(weights)
    shares = [w / wsum * total for w in weights]
    counts = [int(s) for s in shares]
    remainder = total - sum(counts)
    by_frac = sorted(
        range(len(weights)), key=lambda i: (shares[i] - counts[i], i), reverse=True
    )
    for i in by_frac[:remainder]:
        counts[i] += 1
    # fold sub-minimum cells into the fullest cell
    while True:
        small = [i for i, c in enumerate(counts) if 0 < c < min_cell]
        if not small:
            break
        biggest = max(range(len(counts)), key=lambda i: (counts[i], -i))
        for i in small:
            if i == biggest:
                continue
            counts[biggest] += counts[i]
            counts[i] = 0
        if len(small) == 1 and small[0] == biggest:
            break
    return counts


def _two_wave_day(rng: random.Random, start: int, end: int) -> int:
    if rng.random() < 0.42:
        day = int(rng.gauss(start + 45, 22))
    else:
        day = int(rng.gauss(start + 250, 38))
    return max(start, min(day, end - 1))


def generate(config: SyntheticConfig | None = None) -> Dataset:
    """Build the synthetic admissions table; a pure function of the config."""
    config = config or SyntheticConfig()
    rng = random.Random(config.seed)
    schema = hospital_schema()
    counts = config.counts()
    n = config.n
    if n == 0:
        return Dataset(schema=schema, columns=tuple(() for _ in schema.columns))

    n_re = counts["reincident"]
    n_bases = n - n_re
    newborn = counts["newborn"]
    home_total = (
        n_bases - counts["death"] - counts["nursing"] - counts["other"] - newborn
    )
    home_known_gender = home_total - counts["gender_unknown"]
    if home_known_gender < 0:
        raise ConfigError(
            "infeasible fractions: outcome quotas exceed available records"
        )

    window_start = parse_date_token(config.date_window[0])
    window_end = parse_date_token(config.date_window[1])
    if window_end <= window_start:
        raise ConfigError("date_window must span at least two days")

    # (age_bin_start | 0 for newborns, gender | None, outcome) -> count
    cells: list[tuple[int, str | None, str, int]] = []
    for outcome, total in (
        ("H", home_known_gender),
        ("D", counts["death"]),
        ("N", counts["nursing"]),
        ("O", counts["other"]),
    ):
        female_share, mu, sd = _OUTCOME_SHAPES[outcome]
        n_f = round(total * female_share)
        for gender, sub_total in (("F", n_f), ("M", total - n_f)):
            weights = _normal_weights(mu, sd)
            for b, c in zip(_ADULT_BINS, _allocate_cells(sub_total, weights)):
                if c:
                    cells.append((b, gender, outcome, c))
    if counts["gender_unknown"]:
        weights = _normal_weights(66.0, 14.0)
        for b, c in zip(_ADULT_BINS, _allocate_cells(counts["gender_unknown"], weights)):
            if c:
                cells.append((b, None, "H", c))
    if newborn:
        half = newborn // 2
        if half >= 3 and newborn - half >= 3:
            cells.append((0, "F", "H", half))
            cells.append((0, "M", "H", newborn - half))
        else:
            cells.append((0, "F", "H", newborn))

    rows: list[dict[str, Any]] = []
    for bin_start, gender, outcome, count in cells:
        for _ in range(count):
            age = 0 if bin_start == 0 else bin_start + rng.randrange(5)
            rows.append({"Age": age, "Gender": gender, "Outcome": outcome})

    for i, row in enumerate(rows):
        age = row["Age"]
        age_day = age * 365 + rng.randrange(365)
        row["RecordId"] = str(100001 + i)
        row["AgeDay"] = age_day
        row["AgeMonth"] = min(age_day // 30, 11) if age == 0 else age_day // 30
        test_day = _two_wave_day(rng, window_start, window_end)
        row["DateOfFirstPositiveLabResult"] = DayTime(test_day, rng.randrange(86400))
        hosp = min(test_day + rng.randint(0, 7), window_end - 1)
        if row["Outcome"] == "D":
            stay = 1 + int(rng.gammavariate(2.0, 7.0))
        elif age == 0:
            stay = 1 + rng.randint(0, 8)
        else:
            stay = 1 + int(rng.gammavariate(1.8, 5.5))
        row["DateOfHospitalisation"] = hosp
        row["DateOfDischarge"] = min(hosp + stay, window_end)
        row["DateOfOnset"] = max(window_start, test_day - rng.randint(0, 10))
        row["PlaceOfInfection"] = f"P{rng.randint(1, 20):02d}"
        row["CloseContactRecordId"] = str(100001 + rng.randrange(n_bases))
        row["Hospitalisation"] = "Y"
        for flag in PATHOLOGY_FLAGS:
            prevalence = config.pathology_prevalence.get(flag, 0.0)
            row[flag] = "Y" if rng.random() < prevalence else "N"

    # intensive care: exact quota over non-newborn bases
    eligible = [i for i, row in enumerate(rows) if row["Age"] >= 1]
    if counts["intensive_care"] > len(eligible):
        raise ConfigError("infeasible fractions: intensive-care quota too large")
    in_care = set(rng.sample(eligible, counts["intensive_care"]))
    for i, row in enumerate(rows):
        row["IntensiveCare"] = "Y" if i in in_care else "N"

    # re-incident stays: duplicate a safe base row with a later admission
    if n_re:
        pool = [
            i
            for i, row in enumerate(rows)
            if row["Outcome"] == "H"
            and row["IntensiveCare"] != "Y"
            and row["Age"] >= 1
            and row["DateOfDischarge"] <= window_end - 15
        ]
        if len(pool) < n_re:
            raise ConfigError("infeasible fractions: not enough re-incident candidates")
        for i in rng.sample(pool, n_re):
            base = rows[i]
            dup = dict(base)
            test2 = min(base["DateOfDischarge"] + rng.randint(7, 45), window_end - 1)
            dup["DateOfFirstPositiveLabResult"] = DayTime(test2, rng.randrange(86400))
            hosp2 = min(test2 + rng.randint(0, 3), window_end - 1)
            dup["DateOfHospitalisation"] = hosp2
            dup["DateOfDischarge"] = min(
                hosp2 + 1 + int(rng.gammavariate(1.5, 4.0)), window_end
            )
            dup["DateOfOnset"] = max(window_start, test2 - rng.randint(0, 10))
            rows.append(dup)

    rng.shuffle(rows)

    # unknown cells by exact quota so observed rates equal the configuration
    def blank(name: str, rate: float, pool: list[int] | None = None) -> None:
        indices = pool if pool is not None else list(range(len(rows)))
        k = round(rate * len(indices))
        for i in rng.sample(indices, min(k, len(indices))):
            rows[i][name] = None

    blank("DateOfOnset", config.unknown_rates.get("DateOfOnset", 0.0))
    blank("PlaceOfInfection", config.unknown_rates.get("PlaceOfInfection", 0.0))
    blank("CloseContactRecordId", config.unknown_rates.get("CloseContactRecordId", 0.0))
    pathology_rate = config.unknown_rates.get("pathologies", 0.0)
    for flag in PATHOLOGY_FLAGS:
        blank(flag, pathology_rate)
    blank(
        "IntensiveCare",
        config.unknown_rates.get("IntensiveCare", 0.0),
        [i for i, row in enumerate(rows) if row["IntensiveCare"] == "N"],
    )
    columns = tuple(
        tuple(row.get(col.name) for row in rows) for col in schema.columns
    )
    return Dataset(schema=schema, columns=columns)


def validate_realism(ds: Dataset, config: SyntheticConfig) -> dict[str, Any]:
    """Diagnostics: quota counts, mean age, date ordering, unknown rates."""
    counts = config.counts()
    checks: list[dict[str, Any]] = []

    def check(name: str, ok: bool, detail: str) -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    check("row_count", ds.n == config.n, f"rows={ds.n} expected={config.n}")
    outcome = ds.column("Outcome")
    deaths = sum(1 for v in outcome if v == "D")
    nursing = sum(1 for v in outcome if v == "N")
    check("death_quota", deaths == counts["death"], f"{deaths} vs {counts['death']}")
    check(
        "nursing_quota", nursing == counts["nursing"], f"{nursing} vs {counts['nursing']}"
    )
    ic = sum(1 for v in ds.column("IntensiveCare") if v == "Y")
    check(
        "intensive_care_quota",
        ic == counts["intensive_care"],
        f"{ic} vs {counts['intensive_care']}",
    )
    newborn = sum(1 for v in ds.column("Age") if v == 0)
    check(
        "newborn_quota", newborn == counts["newborn"], f"{newborn} vs {counts['newborn']}"
    )
    distinct_ids = len({v for v in ds.column("RecordId")})
    re_rows = ds.n - distinct_ids
    check(
        "reincident_quota",
        re_rows == counts["reincident"],
        f"{re_rows} vs {counts['reincident']}",
    )
    ages = [v for v in ds.column("Age") if not is_missing(v)]
    mean_age = sum(ages) / len(ages) if ages else 0.0
    check(
        "mean_age",
        abs(mean_age - config.mean_age_target) <= 2.0,
        f"mean={mean_age:.2f} target={config.mean_age_target}±2",
    )
    window = (
        parse_date_token(config.date_window[0]),
        parse_date_token(config.date_window[1]),
    )
    ordering_ok = True
    window_ok = True
    for test, hosp, disch in zip(
        ds.column("DateOfFirstPositiveLabResult"),
        ds.column("DateOfHospitalisation"),
        ds.column("DateOfDischarge"),
    ):
        if is_missing(test) or is_missing(hosp) or is_missing(disch):
            continue
        if not (disch >= hosp >= test.day - 14):
            ordering_ok = False
        if not (window[0] <= hosp <= window[1] and window[0] <= disch <= window[1]):
            window_ok = False
    check("date_ordering", ordering_ok, "discharge >= hospitalisation >= test - 14")
    check("date_window", window_ok, "admissions inside the configured window")
    for column, rate in sorted(config.unknown_rates.items()):
        names = list(PATHOLOGY_FLAGS) if column == "pathologies" else [column]
        for name in names:
            if name == "IntensiveCare" or name not in ds.schema or ds.n == 0:
                continue
            observed = sum(1 for v in ds.column(name) if is_missing(v)) / ds.n
            check(
                f"unknown_rate_{name}",
                abs(observed - rate) <= 0.02,
                f"observed={observed:.3f} configured={rate:.3f}",
            )
    return {"all_ok": all(c["ok"] for c in checks), "checks": checks}
