"""The reference de-identification workflow for the synthetic admissions data.

Mirrors the study sequence: drop statistically useless columns, keep only the
first stay of re-incident patients, turn the two stay dates into a duration,
remove direct/newborn identifiers, truncate test timestamps to days, merge
home and nursing-home outcomes into "Recovered", bin stay length into
quartiles and age into 5-year ranges, and finally add ±3 days of uniform
noise to the test date.
"""

from __future__ import annotations

from sdclab.pipeline import Level, PipelineSpec, SubsetSpec, Thresholds
from sdclab.risk import Scenario
from sdclab.steps import TransformStep
from sdclab.synth import PATHOLOGY_FLAGS

AGE = "Age"
GENDER = "Gender"
OUTCOME = "Outcome"
TEST_DATE = "DateOfFirstPositiveLabResult"
STAY_DAYS = "HospitalisationDays"


def default_scenarios() -> tuple[Scenario, ...]:
    return (
        Scenario.of(AGE, GENDER),
        Scenario.of(AGE, GENDER, OUTCOME),
        Scenario.of(AGE, STAY_DAYS, GENDER),
        Scenario.of(AGE, STAY_DAYS, GENDER, OUTCOME),
        Scenario.of(AGE, TEST_DATE, GENDER),
        Scenario.of(AGE, TEST_DATE, GENDER, OUTCOME),
        Scenario.of(AGE, TEST_DATE, STAY_DAYS, GENDER, OUTCOME),
    )


def default_steps(noise_seed: int | None = None) -> tuple[TransformStep, ...]:
    return (
        TransformStep(
            "DropColumns",
            {
                "names": [
                    "CloseContactRecordId",
                    "DateOfOnset",
                    "PlaceOfInfection",
                    "Hospitalisation",
                ],
                "reasons": {
                    "CloseContactRecordId": "mostly missing, no statistical interest",
                    "DateOfOnset": "mostly missing, no statistical interest",
                    "PlaceOfInfection": "mostly missing, no statistical interest",
                    "Hospitalisation": "constant for an admissions-only table",
                },
            },
        ),
        TransformStep(
            "SuppressDuplicateRows",
            {"key_columns": ["RecordId"], "order_column": "DateOfHospitalisation"},
        ),
        TransformStep(
            "DeriveDuration",
            {
                "start": "DateOfHospitalisation",
                "end": "DateOfDischarge",
                "new_name": STAY_DAYS,
                "drop_sources": True,
            },
        ),
        TransformStep("Classify", {"assignments": {STAY_DAYS: "QuasiIdentifier"}}),
        TransformStep(
            "DropColumns",
            {
                "names": ["RecordId", "AgeDay", "AgeMonth"],
                "reasons": {
                    "RecordId": "direct identifier",
                    "AgeDay": "singles out newborns",
                    "AgeMonth": "singles out newborns",
                },
            },
        ),
        TransformStep("TruncateDateTime", {"column": TEST_DATE}),
        TransformStep(
            "RecodeCategories",
            {"column": OUTCOME, "mapping": {"H": "Recovered", "N": "Recovered"}},
        ),
        TransformStep("BinQuantiles", {"column": STAY_DAYS, "q": 4}),
        TransformStep("BinFixedWidth", {"column": AGE, "width": 5, "origin": 0}),
        TransformStep(
            "AddUniformIntegerNoise",
            {"column": TEST_DATE, "lo": -3, "hi": 3},
            seed=noise_seed,
        ),
    )


def default_subsets() -> tuple[SubsetSpec, ...]:
    base = (
        SubsetSpec(
            "death",
            "Outcome:eq:D",
            (Scenario.of(AGE, GENDER), Scenario.of(AGE, STAY_DAYS, GENDER)),
        ),
        SubsetSpec(
            "nursing-home",
            "Outcome:eq:N",
            (Scenario.of(AGE, GENDER), Scenario.of(AGE, STAY_DAYS, GENDER)),
        ),
        SubsetSpec(
            "intensive-care",
            "IntensiveCare:eq:Y",
            (Scenario.of(AGE, GENDER), Scenario.of(AGE, STAY_DAYS, GENDER)),
        ),
        SubsetSpec("newborn", "Age:lt:1", (Scenario.of("AgeMonth", GENDER),)),
    )
    pathologies = tuple(
        SubsetSpec(flag.lower(), f"{flag}:eq:Y", (Scenario.of(AGE, GENDER),))
        for flag in PATHOLOGY_FLAGS
    )
    return base + pathologies


def default_workflow_spec(seed: int = 20200301) -> PipelineSpec:
    return PipelineSpec(
        steps=default_steps(),
        scenarios=default_scenarios(),
        subsets=default_subsets(),
        thresholds=Thresholds(max_risk_percent=60.0, min_class_size=3),
        benefit_level=Level.H,
        seed=seed,
    )
