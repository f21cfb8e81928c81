"""sdclab: measure re-identification risk, transform, re-assess, decide."""

from sdclab import transforms  # noqa: F401  (register PPT step variants)
from sdclab.csvio import infer_schema, load_csv, write_csv
from sdclab.pipeline import (
    DEFAULT_CUTOFFS,
    DEFAULT_MATRIX,
    Decision,
    Level,
    PipelineSpec,
    RiskBenefitMatrix,
    Thresholds,
    decide,
    risk_to_level,
    run,
)
from sdclab.risk import (
    DistanceRule,
    DistanceSpec,
    LinkageResult,
    Metric,
    RiskResult,
    Scenario,
    assess_matrix,
    k_anonymity_risk,
    l_diversity,
    partition,
    record_linkage,
    subset_risk,
)
from sdclab.schema import AttributeClass, Column, Schema
from sdclab.steps import ProvenanceEntry, TransformStep, apply_step, replay
from sdclab.synth import SyntheticConfig, generate, validate_realism
from sdclab.table import (
    Dataset,
    Predicate,
    classify,
    derive_duration,
    drop_columns,
    filter_subset,
)
from sdclab.values import ValueKind

__version__ = "0.1.0"

__all__ = [
    "AttributeClass",
    "Column",
    "Dataset",
    "DEFAULT_CUTOFFS",
    "DEFAULT_MATRIX",
    "Decision",
    "DistanceRule",
    "DistanceSpec",
    "Level",
    "LinkageResult",
    "Metric",
    "PipelineSpec",
    "Predicate",
    "ProvenanceEntry",
    "RiskBenefitMatrix",
    "RiskResult",
    "Scenario",
    "Schema",
    "SyntheticConfig",
    "Thresholds",
    "TransformStep",
    "ValueKind",
    "apply_step",
    "assess_matrix",
    "classify",
    "decide",
    "derive_duration",
    "drop_columns",
    "filter_subset",
    "generate",
    "infer_schema",
    "k_anonymity_risk",
    "l_diversity",
    "load_csv",
    "partition",
    "record_linkage",
    "replay",
    "risk_to_level",
    "run",
    "subset_risk",
    "validate_realism",
    "write_csv",
]
