"""Transform step descriptors, the variant registry, and provenance replay.

Every operation that produces a new dataset registers an applier here, so a
recorded provenance list can be replayed on the original dataset and is the
single serialization used by pipeline specs, the HTTP API, and reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable

from sdclab.errors import StepError

if TYPE_CHECKING:
    from sdclab.table import Dataset


@dataclass(frozen=True)
class TransformStep:
    """One parameterized step. ``params`` is JSON-safe; ``seed`` is only
    meaningful for perturbative variants."""

    variant: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def to_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {"variant": self.variant, "params": dict(self.params)}
        if self.seed is not None:
            obj["seed"] = self.seed
        return obj

    @staticmethod
    def from_obj(obj: dict[str, Any]) -> "TransformStep":
        if "variant" not in obj:
            raise StepError("step object needs a 'variant' field")
        return TransformStep(
            variant=obj["variant"],
            params=dict(obj.get("params", {})),
            seed=obj.get("seed"),
        )

    @property
    def perturbative(self) -> bool:
        return variant_info(self.variant).perturbative

    @property
    def structural(self) -> bool:
        return variant_info(self.variant).structural

    def target_columns(self) -> tuple[str, ...]:
        """Columns whose values this step rewrites (empty for row-level and
        structural steps)."""
        if "column" in self.params:
            return (self.params["column"],)
        return ()


@dataclass(frozen=True)
class ProvenanceEntry:
    step: TransformStep
    affected: dict[str, Any]

    def to_obj(self) -> dict[str, Any]:
        return {"step": self.step.to_obj(), "affected": dict(self.affected)}

    @staticmethod
    def from_obj(obj: dict[str, Any]) -> "ProvenanceEntry":
        return ProvenanceEntry(
            step=TransformStep.from_obj(obj["step"]),
            affected=dict(obj.get("affected", {})),
        )


Applier = Callable[["Dataset", "TransformStep"], "Dataset"]


@dataclass(frozen=True)
class VariantInfo:
    name: str
    applier: Applier
    perturbative: bool = False
    structural: bool = False


_REGISTRY: dict[str, VariantInfo] = {}


def register_variant(
    name: str, applier: Applier, *, perturbative: bool = False, structural: bool = False
) -> None:
    _REGISTRY[name] = VariantInfo(name, applier, perturbative, structural)


def variant_info(name: str) -> VariantInfo:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise StepError(f"unknown step variant {name!r}") from None


def variant_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def apply_step(ds: "Dataset", step: TransformStep) -> "Dataset":
    """Apply one step; the result carries a new provenance entry."""
    return variant_info(step.variant).applier(ds, step)


def replay(original: "Dataset", entries: list[ProvenanceEntry] | tuple) -> "Dataset":
    """Reapply a recorded provenance list; bit-exact given recorded seeds."""
    ds = original
    for entry in entries:
        ds = apply_step(ds, entry.step)
    return ds


def perturbed_columns(entries: tuple[ProvenanceEntry, ...]) -> frozenset[str]:
    """Columns touched by any perturbative step in the provenance."""
    out: set[str] = set()
    for entry in entries:
        if entry.step.perturbative:
            out.update(entry.step.target_columns())
    return frozenset(out)
