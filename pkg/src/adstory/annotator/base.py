"""Annotator contract shared by the remote and lexicon implementations.

Implementations must be safe for concurrent calls and fully deterministic
given identical inputs (the remote path pins temperature to 0 and demands a
strict structured response).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from adstory.errors import OperationalFailure, ValidationFailure
from adstory.ingest.types import Transcript
from adstory.segmentation.types import FunctionalUnit
from adstory.taxonomy import Taxonomy


class EmptyVideo(ValidationFailure):
    """Story detection and unit classification need at least one unit."""


class AnnotatorUnavailable(OperationalFailure):
    """The backend kept failing after the configured retry budget."""


class MalformedModelOutput(OperationalFailure):
    """The backend answered, but not with the documented structure."""


class UnknownRoleReturned(OperationalFailure):
    """The backend labeled a unit with a role outside the active taxonomy."""


@dataclass
class StoryVerdict:
    video_id: str
    has_story: bool
    rationale: str
    signals: list[str] = field(default_factory=list)


@dataclass
class UnitAnnotation:
    video_id: str
    unit_index: int
    role_id: str
    confidence: float
    rationale: str = ""


@dataclass
class ClusterSummary:
    """What an annotator needs to propose a cluster name."""

    cluster_id: str
    representative: list[str]
    member_count: int


@dataclass
class AnnotatorConfig:
    kind: str = "lexicon"
    endpoint_url: str = ""
    model_name: str = ""
    timeout_s: float = 30.0
    max_in_flight: int = 8
    max_attempts: int = 5
    backoff_base_s: float = 0.5

    def validate(self) -> None:
        if self.kind not in ("remote", "lexicon"):
            raise ValidationFailure(f"unknown annotator kind {self.kind!r}")
        if self.kind == "remote" and not self.endpoint_url:
            raise ValidationFailure("remote annotator requires endpoint_url")
        if self.max_attempts < 1 or self.max_in_flight < 1:
            raise ValidationFailure("max_attempts and max_in_flight must be >= 1")

    @classmethod
    def from_config(cls, config: dict) -> "AnnotatorConfig":
        known = set(cls().__dict__)
        unknown = set(config) - known
        if unknown:
            raise ValidationFailure(
                f"unknown annotator config keys: {', '.join(sorted(unknown))}"
            )
        built = cls(**config)
        built.validate()
        return built


class Annotator(Protocol):
    def detect_story(
        self, units: list[FunctionalUnit], transcript: Transcript
    ) -> StoryVerdict: ...

    def classify_units(
        self, units: list[FunctionalUnit], taxonomy: Taxonomy
    ) -> list[UnitAnnotation]: ...

    def propose_cluster_names(
        self, clusters: list[ClusterSummary]
    ) -> dict[str, str]: ...


def detect_story(
    units: list[FunctionalUnit], transcript: Transcript, annotator: Annotator
) -> StoryVerdict:
    """Run story detection with contract checks around the backend."""
    if not units:
        raise EmptyVideo(f"{transcript.video_id}: no functional units")
    return annotator.detect_story(units, transcript)


def classify_units(
    units: list[FunctionalUnit], taxonomy: Taxonomy, annotator: Annotator
) -> list[UnitAnnotation]:
    """Classify every unit; output is ordered by unit_index, one per unit."""
    if not units:
        raise EmptyVideo("no functional units to classify")
    annotations = annotator.classify_units(units, taxonomy)
    if len(annotations) != len(units):
        raise MalformedModelOutput(
            f"expected {len(units)} annotations, got {len(annotations)}"
        )
    for annotation in annotations:
        if not taxonomy.has_role(annotation.role_id):
            raise UnknownRoleReturned(
                f"unit {annotation.unit_index}: role {annotation.role_id!r} "
                "is not in the taxonomy"
            )
    return sorted(annotations, key=lambda a: a.unit_index)


def propose_cluster_names(
    clusters: list[ClusterSummary], annotator: Annotator
) -> dict[str, str]:
    """One proposed name per cluster; humans confirm via curation."""
    if not clusters:
        return {}
    names = annotator.propose_cluster_names(clusters)
    missing = [c.cluster_id for c in clusters if c.cluster_id not in names]
    if missing:
        raise MalformedModelOutput(f"no name proposed for clusters: {missing}")
    return names
