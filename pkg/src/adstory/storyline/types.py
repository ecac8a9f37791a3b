"""Sequence, cluster, and curation-event records."""

from __future__ import annotations

from dataclasses import dataclass

from adstory.annotator.base import UnitAnnotation
from adstory.taxonomy import FILLER_ROLE_ID

STATUS_PROPOSED = "proposed"
STATUS_APPROVED = "approved"
STATUS_MERGED = "merged"


@dataclass
class StorylineSequence:
    """Canonical per-video role sequence: no filler, no adjacent repeats."""

    video_id: str
    roles: list[str]


@dataclass
class Cluster:
    cluster_id: str
    representative: list[str]
    member_video_ids: set[str]
    name: str = ""
    status: str = STATUS_PROPOSED
    merged_into: str | None = None


@dataclass
class CurationEvent:
    """One human decision; the log of these is append-only."""

    seq_no: int
    timestamp: str
    actor: str
    action: str
    payload: dict


def canonicalize_sequence(annotations: list[UnitAnnotation]) -> StorylineSequence:
    """Drop filler units, then collapse adjacent equal roles.

    Idempotent: canonicalizing an already-canonical sequence changes nothing.
    """
    video_id = annotations[0].video_id if annotations else ""
    roles: list[str] = []
    for annotation in annotations:
        role = annotation.role_id
        if role == FILLER_ROLE_ID:
            continue
        if roles and roles[-1] == role:
            continue
        roles.append(role)
    return StorylineSequence(video_id=video_id, roles=roles)
