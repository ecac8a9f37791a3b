"""Human curation of storyline clusters: merge, rename, approve.

These functions are pure: they take a state, return a fresh state plus the
event payload describing the decision. Durable sequencing (seq_no,
timestamp) is the store's job, which also means any stored event log can be
replayed over the initial clustering to reproduce the final state.
"""

from __future__ import annotations

from copy import deepcopy
from dataclasses import dataclass, field

from adstory.errors import ValidationFailure
from adstory.storyline.clustering import medoid_of_sequences
from adstory.storyline.types import (
    Cluster,
    STATUS_APPROVED,
    STATUS_MERGED,
    StorylineSequence,
)

ACTION_MERGE = "merge"
ACTION_RENAME = "rename"
ACTION_APPROVE = "approve"


class NotFound(ValidationFailure):
    pass


class AlreadyMerged(ValidationFailure):
    pass


class SelfMerge(ValidationFailure):
    pass


class EmptyName(ValidationFailure):
    pass


class ClusterMerged(ValidationFailure):
    pass


class AlreadyApproved(ValidationFailure):
    pass


@dataclass
class CurationState:
    """Clusters plus the sequences backing them (medoids need the roles)."""

    clusters: dict[str, Cluster] = field(default_factory=dict)
    sequences: dict[str, list[str]] = field(default_factory=dict)

    @classmethod
    def from_clustering(
        cls, clusters: list[Cluster], sequences: list[StorylineSequence]
    ) -> "CurationState":
        return cls(
            clusters={c.cluster_id: deepcopy(c) for c in clusters},
            sequences={s.video_id: list(s.roles) for s in sequences},
        )

    def active_cluster_of(self, video_id: str) -> Cluster | None:
        for cluster in self.clusters.values():
            if cluster.status != STATUS_MERGED and video_id in cluster.member_video_ids:
                return cluster
        return None

    def _require(self, cluster_id: str) -> Cluster:
        cluster = self.clusters.get(cluster_id)
        if cluster is None:
            raise NotFound(f"no cluster {cluster_id!r}")
        return cluster


def merge_clusters(
    state: CurationState, source_ids: list[str], target_id: str, actor: str
) -> tuple[CurationState, dict]:
    """Fold sources into target and recompute its medoid representative."""
    target = state._require(target_id)
    sources = [state._require(source_id) for source_id in source_ids]
    if target_id in source_ids:
        raise SelfMerge(f"cannot merge {target_id!r} into itself")
    if target.status == STATUS_MERGED:
        raise AlreadyMerged(f"target {target_id!r} was already merged")
    for source in sources:
        if source.status == STATUS_MERGED:
            raise AlreadyMerged(f"source {source.cluster_id!r} was already merged")

    new_state = deepcopy(state)
    new_target = new_state.clusters[target_id]
    for source_id in source_ids:
        source = new_state.clusters[source_id]
        new_target.member_video_ids |= source.member_video_ids
        source.member_video_ids = set()
        source.status = STATUS_MERGED
        source.merged_into = target_id
    new_target.representative = medoid_of_sequences(
        sorted(
            (video_id, new_state.sequences.get(video_id, []))
            for video_id in new_target.member_video_ids
        )
    )
    event_payload = {
        "action": ACTION_MERGE,
        "actor": actor,
        "payload": {"source_ids": sorted(source_ids), "target_id": target_id},
    }
    return new_state, event_payload


def rename_cluster(
    state: CurationState, cluster_id: str, name: str, actor: str
) -> tuple[CurationState, dict]:
    cluster = state._require(cluster_id)
    if cluster.status == STATUS_MERGED:
        raise ClusterMerged(f"{cluster_id!r} was merged away")
    if not name.strip():
        raise EmptyName("cluster name must be non-empty")
    new_state = deepcopy(state)
    new_state.clusters[cluster_id].name = name
    event_payload = {
        "action": ACTION_RENAME,
        "actor": actor,
        "payload": {"cluster_id": cluster_id, "name": name},
    }
    return new_state, event_payload


def approve_cluster(
    state: CurationState, cluster_id: str, actor: str
) -> tuple[CurationState, dict]:
    cluster = state._require(cluster_id)
    if cluster.status == STATUS_MERGED:
        raise ClusterMerged(f"{cluster_id!r} was merged away")
    if cluster.status == STATUS_APPROVED:
        raise AlreadyApproved(f"{cluster_id!r} is already approved")
    if not cluster.name.strip():
        raise EmptyName(f"{cluster_id!r} needs a confirmed name before approval")
    new_state = deepcopy(state)
    new_state.clusters[cluster_id].status = STATUS_APPROVED
    event_payload = {
        "action": ACTION_APPROVE,
        "actor": actor,
        "payload": {"cluster_id": cluster_id},
    }
    return new_state, event_payload


def replay_events(initial: CurationState, events: list[dict]) -> CurationState:
    """Apply a stored event log in order; the result must equal stored state."""
    state = initial
    for event in sorted(events, key=lambda e: e["seq_no"]):
        action = event["action"]
        payload = event["payload"]
        actor = event.get("actor", "")
        if action == ACTION_MERGE:
            state, _ = merge_clusters(
                state, payload["source_ids"], payload["target_id"], actor
            )
        elif action == ACTION_RENAME:
            state, _ = rename_cluster(state, payload["cluster_id"], payload["name"], actor)
        elif action == ACTION_APPROVE:
            state, _ = approve_cluster(state, payload["cluster_id"], actor)
        else:
            raise ValidationFailure(f"unknown curation action {action!r}")
    return state
