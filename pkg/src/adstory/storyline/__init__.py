"""Canonical role sequences, arc-pattern matching, sequence clustering, and
human curation of the resulting clusters."""

from adstory.storyline.arcs import (
    ArcPattern,
    default_arc_library,
    load_arc_library,
    match_arcs,
)
from adstory.storyline.clustering import cluster_sequences, sequence_distance
from adstory.storyline.curation import (
    AlreadyApproved,
    AlreadyMerged,
    ClusterMerged,
    CurationState,
    EmptyName,
    NotFound,
    SelfMerge,
    approve_cluster,
    merge_clusters,
    rename_cluster,
    replay_events,
)
from adstory.storyline.types import (
    Cluster,
    CurationEvent,
    STATUS_APPROVED,
    STATUS_MERGED,
    STATUS_PROPOSED,
    StorylineSequence,
    canonicalize_sequence,
)

__all__ = [
    "AlreadyApproved",
    "AlreadyMerged",
    "ArcPattern",
    "Cluster",
    "ClusterMerged",
    "CurationEvent",
    "CurationState",
    "EmptyName",
    "NotFound",
    "STATUS_APPROVED",
    "STATUS_MERGED",
    "STATUS_PROPOSED",
    "SelfMerge",
    "StorylineSequence",
    "approve_cluster",
    "canonicalize_sequence",
    "cluster_sequences",
    "default_arc_library",
    "load_arc_library",
    "match_arcs",
    "merge_clusters",
    "rename_cluster",
    "replay_events",
    "sequence_distance",
]
