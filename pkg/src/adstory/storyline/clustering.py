"""Normalized edit distance over role sequences and single-linkage clustering.

Single-linkage stopped at a distance threshold is exactly the connected
components of the graph whose edges join sequences within the threshold, so
clustering is implemented as union-find over qualifying pairs: trivially
deterministic and independent of input order.
"""

from __future__ import annotations

from collections.abc import Sequence

from adstory.errors import ValidationFailure
from adstory.storyline.types import Cluster, StorylineSequence

DEFAULT_CLUSTER_THRESHOLD = 0.34


def sequence_distance(a: Sequence[str], b: Sequence[str]) -> float:
    """Levenshtein distance over role symbols, normalized by the longer length."""
    if not a and not b:
        return 0.0
    longer = max(len(a), len(b))
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        current = [i] + [0] * len(b)
        for j in range(1, len(b) + 1):
            substitution = previous[j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            current[j] = min(previous[j] + 1, current[j - 1] + 1, substitution)
        previous = current
    return previous[len(b)] / longer


def cluster_sequences(
    sequences: list[StorylineSequence],
    threshold: float = DEFAULT_CLUSTER_THRESHOLD,
) -> list[Cluster]:
    """Group sequences whose single-linkage distance stays within threshold.

    Cluster ids are assigned in order of sorted representatives, so the same
    input set always produces the same ids regardless of input order.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValidationFailure(f"threshold must be in (0, 1], got {threshold}")
    if not sequences:
        return []

    parent = list(range(len(sequences)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    distances: dict[tuple[int, int], float] = {}
    for i in range(len(sequences)):
        for j in range(i + 1, len(sequences)):
            d = sequence_distance(sequences[i].roles, sequences[j].roles)
            distances[(i, j)] = d
            if d <= threshold:
                root_i, root_j = find(i), find(j)
                if root_i != root_j:
                    parent[max(root_i, root_j)] = min(root_i, root_j)

    groups: dict[int, list[int]] = {}
    for i in range(len(sequences)):
        groups.setdefault(find(i), []).append(i)

    clusters = []
    for members in groups.values():
        representative = _medoid(sequences, members, distances)
        clusters.append(
            Cluster(
                cluster_id="",
                representative=list(sequences[representative].roles),
                member_video_ids={sequences[i].video_id for i in members},
            )
        )
    clusters.sort(key=lambda c: (c.representative, min(c.member_video_ids)))
    for index, cluster in enumerate(clusters, start=1):
        cluster.cluster_id = f"c{index:03d}"
    return clusters


def _medoid(
    sequences: list[StorylineSequence],
    members: list[int],
    distances: dict[tuple[int, int], float],
) -> int:
    """Member with minimal total distance to the others; ties prefer the
    lexicographically smallest role list, then the smallest video_id."""

    def total_distance(i: int) -> float:
        # Summing in sorted order keeps totals bitwise identical however the
        # input was permuted, so medoid ties stay deterministic.
        return sum(sorted(distances[(min(i, j), max(i, j))] for j in members if j != i))

    return min(
        members,
        key=lambda i: (total_distance(i), sequences[i].roles, sequences[i].video_id),
    )


def medoid_of_sequences(role_lists: list[tuple[str, list[str]]]) -> list[str]:
    """Medoid over (video_id, roles) pairs; used when merges recompute
    representatives from scratch."""
    if not role_lists:
        return []

    def total_distance(a: list[str]) -> float:
        return sum(sorted(sequence_distance(a, b) for _, b in role_lists))

    best = min(role_lists, key=lambda item: (total_distance(item[1]), item[1], item[0]))
    return list(best[1])
