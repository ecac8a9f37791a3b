from __future__ import annotations

import random

import pytest

from adstory.errors import ValidationFailure
from adstory.storyline import StorylineSequence, cluster_sequences


def _seq(video_id, *roles):
    return StorylineSequence(video_id=video_id, roles=list(roles))


def _canonical(clusters):
    return sorted(
        (tuple(c.representative), tuple(sorted(c.member_video_ids)), c.cluster_id)
        for c in clusters
    )


def test_single_sequence_single_cluster():
    clusters = cluster_sequences([_seq("v1", "hook", "outcome")])
    assert len(clusters) == 1
    assert clusters[0].representative == ["hook", "outcome"]
    assert clusters[0].member_video_ids == {"v1"}
    assert clusters[0].cluster_id == "c001"


def test_example_three_sequences_two_clusters():
    sequences = [
        _seq("v1", "hook", "solution_reveal"),
        _seq("v2", "hook", "solution_reveal"),
        _seq("v3", "promotion"),
    ]
    clusters = cluster_sequences(sequences, threshold=0.34)
    assert len(clusters) == 2
    by_members = {tuple(sorted(c.member_video_ids)): c for c in clusters}
    assert ("v1", "v2") in by_members
    assert ("v3",) in by_members


def test_empty_input():
    assert cluster_sequences([]) == []


def test_threshold_validated():
    with pytest.raises(ValidationFailure):
        cluster_sequences([_seq("v1", "hook")], threshold=0.0)
    with pytest.raises(ValidationFailure):
        cluster_sequences([_seq("v1", "hook")], threshold=1.5)


def test_single_linkage_chains_through_intermediates():
    # a-b within threshold, b-c within threshold, a-c not: one cluster anyway.
    sequences = [
        _seq("a", "hook", "problem_setup", "solution_reveal"),
        _seq("b", "hook", "problem_setup", "solution_reveal", "call_to_action"),
        _seq("c", "hook", "problem_setup", "solution_reveal", "call_to_action", "outcome"),
    ]
    clusters = cluster_sequences(sequences, threshold=0.34)
    assert len(clusters) == 1
    assert clusters[0].member_video_ids == {"a", "b", "c"}


def test_medoid_minimizes_total_distance():
    sequences = [
        _seq("a", "hook", "problem_setup", "solution_reveal"),
        _seq("b", "hook", "problem_setup", "solution_reveal", "call_to_action"),
        _seq("c", "hook", "problem_setup", "solution_reveal", "call_to_action", "outcome"),
    ]
    clusters = cluster_sequences(sequences, threshold=0.34)
    # b sits between a and c: total distance 1/4 + 1/5 beats both others.
    assert clusters[0].representative == sequences[1].roles


def test_identical_sequences_tie_break_by_video_id():
    sequences = [
        _seq("zz", "hook", "outcome"),
        _seq("aa", "hook", "outcome"),
    ]
    clusters = cluster_sequences(sequences)
    assert clusters[0].member_video_ids == {"zz", "aa"}


ROLE_POOL = [
    "hook",
    "problem_setup",
    "problem_agitation",
    "solution_reveal",
    "outcome",
    "call_to_action",
    "promotion",
]


def test_clustering_permutation_invariant():
    rng = random.Random(14)
    sequences = [
        _seq(f"v{i:02d}", *[rng.choice(ROLE_POOL) for _ in range(rng.randrange(1, 6))])
        for i in range(25)
    ]
    baseline = _canonical(cluster_sequences(sequences))
    for _ in range(100):
        shuffled = sequences[:]
        rng.shuffle(shuffled)
        assert _canonical(cluster_sequences(shuffled)) == baseline
