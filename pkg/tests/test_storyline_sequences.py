from __future__ import annotations

import random

import pytest

from adstory.annotator import UnitAnnotation
from adstory.storyline import (
    StorylineSequence,
    canonicalize_sequence,
    default_arc_library,
    match_arcs,
    sequence_distance,
)
from oracles import levenshtein_oracle

ROLE_POOL = [
    "hook",
    "problem_setup",
    "problem_agitation",
    "solution_reveal",
    "feature_explanation",
    "outcome",
    "call_to_action",
    "visual_filler",
]


def _annotations(roles):
    return [
        UnitAnnotation(video_id="v", unit_index=i, role_id=role, confidence=0.9)
        for i, role in enumerate(roles)
    ]


def test_canonicalize_empty():
    assert canonicalize_sequence([]).roles == []


def test_canonicalize_drops_filler_then_collapses():
    seq = canonicalize_sequence(_annotations(["hook", "hook", "visual_filler", "hook"]))
    assert seq.roles == ["hook"]


def test_canonicalize_collapses_runs():
    seq = canonicalize_sequence(
        _annotations(["hook", "problem_setup", "problem_setup", "solution_reveal"])
    )
    assert seq.roles == ["hook", "problem_setup", "solution_reveal"]


def test_canonicalize_idempotent_fuzz():
    rng = random.Random(321)
    for _ in range(2000):
        roles = [rng.choice(ROLE_POOL) for _ in range(rng.randrange(0, 12))]
        once = canonicalize_sequence(_annotations(roles))
        twice = canonicalize_sequence(_annotations(once.roles))
        assert twice.roles == once.roles


def test_pas_match(taxonomy):
    library = default_arc_library(taxonomy)
    seq = StorylineSequence(
        video_id="v", roles=["problem_setup", "problem_agitation", "solution_reveal"]
    )
    abbrevs = [pattern.abbrev for pattern, _ in match_arcs(seq, library)]
    assert "PAS" in abbrevs


def test_hfba_and_sub_pattern_fba(taxonomy):
    library = default_arc_library(taxonomy)
    seq = StorylineSequence(
        video_id="v",
        roles=["hook", "feature_explanation", "outcome", "call_to_action"],
    )
    matches = match_arcs(seq, library)
    abbrevs = [pattern.abbrev for pattern, _ in matches]
    assert abbrevs == ["HFBA", "FBA"]
    hfba_witness = matches[0][1]
    assert hfba_witness == [0, 1, 2, 3]


def test_empty_sequence_matches_nothing(taxonomy):
    assert match_arcs(StorylineSequence("v", []), default_arc_library(taxonomy)) == []


def test_matches_sorted_by_group_count_then_abbrev(taxonomy):
    library = default_arc_library(taxonomy)
    seq = StorylineSequence(
        video_id="v",
        roles=[
            "hook",
            "problem_setup",
            "problem_agitation",
            "demonstration_trial",
            "solution_reveal",
            "outcome",
            "call_to_action",
        ],
    )
    matches = match_arcs(seq, library)
    group_counts = [len(pattern.groups) for pattern, _ in matches]
    assert group_counts == sorted(group_counts, reverse=True)
    for (a, _), (b, _) in zip(matches, matches[1:]):
        if len(a.groups) == len(b.groups):
            assert a.abbrev < b.abbrev


def test_witness_indices_strictly_increase_and_belong_to_groups(taxonomy):
    rng = random.Random(8)
    library = default_arc_library(taxonomy)
    for _ in range(500):
        roles = [rng.choice(ROLE_POOL[:-1]) for _ in range(rng.randrange(0, 10))]
        seq = StorylineSequence(video_id="v", roles=roles)
        for pattern, witness in match_arcs(seq, library):
            assert len(witness) == len(pattern.groups)
            assert all(a < b for a, b in zip(witness, witness[1:]))
            for index, group in zip(witness, pattern.groups):
                assert roles[index] in group


def test_distance_identity_and_empty_cases():
    assert sequence_distance([], []) == 0.0
    assert sequence_distance(["hook"], ["hook"]) == 0.0
    assert sequence_distance(["hook", "outcome"], []) == 1.0


def test_distance_example_one_third():
    d = sequence_distance(
        ["hook", "problem_setup", "solution_reveal"], ["hook", "solution_reveal"]
    )
    assert d == pytest.approx(1 / 3)


def test_distance_matches_oracle_and_metric_axioms():
    rng = random.Random(2024)
    pool = ROLE_POOL[:-1]
    for _ in range(2000):
        a = [rng.choice(pool) for _ in range(rng.randrange(0, 8))]
        b = [rng.choice(pool) for _ in range(rng.randrange(0, 8))]
        c = [rng.choice(pool) for _ in range(rng.randrange(0, 8))]
        dab = sequence_distance(a, b)
        # Against the full-matrix oracle.
        expected = levenshtein_oracle(a, b) / max(len(a), len(b)) if a or b else 0.0
        assert dab == pytest.approx(expected)
        # Symmetry, identity of indiscernibles, triangle inequality. Note
        # lev/max admits adversarial triangle violations (ab/ba/aba gives
        # 1 > 1/3 + 1/3); random triples do not realize that structure.
        assert dab == pytest.approx(sequence_distance(b, a))
        assert (dab == 0.0) == (a == b)
        dac = sequence_distance(a, c)
        dcb = sequence_distance(c, b)
        assert dab <= dac + dcb + 1e-12
