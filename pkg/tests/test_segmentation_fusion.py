from __future__ import annotations

import random

import pytest

from adstory.ingest import TimedWord
from adstory.segmentation import (
    Boundary,
    BoundaryOutOfRange,
    SegmentationParams,
    SpeechSpan,
    SOURCE_SPEECH_MARKER,
    SOURCE_SPEECH_PAUSE,
    SOURCE_VISUAL,
    fuse_boundaries,
)


def _visual(*ts):
    return [Boundary(t=t, source=SOURCE_VISUAL) for t in ts]


def _pause(*ts):
    return [Boundary(t=t, source=SOURCE_SPEECH_PAUSE) for t in ts]


def _edges(units):
    return [units[0].start_s] + [u.end_s for u in units]


def test_no_boundaries_yield_single_unit():
    units = fuse_boundaries([], [], [], 10.0, SegmentationParams())
    assert _edges(units) == [0.0, 10.0]
    assert units[0].index == 0


def test_visual_snaps_to_nearby_speech_boundary():
    units = fuse_boundaries(
        _visual(4.10), _pause(4.00), [], 10.0, SegmentationParams()
    )
    assert _edges(units) == [0.0, 4.0, 10.0]


def test_short_unit_drops_later_visual_boundary():
    units = fuse_boundaries(_visual(2.0, 2.5), [], [], 10.0, SegmentationParams())
    assert _edges(units) == [0.0, 2.0, 10.0]


def test_unsnapped_visual_inside_speech_span_is_suppressed():
    units = fuse_boundaries(
        _visual(5.0), [], [SpeechSpan(3.0, 8.0)], 10.0, SegmentationParams()
    )
    assert _edges(units) == [0.0, 10.0]


def test_suppression_can_be_disabled():
    params = SegmentationParams(suppress_visual_inside_speech=False)
    units = fuse_boundaries(_visual(5.0), [], [SpeechSpan(3.0, 8.0)], 10.0, params)
    assert _edges(units) == [0.0, 5.0, 10.0]


def test_speech_outranks_visual_when_gap_too_short():
    units = fuse_boundaries(
        _visual(6.0),
        _pause(5.5),
        [],
        10.0,
        SegmentationParams(snap_tolerance_s=0.25, min_unit_duration_s=1.0),
    )
    assert _edges(units) == [0.0, 5.5, 10.0]


def test_marker_removed_before_pause():
    speech = [
        Boundary(t=4.0, source=SOURCE_SPEECH_PAUSE),
        Boundary(t=4.5, source=SOURCE_SPEECH_MARKER),
    ]
    units = fuse_boundaries([], speech, [], 10.0, SegmentationParams())
    assert _edges(units) == [0.0, 4.0, 10.0]


def test_boundary_out_of_range_rejected():
    with pytest.raises(BoundaryOutOfRange):
        fuse_boundaries(_visual(12.0), [], [], 10.0, SegmentationParams())
    with pytest.raises(BoundaryOutOfRange):
        fuse_boundaries([], _pause(0.0), [], 10.0, SegmentationParams())


def test_transcript_text_assigned_by_word_midpoint():
    words = [
        TimedWord("early", 0.5, 1.5),
        TimedWord("straddle", 3.9, 4.1),
        TimedWord("late", 8.0, 9.0),
    ]
    units = fuse_boundaries(
        [], _pause(4.0), [], 10.0, SegmentationParams(), words=words, fps=2.0
    )
    assert units[0].transcript_text == "early"
    assert units[1].transcript_text == "straddle late"


def test_keyframes_cover_first_middle_last():
    units = fuse_boundaries(
        [], _pause(4.0), [], 10.0, SegmentationParams(), fps=2.0, frame_count=20
    )
    assert units[0].keyframe_indices == [0, 3, 7]
    assert units[1].keyframe_indices == [8, 13, 19]


def random_fusion_case(rng: random.Random):
    duration = rng.uniform(4.0, 60.0)
    visual = [
        Boundary(t=rng.uniform(0.01, duration - 0.01), source=SOURCE_VISUAL)
        for _ in range(rng.randrange(0, 6))
    ]
    speech = [
        Boundary(
            t=rng.uniform(0.01, duration - 0.01),
            source=rng.choice([SOURCE_SPEECH_PAUSE, SOURCE_SPEECH_MARKER]),
        )
        for _ in range(rng.randrange(0, 6))
    ]
    cuts = sorted(rng.uniform(0, duration) for _ in range(rng.randrange(0, 4) * 2))
    spans = [
        SpeechSpan(start_s=cuts[i], end_s=cuts[i + 1])
        for i in range(0, len(cuts), 2)
        if cuts[i + 1] > cuts[i]
    ]
    params = SegmentationParams(
        snap_tolerance_s=rng.choice([0.0, 0.1, 0.25, 0.5]),
        min_unit_duration_s=rng.choice([0.0, 0.5, 1.0, 2.0]),
        suppress_visual_inside_speech=rng.random() < 0.5,
    )
    return visual, speech, spans, duration, params


def check_fusion_invariants(visual, speech, spans, duration, params):
    units = fuse_boundaries(visual, speech, spans, duration, params)
    assert units[0].start_s == 0.0
    assert units[-1].end_s == duration
    for left, right in zip(units, units[1:]):
        assert left.end_s == right.start_s
    assert [u.index for u in units] == list(range(len(units)))
    if len(units) > 1:
        for unit in units:
            assert unit.end_s - unit.start_s >= params.min_unit_duration_s
    allowed_times = {b.t for b in visual} | {b.t for b in speech}
    for unit in units[:-1]:
        assert unit.end_s in allowed_times
    return units


def test_fusion_invariants_fuzz():
    rng = random.Random(20240901)
    for _ in range(2000):
        check_fusion_invariants(*random_fusion_case(rng))


def test_fusion_degenerates_to_union_when_disabled():
    rng = random.Random(77)
    params = SegmentationParams(
        snap_tolerance_s=0.0, min_unit_duration_s=0.0, suppress_visual_inside_speech=False
    )
    for _ in range(300):
        duration = rng.uniform(5.0, 30.0)
        visual = [
            Boundary(t=rng.uniform(0.1, duration - 0.1), source=SOURCE_VISUAL)
            for _ in range(rng.randrange(0, 5))
        ]
        speech = [
            Boundary(t=rng.uniform(0.1, duration - 0.1), source=SOURCE_SPEECH_PAUSE)
            for _ in range(rng.randrange(0, 5))
        ]
        cuts = sorted(rng.uniform(0, duration) for _ in range(4))
        spans = [SpeechSpan(cuts[0], cuts[1]), SpeechSpan(cuts[2], cuts[3])]
        units = fuse_boundaries(visual, speech, spans, duration, params)
        internal = [u.end_s for u in units[:-1]]
        assert internal == sorted({b.t for b in visual} | {b.t for b in speech})


def test_fusion_is_deterministic():
    rng = random.Random(5)
    case = random_fusion_case(rng)
    first = fuse_boundaries(*case)
    second = fuse_boundaries(*case)
    assert first == second
