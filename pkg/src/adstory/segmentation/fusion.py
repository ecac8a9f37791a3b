"""Fusing visual and speech boundaries into functional units.

Five steps: snap visual cuts onto nearby speech boundaries, suppress
leftover visual cuts inside continuous speech, union what survives, widen
short units by removing the most expendable edge, then emit units covering
[0, duration] exactly.
"""

from __future__ import annotations

import math

from adstory.errors import ValidationFailure
from adstory.ingest.types import FrameScoreSeries, TimedWord, Transcript, VideoMeta
from adstory.segmentation.detect import (
    detect_speech_boundaries,
    detect_visual_cuts,
    derive_speech_spans,
)
from adstory.segmentation.types import (
    Boundary,
    FunctionalUnit,
    SegmentationParams,
    SpeechSpan,
    SOURCE_SPEECH_MARKER,
    SOURCE_SPEECH_PAUSE,
    SOURCE_VISUAL,
)

# Lower keep-strength is removed first when a unit is too short.
_KEEP_STRENGTH = {SOURCE_VISUAL: 0, SOURCE_SPEECH_MARKER: 1, SOURCE_SPEECH_PAUSE: 2}

_FRAME_EPS = 1e-9


class BoundaryOutOfRange(ValidationFailure):
    """An input boundary lies outside (0, duration)."""


def fuse_boundaries(
    visual: list[Boundary],
    speech: list[Boundary],
    spans: list[SpeechSpan],
    duration_s: float,
    params: SegmentationParams,
    *,
    words: list[TimedWord] | None = None,
    fps: float | None = None,
    frame_count: int | None = None,
) -> list[FunctionalUnit]:
    """Fuse boundary streams into units partitioning [0, duration_s].

    words and fps are optional enrichments: without them units carry empty
    transcript_text / keyframe_indices.
    """
    for boundary in [*visual, *speech]:
        if not 0.0 < boundary.t < duration_s:
            raise BoundaryOutOfRange(
                f"boundary at {boundary.t}s outside (0, {duration_s})"
            )

    # Step 1: snap visual cuts to the nearest speech boundary in tolerance
    # (earlier speech time wins a distance tie).
    unsnapped_visual: list[Boundary] = []
    snapped_times: set[float] = set()
    for cut in visual:
        best: tuple[float, float] | None = None
        for sb in speech:
            distance = abs(cut.t - sb.t)
            if distance <= params.snap_tolerance_s:
                key = (distance, sb.t)
                if best is None or key < best:
                    best = key
        if best is None:
            unsnapped_visual.append(cut)
        else:
            snapped_times.add(best[1])

    # Step 2: suppression inside continuous speech.
    if params.suppress_visual_inside_speech:
        unsnapped_visual = [
            cut
            for cut in unsnapped_visual
            if not any(span.start_s < cut.t < span.end_s for span in spans)
        ]

    # Step 3: union, deduplicating identical times by keep-strength.
    merged: dict[float, Boundary] = {}
    for boundary in [*speech, *unsnapped_visual]:
        snapped = boundary.snapped or boundary.t in snapped_times
        existing = merged.get(boundary.t)
        if existing is None:
            merged[boundary.t] = Boundary(boundary.t, boundary.source, snapped)
        else:
            source = max(
                existing.source, boundary.source, key=_KEEP_STRENGTH.__getitem__
            )
            merged[boundary.t] = Boundary(
                boundary.t, source, existing.snapped or snapped
            )
    boundaries = sorted(merged.values(), key=lambda b: b.t)

    # Step 4: remove one edge of the leftmost too-short unit until none remain.
    while boundaries:
        edges = [0.0, *[b.t for b in boundaries], duration_s]
        offending = next(
            (
                i
                for i in range(len(edges) - 1)
                if edges[i + 1] - edges[i] < params.min_unit_duration_s
            ),
            None,
        )
        if offending is None:
            break
        candidates = []
        if offending >= 1:
            candidates.append(boundaries[offending - 1])
        if offending < len(boundaries):
            candidates.append(boundaries[offending])
        doomed = min(candidates, key=lambda b: (_KEEP_STRENGTH[b.source], -b.t))
        boundaries.remove(doomed)

    # Step 5: emit units.
    edges = [0.0, *[b.t for b in boundaries], duration_s]
    units = []
    for index in range(len(edges) - 1):
        start, end = edges[index], edges[index + 1]
        is_last = index == len(edges) - 2
        units.append(
            FunctionalUnit(
                index=index,
                start_s=start,
                end_s=end,
                transcript_text=_unit_text(words or [], start, end, is_last),
                keyframe_indices=_keyframes(start, end, fps, frame_count),
            )
        )
    return units


def segment_video(
    meta: VideoMeta,
    series: FrameScoreSeries | None,
    transcript: Transcript,
    params: SegmentationParams,
    frame_count: int | None = None,
) -> list[FunctionalUnit]:
    """Run the full per-video segmentation: detect, filter to range, fuse."""
    visual = (
        detect_visual_cuts(series, params, meta.fps) if series is not None else []
    )
    speech = detect_speech_boundaries(transcript, params)
    spans = derive_speech_spans(transcript, params)
    in_range = lambda b: 0.0 < b.t < meta.duration_s  # noqa: E731
    if frame_count is None and series is not None:
        frame_count = len(series.scores)
    return fuse_boundaries(
        [b for b in visual if in_range(b)],
        [b for b in speech if in_range(b)],
        spans,
        meta.duration_s,
        params,
        words=transcript.words,
        fps=meta.fps,
        frame_count=frame_count,
    )


def _unit_text(
    words: list[TimedWord], start: float, end: float, is_last: bool
) -> str:
    picked = []
    for word in words:
        midpoint = (word.start_s + word.end_s) / 2.0
        if start <= midpoint < end or (is_last and midpoint == end):
            picked.append(word.text)
    return " ".join(picked)


def _keyframes(
    start: float, end: float, fps: float | None, frame_count: int | None
) -> list[int]:
    """First, middle, and last frame whose timestamp falls in [start, end)."""
    if fps is None:
        return []
    first = max(0, math.ceil(start * fps - _FRAME_EPS))
    last = math.ceil(end * fps - _FRAME_EPS) - 1
    if frame_count is not None:
        last = min(last, frame_count - 1)
        first = min(first, frame_count - 1)
    last = max(first, last)
    middle = (first + last) // 2
    return sorted({first, middle, last})
