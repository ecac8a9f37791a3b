"""Visual cut detection and speech-derived boundaries.

The visual detector flags frame t when its content score clears an absolute
floor AND dominates the rolling mean of its neighborhood; speech boundaries
come from inter-word pauses and a discourse-marker lexicon.
"""

from __future__ import annotations

from adstory.errors import ValidationFailure
from adstory.ingest.types import FrameScoreSeries, TimedWord, Transcript
from adstory.textmatch import match_starts, normalize_phrases, normalize_token
from adstory.segmentation.types import (
    Boundary,
    SegmentationParams,
    SpeechSpan,
    SOURCE_SPEECH_MARKER,
    SOURCE_SPEECH_PAUSE,
    SOURCE_VISUAL,
)

RATIO_EPSILON = 1e-6
DEDUP_TOLERANCE_S = 1e-6


class EmptySeries(ValidationFailure):
    """detect_visual_cuts needs at least one frame score."""


def detect_visual_cuts(
    series: FrameScoreSeries, params: SegmentationParams, fps: float
) -> list[Boundary]:
    """Flag cut frames; the first frame never cuts (a unit already starts at 0)."""
    if not series.scores:
        raise EmptySeries(f"{series.video_id}: no frame scores")
    values = series.values()
    window = params.adaptive_window
    cuts = []
    for position in range(1, len(values)):
        score = values[position]
        if score < params.min_content_val:
            continue
        neighbors = (
            values[max(0, position - window) : position]
            + values[position + 1 : position + 1 + window]
        )
        rolling_mean = sum(neighbors) / len(neighbors) if neighbors else 0.0
        if score / max(RATIO_EPSILON, rolling_mean) >= params.adaptive_ratio:
            frame_index = series.scores[position][0]
            cuts.append(Boundary(t=frame_index / fps, source=SOURCE_VISUAL))
    return cuts


def derive_speech_spans(
    transcript: Transcript, params: SegmentationParams
) -> list[SpeechSpan]:
    """Merge words into continuous-speech intervals; gaps >= pause threshold split."""
    spans: list[SpeechSpan] = []
    start: float | None = None
    end = 0.0
    for word in transcript.words:
        if start is None:
            start, end = word.start_s, word.end_s
        elif word.start_s - end < params.pause_threshold_s:
            end = max(end, word.end_s)
        else:
            if end > start:
                spans.append(SpeechSpan(start_s=start, end_s=end))
            start, end = word.start_s, word.end_s
    if start is not None and end > start:
        spans.append(SpeechSpan(start_s=start, end_s=end))
    return spans


def detect_speech_boundaries(
    transcript: Transcript, params: SegmentationParams
) -> list[Boundary]:
    """Pause midpoints plus marker-phrase starts, deduplicated.

    Within the dedup tolerance one boundary survives: the strongest source
    (pause over marker, silence being the stronger evidence), then the
    earliest time.
    """
    words = transcript.words
    candidates: list[tuple[float, int, str]] = []

    for prev, word in zip(words, words[1:]):
        gap = word.start_s - prev.end_s
        if gap >= params.pause_threshold_s:
            candidates.append((prev.end_s + gap / 2.0, 0, SOURCE_SPEECH_PAUSE))

    for index in _match_marker_starts(words, params.marker_lexicon):
        candidates.append((words[index].start_s, 1, SOURCE_SPEECH_MARKER))

    candidates.sort()
    boundaries: list[Boundary] = []
    group: list[tuple[float, int, str]] = []

    def flush() -> None:
        if not group:
            return
        t, _, source = min(group, key=lambda c: (c[1], c[0]))
        if t > 0:
            boundaries.append(Boundary(t=t, source=source))

    for candidate in candidates:
        if group and candidate[0] - group[0][0] > DEDUP_TOLERANCE_S:
            flush()
            group = []
        group.append(candidate)
    flush()
    return boundaries


def _match_marker_starts(words: list[TimedWord], lexicon: list[str]) -> list[int]:
    """Greedy longest-phrase-first matching over normalized tokens.

    Matched words are consumed, so "and then" does not also fire the bare
    "then" entry.
    """
    tokens = [normalize_token(word.text) for word in words]
    return match_starts(tokens, normalize_phrases(lexicon))
