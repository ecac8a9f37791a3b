"""Transcript parsing for SRT, WebVTT, and word-timestamped JSON.

Cue-level formats carry no word timing, so each cue's span is divided among
its words proportionally to character count (whitespace excluded); the words
tile the cue exactly.
"""

from __future__ import annotations

import json
import re

from adstory.errors import ValidationFailure
from adstory.ingest.types import TimedWord, Transcript

FORMATS = ("srt", "vtt", "words-json")

_SRT_TIME = re.compile(r"^(\d+):(\d{2}):(\d{2})[,.](\d{1,3})$")
_VTT_TIME = re.compile(r"^(?:(\d+):)?(\d{2}):(\d{2})\.(\d{3})$")
_VTT_TAG = re.compile(r"<[^>]*>")


class MalformedTimestamp(ValidationFailure):
    """A cue or word timestamp does not parse or is self-inconsistent."""


class OverlappingWords(ValidationFailure):
    """Word (or cue) start times decrease."""


class EncodingError(ValidationFailure):
    """Input bytes are not valid UTF-8 or not the expected document shape."""


def parse_transcript(data: bytes, format: str, video_id: str = "") -> Transcript:
    """Parse transcript bytes in the given format into a Transcript.

    Raises MalformedTimestamp, OverlappingWords, or EncodingError.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown transcript format {format!r}")
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"transcript is not valid UTF-8: {exc}") from exc

    if not text.strip():
        return Transcript(video_id=video_id, words=[])

    if format == "words-json":
        words = _parse_words_json(text)
    else:
        words = _parse_cue_format(text, format)

    prev_start = -1.0
    for word in words:
        if word.start_s < prev_start:
            raise OverlappingWords(
                f"word {word.text!r} starts at {word.start_s}s, before {prev_start}s"
            )
        prev_start = word.start_s
    return Transcript(video_id=video_id, words=words)


def serialize_transcript(transcript: Transcript) -> bytes:
    """Emit the words-json form; parse(serialize(t)) is field-exact."""
    payload = {
        "words": [
            {"w": w.text, "s": w.start_s, "e": w.end_s} for w in transcript.words
        ]
    }
    return json.dumps(payload, ensure_ascii=False).encode("utf-8")


def _parse_words_json(text: str) -> list[TimedWord]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EncodingError(f"words-json does not parse: {exc}") from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("words"), list):
        raise EncodingError('words-json must be {"words": [...]}')

    words = []
    for i, entry in enumerate(payload["words"]):
        if not isinstance(entry, dict):
            raise EncodingError(f"words[{i}] is not an object")
        try:
            token = str(entry["w"])
            start = float(entry["s"])
            end = float(entry["e"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTimestamp(f"words[{i}] missing or bad w/s/e: {exc}") from exc
        if start < 0 or end < start:
            raise MalformedTimestamp(
                f"words[{i}] {token!r} has bad span [{start}, {end}]"
            )
        words.append(TimedWord(text=token, start_s=start, end_s=end))
    return words


def _parse_cue_format(text: str, format: str) -> list[TimedWord]:
    pattern = _SRT_TIME if format == "srt" else _VTT_TIME
    words: list[TimedWord] = []
    for start, end, cue_text in _iter_cues(text, pattern):
        words.extend(_interpolate_words(cue_text, start, end))
    return words


def _iter_cues(text: str, time_pattern: re.Pattern[str]):
    blocks = re.split(r"\n\s*\n", text.replace("\r\n", "\n").replace("\r", "\n"))
    for block in blocks:
        lines = [line for line in block.split("\n") if line.strip()]
        if not lines:
            continue
        arrow_at = next((i for i, line in enumerate(lines) if "-->" in line), None)
        if arrow_at is None:
            # WEBVTT header, NOTE/STYLE blocks, bare SRT index lines.
            continue
        start, end = _parse_cue_times(lines[arrow_at], time_pattern)
        cue_text = " ".join(_VTT_TAG.sub("", line).strip() for line in lines[arrow_at + 1 :])
        yield start, end, cue_text


def _parse_cue_times(line: str, time_pattern: re.Pattern[str]) -> tuple[float, float]:
    left, _, right = line.partition("-->")
    # WebVTT allows cue settings after the end time.
    right = right.strip().split(" ")[0] if right.strip() else ""
    start = _parse_time(left.strip(), time_pattern, line)
    end = _parse_time(right, time_pattern, line)
    if end < start:
        raise MalformedTimestamp(f"cue ends before it starts: {line.strip()!r}")
    return start, end


def _parse_time(token: str, time_pattern: re.Pattern[str], line: str) -> float:
    match = time_pattern.match(token)
    if match is None:
        raise MalformedTimestamp(f"bad timestamp {token!r} in {line.strip()!r}")
    hours, minutes, seconds, millis = match.groups()
    return (
        int(hours or 0) * 3600.0
        + int(minutes) * 60.0
        + int(seconds)
        + int(millis.ljust(3, "0")) / 1000.0
    )


def _interpolate_words(cue_text: str, start: float, end: float) -> list[TimedWord]:
    tokens = cue_text.split()
    if not tokens:
        return []
    total_chars = sum(len(t) for t in tokens)
    duration = end - start
    words = []
    consumed = 0
    for token in tokens:
        word_start = start + duration * consumed / total_chars
        consumed += len(token)
        word_end = start + duration * consumed / total_chars
        words.append(TimedWord(text=token, start_s=word_start, end_s=word_end))
    # Last word must land exactly on the cue end despite float division.
    words[-1].end_s = end
    return words
