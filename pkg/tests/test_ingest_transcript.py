from __future__ import annotations

import random

import pytest

from adstory.ingest import (
    EncodingError,
    MalformedTimestamp,
    OverlappingWords,
    TimedWord,
    Transcript,
    parse_transcript,
    serialize_transcript,
)

SRT_SAMPLE = b"""1
00:00:01,000 --> 00:00:02,500
Hello world

2
00:00:03,000 --> 00:00:04,000
again
"""

VTT_SAMPLE = b"""WEBVTT

NOTE this block is ignored

00:01.000 --> 00:02.500 align:start
Hello <b>world</b>
"""


@pytest.mark.parametrize("format", ["srt", "vtt", "words-json"])
def test_empty_file_gives_empty_transcript(format):
    transcript = parse_transcript(b"", format, "v1")
    assert transcript.words == []


def test_srt_character_proportional_interpolation():
    transcript = parse_transcript(SRT_SAMPLE, "srt", "v1")
    spans = [(w.text, w.start_s, w.end_s) for w in transcript.words]
    assert spans == [("Hello", 1.0, 1.75), ("world", 1.75, 2.5), ("again", 3.0, 4.0)]


def test_vtt_tags_stripped_and_settings_ignored():
    transcript = parse_transcript(VTT_SAMPLE, "vtt", "v1")
    spans = [(w.text, w.start_s, w.end_s) for w in transcript.words]
    assert spans == [("Hello", 1.0, 1.75), ("world", 1.75, 2.5)]


def test_words_json_identity_parse():
    transcript = parse_transcript(
        b'{"words":[{"w":"go","s":0.2,"e":0.5}]}', "words-json", "v1"
    )
    assert [(w.text, w.start_s, w.end_s) for w in transcript.words] == [("go", 0.2, 0.5)]


def test_interpolation_excludes_whitespace_from_char_count():
    # 3 + 1 chars: "one" takes 3/4 of the cue, "a" the final 1/4.
    data = b"1\n00:00:00,000 --> 00:00:04,000\none a\n"
    transcript = parse_transcript(data, "srt", "v1")
    assert [(w.start_s, w.end_s) for w in transcript.words] == [(0.0, 3.0), (3.0, 4.0)]


def test_round_trip_is_field_exact():
    rng = random.Random(20240824)
    for _ in range(200):
        words = []
        t = 0.0
        for _ in range(rng.randrange(0, 12)):
            t += rng.random() * 2
            end = t + rng.random()
            words.append(TimedWord(text=f"w{rng.randrange(1000)}", start_s=t, end_s=end))
        original = Transcript(video_id="vid", words=words)
        recovered = parse_transcript(serialize_transcript(original), "words-json", "vid")
        assert recovered.words == original.words


def test_malformed_timestamp_rejected():
    with pytest.raises(MalformedTimestamp):
        parse_transcript(b"1\n00:00:xx,000 --> 00:00:02,000\nhi\n", "srt")
    with pytest.raises(MalformedTimestamp):
        parse_transcript(b"1\n00:00:03,000 --> 00:00:02,000\nhi\n", "srt")
    with pytest.raises(MalformedTimestamp):
        parse_transcript(b'{"words":[{"w":"x","s":2.0,"e":1.0}]}', "words-json")


def test_decreasing_starts_rejected():
    data = b'{"words":[{"w":"b","s":2.0,"e":3.0},{"w":"a","s":1.0,"e":1.5}]}'
    with pytest.raises(OverlappingWords):
        parse_transcript(data, "words-json")
    srt = b"1\n00:00:05,000 --> 00:00:06,000\nlate\n\n2\n00:00:01,000 --> 00:00:02,000\nearly\n"
    with pytest.raises(OverlappingWords):
        parse_transcript(srt, "srt")


def test_bad_encoding_and_bad_json_rejected():
    with pytest.raises(EncodingError):
        parse_transcript(b"\xff\xfe\x00bad", "srt")
    with pytest.raises(EncodingError):
        parse_transcript(b"{not json", "words-json")
    with pytest.raises(EncodingError):
        parse_transcript(b'{"cues": []}', "words-json")


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        parse_transcript(b"", "ass")
