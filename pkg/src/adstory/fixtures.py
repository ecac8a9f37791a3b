"""Deterministic 5-video synthetic corpus used for end-to-end tests.

Each video is 16 seconds of 16x16 RGB at 4 fps: four 4-second solid-color
scenes with hard cuts, plus a word-timed transcript whose beats align with
the scenes (speech pauses straddle every cut). Written byte-identically on
every platform: content is pure integers and fixed strings.
"""

from __future__ import annotations

import json
from pathlib import Path

WIDTH = 16
HEIGHT = 16
FPS = 4.0
SCENE_SECONDS = 4.0
SCENES_PER_VIDEO = 4
DURATION_S = SCENE_SECONDS * SCENES_PER_VIDEO

# (video_id, subvertical, scene colors, scene texts)
FIXTURE_VIDEOS = [
    (
        "v001",
        "Food",
        [(20, 20, 40), (200, 60, 60), (60, 200, 60), (230, 230, 90)],
        [
            "I struggled with acne for years nothing helped",
            "it kept getting worse every single day",
            "then I found this amazing cream everything changed",
            "finally my skin cleared and I feel confident",
        ],
    ),
    (
        "v002",
        "Food",
        [(10, 60, 90), (220, 120, 40), (90, 30, 160), (40, 180, 180)],
        [
            "my stomach problems made travel difficult",
            "I was fed up because nothing worked",
            "that's when I discovered this herbal tea",
            "since then I enjoy every single trip",
        ],
    ),
    (
        "v003",
        "Food",
        [(250, 250, 250), (250, 40, 40), (40, 40, 250), (20, 20, 20)],
        [
            "huge sale fifty percent off everything",
            "only a few left in stock",
            "order today from our website",
            "the original family kitchen since day one",
        ],
    ),
    (
        "v004",
        "Food",
        [(120, 10, 10), (10, 120, 10), (10, 10, 120), (120, 120, 10)],
        [
            "hey stop scrolling you need to see this",
            "these shoes are designed to support every step",
            "I run farther than ever no more sore feet",
            "tap the link and get yours today",
        ],
    ),
    (
        "v005",
        "Food",
        [(80, 80, 80), (200, 200, 40), (40, 200, 200), (200, 40, 200)],
        [
            "thousands of customers rated us five stars",
            "real people real results you can trust",
            "join them and order today",
            "your new favorite is waiting",
        ],
    ),
]

PERF_CSV = """video_id,impressions,dwell_1,dwell_2,dwell_3,dwell_4,dwell_5,dwell_6,dwell_7,dwell_8,dwell_9,dwell_10,ctr,cvr,has_speech,video_length_s,aspect_ratio,campaign_objective,audience_size,advertiser_size,subvertical
v001,12000,0.92,0.81,0.74,0.69,0.63,0.58,0.52,0.47,0.41,0.36,0.031,0.0065,true,16.0,0.5625,Sales,250000.0,Medium,Food
v002,9500,0.90,0.79,0.71,0.66,0.60,0.55,0.50,0.44,0.39,0.33,0.027,0.0058,true,16.0,0.5625,Awareness,180000.0,Small,Food
v003,20000,0.85,0.70,0.61,0.54,0.48,0.42,0.37,0.33,0.29,0.25,0.022,0.0041,true,16.0,1.0,Sales,900000.0,Large,Food
v004,15000,0.88,0.75,0.67,0.60,0.54,0.49,0.43,0.38,0.34,0.29,0.026,0.0049,true,16.0,0.5625,Traffic,420000.0,Medium,Food
v005,11000,0.86,0.72,0.64,0.57,0.51,0.45,0.40,0.36,0.31,0.27,0.024,0.0052,true,16.0,1.0,Sales,300000.0,Small,Food
"""


def _frame(color: tuple[int, int, int]) -> bytes:
    return bytes(color) * (WIDTH * HEIGHT)


def _adframes(colors: list[tuple[int, int, int]]) -> bytes:
    header = json.dumps(
        {
            "magic": "adframes1",
            "width": WIDTH,
            "height": HEIGHT,
            "fps": FPS,
            "pixfmt": "rgb24",
        }
    ).encode("utf-8")
    frames_per_scene = int(SCENE_SECONDS * FPS)
    body = b"".join(_frame(color) * frames_per_scene for color in colors)
    return header + b"\n" + body


def _words_json(texts: list[str]) -> bytes:
    """Spread each beat's words across its scene, 0.3s in from both edges.

    Word gaps stay under the 0.5s pause threshold inside a beat; the 0.6s
    silences across scene edges become pause boundaries at exactly the cut.
    """
    words = []
    for scene_index, text in enumerate(texts):
        tokens = text.split()
        start = scene_index * SCENE_SECONDS + 0.3
        end = (scene_index + 1) * SCENE_SECONDS - 0.3
        slot = (end - start) / len(tokens)
        for position, token in enumerate(tokens):
            word_start = round(start + position * slot, 3)
            word_end = round(start + position * slot + 0.6 * slot, 3)
            words.append({"w": token, "s": word_start, "e": word_end})
    return json.dumps({"words": words}).encode("utf-8")


def write_fixture_corpus(out_dir: str | Path) -> Path:
    """Write the ADFRAMES streams, transcripts, perf CSV, and input manifest;
    returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_videos = []
    for video_id, subvertical, colors, texts in FIXTURE_VIDEOS:
        (out / f"{video_id}.adframes").write_bytes(_adframes(colors))
        (out / f"{video_id}.words.json").write_bytes(_words_json(texts))
        manifest_videos.append(
            {
                "video_id": video_id,
                "duration_s": DURATION_S,
                "fps": FPS,
                "subvertical": subvertical,
                "frames": f"{video_id}.adframes",
                "transcript": f"{video_id}.words.json",
                "transcript_format": "words-json",
            }
        )
    (out / "perf.csv").write_text(PERF_CSV, encoding="utf-8")
    manifest_path = out / "input_manifest.json"
    manifest_path.write_text(
        json.dumps(
            {"videos": manifest_videos, "performance": "perf.csv"}, indent=2
        )
        + "\n",
        encoding="utf-8",
    )
    return manifest_path


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "fixture_corpus"
    path = write_fixture_corpus(target)
    print(f"wrote fixture corpus at {path.parent}")
