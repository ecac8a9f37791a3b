"""ADFRAMES/1 raw frame streams and per-frame content-change scores.

The score for frame t is the mean absolute per-pixel HSV delta against frame
t-1, averaged over the three channels, with every channel scaled to [0, 255]
(hue maps the full turn onto 255). Frame 0 scores 0 by definition.
"""

from __future__ import annotations

import csv
import io
import json
from typing import BinaryIO, Iterator

import numpy as np

from adstory.errors import ValidationFailure
from adstory.ingest.types import FrameScoreSeries

ADFRAMES_MAGIC = "adframes1"


class BadHeader(ValidationFailure):
    """The stream header line is missing, malformed, or unsupported."""


class TruncatedFrame(ValidationFailure):
    """The stream ended mid-frame."""


class ZeroFrames(ValidationFailure):
    """The stream carries a header but no frames."""


def read_adframes(stream: BinaryIO) -> tuple[dict, Iterator[np.ndarray]]:
    """Read an ADFRAMES/1 header and return it with a frame iterator.

    Frames are yielded as uint8 arrays of shape (height, width, 3), RGB.
    """
    header_line = stream.readline()
    if not header_line.endswith(b"\n"):
        raise BadHeader("missing newline-terminated header line")
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BadHeader(f"header is not a UTF-8 JSON line: {exc}") from exc
    if not isinstance(header, dict) or header.get("magic") != ADFRAMES_MAGIC:
        raise BadHeader(f"bad magic, expected {ADFRAMES_MAGIC!r}")
    if header.get("pixfmt") != "rgb24":
        raise BadHeader(f"unsupported pixfmt {header.get('pixfmt')!r}")
    try:
        width = int(header["width"])
        height = int(header["height"])
        fps = float(header["fps"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadHeader(f"missing or bad width/height/fps: {exc}") from exc
    if width <= 0 or height <= 0 or fps <= 0:
        raise BadHeader("width, height, and fps must be positive")

    frame_bytes = width * height * 3

    def frames() -> Iterator[np.ndarray]:
        while True:
            chunk = stream.read(frame_bytes)
            if not chunk:
                return
            if len(chunk) < frame_bytes:
                raise TruncatedFrame(
                    f"expected {frame_bytes} bytes per frame, got {len(chunk)}"
                )
            yield np.frombuffer(chunk, dtype=np.uint8).reshape(height, width, 3)

    return header, frames()


def compute_content_scores(stream: BinaryIO, video_id: str = "") -> FrameScoreSeries:
    """Score every frame of an ADFRAMES/1 stream; raises ZeroFrames if empty."""
    _, frames = read_adframes(stream)
    scores: list[tuple[int, float]] = []
    prev_hsv: np.ndarray | None = None
    for index, frame in enumerate(frames):
        hsv = _rgb_to_scaled_hsv(frame)
        if prev_hsv is None:
            scores.append((0, 0.0))
        else:
            deltas = np.mean(np.abs(hsv - prev_hsv), axis=(0, 1))
            scores.append((index, float((deltas[0] + deltas[1] + deltas[2]) / 3.0)))
        prev_hsv = hsv
    if not scores:
        raise ZeroFrames("stream contains no frames")
    return FrameScoreSeries(video_id=video_id, scores=scores)


def _rgb_to_scaled_hsv(frame: np.ndarray) -> np.ndarray:
    """Convert uint8 RGB pixels to float64 HSV with all channels in [0, 255].

    Hue follows the usual hexagonal formula with the full turn mapped to 255;
    achromatic pixels get hue 0 and saturation 0.
    """
    rgb = frame.astype(np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = np.max(rgb, axis=-1)
    minc = np.min(rgb, axis=-1)
    rangec = maxc - minc
    achromatic = rangec == 0.0
    safe_range = np.where(achromatic, 1.0, rangec)

    s = np.where(achromatic, 0.0, rangec / np.where(achromatic, 1.0, maxc))
    rc = (maxc - r) / safe_range
    gc = (maxc - g) / safe_range
    bc = (maxc - b) / safe_range
    h = np.where(r == maxc, bc - gc, np.where(g == maxc, 2.0 + rc - bc, 4.0 + gc - rc))
    h = (h / 6.0) % 1.0
    h = np.where(achromatic, 0.0, h)
    return np.stack([h * 255.0, s * 255.0, maxc * 255.0], axis=-1)


def load_score_csv(data: bytes, video_id: str = "") -> FrameScoreSeries:
    """Load a precomputed `frame_index,score` CSV."""
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise BadHeader(f"score CSV is not valid UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise BadHeader("score CSV is empty") from None
    if [column.strip() for column in header] != ["frame_index", "score"]:
        raise BadHeader(f"score CSV header must be frame_index,score, got {header}")
    scores: list[tuple[int, float]] = []
    for row in reader:
        if not row:
            continue
        try:
            scores.append((int(row[0]), float(row[1])))
        except (IndexError, ValueError) as exc:
            raise BadHeader(f"bad score row {row}: {exc}") from exc
    if not scores:
        raise ZeroFrames("score CSV has no rows")
    series = FrameScoreSeries(video_id=video_id, scores=scores)
    series.validate()
    return series


def dump_score_csv(series: FrameScoreSeries) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["frame_index", "score"])
    for frame_index, score in series.scores:
        writer.writerow([frame_index, repr(score)])
    return out.getvalue().encode("utf-8")
