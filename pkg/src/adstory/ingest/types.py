"""Validated in-memory records shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from adstory.errors import ValidationFailure

SUBVERTICALS = ("ApparelAccessories", "Beauty", "Food", "Beverages", "Other")
CAMPAIGN_OBJECTIVES = ("Awareness", "Traffic", "Sales", "Other")
ADVERTISER_SIZES = ("Small", "Medium", "Large")

# Word end times may exceed the stated video duration by this much before we
# reject the transcript (ASR tools routinely overshoot the final word).
TRANSCRIPT_END_TOLERANCE_S = 0.5


class ValueOutOfRange(ValidationFailure):
    """A field violates its documented range or enum."""


@dataclass
class VideoMeta:
    """Identity and geometry of one ad video.

    width/height are None when frame scores were precomputed externally and
    no raw frames ever reach this process.
    """

    video_id: str
    duration_s: float
    fps: float
    subvertical: str = "Other"
    width: int | None = None
    height: int | None = None

    def validate(self, enforce_duration_filter: bool = False) -> None:
        if not self.video_id:
            raise ValueOutOfRange("video_id must be non-empty")
        if self.duration_s <= 0:
            raise ValueOutOfRange(f"{self.video_id}: duration_s must be > 0")
        if self.fps <= 0:
            raise ValueOutOfRange(f"{self.video_id}: fps must be > 0")
        for name, value in (("width", self.width), ("height", self.height)):
            if value is not None and value <= 0:
                raise ValueOutOfRange(f"{self.video_id}: {name} must be > 0")
        if self.subvertical not in SUBVERTICALS:
            raise ValueOutOfRange(
                f"{self.video_id}: unknown subvertical {self.subvertical!r}"
            )
        if enforce_duration_filter and not 15.0 <= self.duration_s <= 60.0:
            raise ValueOutOfRange(
                f"{self.video_id}: duration {self.duration_s}s outside [15, 60]"
            )


@dataclass
class FrameScoreSeries:
    """Per-frame content-change scores for one video."""

    video_id: str
    scores: list[tuple[int, float]]

    def validate(self) -> None:
        prev = -1
        for i, (frame_index, score) in enumerate(self.scores):
            if i == 0 and frame_index != 0:
                raise ValueOutOfRange(f"{self.video_id}: scores must start at frame 0")
            if frame_index <= prev:
                raise ValueOutOfRange(
                    f"{self.video_id}: frame_index not strictly increasing at {frame_index}"
                )
            if not 0.0 <= score <= 255.0:
                raise ValueOutOfRange(
                    f"{self.video_id}: score {score} at frame {frame_index} outside [0, 255]"
                )
            prev = frame_index

    def values(self) -> list[float]:
        return [score for _, score in self.scores]


@dataclass
class TimedWord:
    text: str
    start_s: float
    end_s: float


@dataclass
class Transcript:
    """Word-timestamped speech for one video; empty for silent ads."""

    video_id: str
    words: list[TimedWord] = field(default_factory=list)

    def validate(self, duration_s: float | None = None) -> None:
        prev_start = -1.0
        for word in self.words:
            if word.start_s < 0 or word.end_s < word.start_s:
                raise ValueOutOfRange(
                    f"{self.video_id}: word {word.text!r} has bad span "
                    f"[{word.start_s}, {word.end_s}]"
                )
            if word.start_s < prev_start:
                raise ValueOutOfRange(
                    f"{self.video_id}: words not sorted by start_s at {word.text!r}"
                )
            if (
                duration_s is not None
                and word.end_s > duration_s + TRANSCRIPT_END_TOLERANCE_S
            ):
                raise ValueOutOfRange(
                    f"{self.video_id}: word {word.text!r} ends at {word.end_s}s, "
                    f"past duration {duration_s}s"
                )
            prev_start = word.start_s

    def text(self) -> str:
        return " ".join(w.text for w in self.words)


@dataclass
class Covariates:
    """Video, ad, and campaign traits used as regression controls."""

    has_speech: bool
    video_length_s: float
    aspect_ratio: float
    campaign_objective: str
    audience_size: float
    advertiser_size: str
    subvertical: str

    def validate(self, video_id: str) -> None:
        if self.aspect_ratio <= 0:
            raise ValueOutOfRange(f"{video_id}: aspect_ratio must be > 0")
        if self.audience_size < 0:
            raise ValueOutOfRange(f"{video_id}: audience_size must be >= 0")
        if self.campaign_objective not in CAMPAIGN_OBJECTIVES:
            raise ValueOutOfRange(
                f"{video_id}: unknown campaign_objective {self.campaign_objective!r}"
            )
        if self.advertiser_size not in ADVERTISER_SIZES:
            raise ValueOutOfRange(
                f"{video_id}: unknown advertiser_size {self.advertiser_size!r}"
            )
        if self.subvertical not in SUBVERTICALS:
            raise ValueOutOfRange(
                f"{video_id}: unknown subvertical {self.subvertical!r}"
            )


@dataclass
class PerformanceRecord:
    """Dwell curve plus CTR/CVR and covariates for one video.

    dwell[s-1] is the fraction of viewers who watched at least s seconds,
    for s = 1..10; a viewer counted at s+1 was necessarily counted at s, so
    the curve is non-increasing.
    """

    video_id: str
    impressions: int
    dwell: list[float]
    ctr: float
    cvr: float
    covariates: Covariates

    def validate(self) -> None:
        if self.impressions <= 0:
            raise ValueOutOfRange(f"{self.video_id}: impressions must be > 0")
        if len(self.dwell) != 10:
            raise ValueOutOfRange(
                f"{self.video_id}: dwell must have 10 entries, got {len(self.dwell)}"
            )
        for s, value in enumerate(self.dwell, start=1):
            if not 0.0 <= value <= 1.0:
                raise ValueOutOfRange(
                    f"{self.video_id}: dwell_{s}={value} outside [0, 1]"
                )
        for name, value in (("ctr", self.ctr), ("cvr", self.cvr)):
            if not 0.0 <= value <= 1.0:
                raise ValueOutOfRange(f"{self.video_id}: {name}={value} outside [0, 1]")
        self.covariates.validate(self.video_id)
