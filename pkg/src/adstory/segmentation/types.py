"""Boundary, span, and unit types plus the tunable segmentation knobs."""

from __future__ import annotations

from dataclasses import dataclass, field

from adstory.errors import ValidationFailure

SOURCE_VISUAL = "Visual"
SOURCE_SPEECH_PAUSE = "SpeechPause"
SOURCE_SPEECH_MARKER = "SpeechMarker"

DEFAULT_MARKER_LEXICON = [
    "and so",
    "and then",
    "but then",
    "so then",
    "then",
    "now",
    "however",
    "meanwhile",
]


@dataclass(frozen=True)
class Boundary:
    """A candidate unit edge strictly inside (0, duration)."""

    t: float
    source: str
    snapped: bool = False


@dataclass(frozen=True)
class SpeechSpan:
    """A maximal interval of continuous speech."""

    start_s: float
    end_s: float


@dataclass
class FunctionalUnit:
    """One communicative segment; units tile [0, duration] exactly."""

    index: int
    start_s: float
    end_s: float
    transcript_text: str = ""
    keyframe_indices: list[int] = field(default_factory=list)


@dataclass
class SegmentationParams:
    adaptive_ratio: float = 3.0
    adaptive_window: int = 2
    min_content_val: float = 15.0
    pause_threshold_s: float = 0.5
    marker_lexicon: list[str] = field(
        default_factory=lambda: list(DEFAULT_MARKER_LEXICON)
    )
    snap_tolerance_s: float = 0.25
    min_unit_duration_s: float = 1.0
    suppress_visual_inside_speech: bool = True

    def validate(self) -> None:
        positive = {
            "adaptive_ratio": self.adaptive_ratio,
            "adaptive_window": self.adaptive_window,
            "min_content_val": self.min_content_val,
            "pause_threshold_s": self.pause_threshold_s,
        }
        for name, value in positive.items():
            if value <= 0:
                raise ValidationFailure(f"{name} must be positive, got {value}")
        if self.adaptive_ratio <= 1:
            raise ValidationFailure("adaptive_ratio must be > 1")
        if self.snap_tolerance_s < 0 or self.min_unit_duration_s < 0:
            raise ValidationFailure("tolerances must be non-negative")
        if not self.marker_lexicon or any(
            not phrase.strip() for phrase in self.marker_lexicon
        ):
            raise ValidationFailure("marker_lexicon phrases must be non-empty")

    @classmethod
    def from_config(cls, config: dict) -> "SegmentationParams":
        """Build params from a config mapping; unknown keys are rejected."""
        known = set(cls().__dict__)
        unknown = set(config) - known
        if unknown:
            raise ValidationFailure(
                f"unknown segmentation params: {', '.join(sorted(unknown))}"
            )
        params = cls(**config)
        params.validate()
        return params

    def to_dict(self) -> dict:
        return {
            "adaptive_ratio": self.adaptive_ratio,
            "adaptive_window": self.adaptive_window,
            "min_content_val": self.min_content_val,
            "pause_threshold_s": self.pause_threshold_s,
            "marker_lexicon": list(self.marker_lexicon),
            "snap_tolerance_s": self.snap_tolerance_s,
            "min_unit_duration_s": self.min_unit_duration_s,
            "suppress_visual_inside_speech": self.suppress_visual_inside_speech,
        }
