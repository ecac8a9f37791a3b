"""Visual-cut and speech-boundary detection fused into functional units."""

from adstory.segmentation.detect import (
    EmptySeries,
    detect_speech_boundaries,
    detect_visual_cuts,
    derive_speech_spans,
)
from adstory.segmentation.fusion import (
    BoundaryOutOfRange,
    fuse_boundaries,
    segment_video,
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

__all__ = [
    "Boundary",
    "BoundaryOutOfRange",
    "EmptySeries",
    "FunctionalUnit",
    "SOURCE_SPEECH_MARKER",
    "SOURCE_SPEECH_PAUSE",
    "SOURCE_VISUAL",
    "SegmentationParams",
    "SpeechSpan",
    "derive_speech_spans",
    "detect_speech_boundaries",
    "detect_visual_cuts",
    "fuse_boundaries",
    "segment_video",
]
