"""Parsers for everything the pipeline consumes: transcripts, frame streams
or precomputed frame scores, and performance/covariate tables."""

from adstory.ingest.frames import (
    BadHeader,
    TruncatedFrame,
    ZeroFrames,
    compute_content_scores,
    dump_score_csv,
    load_score_csv,
    read_adframes,
)
from adstory.ingest.performance import (
    DwellNotMonotone,
    MissingColumn,
    dump_performance_csv,
    load_performance_records,
)
from adstory.ingest.transcript import (
    EncodingError,
    MalformedTimestamp,
    OverlappingWords,
    parse_transcript,
    serialize_transcript,
)
from adstory.ingest.types import (
    CAMPAIGN_OBJECTIVES,
    SUBVERTICALS,
    Covariates,
    FrameScoreSeries,
    PerformanceRecord,
    TimedWord,
    Transcript,
    ValueOutOfRange,
    VideoMeta,
)

__all__ = [
    "BadHeader",
    "CAMPAIGN_OBJECTIVES",
    "Covariates",
    "DwellNotMonotone",
    "EncodingError",
    "FrameScoreSeries",
    "MalformedTimestamp",
    "MissingColumn",
    "OverlappingWords",
    "PerformanceRecord",
    "SUBVERTICALS",
    "TimedWord",
    "Transcript",
    "TruncatedFrame",
    "ValueOutOfRange",
    "VideoMeta",
    "ZeroFrames",
    "compute_content_scores",
    "dump_performance_csv",
    "dump_score_csv",
    "load_performance_records",
    "load_score_csv",
    "parse_transcript",
    "read_adframes",
    "serialize_transcript",
]
