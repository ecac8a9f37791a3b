"""JSONL codecs for every entity kind the project stores.

Records serialize with sorted keys and no float mangling, so a re-saved file
is byte-identical and parse(serialize(x)) is field-exact.
"""

from __future__ import annotations

from adstory.analytics.dwell import RegressionResult, SecondEffect
from adstory.analytics.uplift import UpliftReport, UpliftRow
from adstory.annotator.base import StoryVerdict, UnitAnnotation
from adstory.ingest.types import (
    Covariates,
    FrameScoreSeries,
    PerformanceRecord,
    TimedWord,
    Transcript,
    VideoMeta,
)
from adstory.segmentation.types import FunctionalUnit
from adstory.storyline.types import Cluster, CurationEvent, StorylineSequence


def video_to_record(meta: VideoMeta) -> dict:
    return {
        "video_id": meta.video_id,
        "duration_s": meta.duration_s,
        "fps": meta.fps,
        "subvertical": meta.subvertical,
        "width": meta.width,
        "height": meta.height,
    }


def video_from_record(record: dict) -> VideoMeta:
    return VideoMeta(**record)


def transcript_to_record(transcript: Transcript) -> dict:
    return {
        "video_id": transcript.video_id,
        "words": [
            {"w": w.text, "s": w.start_s, "e": w.end_s} for w in transcript.words
        ],
    }


def transcript_from_record(record: dict) -> Transcript:
    return Transcript(
        video_id=record["video_id"],
        words=[
            TimedWord(text=w["w"], start_s=w["s"], end_s=w["e"])
            for w in record["words"]
        ],
    )


def scores_to_record(series: FrameScoreSeries) -> dict:
    return {
        "video_id": series.video_id,
        "scores": [[index, score] for index, score in series.scores],
    }


def scores_from_record(record: dict) -> FrameScoreSeries:
    return FrameScoreSeries(
        video_id=record["video_id"],
        scores=[(int(index), float(score)) for index, score in record["scores"]],
    )


def unit_to_record(video_id: str, unit: FunctionalUnit) -> dict:
    return {
        "video_id": video_id,
        "index": unit.index,
        "start_s": unit.start_s,
        "end_s": unit.end_s,
        "transcript_text": unit.transcript_text,
        "keyframe_indices": list(unit.keyframe_indices),
    }


def unit_from_record(record: dict) -> tuple[str, FunctionalUnit]:
    return record["video_id"], FunctionalUnit(
        index=record["index"],
        start_s=record["start_s"],
        end_s=record["end_s"],
        transcript_text=record["transcript_text"],
        keyframe_indices=list(record["keyframe_indices"]),
    )


def verdict_to_record(verdict: StoryVerdict) -> dict:
    return {
        "video_id": verdict.video_id,
        "has_story": verdict.has_story,
        "rationale": verdict.rationale,
        "signals": list(verdict.signals),
    }


def verdict_from_record(record: dict) -> StoryVerdict:
    return StoryVerdict(**record)


def annotation_to_record(annotation: UnitAnnotation) -> dict:
    return {
        "video_id": annotation.video_id,
        "unit_index": annotation.unit_index,
        "role_id": annotation.role_id,
        "confidence": annotation.confidence,
        "rationale": annotation.rationale,
    }


def annotation_from_record(record: dict) -> UnitAnnotation:
    return UnitAnnotation(**record)


def sequence_to_record(sequence: StorylineSequence) -> dict:
    return {"video_id": sequence.video_id, "roles": list(sequence.roles)}


def sequence_from_record(record: dict) -> StorylineSequence:
    return StorylineSequence(video_id=record["video_id"], roles=list(record["roles"]))


def cluster_to_record(cluster: Cluster) -> dict:
    return {
        "cluster_id": cluster.cluster_id,
        "representative": list(cluster.representative),
        "member_video_ids": sorted(cluster.member_video_ids),
        "name": cluster.name,
        "status": cluster.status,
        "merged_into": cluster.merged_into,
    }


def cluster_from_record(record: dict) -> Cluster:
    return Cluster(
        cluster_id=record["cluster_id"],
        representative=list(record["representative"]),
        member_video_ids=set(record["member_video_ids"]),
        name=record["name"],
        status=record["status"],
        merged_into=record["merged_into"],
    )


def event_to_record(event: CurationEvent) -> dict:
    return {
        "seq_no": event.seq_no,
        "timestamp": event.timestamp,
        "actor": event.actor,
        "action": event.action,
        "payload": event.payload,
    }


def event_from_record(record: dict) -> CurationEvent:
    return CurationEvent(**record)


def perf_to_record(record: PerformanceRecord) -> dict:
    cov = record.covariates
    return {
        "video_id": record.video_id,
        "impressions": record.impressions,
        "dwell": list(record.dwell),
        "ctr": record.ctr,
        "cvr": record.cvr,
        "covariates": {
            "has_speech": cov.has_speech,
            "video_length_s": cov.video_length_s,
            "aspect_ratio": cov.aspect_ratio,
            "campaign_objective": cov.campaign_objective,
            "audience_size": cov.audience_size,
            "advertiser_size": cov.advertiser_size,
            "subvertical": cov.subvertical,
        },
    }


def perf_from_record(record: dict) -> PerformanceRecord:
    return PerformanceRecord(
        video_id=record["video_id"],
        impressions=record["impressions"],
        dwell=list(record["dwell"]),
        ctr=record["ctr"],
        cvr=record["cvr"],
        covariates=Covariates(**record["covariates"]),
    )


def uplift_report_to_record(report: UpliftReport) -> dict:
    return {
        "params": report.params,
        "rows": [
            {
                "metric": row.metric,
                "subvertical": row.subvertical,
                "arc_abbrev": row.arc_abbrev,
                "uplift_pct": row.uplift_pct,
                "support": row.support,
                "rank": row.rank,
            }
            for row in report.rows
        ],
        "skipped": report.skipped,
    }


def uplift_report_from_record(record: dict) -> UpliftReport:
    return UpliftReport(
        params=record["params"],
        rows=[UpliftRow(**row) for row in record["rows"]],
        skipped=list(record["skipped"]),
    )


def regression_to_record(result: RegressionResult) -> dict:
    return {
        "controls": list(result.controls),
        "effects": [
            {
                "second": e.second,
                "coef_pp": e.coef_pp,
                "std_err": e.std_err,
                "n": e.n,
                "baseline_nonstory_dwell": e.baseline_nonstory_dwell,
                "relative_change": e.relative_change,
            }
            for e in result.effects
        ],
    }


def regression_from_record(record: dict) -> RegressionResult:
    return RegressionResult(
        effects=[SecondEffect(**e) for e in record["effects"]],
        controls=list(record["controls"]),
    )
