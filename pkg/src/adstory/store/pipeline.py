"""Pipeline stages over a project directory.

Each stage reads the record files earlier stages wrote, computes, and writes
its own record file; stages are rerunnable and deterministic with the
lexicon annotator.
"""

from __future__ import annotations

import json
from pathlib import Path

from adstory.analytics.dwell import story_dwell_uplift
from adstory.analytics.gbt import GbtParams
from adstory.analytics.reports import render_dwell_report, render_uplift_report
from adstory.analytics.uplift import rank_arc_uplift
from adstory.annotator.base import (
    Annotator,
    ClusterSummary,
    classify_units,
    detect_story,
    propose_cluster_names,
)
from adstory.errors import ValidationFailure
from adstory.ingest.frames import compute_content_scores, load_score_csv
from adstory.ingest.performance import load_performance_records
from adstory.ingest.transcript import parse_transcript
from adstory.ingest.types import Transcript, VideoMeta
from adstory.segmentation.fusion import segment_video
from adstory.segmentation.types import SegmentationParams
from adstory.storyline.arcs import ArcPattern, match_arcs
from adstory.storyline.clustering import cluster_sequences
from adstory.storyline.types import STATUS_PROPOSED, canonicalize_sequence
from adstory.store import records as codecs
from adstory.store.project import Project
from adstory.taxonomy import Taxonomy


def ingest_stage(
    project: Project,
    input_manifest: Path,
    enforce_duration_filter: bool = False,
    min_impressions: int | None = None,
) -> dict:
    """Parse every input named by the manifest into validated records."""
    base = input_manifest.parent
    try:
        spec = json.loads(input_manifest.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"input manifest does not parse: {exc}") from exc

    videos: list[VideoMeta] = []
    transcripts: list[Transcript] = []
    scores = []
    seen = set()
    for entry in spec.get("videos", []):
        meta = VideoMeta(
            video_id=entry["video_id"],
            duration_s=float(entry["duration_s"]),
            fps=float(entry["fps"]),
            subvertical=entry.get("subvertical", "Other"),
        )
        if meta.video_id in seen:
            raise ValidationFailure(f"duplicate video_id {meta.video_id!r}")
        seen.add(meta.video_id)

        if entry.get("frames"):
            frames_path = base / entry["frames"]
            with frames_path.open("rb") as stream:
                series = compute_content_scores(stream, meta.video_id)
            with frames_path.open("rb") as stream:
                header = json.loads(stream.readline())
            meta.width = int(header["width"])
            meta.height = int(header["height"])
        elif entry.get("scores"):
            series = load_score_csv((base / entry["scores"]).read_bytes(), meta.video_id)
        else:
            series = None

        meta.validate(enforce_duration_filter=enforce_duration_filter)
        if series is not None:
            series.validate()
            scores.append(series)

        if entry.get("transcript"):
            transcript = parse_transcript(
                (base / entry["transcript"]).read_bytes(),
                entry.get("transcript_format", "words-json"),
                meta.video_id,
            )
        else:
            transcript = Transcript(video_id=meta.video_id, words=[])
        transcript.validate(duration_s=meta.duration_s)
        transcripts.append(transcript)
        videos.append(meta)

    perf = []
    if spec.get("performance"):
        perf = load_performance_records((base / spec["performance"]).read_bytes())
        known = {meta.video_id for meta in videos}
        unknown = [r.video_id for r in perf if r.video_id not in known]
        if unknown:
            raise ValidationFailure(
                f"performance rows for unknown videos: {', '.join(unknown)}"
            )
        if min_impressions is not None:
            dropped = {r.video_id for r in perf if r.impressions < min_impressions}
            perf = [r for r in perf if r.video_id not in dropped]
            videos = [m for m in videos if m.video_id not in dropped]
            transcripts = [t for t in transcripts if t.video_id not in dropped]
            scores = [s for s in scores if s.video_id not in dropped]

    videos.sort(key=lambda m: m.video_id)
    transcripts.sort(key=lambda t: t.video_id)
    scores.sort(key=lambda s: s.video_id)
    perf.sort(key=lambda r: r.video_id)

    project.save_records("videos", videos)
    project.save_records("transcripts", transcripts)
    project.save_records("scores", scores)
    project.save_records("perf", perf)
    project.update_params(
        "ingest",
        {
            "enforce_duration_filter": enforce_duration_filter,
            "min_impressions": min_impressions,
        },
    )
    return {"videos": len(videos), "performance_records": len(perf)}


def segment_stage(project: Project, params: SegmentationParams) -> dict:
    params.validate()
    videos = {m.video_id: m for m in project.load_records("videos")}
    transcripts = {t.video_id: t for t in project.load_records("transcripts")}
    scores = {s.video_id: s for s in project.load_records("scores")}
    if not videos:
        raise ValidationFailure("no videos ingested yet")
    units_by_video = {}
    for video_id in sorted(videos):
        meta = videos[video_id]
        transcript = transcripts.get(video_id) or Transcript(video_id, [])
        units_by_video[video_id] = segment_video(
            meta, scores.get(video_id), transcript, params
        )
    project.save_units(units_by_video)
    project.update_params("segmentation", params.to_dict())
    return {"videos": len(units_by_video),
            "units": sum(len(u) for u in units_by_video.values())}


def detect_story_stage(project: Project, annotator: Annotator) -> dict:
    transcripts = {t.video_id: t for t in project.load_records("transcripts")}
    units_by_video = project.load_units()
    if not units_by_video:
        raise ValidationFailure("no units; run segment first")
    verdicts = []
    for video_id in sorted(units_by_video):
        transcript = transcripts.get(video_id) or Transcript(video_id, [])
        verdicts.append(
            detect_story(units_by_video[video_id], transcript, annotator)
        )
    project.save_records("verdicts", verdicts)
    return {"videos": len(verdicts),
            "stories": sum(1 for v in verdicts if v.has_story)}


def classify_stage(project: Project, annotator: Annotator, taxonomy: Taxonomy) -> dict:
    units_by_video = project.load_units()
    if not units_by_video:
        raise ValidationFailure("no units; run segment first")
    annotations = []
    for video_id in sorted(units_by_video):
        video_annotations = classify_units(
            units_by_video[video_id], taxonomy, annotator
        )
        for annotation in video_annotations:
            annotation.video_id = video_id
        annotations.extend(video_annotations)
    project.save_records("annotations", annotations)
    return {"annotations": len(annotations)}


def canonicalize_stage(project: Project) -> dict:
    annotations = project.load_records("annotations")
    if not annotations:
        raise ValidationFailure("no annotations; run classify first")
    by_video: dict[str, list] = {}
    for annotation in annotations:
        by_video.setdefault(annotation.video_id, []).append(annotation)
    sequences = []
    for video_id in sorted(by_video):
        ordered = sorted(by_video[video_id], key=lambda a: a.unit_index)
        sequences.append(canonicalize_sequence(ordered))
    project.save_records("sequences", sequences)
    return {"sequences": len(sequences)}


def cluster_stage(project: Project, threshold: float) -> dict:
    sequences = project.load_records("sequences")
    if not sequences:
        raise ValidationFailure("no sequences; run canonicalize first")
    clusters = cluster_sequences(sequences, threshold=threshold)
    for cluster in clusters:
        cluster.status = STATUS_PROPOSED
    project.reset_clustering(clusters)
    project.update_params("clustering", {"threshold": threshold})
    return {"clusters": len(clusters)}


def summarize_stage(project: Project, annotator: Annotator) -> dict:
    """Propose names for unnamed clusters; humans confirm via curation."""
    clusters = project.load_records("clusters")
    if not clusters:
        raise ValidationFailure("no clusters; run cluster first")
    unnamed = [c for c in clusters if not c.name]
    summaries = [
        ClusterSummary(
            cluster_id=c.cluster_id,
            representative=list(c.representative),
            member_count=len(c.member_video_ids),
        )
        for c in unnamed
    ]
    proposals = propose_cluster_names(summaries, annotator)
    for cluster in clusters:
        if cluster.cluster_id in proposals:
            cluster.name = proposals[cluster.cluster_id]
    project.save_records("clusters", clusters)
    project.materialize_clusters(project.curation_state())
    return {"named": len(proposals)}


def story_flags(project: Project) -> dict[str, bool]:
    return {v.video_id: v.has_story for v in project.load_records("verdicts")}


def analyze_dwell_stage(project: Project, format: str = "csv") -> Path:
    perf = project.load_records("perf")
    flags = story_flags(project)
    result = story_dwell_uplift(perf, flags)
    params = {"records": len([r for r in perf if r.video_id in flags])}
    project.save_report_json(
        "dwell.json", {"params": params, **codecs.regression_to_record(result)}
    )
    text = render_dwell_report(result, params, format)
    suffix = "csv" if format == "csv" else "txt"
    return project.save_report(f"dwell.{suffix}", text)


def arc_memberships(
    project: Project, library: list[ArcPattern]
) -> dict[str, set[str]]:
    memberships = {}
    for sequence in project.load_records("sequences"):
        matches = match_arcs(sequence, library)
        memberships[sequence.video_id] = {pattern.abbrev for pattern, _ in matches}
    return memberships


def analyze_uplift_stage(
    project: Project,
    library: list[ArcPattern],
    format: str = "csv",
    gbt_params: GbtParams | None = None,
) -> Path:
    perf = project.load_records("perf")
    if not perf:
        raise ValidationFailure("no performance records; run ingest first")
    memberships = arc_memberships(project, library)
    report = rank_arc_uplift(perf, memberships, gbt_params=gbt_params)
    project.save_report_json("uplift.json", codecs.uplift_report_to_record(report))
    text = render_uplift_report(report, format)
    suffix = "csv" if format == "csv" else "txt"
    return project.save_report(f"uplift.{suffix}", text)
