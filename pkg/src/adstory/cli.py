"""The adstory command line: stage-by-stage pipeline over a project directory.

Exit codes: 0 success, 1 validation error, 2 I/O or annotator failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from adstory.analytics.gbt import GbtParams
from adstory.analytics.reports import render_dwell_report, render_uplift_report
from adstory.annotator.base import AnnotatorConfig
from adstory.annotator.lexicon import LexiconAnnotator, load_lexicons
from adstory.annotator.remote import RemoteAnnotator
from adstory.errors import OperationalFailure, ValidationFailure
from adstory.segmentation.types import SegmentationParams
from adstory.storyline.arcs import default_arc_library, load_arc_library
from adstory.storyline.clustering import DEFAULT_CLUSTER_THRESHOLD
from adstory.store import pipeline
from adstory.store.api import ApiServer
from adstory.store.project import Project
from adstory.store import records as codecs
from adstory.taxonomy import load_default_taxonomy, load_taxonomy

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_OPERATIONAL = 2


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValidationFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OperationalFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adstory",
        description="Segment ads into functional units, label roles, recover "
        "storylines, and link them to performance.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, help):
        sub = commands.add_parser(name, help=help)
        sub.add_argument("--project", required=True, help="project directory")
        sub.add_argument("--config", help="JSON config file with stage sections")
        sub.set_defaults(handler=handler)
        return sub

    sub = command("ingest", cmd_ingest, "parse inputs into a project")
    sub.add_argument("--input", required=True, help="input manifest JSON")
    sub.add_argument("--name", help="project name (defaults to directory name)")
    sub.add_argument(
        "--enforce-duration-filter",
        action="store_true",
        help="reject videos outside 15-60 seconds",
    )
    sub.add_argument("--min-impressions", type=int, default=None)
    _add_taxonomy_flags(sub)

    sub = command("segment", cmd_segment, "detect cuts and fuse functional units")
    for flag, kind in [
        ("--adaptive-ratio", float),
        ("--adaptive-window", int),
        ("--min-content-val", float),
        ("--pause-threshold-s", float),
        ("--snap-tolerance-s", float),
        ("--min-unit-duration-s", float),
    ]:
        sub.add_argument(flag, type=kind, default=None)
    sub.add_argument("--marker-lexicon", help="comma-separated marker phrases")
    sub.add_argument(
        "--suppress-visual-inside-speech",
        choices=["true", "false"],
        default=None,
    )

    for name, handler, help in [
        ("detect-story", cmd_detect_story, "label each video as story / non-story"),
        ("classify", cmd_classify, "label each unit with a functional role"),
        ("summarize", cmd_summarize, "propose names for storyline clusters"),
    ]:
        sub = command(name, handler, help)
        _add_annotator_flags(sub)
        _add_taxonomy_flags(sub)

    command("canonicalize", cmd_canonicalize, "reduce annotations to role sequences")

    sub = command("cluster", cmd_cluster, "group similar sequences")
    sub.add_argument("--threshold", type=float, default=None)

    sub = command("analyze-dwell", cmd_analyze_dwell, "per-second story dwell effect")
    sub.add_argument("--format", choices=["csv", "table"], default="csv")

    sub = command("analyze-uplift", cmd_analyze_uplift, "arc uplift per metric cell")
    sub.add_argument("--format", choices=["csv", "table"], default="csv")
    sub.add_argument("--arc-library", help="arc pattern config JSON")
    sub.add_argument("--rounds", type=int, default=None)
    sub.add_argument("--learning-rate", type=float, default=None)
    sub.add_argument("--max-depth", type=int, default=None)
    sub.add_argument("--min-leaf", type=int, default=None)
    _add_taxonomy_flags(sub)

    sub = command("serve", cmd_serve, "serve the HTTP API and curation UI")
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument("--port", type=int, default=8765)
    sub.add_argument("--ui-dir", help="directory with the built UI")
    sub.add_argument("--arc-library")
    _add_taxonomy_flags(sub)

    sub = command("export-report", cmd_export_report, "re-render a stored report")
    sub.add_argument("--kind", choices=["dwell", "uplift"], required=True)
    sub.add_argument("--format", choices=["csv", "table"], default="csv")
    sub.add_argument("--out", required=True)

    return parser


def _add_annotator_flags(sub) -> None:
    sub.add_argument("--annotator", choices=["lexicon", "remote"], default=None)
    sub.add_argument("--endpoint-url", default=None)
    sub.add_argument("--model-name", default=None)
    sub.add_argument("--timeout-s", type=float, default=None)
    sub.add_argument("--max-in-flight", type=int, default=None)
    sub.add_argument("--max-attempts", type=int, default=None)
    sub.add_argument("--backoff-base-s", type=float, default=None)
    sub.add_argument("--lexicons", help="lexicon config JSON for the offline annotator")


def _add_taxonomy_flags(sub) -> None:
    sub.add_argument("--taxonomy", help="taxonomy config JSON (default: bundled)")
    sub.add_argument(
        "--no-strict-taxonomy",
        action="store_true",
        help="skip the bundled category/role count checks",
    )


def _load_config(args) -> dict:
    if not getattr(args, "config", None):
        return {}
    path = Path(args.config)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"config {path} does not parse: {exc}") from exc


def _load_project(args) -> Project:
    return Project.load(args.project)


def _taxonomy(args):
    if getattr(args, "taxonomy", None):
        return load_taxonomy(
            Path(args.taxonomy).read_bytes(),
            strict=not getattr(args, "no_strict_taxonomy", False),
        )
    return load_default_taxonomy()


def _annotator(args, config: dict, taxonomy):
    section = dict(config.get("annotator", {}))
    for key in (
        "annotator",
        "endpoint_url",
        "model_name",
        "timeout_s",
        "max_in_flight",
        "max_attempts",
        "backoff_base_s",
    ):
        value = getattr(args, key if key != "annotator" else "annotator", None)
        if value is not None:
            section["kind" if key == "annotator" else key] = value
    section.setdefault("kind", "lexicon")
    annotator_config = AnnotatorConfig.from_config(section)
    if annotator_config.kind == "remote":
        return RemoteAnnotator(annotator_config)
    lexicons = None
    if getattr(args, "lexicons", None):
        lexicons = load_lexicons(Path(args.lexicons).read_bytes())
    return LexiconAnnotator(taxonomy, lexicons)


def _segmentation_params(args, config: dict) -> SegmentationParams:
    section = dict(config.get("segmentation", {}))
    for key in (
        "adaptive_ratio",
        "adaptive_window",
        "min_content_val",
        "pause_threshold_s",
        "snap_tolerance_s",
        "min_unit_duration_s",
    ):
        value = getattr(args, key, None)
        if value is not None:
            section[key] = value
    if args.marker_lexicon is not None:
        section["marker_lexicon"] = [
            phrase.strip() for phrase in args.marker_lexicon.split(",") if phrase.strip()
        ]
    if args.suppress_visual_inside_speech is not None:
        section["suppress_visual_inside_speech"] = (
            args.suppress_visual_inside_speech == "true"
        )
    return SegmentationParams.from_config(section)


def _gbt_params(args, config: dict) -> GbtParams:
    section = dict(config.get("gbt", {}))
    for key in ("rounds", "learning_rate", "max_depth", "min_leaf"):
        value = getattr(args, key, None)
        if value is not None:
            section[key] = value
    params = GbtParams(**section)
    params.validate()
    return params


def _arc_library(args, taxonomy):
    if getattr(args, "arc_library", None):
        return load_arc_library(Path(args.arc_library).read_bytes(), taxonomy)
    return default_arc_library(taxonomy)


def cmd_ingest(args) -> int:
    taxonomy = _taxonomy(args)
    root = Path(args.project)
    if (root / "manifest.json").exists():
        project = Project.load(root)
    else:
        project = Project.create(
            root, args.name or root.name, taxonomy.version
        )
    stats = pipeline.ingest_stage(
        project,
        Path(args.input),
        enforce_duration_filter=args.enforce_duration_filter,
        min_impressions=args.min_impressions,
    )
    print(f"ingested {stats['videos']} videos, "
          f"{stats['performance_records']} performance records")
    return EXIT_OK


def cmd_segment(args) -> int:
    project = _load_project(args)
    params = _segmentation_params(args, _load_config(args))
    stats = pipeline.segment_stage(project, params)
    print(f"segmented {stats['videos']} videos into {stats['units']} units")
    return EXIT_OK


def cmd_detect_story(args) -> int:
    project = _load_project(args)
    config = _load_config(args)
    taxonomy = _taxonomy(args)
    stats = pipeline.detect_story_stage(project, _annotator(args, config, taxonomy))
    print(f"{stats['stories']} of {stats['videos']} videos contain a story")
    return EXIT_OK


def cmd_classify(args) -> int:
    project = _load_project(args)
    config = _load_config(args)
    taxonomy = _taxonomy(args)
    stats = pipeline.classify_stage(project, _annotator(args, config, taxonomy), taxonomy)
    print(f"classified {stats['annotations']} units")
    return EXIT_OK


def cmd_canonicalize(args) -> int:
    project = _load_project(args)
    stats = pipeline.canonicalize_stage(project)
    print(f"canonicalized {stats['sequences']} sequences")
    return EXIT_OK


def cmd_cluster(args) -> int:
    project = _load_project(args)
    config = _load_config(args)
    threshold = args.threshold
    if threshold is None:
        threshold = config.get("clustering", {}).get(
            "threshold", DEFAULT_CLUSTER_THRESHOLD
        )
    stats = pipeline.cluster_stage(project, threshold)
    print(f"built {stats['clusters']} clusters")
    return EXIT_OK


def cmd_summarize(args) -> int:
    project = _load_project(args)
    config = _load_config(args)
    taxonomy = _taxonomy(args)
    stats = pipeline.summarize_stage(project, _annotator(args, config, taxonomy))
    print(f"proposed names for {stats['named']} clusters")
    return EXIT_OK


def cmd_analyze_dwell(args) -> int:
    project = _load_project(args)
    path = pipeline.analyze_dwell_stage(project, format=args.format)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_analyze_uplift(args) -> int:
    project = _load_project(args)
    config = _load_config(args)
    taxonomy = _taxonomy(args)
    path = pipeline.analyze_uplift_stage(
        project,
        _arc_library(args, taxonomy),
        format=args.format,
        gbt_params=_gbt_params(args, config),
    )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_serve(args) -> int:
    project = _load_project(args)
    problems = project.check_integrity()
    if problems:
        raise ValidationFailure(
            "store integrity check failed: " + "; ".join(problems[:5])
        )
    taxonomy = _taxonomy(args)
    server = ApiServer(
        project,
        taxonomy,
        _arc_library(args, taxonomy),
        host=args.host,
        port=args.port,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    print(f"serving on http://{args.host}:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


def cmd_export_report(args) -> int:
    project = _load_project(args)
    stored = project.load_report_json(f"{args.kind}.json")
    if stored is None:
        raise ValidationFailure(
            f"no stored {args.kind} report; run analyze-{args.kind} first"
        )
    if args.kind == "dwell":
        result = codecs.regression_from_record(stored)
        text = render_dwell_report(result, stored.get("params", {}), args.format)
    else:
        report = codecs.uplift_report_from_record(stored)
        text = render_uplift_report(report, args.format)
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
