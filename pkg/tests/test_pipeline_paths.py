"""Cross-cutting pipeline behaviors not tied to one module: the precomputed
score path, annotator concurrency cap, and store integrity checking."""

from __future__ import annotations

import json
import threading
import time

import httpx

from adstory.annotator import AnnotatorConfig, RemoteAnnotator
from adstory.cli import main
from adstory.fixtures import write_fixture_corpus
from adstory.ingest import TimedWord, Transcript, dump_score_csv, load_score_csv
from adstory.ingest.frames import compute_content_scores
from adstory.segmentation import FunctionalUnit
from adstory.store import Project


def test_precomputed_scores_match_internal_frame_path(tmp_path):
    """Delegating decoding to an external scorer must not change what the
    segmenter sees downstream."""
    corpus = tmp_path / "corpus"
    manifest_path = write_fixture_corpus(corpus)

    # Derive score CSVs from the frame streams with the internal scorer.
    manifest = json.loads(manifest_path.read_text())
    for entry in manifest["videos"]:
        with (corpus / entry["frames"]).open("rb") as stream:
            series = compute_content_scores(stream, entry["video_id"])
        csv_name = f"{entry['video_id']}.scores.csv"
        (corpus / csv_name).write_bytes(dump_score_csv(series))
        entry["frames"] = None
        entry["scores"] = csv_name
    scores_manifest = corpus / "scores_manifest.json"
    scores_manifest.write_text(json.dumps(manifest))

    frames_project = tmp_path / "frames"
    scores_project = tmp_path / "scores"
    for project, source in [(frames_project, manifest_path), (scores_project, scores_manifest)]:
        assert main(["ingest", "--project", str(project), "--input", str(source)]) == 0
        assert main(["segment", "--project", str(project)]) == 0

    assert (frames_project / "units.jsonl").read_bytes() == (
        scores_project / "units.jsonl"
    ).read_bytes()
    assert (frames_project / "scores.jsonl").read_bytes() == (
        scores_project / "scores.jsonl"
    ).read_bytes()
    # Width/height are unknown on the precomputed path, by design.
    meta = json.loads((scores_project / "videos.jsonl").read_text().splitlines()[0])
    assert meta["width"] is None and meta["height"] is None


def test_score_csv_round_trip_preserves_values(tmp_path):
    corpus = tmp_path / "corpus"
    write_fixture_corpus(corpus)
    with (corpus / "v001.adframes").open("rb") as stream:
        series = compute_content_scores(stream, "v001")
    assert load_score_csv(dump_score_csv(series), "v001") == series


def test_remote_annotator_enforces_max_in_flight():
    active = 0
    peak = 0
    lock = threading.Lock()

    def handler(request: httpx.Request) -> httpx.Response:
        nonlocal active, peak
        with lock:
            active += 1
            peak = max(peak, active)
        time.sleep(0.02)
        with lock:
            active -= 1
        body = {
            "choices": [
                {
                    "message": {
                        "content": json.dumps(
                            {"has_story": False, "rationale": "n", "signals": []}
                        )
                    }
                }
            ]
        }
        return httpx.Response(200, json=body)

    config = AnnotatorConfig(
        kind="remote",
        endpoint_url="http://fake.test/v1",
        model_name="m",
        max_in_flight=2,
        max_attempts=1,
    )
    annotator = RemoteAnnotator(config, transport=httpx.MockTransport(handler))
    units = [FunctionalUnit(0, 0.0, 4.0, "hello")]
    transcript = Transcript("v", [TimedWord("hello", 0.1, 0.3)])

    threads = [
        threading.Thread(target=lambda: annotator.detect_story(units, transcript))
        for _ in range(8)
    ]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert peak <= 2


def test_store_integrity_check_finds_dangling_video_ids(tmp_path):
    from adstory.errors import ValidationFailure
    from adstory.storyline import StorylineSequence

    project = Project.create(tmp_path / "p", "x", "taxonomy_v1")
    project.save_records(
        "sequences", [StorylineSequence("ghost", ["hook"])]
    )
    problems = project.check_integrity()
    assert any("ghost" in problem for problem in problems)

    from adstory.ingest import VideoMeta

    project.save_records("videos", [VideoMeta("ghost", 16.0, 4.0, "Food")])
    assert project.check_integrity() == []
