from __future__ import annotations

import json
import threading
import urllib.request
from urllib.error import HTTPError

import pytest

from adstory.storyline import (
    Cluster,
    CurationState,
    STATUS_PROPOSED,
    StorylineSequence,
    replay_events,
)
from adstory.store import Project
from adstory.store import records as codecs
from adstory.store.api import ApiServer
from adstory.storyline.arcs import default_arc_library
from adstory.taxonomy import load_default_taxonomy


def _seed_project(tmp_path) -> Project:
    from adstory.annotator import UnitAnnotation
    from adstory.ingest import VideoMeta
    from adstory.segmentation import FunctionalUnit

    project = Project.create(tmp_path / "p", "api-test", "taxonomy_v1")
    sequences = [
        StorylineSequence("v1", ["problem_setup", "problem_agitation", "solution_reveal"]),
        StorylineSequence("v2", ["problem_setup", "problem_agitation", "solution_reveal"]),
        StorylineSequence("v3", ["problem_setup", "solution_reveal"]),
        StorylineSequence("v4", ["hook", "outcome"]),
        StorylineSequence("v5", ["promotion"]),
    ]
    project.save_records("sequences", sequences)
    project.save_records(
        "videos", [VideoMeta(f"v{i}", 16.0, 4.0, "Food") for i in range(1, 6)]
    )
    project.save_units({"v1": [FunctionalUnit(0, 0.0, 16.0, "I struggled", [0])]})
    project.save_records(
        "annotations", [UnitAnnotation("v1", 0, "problem_setup", 0.9, "matched")]
    )
    clusters = [
        Cluster("c1", ["problem_setup", "problem_agitation", "solution_reveal"],
                {"v1", "v2"}, "", STATUS_PROPOSED, None),
        Cluster("c2", ["problem_setup", "solution_reveal"], {"v3"}, "", STATUS_PROPOSED, None),
        Cluster("c3", ["hook", "outcome"], {"v4"}, "", STATUS_PROPOSED, None),
        Cluster("c4", ["promotion"], {"v5"}, "", STATUS_PROPOSED, None),
    ]
    project.reset_clustering(clusters)
    return project


@pytest.fixture()
def server(tmp_path):
    project = _seed_project(tmp_path)
    taxonomy = load_default_taxonomy()
    api = ApiServer(project, taxonomy, default_arc_library(taxonomy))
    api.start_background()
    yield api
    api.shutdown()


def _request(server, method, path, body=None):
    url = f"http://127.0.0.1:{server.port}{path}"
    data = json.dumps(body).encode() if body is not None else None
    request = urllib.request.Request(url, data=data, method=method)
    if data:
        request.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(request) as response:
            return response.status, json.loads(response.read())
    except HTTPError as error:
        return error.code, json.loads(error.read())


def test_health(server):
    status, payload = _request(server, "GET", "/api/health")
    assert (status, payload) == (200, {"status": "ok"})


def test_taxonomy_endpoint_carries_all_roles(server):
    status, payload = _request(server, "GET", "/api/taxonomy")
    assert status == 200
    assert len(payload["roles"]) == 23
    assert len(payload["categories"]) == 6


def test_clusters_sorted_by_member_count(server):
    status, payload = _request(server, "GET", "/api/clusters")
    assert status == 200
    clusters = payload["clusters"]
    assert [c["cluster_id"] for c in clusters] == ["c1", "c2", "c3", "c4"]
    assert clusters[0]["member_count"] == 2


def test_cluster_detail_and_404(server):
    status, payload = _request(server, "GET", "/api/clusters/c2")
    assert status == 200
    assert payload["member_video_ids"] == ["v3"]
    status, payload = _request(server, "GET", "/api/clusters/zz")
    assert status == 404
    assert payload["code"] == "not_found"


def test_merge_hides_source_and_logs_event(server):
    status, payload = _request(
        server, "POST", "/api/clusters/merge",
        {"source_ids": ["c2"], "target_id": "c1", "actor": "strategist"},
    )
    assert status == 200
    assert payload["member_count"] == 3
    status, payload = _request(server, "GET", "/api/clusters")
    ids = [c["cluster_id"] for c in payload["clusters"]]
    assert "c2" not in ids
    status, payload = _request(server, "GET", "/api/clusters?status=merged")
    assert [c["cluster_id"] for c in payload["clusters"]] == ["c2"]
    assert payload["clusters"][0]["merged_into"] == "c1"
    events = server.project.load_curation_events()
    assert len(events) == 1
    assert events[0].action == "merge"
    assert events[0].actor == "strategist"


def test_merge_conflicts_and_validation(server):
    status, _ = _request(
        server, "POST", "/api/clusters/merge",
        {"source_ids": ["c2"], "target_id": "c1"},
    )
    assert status == 200
    status, payload = _request(
        server, "POST", "/api/clusters/merge",
        {"source_ids": ["c2"], "target_id": "c3"},
    )
    assert (status, payload["code"]) == (409, "conflict")
    status, payload = _request(
        server, "POST", "/api/clusters/merge",
        {"source_ids": ["c3"], "target_id": "c3"},
    )
    assert (status, payload["code"]) == (400, "invalid")
    status, payload = _request(
        server, "POST", "/api/clusters/merge",
        {"source_ids": [], "target_id": "c1"},
    )
    assert (status, payload["code"]) == (400, "invalid")
    status, payload = _request(
        server, "POST", "/api/clusters/merge",
        {"source_ids": ["nope"], "target_id": "c1"},
    )
    assert (status, payload["code"]) == (404, "not_found")


def test_rename_approve_flow_and_idempotency_contract(server):
    status, payload = _request(
        server, "POST", "/api/clusters/c1/rename", {"name": "Problem arc"}
    )
    assert status == 200 and payload["name"] == "Problem arc"
    # Renaming to the same name is OK and still logs an event.
    status, _ = _request(
        server, "POST", "/api/clusters/c1/rename", {"name": "Problem arc"}
    )
    assert status == 200
    status, payload = _request(server, "POST", "/api/clusters/c1/approve", {})
    assert status == 200 and payload["status"] == "approved"
    status, payload = _request(server, "POST", "/api/clusters/c1/approve", {})
    assert (status, payload["code"]) == (409, "conflict")
    status, payload = _request(server, "POST", "/api/clusters/c1/rename", {"name": ""})
    assert (status, payload["code"]) == (400, "invalid")
    events = server.project.load_curation_events()
    assert [e.action for e in events] == ["rename", "rename", "approve"]


def test_approve_without_name_rejected(server):
    status, payload = _request(server, "POST", "/api/clusters/c3/approve", {})
    assert (status, payload["code"]) == (400, "invalid")


def test_replaying_stored_log_reproduces_materialized_state(server):
    _request(server, "POST", "/api/clusters/merge",
             {"source_ids": ["c2", "c3"], "target_id": "c1"})
    _request(server, "POST", "/api/clusters/c1/rename", {"name": "Everything arc"})
    _request(server, "POST", "/api/clusters/c1/approve", {})
    project = server.project
    initial = CurationState.from_clustering(
        project.load_records("clusters"), project.load_records("sequences")
    )
    events = [codecs.event_to_record(e) for e in project.load_curation_events()]
    replayed = replay_events(initial, events)
    stored = {c.cluster_id: c for c in project.load_records("clusters_current")}
    assert stored == replayed.clusters
    assert server.state.clusters == replayed.clusters


def test_video_detail_and_uplift_report_endpoints(server):
    status, payload = _request(server, "GET", "/api/videos/v1")
    assert status == 200
    assert payload["sequence"] == ["problem_setup", "problem_agitation", "solution_reveal"]
    assert any(m["abbrev"] == "PAS" for m in payload["arc_matches"])
    status, payload = _request(server, "GET", "/api/videos/none")
    assert status == 404
    status, payload = _request(server, "GET", "/api/report/uplift")
    assert status == 404  # no analyze-uplift run on this project
    server.project.save_report_json(
        "uplift.json",
        {"params": {}, "rows": [
            {"metric": "cvr", "subvertical": "Food", "arc_abbrev": "PAS",
             "uplift_pct": 8.5, "support": 2, "rank": 1}
        ], "skipped": []},
    )
    status, payload = _request(server, "GET", "/api/report/uplift?metric=cvr")
    assert status == 200
    assert payload["rows"][0]["arc_abbrev"] == "PAS"
    status, payload = _request(server, "GET", "/api/report/uplift?metric=ctr")
    assert payload["rows"] == []


def test_concurrent_mutations_keep_log_contiguous(server):
    barrier = threading.Barrier(4)
    outcomes = []

    def rename(worker):
        barrier.wait()
        for i in range(10):
            status, _ = _request(
                server, "POST", "/api/clusters/c4/rename",
                {"name": f"worker{worker}-{i}"},
            )
            outcomes.append(status)

    threads = [threading.Thread(target=rename, args=(w,)) for w in range(4)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert outcomes.count(200) == 40
    events = server.project.load_curation_events()
    assert [e.seq_no for e in events] == list(range(1, 41))


def test_unknown_routes_are_404(server):
    status, payload = _request(server, "GET", "/api/nothing")
    assert status == 404
    status, payload = _request(server, "POST", "/api/clusters/c1/explode", {})
    assert status == 404


def test_placeholder_page_served_without_ui_dir(server):
    url = f"http://127.0.0.1:{server.port}/"
    with urllib.request.urlopen(url) as response:
        body = response.read()
    assert b"API is up" in body
