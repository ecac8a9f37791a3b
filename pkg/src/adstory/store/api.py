"""HTTP API for the curation UI, plus static file serving for the UI itself.

Mutating endpoints run under the project's writer lock: the pure curation
functions produce the next state, the event is appended durably, and only
then is the response sent. Error codes map 1:1 onto HTTP statuses:
not_found=404, conflict=409, invalid=400, unavailable=503.
"""

from __future__ import annotations

import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from adstory.errors import OperationalFailure, ValidationFailure
from adstory.storyline.arcs import ArcPattern, match_arcs
from adstory.storyline.curation import (
    AlreadyApproved,
    AlreadyMerged,
    ClusterMerged,
    NotFound,
    approve_cluster,
    merge_clusters,
    rename_cluster,
)
from adstory.storyline.types import Cluster, STATUS_MERGED, StorylineSequence
from adstory.store import records as codecs
from adstory.store.project import Project
from adstory.taxonomy import Taxonomy

logger = logging.getLogger(__name__)

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".json": "application/json",
}

CONFLICT_ERRORS = (AlreadyMerged, AlreadyApproved, ClusterMerged)


def _cluster_json(cluster: Cluster) -> dict:
    return {
        "cluster_id": cluster.cluster_id,
        "name": cluster.name,
        "status": cluster.status,
        "merged_into": cluster.merged_into,
        "representative": list(cluster.representative),
        "member_count": len(cluster.member_video_ids),
        "member_video_ids": sorted(cluster.member_video_ids),
    }


class ApiServer:
    """Owns the in-memory curation state and the underlying HTTP server."""

    def __init__(
        self,
        project: Project,
        taxonomy: Taxonomy,
        arc_library: list[ArcPattern],
        host: str = "127.0.0.1",
        port: int = 0,
        ui_dir: Path | None = None,
    ):
        self.project = project
        self.taxonomy = taxonomy
        self.arc_library = arc_library
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.state = project.curation_state()
        handler = _make_handler(self)
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start_background(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def shutdown(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread:
            self._thread.join(timeout=5)

    # -- api operations ---------------------------------------------------

    def list_clusters(self, status: str | None) -> list[dict]:
        clusters = list(self.state.clusters.values())
        if status in (None, ""):
            clusters = [c for c in clusters if c.status != STATUS_MERGED]
        elif status != "all":
            clusters = [c for c in clusters if c.status == status]
        clusters.sort(key=lambda c: (-len(c.member_video_ids), c.cluster_id))
        return [_cluster_json(c) for c in clusters]

    def get_cluster(self, cluster_id: str) -> dict:
        cluster = self.state.clusters.get(cluster_id)
        if cluster is None:
            raise NotFound(f"no cluster {cluster_id!r}")
        return _cluster_json(cluster)

    def mutate(self, action: str, actor: str, **kwargs) -> dict:
        with self.project.writer_lock:
            if action == "merge":
                new_state, event = merge_clusters(
                    self.state, kwargs["source_ids"], kwargs["target_id"], actor
                )
                touched = kwargs["target_id"]
            elif action == "rename":
                new_state, event = rename_cluster(
                    self.state, kwargs["cluster_id"], kwargs["name"], actor
                )
                touched = kwargs["cluster_id"]
            elif action == "approve":
                new_state, event = approve_cluster(
                    self.state, kwargs["cluster_id"], actor
                )
                touched = kwargs["cluster_id"]
            else:
                raise ValidationFailure(f"unknown action {action!r}")
            self.project.append_curation_event(
                event["action"], event["actor"], event["payload"]
            )
            self.state = new_state
            self.project.materialize_clusters(new_state)
            return _cluster_json(new_state.clusters[touched])

    def video_detail(self, video_id: str) -> dict:
        videos = {m.video_id: m for m in self.project.load_records("videos")}
        if video_id not in videos:
            raise NotFound(f"no video {video_id!r}")
        units = self.project.load_units().get(video_id, [])
        annotations = [
            a for a in self.project.load_records("annotations")
            if a.video_id == video_id
        ]
        sequences = {
            s.video_id: s for s in self.project.load_records("sequences")
        }
        sequence = sequences.get(video_id, StorylineSequence(video_id, []))
        matches = match_arcs(sequence, self.arc_library)
        return {
            "video": codecs.video_to_record(videos[video_id]),
            "units": [codecs.unit_to_record(video_id, u) for u in units],
            "annotations": [codecs.annotation_to_record(a) for a in annotations],
            "sequence": list(sequence.roles),
            "arc_matches": [
                {"abbrev": p.abbrev, "name": p.name, "witness": witness}
                for p, witness in matches
            ],
        }

    def uplift_report(self, metric: str | None, subvertical: str | None) -> dict:
        stored = self.project.load_report_json("uplift.json")
        if stored is None:
            raise NotFound("no uplift report; run analyze-uplift first")
        rows = stored["rows"]
        skipped = stored["skipped"]
        if metric:
            rows = [r for r in rows if r["metric"] == metric]
            skipped = [s for s in skipped if s["metric"] == metric]
        if subvertical:
            rows = [r for r in rows if r["subvertical"] == subvertical]
            skipped = [s for s in skipped if s["subvertical"] == subvertical]
        return {"params": stored["params"], "rows": rows, "skipped": skipped}


def _make_handler(server: ApiServer):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, format, *args):  # noqa: A002 - stdlib signature
            logger.debug("%s - %s", self.address_string(), format % args)

        # -- plumbing -----------------------------------------------------

        def _send_json(self, status: int, payload) -> None:
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _send_error(self, status: int, code: str, message: str) -> None:
            self._send_json(status, {"code": code, "message": message})

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                return {}
            try:
                payload = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ValidationFailure(f"request body is not JSON: {exc}") from exc
            if not isinstance(payload, dict):
                raise ValidationFailure("request body must be a JSON object")
            return payload

        def _handle_error(self, exc: Exception) -> None:
            if isinstance(exc, NotFound):
                self._send_error(404, "not_found", str(exc))
            elif isinstance(exc, CONFLICT_ERRORS):
                self._send_error(409, "conflict", str(exc))
            elif isinstance(exc, ValidationFailure):
                self._send_error(400, "invalid", str(exc))
            elif isinstance(exc, OperationalFailure):
                self._send_error(503, "unavailable", str(exc))
            else:
                logger.exception("unhandled API error")
                self._send_error(503, "unavailable", f"internal error: {exc}")

        # -- routes -------------------------------------------------------

        def do_GET(self):  # noqa: N802 - stdlib name
            url = urlparse(self.path)
            query = {k: v[0] for k, v in parse_qs(url.query).items()}
            parts = [p for p in url.path.split("/") if p]
            try:
                if url.path == "/api/health":
                    self._send_json(200, {"status": "ok"})
                elif url.path == "/api/taxonomy":
                    self._send_json(
                        200,
                        {
                            "version": server.taxonomy.version,
                            "categories": [
                                {"id": c.id, "display_name": c.display_name}
                                for c in server.taxonomy.categories
                            ],
                            "roles": [
                                {
                                    "id": r.id,
                                    "name": r.name,
                                    "category": r.category,
                                    "description": r.description,
                                }
                                for r in server.taxonomy.roles
                            ],
                        },
                    )
                elif url.path == "/api/clusters":
                    self._send_json(
                        200, {"clusters": server.list_clusters(query.get("status"))}
                    )
                elif len(parts) == 3 and parts[:2] == ["api", "clusters"]:
                    self._send_json(200, server.get_cluster(parts[2]))
                elif len(parts) == 3 and parts[:2] == ["api", "videos"]:
                    self._send_json(200, server.video_detail(parts[2]))
                elif url.path == "/api/report/uplift":
                    self._send_json(
                        200,
                        server.uplift_report(
                            query.get("metric"), query.get("subvertical")
                        ),
                    )
                elif parts[:1] != ["api"]:
                    self._serve_static(url.path)
                else:
                    self._send_error(404, "not_found", f"no route {url.path}")
            except Exception as exc:  # noqa: BLE001 - boundary
                self._handle_error(exc)

        def do_POST(self):  # noqa: N802 - stdlib name
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            try:
                body = self._read_body()
                actor = str(body.get("actor") or "anonymous")
                if url.path == "/api/clusters/merge":
                    source_ids = body.get("source_ids")
                    target_id = body.get("target_id")
                    if not isinstance(source_ids, list) or not source_ids or not target_id:
                        raise ValidationFailure(
                            "merge needs non-empty source_ids and a target_id"
                        )
                    result = server.mutate(
                        "merge", actor,
                        source_ids=[str(s) for s in source_ids],
                        target_id=str(target_id),
                    )
                    self._send_json(200, result)
                elif (
                    len(parts) == 4
                    and parts[:2] == ["api", "clusters"]
                    and parts[3] == "rename"
                ):
                    result = server.mutate(
                        "rename", actor,
                        cluster_id=parts[2], name=str(body.get("name", "")),
                    )
                    self._send_json(200, result)
                elif (
                    len(parts) == 4
                    and parts[:2] == ["api", "clusters"]
                    and parts[3] == "approve"
                ):
                    result = server.mutate("approve", actor, cluster_id=parts[2])
                    self._send_json(200, result)
                else:
                    self._send_error(404, "not_found", f"no route {url.path}")
            except Exception as exc:  # noqa: BLE001 - boundary
                self._handle_error(exc)

        # -- static UI ------------------------------------------------------

        def _serve_static(self, path: str) -> None:
            if server.ui_dir is None:
                if path in ("/", "/index.html"):
                    page = (
                        b"<!doctype html><title>adstory</title>"
                        b"<p>API is up. Build the UI and pass --ui-dir to serve it.</p>"
                    )
                    self.send_response(200)
                    self.send_header("Content-Type", "text/html; charset=utf-8")
                    self.send_header("Content-Length", str(len(page)))
                    self.end_headers()
                    self.wfile.write(page)
                else:
                    self._send_error(404, "not_found", f"no route {path}")
                return
            relative = path.lstrip("/") or "index.html"
            target = (server.ui_dir / relative).resolve()
            if not str(target).startswith(str(server.ui_dir.resolve())):
                self._send_error(404, "not_found", "outside UI directory")
                return
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                # Unknown paths fall back to the SPA entry point.
                target = server.ui_dir / "index.html"
                if not target.is_file():
                    self._send_error(404, "not_found", f"no file for {path}")
                    return
            data = target.read_bytes()
            content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            self.send_response(200)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Cache-Control", "no-cache")
            self.end_headers()
            self.wfile.write(data)

    return Handler
