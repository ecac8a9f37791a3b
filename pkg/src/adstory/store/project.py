"""The project directory: one JSONL file per entity kind, atomic rewrites,
and an append-only curation log.

The curation log is the source of truth for human decisions: cluster state
is always the initial clustering with the log replayed on top, so a crash
can never strand the store in a state the log cannot reproduce. The
materialized `clusters_current.jsonl` exists for humans and diff tools.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from adstory.errors import OperationalFailure, ValidationFailure
from adstory.storyline.curation import CurationState, replay_events
from adstory.storyline.types import CurationEvent
from adstory.store import records as codecs

SCHEMA_VERSION = 1
MANIFEST_FILE = "manifest.json"
CURATION_LOG = "curation_log.jsonl"

RECORD_CODECS: dict[str, tuple[Callable, Callable]] = {
    "videos": (codecs.video_to_record, codecs.video_from_record),
    "transcripts": (codecs.transcript_to_record, codecs.transcript_from_record),
    "scores": (codecs.scores_to_record, codecs.scores_from_record),
    "verdicts": (codecs.verdict_to_record, codecs.verdict_from_record),
    "annotations": (codecs.annotation_to_record, codecs.annotation_from_record),
    "sequences": (codecs.sequence_to_record, codecs.sequence_from_record),
    "clusters": (codecs.cluster_to_record, codecs.cluster_from_record),
    "clusters_current": (codecs.cluster_to_record, codecs.cluster_from_record),
    "perf": (codecs.perf_to_record, codecs.perf_from_record),
}


class IoFailure(OperationalFailure):
    pass


class CorruptManifest(ValidationFailure):
    pass


class SchemaVersionMismatch(ValidationFailure):
    pass


def _dump_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def _write_atomic(path: Path, data: bytes) -> None:
    """Write-temp-then-rename in the target directory; never a partial file."""
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except OSError as exc:
        raise IoFailure(f"writing {path}: {exc}") from exc
    finally:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)


class Project:
    """Handle on a project directory. Mutations go through `writer_lock`:
    many readers, one logical writer."""

    def __init__(self, root: Path, manifest: dict):
        self.root = Path(root)
        self.manifest = manifest
        self.writer_lock = threading.RLock()
        self._next_seq_no: int | None = None

    # -- lifecycle -------------------------------------------------------

    @classmethod
    def create(
        cls,
        root: str | os.PathLike,
        name: str,
        taxonomy_version: str,
        params: dict | None = None,
    ) -> "Project":
        root = Path(root)
        try:
            root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoFailure(f"creating {root}: {exc}") from exc
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "name": name,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "taxonomy_version": taxonomy_version,
            "params": params or {},
        }
        project = cls(root, manifest)
        project._save_manifest()
        return project

    @classmethod
    def load(cls, root: str | os.PathLike) -> "Project":
        root = Path(root)
        manifest_path = root / MANIFEST_FILE
        if not manifest_path.exists():
            raise CorruptManifest(f"no {MANIFEST_FILE} in {root}")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptManifest(f"manifest does not parse: {exc}") from exc
        required = {"schema_version", "name", "created_at", "taxonomy_version", "params"}
        if not isinstance(manifest, dict) or not required <= set(manifest):
            raise CorruptManifest(f"manifest missing keys: {required - set(manifest)}")
        if manifest["schema_version"] != SCHEMA_VERSION:
            raise SchemaVersionMismatch(
                f"store is schema {manifest['schema_version']}, "
                f"this build reads {SCHEMA_VERSION}"
            )
        return cls(root, manifest)

    def _save_manifest(self) -> None:
        data = json.dumps(self.manifest, indent=2, sort_keys=True).encode("utf-8") + b"\n"
        _write_atomic(self.root / MANIFEST_FILE, data)

    def update_params(self, section: str, values: dict) -> None:
        with self.writer_lock:
            self.manifest["params"][section] = values
            self._save_manifest()

    # -- record files ----------------------------------------------------

    def _record_path(self, kind: str) -> Path:
        return self.root / f"{kind}.jsonl"

    def save_records(self, kind: str, items: list) -> None:
        to_record, _ = RECORD_CODECS[kind]
        lines = [_dump_line(to_record(item)) for item in items]
        data = ("\n".join(lines) + "\n" if lines else "").encode("utf-8")
        with self.writer_lock:
            _write_atomic(self._record_path(kind), data)

    def load_records(self, kind: str) -> list:
        _, from_record = RECORD_CODECS[kind]
        path = self._record_path(kind)
        if not path.exists():
            return []
        items = []
        try:
            with path.open("r", encoding="utf-8") as handle:
                for line in handle:
                    if line.strip():
                        items.append(from_record(json.loads(line)))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValidationFailure(f"reading {path}: {exc}") from exc
        return items

    def has_records(self, kind: str) -> bool:
        return self._record_path(kind).exists()

    # units need the video_id carried alongside, so they get explicit helpers

    def save_units(self, units_by_video: dict[str, list]) -> None:
        lines = []
        for video_id in sorted(units_by_video):
            for unit in units_by_video[video_id]:
                lines.append(_dump_line(codecs.unit_to_record(video_id, unit)))
        data = ("\n".join(lines) + "\n" if lines else "").encode("utf-8")
        with self.writer_lock:
            _write_atomic(self._record_path("units"), data)

    def load_units(self) -> dict[str, list]:
        path = self._record_path("units")
        units: dict[str, list] = {}
        if not path.exists():
            return units
        with path.open("r", encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    video_id, unit = codecs.unit_from_record(json.loads(line))
                    units.setdefault(video_id, []).append(unit)
        for video_units in units.values():
            video_units.sort(key=lambda u: u.index)
        return units

    # -- curation log ------------------------------------------------------

    def load_curation_events(self) -> list[CurationEvent]:
        path = self.root / CURATION_LOG
        if not path.exists():
            return []
        events = []
        with path.open("r", encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    events.append(codecs.event_from_record(json.loads(line)))
        for position, event in enumerate(events, start=1):
            if event.seq_no != position:
                raise ValidationFailure(
                    f"curation log seq_nos not contiguous: expected {position}, "
                    f"found {event.seq_no}"
                )
        return events

    def append_curation_event(self, action: str, actor: str, payload: dict) -> CurationEvent:
        """Assign the next seq_no and append durably before returning."""
        with self.writer_lock:
            if self._next_seq_no is None:
                self._next_seq_no = len(self.load_curation_events()) + 1
            event = CurationEvent(
                seq_no=self._next_seq_no,
                timestamp=datetime.now(timezone.utc).isoformat(),
                actor=actor,
                action=action,
                payload=payload,
            )
            path = self.root / CURATION_LOG
            try:
                with path.open("a", encoding="utf-8") as handle:
                    handle.write(_dump_line(codecs.event_to_record(event)) + "\n")
                    handle.flush()
                    os.fsync(handle.fileno())
            except OSError as exc:
                raise IoFailure(f"appending to {path}: {exc}") from exc
            self._next_seq_no += 1
            return event

    def reset_clustering(self, clusters: list) -> None:
        """Install a fresh initial clustering; any previous log is void."""
        with self.writer_lock:
            self.save_records("clusters", clusters)
            _write_atomic(self.root / CURATION_LOG, b"")
            self._next_seq_no = 1
            self.save_records("clusters_current", clusters)

    def curation_state(self) -> CurationState:
        """Initial clustering with the stored event log replayed on top."""
        initial = CurationState.from_clustering(
            self.load_records("clusters"), self.load_records("sequences")
        )
        return replay_events(initial,
            [codecs.event_to_record(e) for e in self.load_curation_events()])

    def materialize_clusters(self, state: CurationState) -> None:
        ordered = [state.clusters[key] for key in sorted(state.clusters)]
        self.save_records("clusters_current", ordered)

    def check_integrity(self) -> list[str]:
        """Every stored record's video_id must resolve to an ingested video."""
        known = {meta.video_id for meta in self.load_records("videos")}
        problems = []
        for kind in ("transcripts", "scores", "verdicts", "annotations",
                     "sequences", "perf"):
            for item in self.load_records(kind):
                if item.video_id not in known:
                    problems.append(
                        f"{kind}: video_id {item.video_id!r} has no video record"
                    )
        for video_id in self.load_units():
            if video_id not in known:
                problems.append(f"units: video_id {video_id!r} has no video record")
        for cluster in self.load_records("clusters"):
            for video_id in cluster.member_video_ids:
                if video_id not in known:
                    problems.append(
                        f"clusters: member {video_id!r} of {cluster.cluster_id} "
                        "has no video record"
                    )
        return problems

    # -- reports -----------------------------------------------------------

    def save_report(self, name: str, text: str) -> Path:
        reports_dir = self.root / "reports"
        try:
            reports_dir.mkdir(exist_ok=True)
        except OSError as exc:
            raise IoFailure(f"creating {reports_dir}: {exc}") from exc
        path = reports_dir / name
        _write_atomic(path, text.encode("utf-8"))
        return path

    def save_report_json(self, name: str, payload: dict) -> Path:
        return self.save_report(
            name, json.dumps(payload, indent=2, sort_keys=True) + "\n"
        )

    def load_report_json(self, name: str) -> dict | None:
        path = self.root / "reports" / name
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))
