"""Project persistence, the pipeline stages, and the HTTP API."""

from adstory.store.project import (
    CorruptManifest,
    IoFailure,
    Project,
    SchemaVersionMismatch,
)

__all__ = ["CorruptManifest", "IoFailure", "Project", "SchemaVersionMismatch"]
