"""Performance/covariate CSV loading with per-row validation."""

from __future__ import annotations

import csv
import io

from adstory.errors import ValidationFailure
from adstory.ingest.types import Covariates, PerformanceRecord, ValueOutOfRange

PERFORMANCE_COLUMNS = (
    "video_id",
    "impressions",
    *[f"dwell_{s}" for s in range(1, 11)],
    "ctr",
    "cvr",
    "has_speech",
    "video_length_s",
    "aspect_ratio",
    "campaign_objective",
    "audience_size",
    "advertiser_size",
    "subvertical",
)

_BOOL_VALUES = {"true": True, "1": True, "false": False, "0": False}


class MissingColumn(ValidationFailure):
    """The CSV header lacks a required column."""


class DwellNotMonotone(ValidationFailure):
    """A dwell curve increases between consecutive seconds."""


def load_performance_records(data: bytes) -> list[PerformanceRecord]:
    """Parse a performance CSV; every record is validated before returning."""
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ValueOutOfRange(f"performance CSV is not valid UTF-8: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    present = set(reader.fieldnames or [])
    missing = [column for column in PERFORMANCE_COLUMNS if column not in present]
    if missing:
        raise MissingColumn(f"performance CSV missing columns: {', '.join(missing)}")

    records = []
    for line_no, row in enumerate(reader, start=2):
        records.append(_parse_row(row, line_no))
    return records


def _parse_row(row: dict[str, str], line_no: int) -> PerformanceRecord:
    video_id = row["video_id"]
    try:
        dwell = [float(row[f"dwell_{s}"]) for s in range(1, 11)]
        record = PerformanceRecord(
            video_id=video_id,
            impressions=int(row["impressions"]),
            dwell=dwell,
            ctr=float(row["ctr"]),
            cvr=float(row["cvr"]),
            covariates=Covariates(
                has_speech=_parse_bool(row["has_speech"], video_id),
                video_length_s=float(row["video_length_s"]),
                aspect_ratio=float(row["aspect_ratio"]),
                campaign_objective=row["campaign_objective"],
                audience_size=float(row["audience_size"]),
                advertiser_size=row["advertiser_size"],
                subvertical=row["subvertical"],
            ),
        )
    except ValueError as exc:
        raise ValueOutOfRange(f"line {line_no} ({video_id}): {exc}") from exc
    record.validate()
    for s in range(1, 10):
        if dwell[s] > dwell[s - 1]:
            raise DwellNotMonotone(
                f"line {line_no} ({video_id}): dwell_{s + 1}={dwell[s]} "
                f"> dwell_{s}={dwell[s - 1]}"
            )
    return record


def _parse_bool(value: str, video_id: str) -> bool:
    normalized = value.strip().lower()
    if normalized not in _BOOL_VALUES:
        raise ValueOutOfRange(f"{video_id}: has_speech must be boolean, got {value!r}")
    return _BOOL_VALUES[normalized]


def dump_performance_csv(records: list[PerformanceRecord]) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PERFORMANCE_COLUMNS)
    for record in records:
        cov = record.covariates
        writer.writerow(
            [
                record.video_id,
                record.impressions,
                *[repr(value) for value in record.dwell],
                repr(record.ctr),
                repr(record.cvr),
                str(cov.has_speech).lower(),
                repr(cov.video_length_s),
                repr(cov.aspect_ratio),
                cov.campaign_objective,
                repr(cov.audience_size),
                cov.advertiser_size,
                cov.subvertical,
            ]
        )
    return out.getvalue().encode("utf-8")
