"""Arc-uplift ranking: one boosted-tree model per (metric, subvertical) cell,
arc effects read off via partial dependence and expressed as a percentage of
the cell's metric mean."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from adstory.analytics.dwell import dummy_columns
from adstory.analytics.gbt import GbtParams, gbt_fit, partial_dependence
from adstory.analytics.ols import DesignMatrix, InsufficientData
from adstory.ingest.types import PerformanceRecord

METRICS = ("dwell_2s", "ctr", "cvr")


@dataclass
class UpliftRow:
    metric: str
    subvertical: str
    arc_abbrev: str
    uplift_pct: float
    support: int
    rank: int


@dataclass
class UpliftReport:
    params: dict
    rows: list[UpliftRow] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    def top_rows(self) -> list[UpliftRow]:
        return [row for row in self.rows if row.rank == 1]

    def cell(self, metric: str, subvertical: str) -> list[UpliftRow]:
        return [
            row
            for row in self.rows
            if row.metric == metric and row.subvertical == subvertical
        ]


def _metric_value(record: PerformanceRecord, metric: str) -> float:
    if metric == "dwell_2s":
        return record.dwell[1]
    if metric == "ctr":
        return record.ctr
    if metric == "cvr":
        return record.cvr
    raise InsufficientData(f"unknown metric {metric!r}")


def arc_design_matrix(
    records: list[PerformanceRecord],
    arc_memberships: dict[str, set[str]],
    arcs: list[str],
) -> DesignMatrix:
    arc_columns = [f"arc_{abbrev}" for abbrev in arcs]
    arc_values = np.array(
        [
            [1.0 if abbrev in arc_memberships.get(r.video_id, set()) else 0.0 for abbrev in arcs]
            for r in records
        ]
    ).reshape(len(records), len(arcs))
    trait_columns = ["has_speech", "video_length_s", "aspect_ratio", "audience_size"]
    traits = np.column_stack(
        [
            [1.0 if r.covariates.has_speech else 0.0 for r in records],
            [r.covariates.video_length_s for r in records],
            [r.covariates.aspect_ratio for r in records],
            [r.covariates.audience_size for r in records],
        ]
    )
    # Trees do not need a dropped reference level; keep every dummy.
    objective_names, objectives = dummy_columns(
        [r.covariates.campaign_objective for r in records],
        "campaign_objective",
        drop_most_frequent=False,
    )
    size_names, sizes = dummy_columns(
        [r.covariates.advertiser_size for r in records],
        "advertiser_size",
        drop_most_frequent=False,
    )
    return DesignMatrix(
        columns=arc_columns + trait_columns + objective_names + size_names,
        values=np.hstack([arc_values, traits, objectives, sizes]),
    )


def rank_arc_uplift(
    records: list[PerformanceRecord],
    arc_memberships: dict[str, set[str]],
    metrics: tuple[str, ...] = METRICS,
    gbt_params: GbtParams | None = None,
) -> UpliftReport:
    """Rank arcs per (metric, subvertical) by partial-dependence uplift.

    Cells that cannot be modeled (fewer than two arcs present, too few rows,
    or a zero metric mean) are listed under `skipped`; the rest still report.
    """
    gbt_params = gbt_params or GbtParams()
    report = UpliftReport(
        params={"metrics": list(metrics), **gbt_params.to_dict()}
    )

    by_subvertical: dict[str, list[PerformanceRecord]] = {}
    for record in records:
        by_subvertical.setdefault(record.covariates.subvertical, []).append(record)

    for subvertical in sorted(by_subvertical):
        group = by_subvertical[subvertical]
        arcs = sorted(
            {
                abbrev
                for record in group
                for abbrev in arc_memberships.get(record.video_id, set())
            }
        )
        if len(arcs) < 2:
            for metric in metrics:
                report.skipped.append(
                    {
                        "metric": metric,
                        "subvertical": subvertical,
                        "reason": f"only {len(arcs)} arc(s) present",
                    }
                )
            continue
        if len(group) < 2 * gbt_params.min_leaf:
            for metric in metrics:
                report.skipped.append(
                    {
                        "metric": metric,
                        "subvertical": subvertical,
                        "reason": f"only {len(group)} records",
                    }
                )
            continue
        design = arc_design_matrix(group, arc_memberships, arcs)
        support = {
            abbrev: sum(
                1
                for record in group
                if abbrev in arc_memberships.get(record.video_id, set())
            )
            for abbrev in arcs
        }
        for metric in metrics:
            y = np.array([_metric_value(record, metric) for record in group])
            mean = float(np.mean(y))
            if mean == 0.0:
                report.skipped.append(
                    {
                        "metric": metric,
                        "subvertical": subvertical,
                        "reason": "metric mean is zero",
                    }
                )
                continue
            model = gbt_fit(design, y, gbt_params)
            scored = []
            for abbrev in arcs:
                curve = partial_dependence(
                    model, design, f"arc_{abbrev}", [0.0, 1.0]
                )
                uplift = (curve[1][1] - curve[0][1]) / mean * 100.0
                scored.append((abbrev, uplift))
            scored.sort(key=lambda item: (-item[1], item[0]))
            for rank, (abbrev, uplift) in enumerate(scored, start=1):
                report.rows.append(
                    UpliftRow(
                        metric=metric,
                        subvertical=subvertical,
                        arc_abbrev=abbrev,
                        uplift_pct=uplift,
                        support=support[abbrev],
                        rank=rank,
                    )
                )
    return report
