"""Dwell curves and the per-second story-effect regression.

"% change" is reported both ways on purpose: coef_pp is the absolute effect
in percentage points, relative_change divides the raw coefficient by the
non-story baseline at that second.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from adstory.analytics.ols import DesignMatrix, InsufficientData, ols_fit
from adstory.errors import ValidationFailure
from adstory.ingest.types import PerformanceRecord

DWELL_HORIZON_S = 10
MIN_REGRESSION_RECORDS = 30


class NoViewers(ValidationFailure):
    pass


class OneClassOnly(ValidationFailure):
    """Either every ad has a story or none does; no contrast to estimate."""


@dataclass
class SecondEffect:
    second: int
    coef_pp: float
    std_err: float
    n: int
    baseline_nonstory_dwell: float
    relative_change: float


@dataclass
class RegressionResult:
    effects: list[SecondEffect]
    controls: list[str]

    def peak_second(self) -> int:
        return max(self.effects, key=lambda e: e.coef_pp).second


def compute_dwell_curve(
    watch_times_s: list[float], horizon: int = DWELL_HORIZON_S
) -> list[float]:
    """Fraction of viewers who watched at least s seconds, s = 1..horizon."""
    if not watch_times_s:
        raise NoViewers("no watch times")
    if any(w < 0 for w in watch_times_s):
        raise ValidationFailure("watch times must be >= 0")
    n = len(watch_times_s)
    return [
        sum(1 for w in watch_times_s if w >= second) / n
        for second in range(1, horizon + 1)
    ]


def dummy_columns(
    values: list[str], prefix: str, drop_most_frequent: bool = True
) -> tuple[list[str], np.ndarray]:
    """One-hot columns named `prefix=level`, levels sorted; the most frequent
    level (ties to the alphabetically first) is dropped for OLS identifiability."""
    levels = sorted(set(values))
    if drop_most_frequent and levels:
        counts = Counter(values)
        dropped = min(levels, key=lambda level: (-counts[level], level))
        levels = [level for level in levels if level != dropped]
    names = [f"{prefix}={level}" for level in levels]
    matrix = np.array(
        [[1.0 if value == level else 0.0 for level in levels] for value in values]
    ).reshape(len(values), len(levels))
    return names, matrix


def story_design_matrix(
    records: list[PerformanceRecord], has_story: dict[str, bool]
) -> DesignMatrix:
    columns = ["intercept", "has_story", "has_speech", "video_length_s",
               "aspect_ratio", "audience_size"]
    base = np.column_stack(
        [
            np.ones(len(records)),
            [1.0 if has_story[r.video_id] else 0.0 for r in records],
            [1.0 if r.covariates.has_speech else 0.0 for r in records],
            [r.covariates.video_length_s for r in records],
            [r.covariates.aspect_ratio for r in records],
            [r.covariates.audience_size for r in records],
        ]
    )
    objective_names, objective_dummies = dummy_columns(
        [r.covariates.campaign_objective for r in records], "campaign_objective"
    )
    return DesignMatrix(
        columns=columns + objective_names,
        values=np.hstack([base, objective_dummies]),
    )


def story_dwell_uplift(
    records: list[PerformanceRecord], has_story: dict[str, bool]
) -> RegressionResult:
    """Regress dwell_s on the story flag plus controls, for s = 1..10."""
    usable = [r for r in records if r.video_id in has_story]
    if len(usable) < MIN_REGRESSION_RECORDS:
        raise InsufficientData(
            f"need at least {MIN_REGRESSION_RECORDS} records with story labels, "
            f"got {len(usable)}"
        )
    flags = {has_story[r.video_id] for r in usable}
    if flags == {True} or flags == {False}:
        raise OneClassOnly("records are all story or all non-story")

    design = story_design_matrix(usable, has_story)
    story_column = design.column_index("has_story")
    nonstory = [r for r in usable if not has_story[r.video_id]]

    effects = []
    for second in range(1, DWELL_HORIZON_S + 1):
        y = np.array([r.dwell[second - 1] for r in usable])
        fit = ols_fit(design, y)
        coef = float(fit.coefs[story_column])
        baseline = float(np.mean([r.dwell[second - 1] for r in nonstory]))
        effects.append(
            SecondEffect(
                second=second,
                coef_pp=100.0 * coef,
                std_err=100.0 * float(fit.std_errs[story_column]),
                n=len(usable),
                baseline_nonstory_dwell=baseline,
                relative_change=coef / baseline if baseline else float("nan"),
            )
        )
    return RegressionResult(effects=effects, controls=design.columns)
